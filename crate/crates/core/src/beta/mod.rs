//! β-invariants of divisorial measures `μ_ξ = Σ ξ_i δ_{v_i}` through the
//! volume profile `f`, its Legendre transform `g(ξ) = sup_t f(t) - ξ·t`, and
//! the derivative of `g` as the class moves in the `K_X` direction.
//!
//! A valuation `v_i = r_i · ord_{F_i}` imposes the load `((λ - t_i)/r_i)_+`
//! on `F_i`; valuations sharing a divisor impose the larger of their loads.

pub mod optimize;
mod profile;
pub mod quadrature;
mod scan;
mod solve_ma;

pub use optimize::{maximize, OptConfig, OptResult};
pub use scan::{stability_scan, ScanPoint, ScanReport, ScanRow, SCAN_LABEL};
pub use solve_ma::{solve_ma_ascent, solve_ma_divisorial, SolveMaResult};

use crate::error::{Error, Result};
use crate::lattice::{DivClass, IntersectionLattice};
use crate::rational::{q, to_f64, zero, Q};
use num::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOracle {
    pub genus: u32,
    /// `V = deg α`.
    pub volume: Q,
}

/// Volumes on a surface lattice; `divisors` holds one class per distinct
/// valuation label, in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceOracle {
    pub lattice: IntersectionLattice,
    pub alpha: DivClass,
    pub canonical: DivClass,
    pub divisors: Vec<DivClass>,
}

impl SurfaceOracle {
    pub fn new(
        lattice: IntersectionLattice,
        alpha: DivClass,
        canonical: DivClass,
        divisors: Vec<DivClass>,
    ) -> Result<Self> {
        let rank = lattice.rank();
        for c in std::iter::once(&alpha)
            .chain(std::iter::once(&canonical))
            .chain(&divisors)
        {
            if c.len() != rank {
                return Err(Error::LengthMismatch {
                    expected: rank,
                    got: c.len(),
                });
            }
        }
        Ok(SurfaceOracle {
            lattice,
            alpha,
            canonical,
            divisors,
        })
    }

    fn class(&self, s: &[Q], s_k: &Q) -> DivClass {
        let mut c = self.alpha.axpy(s_k, &self.canonical);
        for (si, f) in s.iter().zip(&self.divisors) {
            c = c.axpy(&-si, f);
        }
        c
    }

    fn volume(&self, s: &[Q], s_k: &Q) -> Result<Q> {
        Ok(self.lattice.volume(&self.class(s, s_k))?)
    }

    fn negative_support(&self, s: &[Q], s_k: &Q) -> Result<Vec<usize>> {
        let z = self.lattice.zariski(&self.class(s, s_k))?;
        if !z.is_pseff {
            return Ok(vec![usize::MAX]);
        }
        Ok(z.support())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VolumeOracle {
    Curve(CurveOracle),
    Surface(SurfaceOracle),
}

impl VolumeOracle {
    pub fn dimension(&self) -> usize {
        match self {
            VolumeOracle::Curve(_) => 1,
            VolumeOracle::Surface(_) => 2,
        }
    }

    /// `vol(α + s_K K_X)`.
    pub fn base_volume(&self, s_k: &Q) -> Result<Q> {
        match self {
            VolumeOracle::Curve(c) => {
                let v = &c.volume + s_k * q(2 * c.genus as i64 - 2);
                Ok(if v.is_positive() { v } else { zero() })
            }
            VolumeOracle::Surface(s) => s.volume(&[], s_k),
        }
    }

    /// `vol(α + s_K K_X - Σ s_F F)` for loads `s_F >= 0`, one per divisor.
    pub fn volume(&self, s: &[Q], s_k: &Q) -> Result<Q> {
        if s.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidInput("negative divisor load".into()));
        }
        match self {
            VolumeOracle::Curve(_) => {
                let v = self.base_volume(s_k)? - s.iter().sum::<Q>();
                Ok(if v.is_positive() { v } else { zero() })
            }
            VolumeOracle::Surface(o) => {
                if s.len() != o.divisors.len() {
                    return Err(Error::LengthMismatch {
                        expected: o.divisors.len(),
                        got: s.len(),
                    });
                }
                o.volume(s, s_k)
            }
        }
    }

    fn big_volume(&self, s_k: &Q) -> Result<Q> {
        let v = self.base_volume(s_k)?;
        if !v.is_positive() {
            return Err(Error::NotBig(format!(
                "α + {s_k}·K_X has volume {v}; try a smaller twist"
            )));
        }
        Ok(v)
    }
}

/// `v = r · ord_F` with `A_X(F)` the log discrepancy of `F` over `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation {
    pub label: String,
    pub log_disc: Q,
    pub scaling: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig {
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: 1e-9,
            max_depth: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaProblem {
    oracle: VolumeOracle,
    valuations: Vec<Valuation>,
    xi: Vec<Q>,
    pub quad: QuadConfig,
    pub opt: OptConfig,
    grad_step: Q,
    /// Valuation indices per distinct label.
    groups: Vec<Vec<usize>>,
}

pub(crate) fn check_simplex(xi: &[Q]) -> Result<()> {
    if xi.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidInput("negative mass in ξ".into()));
    }
    let total: Q = xi.iter().sum();
    if total != q(1) {
        return Err(Error::InvalidInput(format!("masses sum to {total}, not 1")));
    }
    Ok(())
}

impl BetaProblem {
    pub fn new(oracle: VolumeOracle, valuations: Vec<Valuation>, xi: Vec<Q>) -> Result<Self> {
        if valuations.is_empty() {
            return Err(Error::InvalidInput("no valuations".into()));
        }
        if xi.len() != valuations.len() {
            return Err(Error::LengthMismatch {
                expected: valuations.len(),
                got: xi.len(),
            });
        }
        check_simplex(&xi)?;
        for v in &valuations {
            if v.scaling.is_zero() {
                return Err(Error::TrivialValuation);
            }
            if v.scaling.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "scaling of {} must be positive",
                    v.label
                )));
            }
        }
        let mut labels: Vec<&str> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, v) in valuations.iter().enumerate() {
            match labels.iter().position(|l| *l == v.label) {
                Some(k) => groups[k].push(i),
                None => {
                    labels.push(&v.label);
                    groups.push(vec![i]);
                }
            }
        }
        if let VolumeOracle::Surface(s) = &oracle {
            if s.divisors.len() != groups.len() {
                return Err(Error::LengthMismatch {
                    expected: groups.len(),
                    got: s.divisors.len(),
                });
            }
        }
        oracle.big_volume(&zero())?;
        Ok(BetaProblem {
            oracle,
            valuations,
            xi,
            quad: QuadConfig::default(),
            opt: OptConfig::default(),
            grad_step: Q::new(1.into(), 64.into()),
            groups,
        })
    }

    pub fn with_quad(mut self, quad: QuadConfig) -> Result<Self> {
        if !(quad.tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerance must be positive".into()));
        }
        self.quad = quad;
        Ok(self)
    }

    pub fn with_opt(mut self, opt: OptConfig) -> Result<Self> {
        if !(opt.tol > 0.0) || opt.max_iters == 0 {
            return Err(Error::InvalidInput(
                "optimizer needs a positive tolerance and iteration budget".into(),
            ));
        }
        self.opt = opt;
        Ok(self)
    }

    pub fn with_grad_step(mut self, h: Q) -> Result<Self> {
        if !h.is_positive() {
            return Err(Error::InvalidInput("grad_step must be positive".into()));
        }
        self.grad_step = h;
        Ok(self)
    }

    /// The same problem with different masses.
    pub fn with_xi(&self, xi: Vec<Q>) -> Result<Self> {
        if xi.len() != self.valuations.len() {
            return Err(Error::LengthMismatch {
                expected: self.valuations.len(),
                got: xi.len(),
            });
        }
        check_simplex(&xi)?;
        let mut p = self.clone();
        p.xi = xi;
        Ok(p)
    }

    pub fn oracle(&self) -> &VolumeOracle {
        &self.oracle
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn xi(&self) -> &[Q] {
        &self.xi
    }

    pub fn grad_step(&self) -> &Q {
        &self.grad_step
    }

    /// `Σ ξ_i A_X(F_i)`.
    pub fn entropy(&self) -> Q {
        self.xi
            .iter()
            .zip(&self.valuations)
            .map(|(x, v)| x * &v.log_disc)
            .sum()
    }

    fn check_len(&self, t_len: usize) -> Result<()> {
        if t_len != self.valuations.len() {
            return Err(Error::LengthMismatch {
                expected: self.valuations.len(),
                got: t_len,
            });
        }
        Ok(())
    }

    /// `f(t)` for the class `α + s_K K_X`.
    pub fn f_profile(&self, t: &[f64], s_k: &Q) -> Result<f64> {
        Ok(self.profile(t, s_k)?.0)
    }

    /// `(f(t), λ_max)`.
    pub fn profile(&self, t: &[f64], s_k: &Q) -> Result<(f64, f64)> {
        self.check_len(t.len())?;
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite profile argument".into()));
        }
        let v_s = self.oracle.big_volume(s_k)?;
        let r: Vec<f64> = self.valuations.iter().map(|v| to_f64(&v.scaling)).collect();
        match &self.oracle {
            VolumeOracle::Curve(_) => Ok(profile::curve_profile(&to_f64(&v_s), t, &r, &self.groups)),
            VolumeOracle::Surface(s) => {
                profile::surface_profile(s, t, &r, &self.groups, s_k, to_f64(&v_s), &self.quad)
            }
        }
    }

    /// Exact `f(t)`; curve oracles only.
    pub fn f_profile_exact(&self, t: &[Q], s_k: &Q) -> Result<Q> {
        self.check_len(t.len())?;
        let v_s = self.oracle.big_volume(s_k)?;
        match &self.oracle {
            VolumeOracle::Curve(_) => {
                let r: Vec<Q> = self.valuations.iter().map(|v| v.scaling.clone()).collect();
                Ok(profile::curve_profile(&v_s, t, &r, &self.groups).0)
            }
            VolumeOracle::Surface(_) => Err(Error::InvalidInput(
                "exact profiles need the curve backend".into(),
            )),
        }
    }

    /// `g(ξ) = sup_t f(t) - ξ·t` over `t_0 = 0`, for the class `α + s_K K_X`.
    pub fn legendre_energy(&self, s_k: &Q) -> Result<LegendreResult> {
        self.legendre_from(s_k, &vec![0.0; self.valuations.len()])
    }

    fn legendre_from(&self, s_k: &Q, start: &[f64]) -> Result<LegendreResult> {
        self.oracle.big_volume(s_k)?;
        let xi: Vec<f64> = self.xi.iter().map(to_f64).collect();
        // copies of one valuation enter f only through their smallest t, so a
        // maximizer keeps them equal; optimizing them apart would walk a ridge
        let (slot, reps) = self.distinct_valuations();
        let expand = |u: &[f64]| -> Vec<f64> { slot.iter().map(|&k| u[k]).collect() };
        let objective = |u: &[f64]| -> Result<f64> {
            let t = expand(u);
            let f = self.f_profile(&t, s_k)?;
            Ok(f - t.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>())
        };
        let shift = start[0];
        let u0: Vec<f64> = reps.iter().map(|&i| start[i] - shift).collect();
        let r = maximize(objective, &u0, &[0], &self.opt)?;
        Ok(LegendreResult {
            energy: r.value,
            t_star: expand(&r.x),
            iterations: r.iterations,
        })
    }

    /// For each valuation, the index of its class among valuations with equal
    /// label and scaling; and the first member of each class.
    fn distinct_valuations(&self) -> (Vec<usize>, Vec<usize>) {
        let vals = &self.valuations;
        let mut reps: Vec<usize> = Vec::new();
        let mut slot = Vec::with_capacity(vals.len());
        for (i, v) in vals.iter().enumerate() {
            let same = |&j: &usize| vals[j].label == v.label && vals[j].scaling == v.scaling;
            match reps.iter().position(same) {
                Some(k) => slot.push(k),
                None => {
                    slot.push(reps.len());
                    reps.push(i);
                }
            }
        }
        (slot, reps)
    }

    /// `∇_{K_X} g` by central differences at `h` and `h/2` with Richardson
    /// extrapolation; the error estimate is the gap between the two steps.
    pub fn grad_k(&self) -> Result<GradResult> {
        let h = self.grad_step.clone();
        let half = &h / q(2);
        for s in [&h, &-&h] {
            self.oracle.big_volume(s).map_err(|_| {
                Error::NotBig(format!(
                    "α + {s}·K_X is not big; choose a smaller grad_step"
                ))
            })?;
        }
        let start = self.legendre_energy(&zero())?.t_star;
        let g = |s: &Q| -> Result<f64> { Ok(self.legendre_from(s, &start)?.energy) };
        let hf = to_f64(&h);
        let d_h = (g(&h)? - g(&-&h)?) / (2.0 * hf);
        let d_half = (g(&half)? - g(&-&half)?) / hf;
        Ok(GradResult {
            value: (4.0 * d_half - d_h) / 3.0,
            central: d_h,
            error: (d_h - d_half).abs(),
        })
    }

    /// `β = Σ ξ_i A_X(F_i) + ∇_{K_X} g(ξ)`.
    pub fn beta(&self) -> Result<BetaReport> {
        let entropy = self.entropy();
        let leg = self.legendre_energy(&zero())?;
        let grad = self.grad_k()?;
        let beta = to_f64(&entropy) + grad.value;
        let ratio = if leg.energy > 0.0 {
            Some(beta / leg.energy)
        } else {
            None
        };
        Ok(BetaReport {
            entropy,
            energy: leg.energy,
            t_star: leg.t_star,
            grad_k: grad.value,
            grad_error: grad.error,
            beta,
            ratio,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendreResult {
    pub energy: f64,
    pub t_star: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradResult {
    /// Richardson-extrapolated derivative.
    pub value: f64,
    /// Central difference at the full step.
    pub central: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaReport {
    pub entropy: Q,
    pub energy: f64,
    pub t_star: Vec<f64>,
    pub grad_k: f64,
    pub grad_error: f64,
    pub beta: f64,
    /// `β / g`, when `g > 0`.
    pub ratio: Option<f64>,
}
