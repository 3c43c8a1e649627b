//! PL functions from vertical divisors, their psh envelopes at dual-complex
//! vertices, and Monge–Ampère measures of envelopes.
//!
//! Everything is evaluated on a single model. The envelope of `f_D` at a
//! vertex `v_i` is `f_D(v_i) - σ_i / b_i`, where `σ_i` is the coefficient of
//! `E_i` in the negative part of the Zariski decomposition of `A + D'`, and
//! `D' = D + cF` is the translate with `D' >= F`.

use crate::error::{Error, Result};
use crate::lattice::{DivClass, IntersectionLattice, ZariskiResult};
use crate::model::{DivisorialPoint, SncModel};
use crate::rational::{ceil_int, q, zero, Q};
use num::Signed;

/// A model together with its exported lattice and divisorial points, computed once.
#[derive(Debug, Clone)]
pub struct ModelContext {
    model: SncModel,
    lattice: IntersectionLattice,
    points: Vec<DivisorialPoint>,
    mults: Vec<Q>,
}

impl ModelContext {
    pub fn new(model: SncModel) -> Result<Self> {
        let lattice = model.vertical_lattice()?;
        let points = model.divisorial_points()?;
        let mults = model
            .multiplicities()
            .iter()
            .map(|&b| q(b as i64))
            .collect();
        Ok(ModelContext {
            model,
            lattice,
            points,
            mults,
        })
    }

    pub fn model(&self) -> &SncModel {
        &self.model
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn points(&self) -> &[DivisorialPoint] {
        &self.points
    }

    pub fn mults(&self) -> &[Q] {
        &self.mults
    }

    pub fn n(&self) -> usize {
        self.mults.len()
    }

    pub fn volume_alpha(&self) -> &Q {
        &self.model.curve().degree_alpha
    }

    pub fn divisor(&self, coeffs: Vec<Q>) -> Result<VerticalDivisor<'_>> {
        VerticalDivisor::new(self, coeffs)
    }

    /// The divisor `Σ t_i b_i E_i`, whose PL function takes the value `t_i` at `v_i`.
    pub fn divisor_from_values(&self, values: &[Q]) -> Result<VerticalDivisor<'_>> {
        if values.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: values.len(),
            });
        }
        let coeffs = values.iter().zip(&self.mults).map(|(t, b)| t * b).collect();
        VerticalDivisor::new(self, coeffs)
    }

    /// `E_i` as a lattice class.
    pub fn component_class(&self, i: usize) -> DivClass {
        DivClass::basis(self.model.rank(), self.model.component_basis_index(i))
    }
}

/// `D = Σ a_i E_i` on a fixed model.
#[derive(Debug, Clone)]
pub struct VerticalDivisor<'m> {
    ctx: &'m ModelContext,
    coeffs: Vec<Q>,
}

/// Values of a PL function at the vertices `v_i` of the dual complex.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFunction {
    pub values: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    /// `P_A(f_D)(v_i)`.
    pub values: Vec<Q>,
    /// `σ_i = ν_{E_i}(A + D')`.
    pub sigma: Vec<Q>,
    /// Positive part of `A + D'`.
    pub positive: DivClass,
    /// `c` with `D' = D + cF`.
    pub shift: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: DivisorialPoint,
    pub mass: Q,
}

/// A finite atomic probability measure on divisorial points, one atom per
/// component of the model (zero masses included).
#[derive(Debug, Clone, PartialEq)]
pub struct NaMeasure {
    pub atoms: Vec<Atom>,
}

impl NaMeasure {
    pub fn masses(&self) -> Vec<Q> {
        self.atoms.iter().map(|a| a.mass.clone()).collect()
    }

    pub fn total(&self) -> Q {
        self.atoms.iter().map(|a| &a.mass).sum()
    }

    /// Atoms with positive mass.
    pub fn support(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().filter(|a| a.mass.is_positive())
    }
}

impl<'m> VerticalDivisor<'m> {
    pub fn new(ctx: &'m ModelContext, coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.len() != ctx.n() {
            return Err(Error::LengthMismatch {
                expected: ctx.n(),
                got: coeffs.len(),
            });
        }
        Ok(VerticalDivisor { ctx, coeffs })
    }

    pub fn context(&self) -> &'m ModelContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// `f_D(v_i) = a_i / b_i`.
    pub fn pl_function(&self) -> PlFunction {
        PlFunction {
            values: self
                .coeffs
                .iter()
                .zip(self.ctx.mults())
                .map(|(a, b)| a / b)
                .collect(),
        }
    }

    /// `D + cF`.
    pub fn translate(&self, c: &Q) -> VerticalDivisor<'m> {
        VerticalDivisor {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(self.ctx.mults())
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    /// Smallest non-negative integer `c` with `a_i + c b_i >= b_i` for all `i`.
    pub fn normalize_ge_fiber(&self) -> (VerticalDivisor<'m>, Q) {
        let mut c = zero();
        for (a, b) in self.coeffs.iter().zip(self.ctx.mults()) {
            let need = Q::from_integer(ceil_int(&(q(1) - a / b)));
            if need > c {
                c = need;
            }
        }
        (self.translate(&c), c)
    }

    /// `A + D` in the model lattice.
    pub fn class(&self) -> DivClass {
        let m = self.ctx.model();
        let mut c = m.vertical_class(&self.coeffs);
        c.0[SncModel::A_INDEX] = q(1);
        c
    }

    pub(crate) fn normalized_zariski(&self) -> Result<(VerticalDivisor<'m>, Q, ZariskiResult)> {
        let (d, c) = self.normalize_ge_fiber();
        let z = self.ctx.lattice().zariski(&d.class())?;
        if !z.is_big {
            return Err(Error::NotBig("A + D' after normalization".into()));
        }
        Ok((d, c, z))
    }

    pub fn envelope(&self) -> Result<EnvelopeResult> {
        let (d, c, z) = self.normalized_zariski()?;
        let n = self.ctx.n();
        if z.support().iter().any(|&j| j >= n) {
            return Err(Error::Identity(
                "fiber curve in the negative part of A + D'".into(),
            ));
        }
        let sigma: Vec<Q> = (0..n).map(|i| z.sigma(i)).collect();
        for (i, s) in sigma.iter().enumerate() {
            if s > &d.coeffs[i] {
                return Err(Error::Identity(format!(
                    "Lelong number at E{i} exceeds the coefficient of D'"
                )));
            }
        }
        let f = self.pl_function();
        let values = f
            .values
            .iter()
            .zip(&sigma)
            .zip(self.ctx.mults())
            .map(|((fv, s), b)| fv - s / b)
            .collect();
        Ok(EnvelopeResult {
            values,
            sigma,
            positive: z.positive,
            shift: c,
        })
    }

    /// Restricted volumes `⟨(A+D')⟩_{X|E_i} = P·E_i`.
    pub fn restricted_volumes(&self) -> Result<Vec<Q>> {
        let (_, _, z) = self.normalized_zariski()?;
        let lattice = self.ctx.lattice();
        (0..self.ctx.n())
            .map(|i| Ok(lattice.intersect(&z.positive, &self.ctx.component_class(i))?))
            .collect()
    }

    /// `MA_A(P_A(f_D)) = V⁻¹ Σ b_i ⟨(A+D')⟩_{X|E_i} δ_{v_i}`.
    pub fn ma_envelope(&self) -> Result<NaMeasure> {
        let rv = self.restricted_volumes()?;
        let v = self.ctx.volume_alpha();
        let atoms = rv
            .iter()
            .zip(self.ctx.mults())
            .zip(self.ctx.points())
            .map(|((r, b), p)| Atom {
                point: p.clone(),
                mass: b * r / v,
            })
            .collect();
        Ok(NaMeasure { atoms })
    }

    /// `∫ (f_D - P_A(f_D)) MA_A(P_A(f_D))`; zero for every input.
    pub fn orthogonality_defect(&self) -> Result<Q> {
        let env = self.envelope()?;
        let mu = self.ma_envelope()?;
        let f = self.pl_function();
        Ok(f.values
            .iter()
            .zip(&env.values)
            .zip(&mu.atoms)
            .map(|((fv, ev), a)| (fv - ev) * &a.mass)
            .sum())
    }

    /// `Σ b_i ⟨(A+D')⟩_{X|E_i} - V`; zero for every input.
    pub fn mass_sum_check(&self) -> Result<Q> {
        let rv = self.restricted_volumes()?;
        let total: Q = rv.iter().zip(self.ctx.mults()).map(|(r, b)| r * b).sum();
        Ok(total - self.ctx.volume_alpha())
    }
}
