//! Exact intersection theory on a finitely generated lattice of divisor
//! classes on a surface.
//!
//! Nefness and pseudoeffectivity are always relative to the declared list of
//! test curves: downstream results are only as good as that list, which must
//! contain every negative curve met by the classes under study.

use crate::linalg;
use crate::rational::{zero, Q};
use num::{Signed, Zero};
use thiserror::Error;

/// Default lower bound `m` on test-curve self-intersections (`C·C >= -m`).
pub const DEFAULT_NEG_BOUND: i64 = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection form is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("intersection form is not square")]
    NotSquare,
    #[error("test curve {label} has self-intersection {self_int} below the bound -{bound}")]
    SelfIntersectionBound {
        label: String,
        self_int: String,
        bound: i64,
    },
    #[error("unknown test curve {0}")]
    UnknownCurve(String),
    #[error("singular Gram system on test curves {0:?}")]
    SingularGram(Vec<String>),
    #[error("class is not pseudoeffective relative to the declared test curves")]
    NotPseudoeffective,
}

/// Coefficient vector of a divisor class in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivClass(pub Vec<Q>);

impl DivClass {
    pub fn zero(rank: usize) -> Self {
        DivClass(vec![zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Q::from_integer(1.into());
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn add(&self, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Q) -> DivClass {
        DivClass(self.0.iter().map(|a| a * k).collect())
    }

    /// `self + k * other`
    pub fn axpy(&self, k: &Q, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCurve {
    pub label: String,
    pub class: DivClass,
}

/// Zariski decomposition `u = P + N`, `N = Σ σ_j C_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZariskiResult {
    pub positive: DivClass,
    /// `(test-curve index, σ_j)` with `σ_j > 0`, in the order curves entered the support.
    pub negative: Vec<(usize, Q)>,
    pub is_pseff: bool,
    /// Pseudoeffective with `P² > 0`.
    pub is_big: bool,
}

impl ZariskiResult {
    pub fn support(&self) -> Vec<usize> {
        self.negative.iter().map(|(j, _)| *j).collect()
    }

    /// Coefficient of test curve `j` in the negative part.
    pub fn sigma(&self, j: usize) -> Q {
        self.negative
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionLattice {
    labels: Vec<String>,
    form: Vec<Vec<Q>>,
    test_curves: Vec<TestCurve>,
}

impl IntersectionLattice {
    pub fn new(
        labels: Vec<String>,
        form: Vec<Vec<Q>>,
        test_curves: Vec<TestCurve>,
    ) -> Result<Self, LatticeError> {
        Self::with_bound(labels, form, test_curves, DEFAULT_NEG_BOUND)
    }

    pub fn with_bound(
        labels: Vec<String>,
        form: Vec<Vec<Q>>,
        test_curves: Vec<TestCurve>,
        neg_bound: i64,
    ) -> Result<Self, LatticeError> {
        let rank = labels.len();
        if form.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                got: form.len(),
            });
        }
        if form.iter().any(|r| r.len() != rank) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..rank {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        let lattice = IntersectionLattice {
            labels,
            form,
            test_curves: Vec::new(),
        };
        for c in &test_curves {
            lattice.check_dim(&c.class)?;
            let self_int = lattice.pair(&c.class, &c.class);
            if self_int < Q::from_integer((-neg_bound).into()) {
                return Err(LatticeError::SelfIntersectionBound {
                    label: c.label.clone(),
                    self_int: self_int.to_string(),
                    bound: neg_bound,
                });
            }
        }
        Ok(IntersectionLattice {
            test_curves,
            ..lattice
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form(&self) -> &[Vec<Q>] {
        &self.form
    }

    pub fn test_curves(&self) -> &[TestCurve] {
        &self.test_curves
    }

    pub fn curve_index(&self, label: &str) -> Result<usize, LatticeError> {
        self.test_curves
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| LatticeError::UnknownCurve(label.to_string()))
    }

    fn check_dim(&self, u: &DivClass) -> Result<(), LatticeError> {
        if u.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: u.len(),
            });
        }
        Ok(())
    }

    fn pair(&self, u: &DivClass, v: &DivClass) -> Q {
        let mut acc = zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            acc += ui * linalg::dot(&self.form[i], &v.0);
        }
        acc
    }

    /// `uᵀ · form · v`, exactly.
    pub fn intersect(&self, u: &DivClass, v: &DivClass) -> Result<Q, LatticeError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.pair(u, v))
    }

    pub fn is_nef(&self, u: &DivClass) -> Result<bool, LatticeError> {
        self.check_dim(u)?;
        Ok(self
            .test_curves
            .iter()
            .all(|c| !self.pair(u, &c.class).is_negative()))
    }

    fn gram(&self, support: &[usize]) -> Vec<Vec<Q>> {
        support
            .iter()
            .map(|&i| {
                support
                    .iter()
                    .map(|&j| self.pair(&self.test_curves[i].class, &self.test_curves[j].class))
                    .collect()
            })
            .collect()
    }

    fn support_labels(&self, support: &[usize]) -> Vec<String> {
        support
            .iter()
            .map(|&j| self.test_curves[j].label.clone())
            .collect()
    }

    /// Zariski decomposition by negative-support growth: while some test curve
    /// pairs negatively with the current positive part, add every such curve to
    /// the support and re-solve `(u - N)·C_j = 0` over the support.
    ///
    /// A support whose Gram matrix is not negative definite, a non-positive
    /// coefficient, or a nef remainder with `P² < 0` all mean `u` is not
    /// pseudoeffective; the result then has `is_pseff = false` and an
    /// unspecified positive part.
    pub fn zariski(&self, u: &DivClass) -> Result<ZariskiResult, LatticeError> {
        self.check_dim(u)?;
        let not_pseff = |p: DivClass, neg: Vec<(usize, Q)>| ZariskiResult {
            positive: p,
            negative: neg,
            is_pseff: false,
            is_big: false,
        };
        let mut support: Vec<usize> = Vec::new();
        let mut sigma: Vec<Q> = Vec::new();
        let mut p = u.clone();
        loop {
            let entering: Vec<usize> = (0..self.test_curves.len())
                .filter(|j| !support.contains(j))
                .filter(|&j| self.pair(&p, &self.test_curves[j].class).is_negative())
                .collect();
            if entering.is_empty() {
                break;
            }
            support.extend(entering);
            let gram = self.gram(&support);
            if !linalg::is_negative_definite(&gram) {
                return Ok(not_pseff(p, support.iter().cloned().zip(sigma).collect()));
            }
            let rhs: Vec<Q> = support
                .iter()
                .map(|&j| self.pair(u, &self.test_curves[j].class))
                .collect();
            sigma = linalg::solve(&gram, &rhs)
                .ok_or_else(|| LatticeError::SingularGram(self.support_labels(&support)))?;
            p = u.clone();
            for (&j, s) in support.iter().zip(&sigma) {
                p = p.axpy(&-s, &self.test_curves[j].class);
            }
            if sigma.iter().any(|s| !s.is_positive()) {
                return Ok(not_pseff(p, support.iter().cloned().zip(sigma).collect()));
            }
        }
        let p2 = self.pair(&p, &p);
        let negative: Vec<(usize, Q)> = support.into_iter().zip(sigma).collect();
        if p2.is_negative() {
            return Ok(not_pseff(p, negative));
        }
        Ok(ZariskiResult {
            is_big: p2.is_positive(),
            positive: p,
            negative,
            is_pseff: true,
        })
    }

    /// `vol(u) = P²`, or 0 when `u` is not pseudoeffective.
    pub fn volume(&self, u: &DivClass) -> Result<Q, LatticeError> {
        let z = self.zariski(u)?;
        if !z.is_pseff {
            return Ok(zero());
        }
        Ok(self.pair(&z.positive, &z.positive))
    }

    /// Restricted volume along test curve `c`: `P·C`, which vanishes when `C`
    /// lies in the negative part.
    pub fn restricted_volume(&self, u: &DivClass, c: usize) -> Result<Q, LatticeError> {
        let curve = self
            .test_curves
            .get(c)
            .ok_or_else(|| LatticeError::UnknownCurve(c.to_string()))?;
        let z = self.zariski(u)?;
        if !z.is_pseff {
            return Err(LatticeError::NotPseudoeffective);
        }
        Ok(self.pair(&z.positive, &curve.class))
    }

    /// Largest `ρ >= 0` such that `u + t·e` stays in the Zariski chamber of `u`
    /// for every `|t| < ρ`; `None` means the whole line stays in the chamber.
    /// Inside a chamber the volume is a quadratic polynomial in `t`.
    pub fn chamber_radius(&self, u: &DivClass, e: &DivClass) -> Result<Option<Q>, LatticeError> {
        self.check_dim(e)?;
        let z = self.zariski(u)?;
        if !z.is_big {
            return Err(LatticeError::NotPseudoeffective);
        }
        let support = z.support();
        let d_sigma = if support.is_empty() {
            Vec::new()
        } else {
            let gram = self.gram(&support);
            let rhs: Vec<Q> = support
                .iter()
                .map(|&j| self.pair(e, &self.test_curves[j].class))
                .collect();
            linalg::solve(&gram, &rhs)
                .ok_or_else(|| LatticeError::SingularGram(self.support_labels(&support)))?
        };
        let mut dp = e.clone();
        for (&j, ds) in support.iter().zip(&d_sigma) {
            dp = dp.axpy(&-ds, &self.test_curves[j].class);
        }
        let mut radius: Option<Q> = None;
        let mut tighten = |bound: Q| {
            radius = Some(match radius.take() {
                Some(r) if r <= bound => r,
                _ => bound,
            });
        };
        for ((_, s), ds) in z.negative.iter().zip(&d_sigma) {
            if !ds.is_zero() {
                tighten(s / ds.abs());
            }
        }
        for (j, c) in self.test_curves.iter().enumerate() {
            if support.contains(&j) {
                continue;
            }
            let pc = self.pair(&z.positive, &c.class);
            let slope = self.pair(&dp, &c.class);
            if !slope.is_zero() {
                tighten(pc / slope.abs());
            }
        }
        Ok(radius)
    }
}
