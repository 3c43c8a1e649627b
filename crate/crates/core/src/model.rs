//! Blow-up models of `X × P¹` over a base curve `X`.
//!
//! A model is grown from the trivial one by blowing up torus-fixed points of
//! the central fiber. Each blow-up is recorded as a new central-fiber
//! component with its multiplicity `b` in `X₀` and its order `ordK` in the
//! relative canonical divisor. Strict transforms `H_x` of the fibers
//! `{x} × P¹` are kept as curves of the model so that centres and scalings of
//! divisorial points come out of a linear solve.

use crate::lattice::{DivClass, IntersectionLattice, LatticeError, TestCurve};
use crate::linalg;
use crate::rational::{q, zero, Q};
use num::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// Label of the strict transform of `X × {0}` in every model.
pub const STRICT_TRANSFORM_LABEL: &str = "E0";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degree of alpha must be positive, got {0}")]
    NonPositiveDegree(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("label {0} is already in use")]
    DuplicateLabel(String),
    #[error("blow-up support must have one or two labels, got {0}")]
    SupportSize(usize),
    #[error("blow-up support {0:?} contains no central-fiber component")]
    NoComponent(Vec<String>),
    #[error("support curves {0} and {1} do not meet transversally in one point")]
    NotIntersecting(String, String),
    #[error("a general point of exceptional component {0} is not a torus-fixed point")]
    NotTorusFixed(String),
    #[error("component index {0} out of range")]
    BadIndex(usize),
    #[error("singular Gram system over exceptional components (model corrupted)")]
    SingularGram,
    #[error("model invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub genus: u32,
    /// `V = deg α > 0`.
    pub degree_alpha: Q,
}

impl CurveData {
    pub fn new(genus: u32, degree_alpha: Q) -> Result<Self, ModelError> {
        if !degree_alpha.is_positive() {
            return Err(ModelError::NonPositiveDegree(degree_alpha.to_string()));
        }
        Ok(CurveData {
            genus,
            degree_alpha,
        })
    }

    /// `deg K_X = 2g - 2`.
    pub fn degree_k(&self) -> i64 {
        2 * self.genus as i64 - 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    /// Multiplicity `b` of the component in the central fiber.
    pub mult: u64,
    /// Order of the component in `K_{X'/X×P¹}`.
    pub ord_k: u64,
    pub is_strict_transform: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCurve {
    /// Label of the base point `x ∈ X`.
    pub point: String,
    /// Label of the strict transform `H_x`.
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CurveKind {
    Component(Component),
    Fiber(FiberCurve),
}

impl CurveKind {
    fn label(&self) -> &str {
        match self {
            CurveKind::Component(c) => &c.label,
            CurveKind::Fiber(h) => &h.label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    Trivial,
    Point(String),
}

/// The divisorial point `v_{E_i}` attached to a central-fiber component.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorialPoint {
    pub component: usize,
    pub center: Center,
    /// `m = ord_{E_i}(π_X^* x)`; zero for the trivial valuation.
    pub m: Q,
    /// `r = m / b`, so that `v = r · ord_x` on `X`.
    pub scaling: Q,
    /// `A_{X×P¹}(v) = (1 + ordK) / b`.
    pub log_disc: Q,
}

/// A point blow-up model. Immutable: every operation returns a new model.
#[derive(Debug, Clone, PartialEq)]
pub struct SncModel {
    curve: CurveData,
    /// Components and fiber curves in creation order.
    curves: Vec<CurveKind>,
    /// Integer intersection products among `curves`.
    products: Vec<Vec<i64>>,
}

impl SncModel {
    /// `X × P¹` with its single central component `E0`, `E0² = 0`.
    pub fn trivial(curve: CurveData) -> Self {
        SncModel {
            curve,
            curves: vec![CurveKind::Component(Component {
                label: STRICT_TRANSFORM_LABEL.to_string(),
                mult: 1,
                ord_k: 0,
                is_strict_transform: true,
            })],
            products: vec![vec![0]],
        }
    }

    pub fn curve(&self) -> &CurveData {
        &self.curve
    }

    pub fn components(&self) -> Vec<&Component> {
        self.curves
            .iter()
            .filter_map(|c| match c {
                CurveKind::Component(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    pub fn fiber_curves(&self) -> Vec<&FiberCurve> {
        self.curves
            .iter()
            .filter_map(|c| match c {
                CurveKind::Fiber(h) => Some(h),
                _ => None,
            })
            .collect()
    }

    pub fn n_components(&self) -> usize {
        self.component_slots().len()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.components().iter().map(|c| c.mult).collect()
    }

    /// Index of the strict transform of `X × {0}` among the components.
    pub fn strict_transform_index(&self) -> usize {
        self.components()
            .iter()
            .position(|c| c.is_strict_transform)
            .expect("every model has a strict transform")
    }

    pub fn component_index(&self, label: &str) -> Result<usize, ModelError> {
        self.components()
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| ModelError::UnknownLabel(label.to_string()))
    }

    fn component_slots(&self) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&i| matches!(self.curves[i], CurveKind::Component(_)))
            .collect()
    }

    fn fiber_slots(&self) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&i| matches!(self.curves[i], CurveKind::Fiber(_)))
            .collect()
    }

    fn slot(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label() == label)
    }

    /// Product of two curves (components or fiber curves) by label.
    pub fn product(&self, a: &str, b: &str) -> Result<i64, ModelError> {
        let i = self
            .slot(a)
            .ok_or_else(|| ModelError::UnknownLabel(a.to_string()))?;
        let j = self
            .slot(b)
            .ok_or_else(|| ModelError::UnknownLabel(b.to_string()))?;
        Ok(self.products[i][j])
    }

    /// Product `E_i · E_j` of components by component index.
    pub fn component_product(&self, i: usize, j: usize) -> i64 {
        let slots = self.component_slots();
        self.products[slots[i]][slots[j]]
    }

    /// Tracks a new fiber `{x} × P¹`; its strict transform meets `E0` once.
    pub fn add_fiber_curve(&self, point: &str) -> Result<SncModel, ModelError> {
        let label = format!("H_{point}");
        if self.slot(&label).is_some() || self.fiber_curves().iter().any(|h| h.point == point) {
            return Err(ModelError::DuplicateLabel(label));
        }
        let e0 = self
            .slot(STRICT_TRANSFORM_LABEL)
            .expect("strict transform present");
        let mut next = self.clone();
        let n = next.curves.len();
        for (i, row) in next.products.iter_mut().enumerate() {
            row.push(if i == e0 { 1 } else { 0 });
        }
        let mut row = vec![0; n + 1];
        row[e0] = 1;
        next.products.push(row);
        next.curves.push(CurveKind::Fiber(FiberCurve {
            point: point.to_string(),
            label,
        }));
        Ok(next)
    }

    /// Blows up the point cut out by `support`: a node `E_i ∩ E_j`, a point
    /// `E_i ∩ H_x`, or (single label `E0`) a fresh point of `E0` over a new base
    /// point, which is then tracked as a fiber curve.
    ///
    /// An unknown label `H_<x>` paired with `E0` registers the fiber over `x`
    /// before blowing up.
    pub fn blowup(&self, support: &[&str], new_label: &str) -> Result<SncModel, ModelError> {
        if support.is_empty() || support.len() > 2 {
            return Err(ModelError::SupportSize(support.len()));
        }
        if self.slot(new_label).is_some() {
            return Err(ModelError::DuplicateLabel(new_label.to_string()));
        }
        let mut base = self.clone();
        let mut labels: Vec<String> = support.iter().map(|s| s.to_string()).collect();
        if labels.len() == 1 {
            let only = &labels[0];
            let Some(slot) = base.slot(only) else {
                return Err(ModelError::UnknownLabel(only.clone()));
            };
            match &base.curves[slot] {
                CurveKind::Component(c) if c.is_strict_transform => {
                    let point = format!("x_{new_label}");
                    base = base.add_fiber_curve(&point)?;
                    labels.push(format!("H_{point}"));
                }
                CurveKind::Component(c) => return Err(ModelError::NotTorusFixed(c.label.clone())),
                CurveKind::Fiber(_) => return Err(ModelError::NoComponent(labels)),
            }
        } else {
            for k in 0..2 {
                let other = &labels[1 - k];
                if base.slot(&labels[k]).is_none() {
                    match labels[k].strip_prefix("H_") {
                        Some(point) if other == STRICT_TRANSFORM_LABEL && !point.is_empty() => {
                            base = base.add_fiber_curve(point)?;
                        }
                        _ => return Err(ModelError::UnknownLabel(labels[k].clone())),
                    }
                }
            }
        }
        let slots: Vec<usize> = labels
            .iter()
            .map(|l| base.slot(l).expect("resolved above"))
            .collect();
        if slots[0] == slots[1] {
            return Err(ModelError::NotIntersecting(labels[0].clone(), labels[1].clone()));
        }
        if base.products[slots[0]][slots[1]] != 1 {
            return Err(ModelError::NotIntersecting(labels[0].clone(), labels[1].clone()));
        }
        let mut mult = 0;
        let mut ord_k = 1;
        for &s in &slots {
            if let CurveKind::Component(c) = &base.curves[s] {
                mult += c.mult;
                ord_k += c.ord_k;
            }
        }
        if mult == 0 {
            return Err(ModelError::NoComponent(labels));
        }
        let n = base.curves.len();
        let mut next = base;
        for &s in &slots {
            next.products[s][s] -= 1;
        }
        next.products[slots[0]][slots[1]] = 0;
        next.products[slots[1]][slots[0]] = 0;
        for (i, row) in next.products.iter_mut().enumerate() {
            row.push(if slots.contains(&i) { 1 } else { 0 });
        }
        let mut row: Vec<i64> = (0..n).map(|i| if slots.contains(&i) { 1 } else { 0 }).collect();
        row.push(-1);
        next.products.push(row);
        next.curves.push(CurveKind::Component(Component {
            label: new_label.to_string(),
            mult,
            ord_k,
            is_strict_transform: false,
        }));
        Ok(next)
    }

    /// Edges of the dual graph: pairs of components meeting in a point.
    pub fn dual_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_components();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.component_product(i, j) == 1 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Connected and acyclic.
    pub fn dual_graph_is_tree(&self) -> bool {
        let n = self.n_components();
        let edges = self.dual_edges();
        if edges.len() + 1 != n {
            return false;
        }
        let mut seen = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &(a, b) in &edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == n
    }

    /// Solves `π_X^*({x} × P¹) = H_x + Σ m_k E_k` over the exceptional
    /// components for every tracked point; returns `(point, m)` pairs.
    fn point_pullbacks(&self) -> Result<Vec<(String, Vec<Q>)>, ModelError> {
        let comps = self.component_slots();
        let exc: Vec<usize> = comps
            .iter()
            .cloned()
            .filter(|&s| !matches!(&self.curves[s], CurveKind::Component(c) if c.is_strict_transform))
            .collect();
        let gram: Vec<Vec<Q>> = exc
            .iter()
            .map(|&i| exc.iter().map(|&j| q(self.products[i][j])).collect())
            .collect();
        let mut out = Vec::new();
        for h in self.fiber_slots() {
            let CurveKind::Fiber(fc) = &self.curves[h] else {
                unreachable!()
            };
            let rhs: Vec<Q> = exc.iter().map(|&k| q(-self.products[h][k])).collect();
            let m_exc = if exc.is_empty() {
                Vec::new()
            } else {
                linalg::solve(&gram, &rhs).ok_or(ModelError::SingularGram)?
            };
            let mut m = vec![zero(); comps.len()];
            for (slot, mk) in exc.iter().zip(m_exc) {
                let idx = comps.iter().position(|s| s == slot).unwrap();
                m[idx] = mk;
            }
            out.push((fc.point.clone(), m));
        }
        Ok(out)
    }

    pub fn divisorial_point(&self, i: usize) -> Result<DivisorialPoint, ModelError> {
        let comps = self.components();
        let comp = comps.get(i).ok_or(ModelError::BadIndex(i))?;
        let b = q(comp.mult as i64);
        let log_disc = q(1 + comp.ord_k as i64) / &b;
        if comp.is_strict_transform {
            return Ok(DivisorialPoint {
                component: i,
                center: Center::Trivial,
                m: zero(),
                scaling: zero(),
                log_disc,
            });
        }
        let mut center = Center::Trivial;
        let mut m = zero();
        for (point, ms) in self.point_pullbacks()? {
            if ms[i].is_positive() {
                if center != Center::Trivial {
                    return Err(ModelError::Invariant(format!(
                        "component {} lies over two base points",
                        comp.label
                    )));
                }
                center = Center::Point(point);
                m = ms[i].clone();
            }
        }
        Ok(DivisorialPoint {
            component: i,
            center,
            scaling: &m / &b,
            m,
            log_disc,
        })
    }

    pub fn divisorial_points(&self) -> Result<Vec<DivisorialPoint>, ModelError> {
        (0..self.n_components())
            .map(|i| self.divisorial_point(i))
            .collect()
    }

    // lattice basis: A, Kx, components..., fiber curves...
    pub const A_INDEX: usize = 0;
    pub const KX_INDEX: usize = 1;

    pub fn rank(&self) -> usize {
        2 + self.curves.len()
    }

    pub fn component_basis_index(&self, i: usize) -> usize {
        2 + i
    }

    pub fn fiber_basis_index(&self, j: usize) -> usize {
        2 + self.n_components() + j
    }

    /// Class of a vertical divisor `Σ a_i E_i` in the exported basis.
    pub fn vertical_class(&self, coeffs: &[Q]) -> DivClass {
        let mut c = DivClass::zero(self.rank());
        for (i, a) in coeffs.iter().enumerate() {
            c.0[self.component_basis_index(i)] = a.clone();
        }
        c
    }

    /// `F = Σ b_i E_i`, the class of the central fiber.
    pub fn fiber_class(&self) -> DivClass {
        let b: Vec<Q> = self
            .multiplicities()
            .iter()
            .map(|&m| q(m as i64))
            .collect();
        self.vertical_class(&b)
    }

    pub fn a_class(&self) -> DivClass {
        DivClass::basis(self.rank(), Self::A_INDEX)
    }

    pub fn kx_class(&self) -> DivClass {
        DivClass::basis(self.rank(), Self::KX_INDEX)
    }

    /// `K_{X'/X×P¹} = Σ ordK_i E_i`.
    pub fn relative_canonical(&self) -> DivClass {
        let ks: Vec<Q> = self
            .components()
            .iter()
            .map(|c| q(c.ord_k as i64))
            .collect();
        self.vertical_class(&ks)
    }

    /// `K^log_{X'/X×P¹} = K_{X'/X×P¹} + X₀^red - X₀`.
    pub fn log_relative_canonical(&self) -> DivClass {
        let ks: Vec<Q> = self
            .components()
            .iter()
            .map(|c| q(c.ord_k as i64 + 1 - c.mult as i64))
            .collect();
        self.vertical_class(&ks)
    }

    /// `X₀ - X₀^red = Σ (b_i - 1) E_i`.
    pub fn non_reduced_part(&self) -> DivClass {
        let ks: Vec<Q> = self
            .components()
            .iter()
            .map(|c| q(c.mult as i64 - 1))
            .collect();
        self.vertical_class(&ks)
    }

    /// Exports the model's intersection lattice over
    /// `{A, Kx} ∪ components ∪ fiber curves`, with every component and fiber
    /// curve as a test curve. Model invariants are checked on the way out.
    pub fn vertical_lattice(&self) -> Result<IntersectionLattice, ModelError> {
        let comps = self.component_slots();
        let fibers = self.fiber_slots();
        let order: Vec<usize> = comps.iter().chain(&fibers).cloned().collect();
        let rank = self.rank();
        let mut form = vec![vec![zero(); rank]; rank];
        let v = self.curve.degree_alpha.clone();
        let dk = q(self.curve.degree_k());
        for (a, &sa) in order.iter().enumerate() {
            for (b, &sb) in order.iter().enumerate() {
                form[2 + a][2 + b] = q(self.products[sa][sb]);
            }
            if let CurveKind::Component(c) = &self.curves[sa] {
                if c.is_strict_transform {
                    form[Self::A_INDEX][2 + a] = v.clone();
                    form[2 + a][Self::A_INDEX] = v.clone();
                    form[Self::KX_INDEX][2 + a] = dk.clone();
                    form[2 + a][Self::KX_INDEX] = dk.clone();
                }
            }
        }
        let mut labels = vec!["A".to_string(), "Kx".to_string()];
        labels.extend(order.iter().map(|&s| self.curves[s].label().to_string()));
        let test_curves = order
            .iter()
            .enumerate()
            .map(|(k, &s)| TestCurve {
                label: self.curves[s].label().to_string(),
                class: DivClass::basis(rank, 2 + k),
            })
            .collect();
        let lattice = IntersectionLattice::new(labels, form, test_curves)?;
        self.check_invariants(&lattice)?;
        Ok(lattice)
    }

    fn check_invariants(&self, lattice: &IntersectionLattice) -> Result<(), ModelError> {
        let comps = self.components();
        let e0s = comps.iter().filter(|c| c.is_strict_transform).count();
        if e0s != 1 {
            return Err(ModelError::Invariant(format!(
                "{e0s} strict transforms of X x {{0}}"
            )));
        }
        let f = self.fiber_class();
        for i in 0..comps.len() {
            let e = DivClass::basis(self.rank(), self.component_basis_index(i));
            if !lattice.intersect(&f, &e)?.is_zero() {
                return Err(ModelError::Invariant(format!(
                    "fiber class pairs non-trivially with {}",
                    comps[i].label
                )));
            }
        }
        if lattice.intersect(&self.a_class(), &f)? != self.curve.degree_alpha {
            return Err(ModelError::Invariant("A.F != V".into()));
        }
        // Zariski's lemma: every maximal proper subset of components is negative definite
        if comps.len() > 1 {
            for skip in 0..comps.len() {
                let idx: Vec<usize> = (0..comps.len()).filter(|&k| k != skip).collect();
                let gram: Vec<Vec<Q>> = idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| q(self.component_product(i, j))).collect())
                    .collect();
                if !linalg::is_negative_definite(&gram) {
                    return Err(ModelError::Invariant(
                        "proper subset of fiber components is not negative definite".into(),
                    ));
                }
            }
        }
        if !self.dual_graph_is_tree() {
            return Err(ModelError::Invariant("dual graph is not a tree".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    pub(crate) fn m1() -> SncModel {
        SncModel::trivial(CurveData::new(0, q(2)).unwrap())
            .blowup(&["E0", "H_x"], "E1")
            .unwrap()
    }

    #[test]
    fn trivial_model() {
        let m = SncModel::trivial(CurveData::new(0, q(2)).unwrap());
        let l = m.vertical_lattice().unwrap();
        let e0 = DivClass::basis(m.rank(), 2);
        assert_eq!(l.intersect(&m.a_class(), &e0).unwrap(), q(2));
        assert_eq!(l.intersect(&m.kx_class(), &e0).unwrap(), q(-2));
        assert_eq!(l.intersect(&m.fiber_class(), &e0).unwrap(), q(0));
        let m = SncModel::trivial(CurveData::new(1, q(1)).unwrap());
        let l = m.vertical_lattice().unwrap();
        let e0 = DivClass::basis(m.rank(), 2);
        assert_eq!(l.intersect(&m.kx_class(), &e0).unwrap(), q(0));
        assert!(m.dual_graph_is_tree());
    }

    #[test]
    fn m1_products() {
        let m = m1();
        let c = m.components();
        assert_eq!((c[1].mult, c[1].ord_k), (1, 1));
        assert_eq!(m.product("E0", "E0").unwrap(), -1);
        assert_eq!(m.product("E1", "E1").unwrap(), -1);
        assert_eq!(m.product("E0", "E1").unwrap(), 1);
        assert_eq!(m.product("H_x", "E1").unwrap(), 1);
        assert_eq!(m.product("H_x", "E0").unwrap(), 0);
        assert_eq!(m.product("H_x", "H_x").unwrap(), -1);
    }

    #[test]
    fn node_blowup_bookkeeping() {
        let m = m1().blowup(&["E0", "E1"], "E2").unwrap();
        let c = m.components();
        assert_eq!((c[2].mult, c[2].ord_k), (2, 2));
        assert_eq!(c[2].ord_k, c[0].ord_k + c[1].ord_k + 1);
        assert_eq!(m.product("E0", "E1").unwrap(), 0);
        assert_eq!(m.product("E0", "E0").unwrap(), -2);
        assert_eq!(m.dual_edges(), vec![(0, 2), (1, 2)]);
        let p = m.divisorial_point(2).unwrap();
        assert_eq!(p.log_disc, qf(3, 2));
        assert_eq!(p.scaling, qf(1, 2));
        m.vertical_lattice().unwrap();
    }

    #[test]
    fn divisorial_points_of_m1() {
        let m = m1();
        let p = m.divisorial_point(1).unwrap();
        assert_eq!(p.center, Center::Point("x".into()));
        assert_eq!(p.m, q(1));
        assert_eq!(p.scaling, q(1));
        assert_eq!(p.log_disc, q(2));
        let p0 = m.divisorial_point(0).unwrap();
        assert_eq!(p0.center, Center::Trivial);
        assert_eq!(p0.log_disc, q(1));
        assert!(matches!(m.divisorial_point(5), Err(ModelError::BadIndex(5))));
    }

    #[test]
    fn exported_a_row() {
        let m = m1();
        let l = m.vertical_lattice().unwrap();
        assert_eq!(l.labels(), &["A", "Kx", "E0", "E1", "H_x"]);
        assert_eq!(l.form()[0], vec![q(0), q(0), q(2), q(0), q(0)]);
        for i in 0..l.rank() {
            for j in 0..l.rank() {
                assert_eq!(l.form()[i][j], l.form()[j][i]);
            }
        }
    }

    #[test]
    fn fresh_point_blowup_tracks_fiber() {
        let m = SncModel::trivial(CurveData::new(0, q(2)).unwrap())
            .blowup(&["E0"], "E1")
            .unwrap();
        assert_eq!(m.fiber_curves().len(), 1);
        let p = m.divisorial_point(1).unwrap();
        assert_eq!(p.center, Center::Point("x_E1".into()));
        m.vertical_lattice().unwrap();
    }

    #[test]
    fn blowup_errors() {
        let m = m1();
        assert!(matches!(
            m.blowup(&["E1"], "E2"),
            Err(ModelError::NotTorusFixed(_))
        ));
        assert!(matches!(
            m.blowup(&["E0", "H_x"], "E2"),
            Err(ModelError::NotIntersecting(_, _))
        ));
        assert!(matches!(
            m.blowup(&["E1", "Q"], "E2"),
            Err(ModelError::UnknownLabel(_))
        ));
        assert!(matches!(
            m.blowup(&["E0", "E1"], "E1"),
            Err(ModelError::DuplicateLabel(_))
        ));
        let two = m.add_fiber_curve("y").unwrap();
        assert!(matches!(
            two.blowup(&["H_x", "H_y"], "E2"),
            Err(ModelError::NotIntersecting(_, _))
        ));
        assert!(matches!(
            m.blowup(&["H_x"], "E2"),
            Err(ModelError::NoComponent(_))
        ));
        assert!(matches!(m.blowup(&[], "E2"), Err(ModelError::SupportSize(0))));
    }

    #[test]
    fn rejects_non_positive_degree() {
        assert!(CurveData::new(0, q(0)).is_err());
    }
}
