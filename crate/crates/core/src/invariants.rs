//! Intersection-number invariants of big test configurations and the
//! non-Archimedean functionals of envelopes, on surface models (`n = 1`).
//!
//! All functionals are reported for the potential `P_A(f_D)` itself: the
//! computation runs on `D' = D + cF` and is shifted back using
//! `E_A(φ + c) = E_A(φ) + c` and `E^K_A(φ + c) = E^K_A(φ) - s̄ c`.

use crate::error::{Error, Result};
use crate::plfun::VerticalDivisor;
use crate::rational::{q, Q};

/// Dimension of the base curve.
const N: i64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub df: Q,
    pub m_na: Q,
    pub j_na: Q,
    pub e_a: Q,
    pub e_k: Q,
    pub h_a: Q,
    pub m_a: Q,
    pub j_a: Q,
    pub sbar: Q,
}

fn degree_k(d: &VerticalDivisor<'_>) -> Q {
    q(d.context().model().curve().degree_k())
}

/// `s̄ = -V⁻¹ α^{n-1}·K_X`.
pub fn sbar(d: &VerticalDivisor<'_>) -> Q {
    -degree_k(d) / d.context().volume_alpha()
}

/// `E_A(P_A(f_D)) = V⁻¹/(n+1) vol(A + D') - c`.
pub fn energy(d: &VerticalDivisor<'_>) -> Result<Q> {
    let (dn, c, _) = d.normalized_zariski()?;
    let vol = d.context().lattice().volume(&dn.class())?;
    Ok(vol / (d.context().volume_alpha() * q(N + 1)) - c)
}

/// `E^{K_X}_A(P_A(f_D)) = V⁻¹ ⟨A + D'⟩·π_X^*K_X + s̄ c`.
pub fn twisted_energy(d: &VerticalDivisor<'_>) -> Result<Q> {
    let (_, c, z) = d.normalized_zariski()?;
    let ctx = d.context();
    let pk = ctx
        .lattice()
        .intersect(&z.positive, &ctx.model().kx_class())?;
    Ok(pk / ctx.volume_alpha() + sbar(d) * c)
}

/// `H_A(P_A(f_D)) = V⁻¹ ⟨A + D'⟩·K^log_{X'/X×P¹}`.
pub fn entropy_envelope(d: &VerticalDivisor<'_>) -> Result<Q> {
    let (_, _, z) = d.normalized_zariski()?;
    let ctx = d.context();
    let pk = ctx
        .lattice()
        .intersect(&z.positive, &ctx.model().log_relative_canonical())?;
    Ok(pk / ctx.volume_alpha())
}

/// `Ent(μ) = ∫ (A_{X×P¹} - 1) dμ` for `μ = MA_A(P_A(f_D))`.
pub fn entropy_direct(d: &VerticalDivisor<'_>) -> Result<Q> {
    let mu = d.ma_envelope()?;
    Ok(mu
        .atoms
        .iter()
        .map(|a| &a.mass * (&a.point.log_disc - q(1)))
        .sum())
}

/// Computes every invariant and checks `M_A = V⁻¹ M^NA`, `J_A = V⁻¹ J^NA` and
/// `M_A = s̄ E_A + E^K_A + H_A` exactly.
pub fn report(d: &VerticalDivisor<'_>) -> Result<InvariantReport> {
    let ctx = d.context();
    let model = ctx.model();
    let lattice = ctx.lattice();
    let v = ctx.volume_alpha().clone();
    let (dn, _, z) = d.normalized_zariski()?;
    let p = &z.positive;
    let vol = lattice.volume(&dn.class())?;

    let k_rel_p1 = model.relative_canonical().add(&model.kx_class());
    let df = lattice.intersect(&k_rel_p1, p)?
        - q(N) * degree_k(d) / (q(N + 1) * &v) * &vol;
    let m_na = &df - lattice.intersect(&model.non_reduced_part(), p)?;
    let j_na = lattice.intersect(p, &model.a_class())? - &vol / q(N + 1);

    let sbar = sbar(d);
    let e_a = energy(d)?;
    let e_k = twisted_energy(d)?;
    let h_a = entropy_envelope(d)?;
    let m_a = &sbar * &e_a + &e_k + &h_a;
    let env = d.envelope()?;
    let sup = env
        .values
        .iter()
        .max()
        .cloned()
        .ok_or_else(|| Error::InvalidInput("model without components".into()))?;
    let j_a = sup - &e_a;

    if &m_a * &v != m_na {
        return Err(Error::Identity(format!(
            "M_A = {m_a} but M^NA / V = {}",
            &m_na / &v
        )));
    }
    if &j_a * &v != j_na {
        return Err(Error::Identity(format!(
            "J_A = {j_a} but J^NA / V = {}",
            &j_na / &v
        )));
    }
    let h_direct = entropy_direct(d)?;
    if h_direct != h_a {
        return Err(Error::Identity(format!(
            "entropy {h_a} from K^log but {h_direct} from the measure"
        )));
    }
    Ok(InvariantReport {
        df,
        m_na,
        j_na,
        e_a,
        e_k,
        h_a,
        m_a,
        j_a,
        sbar,
    })
}
