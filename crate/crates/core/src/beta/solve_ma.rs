//! Prescribed Monge–Ampère measures on a model: find `t` with
//! `MA(P(f_t)) = Σ ξ_i δ_{v_i}` by maximizing `E(P(f_t)) - ξ·t`.

use super::optimize::{maximize, OptConfig};
use super::check_simplex;
use crate::error::{Error, Result};
use crate::invariants::energy;
use crate::linalg::solve;
use crate::plfun::{ModelContext, NaMeasure};
use crate::rational::{from_f64, q, to_f64, zero, Q};
use num::BigInt;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveMaResult {
    /// Values `t_i` at the vertices, with the strict transform pinned to 0.
    pub t_star: Vec<Q>,
    pub measure: NaMeasure,
    /// `E(P(f_{t*})) - ξ·t*`.
    pub objective: Q,
    /// Whether `t*` came from the exact linear solve rather than the ascent.
    pub exact: bool,
    pub iterations: usize,
}

/// Grid used to turn optimizer iterates into rationals with small denominators.
const DYADIC_BITS: u32 = 40;

fn dyadic(x: f64) -> Result<Q> {
    let scale = (1u64 << DYADIC_BITS) as f64;
    let n = (x * scale).round();
    let n = from_f64(n).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))?;
    Ok(n / Q::from_integer(BigInt::from(1u64 << DYADIC_BITS)))
}

fn objective(ctx: &ModelContext, xi: &[Q], t: &[Q]) -> Result<Q> {
    let d = ctx.divisor_from_values(t)?;
    let pairing: Q = xi.iter().zip(t).map(|(a, b)| a * b).sum();
    Ok(energy(&d)? - pairing)
}

/// Solves `(A + D)·E_i = V ξ_i / b_i` on the exceptional components with
/// `D = Σ t_i b_i E_i`, `t_0 = 0`.
fn linear_candidate(ctx: &ModelContext, xi: &[Q]) -> Option<Vec<Q>> {
    let n = ctx.n();
    let s = ctx.model().strict_transform_index();
    let exc: Vec<usize> = (0..n).filter(|&i| i != s).collect();
    let gram: Vec<Vec<Q>> = exc
        .iter()
        .map(|&i| {
            exc.iter()
                .map(|&j| q(ctx.model().component_product(i, j)))
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = exc
        .iter()
        .map(|&i| ctx.volume_alpha() * &xi[i] / &ctx.mults()[i])
        .collect();
    let d = solve(&gram, &rhs)?;
    let mut t = vec![zero(); n];
    for (k, &i) in exc.iter().enumerate() {
        t[i] = &d[k] / &ctx.mults()[i];
    }
    Some(t)
}

fn check_input(ctx: &ModelContext, xi: &[Q]) -> Result<()> {
    if xi.len() != ctx.n() {
        return Err(Error::LengthMismatch {
            expected: ctx.n(),
            got: xi.len(),
        });
    }
    check_simplex(xi)
}

fn to_dyadic(x: &[f64]) -> Result<Vec<Q>> {
    x.iter().map(|&v| dyadic(v)).collect()
}

/// Coordinate ascent from `start`, with the strict transform pinned.
fn ascend(ctx: &ModelContext, xi: &[Q], opt: &OptConfig, start: &[f64]) -> Result<(Vec<Q>, Q, usize)> {
    let s = ctx.model().strict_transform_index();
    let f = |t: &[f64]| -> Result<f64> { Ok(to_f64(&objective(ctx, xi, &to_dyadic(t)?)?)) };
    let r = maximize(f, start, &[s], opt)?;
    let t = to_dyadic(&r.x)?;
    let value = objective(ctx, xi, &t)?;
    Ok((t, value, r.iterations))
}

fn matched(ctx: &ModelContext, xi: &[Q], t: Vec<Q>, value: Q, iterations: usize, opt: &OptConfig) -> Result<SolveMaResult> {
    let measure = ctx.divisor_from_values(&t)?.ma_envelope()?;
    for (i, (m, x)) in measure.masses().iter().zip(xi).enumerate() {
        if to_f64(&(m - x)).abs() > opt.tol {
            return Err(Error::MeasureMismatch {
                index: i,
                expected: x.to_string(),
                got: m.to_string(),
            });
        }
    }
    Ok(SolveMaResult {
        t_star: t,
        measure,
        objective: value,
        exact: false,
        iterations,
    })
}

/// Finds `t*` with `MA(P(f_{t*})) = ξ`.
///
/// The linear solve gives a candidate whose envelope measure is checked to be
/// exactly `ξ`; the ascent then starts there and must not improve on it by
/// more than `opt.tol`. Without an exact candidate the ascent starts at 0.
pub fn solve_ma_divisorial(ctx: &ModelContext, xi: &[Q], opt: &OptConfig) -> Result<SolveMaResult> {
    check_input(ctx, xi)?;
    let candidate = match linear_candidate(ctx, xi) {
        Some(t) => {
            let measure = ctx.divisor_from_values(&t)?.ma_envelope()?;
            (measure.masses() == xi).then_some((t, measure))
        }
        None => None,
    };
    let Some((t, measure)) = candidate else {
        return solve_ma_ascent(ctx, xi, opt);
    };
    let value = objective(ctx, xi, &t)?;
    let start: Vec<f64> = t.iter().map(to_f64).collect();
    let (_, ascent_value, iterations) = ascend(ctx, xi, opt, &start)?;
    let slack = opt.tol * (1.0 + to_f64(&value).abs());
    if to_f64(&(&ascent_value - &value)) > slack {
        return Err(Error::Identity(format!(
            "measure-matching potential has objective {value} below the ascent value {ascent_value}"
        )));
    }
    Ok(SolveMaResult {
        t_star: t,
        measure,
        objective: value,
        exact: true,
        iterations,
    })
}

/// Pure coordinate ascent from `t = 0`; the returned masses match `ξ` within `opt.tol`.
pub fn solve_ma_ascent(ctx: &ModelContext, xi: &[Q], opt: &OptConfig) -> Result<SolveMaResult> {
    check_input(ctx, xi)?;
    // masses are gradients, so positions need more accuracy than the mass contract
    let inner = OptConfig {
        tol: (opt.tol * 1e-2).max(1e-11),
        max_iters: opt.max_iters,
    };
    let (t, value, iterations) = ascend(ctx, xi, &inner, &vec![0.0; ctx.n()])?;
    matched(ctx, xi, t, value, iterations, opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CurveData, SncModel};
    use crate::plfun::tests::m1_ctx;
    use crate::rational::qf;

    #[test]
    fn m1_trivial_mass() {
        let ctx = m1_ctx();
        let r = solve_ma_divisorial(&ctx, &[q(1), q(0)], &OptConfig::default()).unwrap();
        assert_eq!(r.measure.masses(), vec![q(1), q(0)]);
    }

    #[test]
    fn m1_split_mass() {
        let ctx = m1_ctx();
        let xi = [qf(1, 2), qf(1, 2)];
        let r = solve_ma_divisorial(&ctx, &xi, &OptConfig::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.measure.masses(), xi.to_vec());
        // t* = (c + 1, c) up to translation
        assert_eq!(&r.t_star[0] - &r.t_star[1], q(1));
    }

    #[test]
    fn cold_ascent_agrees_with_the_exact_solution() {
        let m = SncModel::trivial(CurveData::new(0, q(2)).unwrap())
            .blowup(&["E0", "H_x"], "E1")
            .unwrap()
            .blowup(&["E0", "E1"], "E2")
            .unwrap();
        let ctx = ModelContext::new(m).unwrap();
        let xi = [qf(1, 5), qf(1, 2), qf(3, 10)];
        let opt = OptConfig::default();
        let warm = solve_ma_divisorial(&ctx, &xi, &opt).unwrap();
        let cold = solve_ma_ascent(&ctx, &xi, &opt).unwrap();
        assert!(warm.exact && !cold.exact);
        assert!(to_f64(&(&warm.objective - &cold.objective)).abs() < 1e-12);
        for (a, b) in warm.t_star.iter().zip(&cold.t_star) {
            assert!(to_f64(&(a - b)).abs() < 1e-6);
        }
    }

    #[test]
    fn trivial_model() {
        let ctx = ModelContext::new(SncModel::trivial(CurveData::new(0, q(2)).unwrap())).unwrap();
        let r = solve_ma_divisorial(&ctx, &[q(1)], &OptConfig::default()).unwrap();
        assert_eq!(r.measure.masses(), vec![q(1)]);
        assert_eq!(r.t_star, vec![q(0)]);
    }

    #[test]
    fn rejects_non_probability() {
        let ctx = m1_ctx();
        assert!(solve_ma_divisorial(&ctx, &[qf(1, 2), q(0)], &OptConfig::default()).is_err());
        assert!(solve_ma_divisorial(&ctx, &[q(1)], &OptConfig::default()).is_err());
    }
}
