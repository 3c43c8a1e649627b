//! Volume profiles `f(t) = λ₀ + V⁻¹ ∫_{λ₀}^∞ vol(α - Σ_F s_F(λ) F) dλ` with
//! `s_F(λ) = max_{i at F} ((λ - t_i) / r_i)_+` and `λ₀ = min t - 1`.

use super::quadrature::adaptive_simpson;
use super::{QuadConfig, SurfaceOracle};
use crate::error::{Error, Result};
use crate::rational::{from_f64, to_f64, Q};
use num::{Num, Signed};
use rayon::prelude::*;
use std::cmp::Ordering;

/// Divisor loads `s_F(λ)`, one per group of valuations sharing a divisor.
pub(crate) fn loads<T>(lambda: &T, t: &[T], r: &[T], groups: &[Vec<usize>]) -> Vec<T>
where
    T: Num + Signed + Clone + PartialOrd,
{
    groups
        .iter()
        .map(|g| {
            g.iter().fold(T::zero(), |acc, &i| {
                let s = (lambda.clone() - t[i].clone()) / r[i].clone();
                if s > acc {
                    s
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Kinks of the loads: every `t_i` plus same-divisor crossings above `min t`.
pub(crate) fn breakpoints<T>(t: &[T], r: &[T], groups: &[Vec<usize>]) -> Vec<T>
where
    T: Num + Signed + Clone + PartialOrd,
{
    let m = min_of(t);
    let mut out: Vec<T> = t.to_vec();
    for g in groups {
        for (a, &i) in g.iter().enumerate() {
            for &j in &g[a + 1..] {
                let inv_i = T::one() / r[i].clone();
                let inv_j = T::one() / r[j].clone();
                let den = inv_i.clone() - inv_j.clone();
                if den.is_zero() {
                    continue;
                }
                let x = (t[i].clone() * inv_i - t[j].clone() * inv_j) / den;
                if x > m {
                    out.push(x);
                }
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    out.dedup();
    out
}

pub(crate) fn min_of<T: Clone + PartialOrd>(t: &[T]) -> T {
    let mut m = t[0].clone();
    for x in &t[1..] {
        if *x < m {
            m = x.clone();
        }
    }
    m
}

/// Closed form on a curve, where `vol = (V_s - Σ_F s_F(λ))_+` is piecewise
/// linear in `λ`. Returns `(f(t), λ_max)`.
pub(crate) fn curve_profile<T>(v_s: &T, t: &[T], r: &[T], groups: &[Vec<usize>]) -> (T, T)
where
    T: Num + Signed + Clone + PartialOrd,
{
    let two = T::one() + T::one();
    let height = |lambda: &T| -> T {
        let total = loads(lambda, t, r, groups)
            .into_iter()
            .fold(T::zero(), |a, s| a + s);
        v_s.clone() - total
    };
    let m = min_of(t);
    let mut integral = T::zero();
    let mut a = m.clone();
    let mut h_a = v_s.clone();
    for b in breakpoints(t, r, groups) {
        if b <= a {
            continue;
        }
        let h_b = height(&b);
        if h_b >= T::zero() {
            integral = integral + (h_a.clone() + h_b.clone()) / two.clone() * (b.clone() - a);
            a = b;
            h_a = h_b;
        } else {
            let root = a.clone() + h_a.clone() * (b - a.clone()) / (h_a.clone() - h_b);
            integral = integral + h_a / two * (root.clone() - a);
            return (m + integral / v_s.clone(), root);
        }
    }
    // beyond every t_i each load grows linearly
    let slope = h_a.clone() - height(&(a.clone() + T::one()));
    let root = a.clone() + h_a.clone() / slope;
    integral = integral + h_a / two * (root.clone() - a);
    (m + integral / v_s.clone(), root)
}

/// Quadrature on a surface oracle. Returns `(f(t), λ_max)`.
pub(crate) fn surface_profile(
    oracle: &SurfaceOracle,
    t: &[f64],
    r: &[f64],
    groups: &[Vec<usize>],
    s_k: &Q,
    v_s: f64,
    quad: &QuadConfig,
) -> Result<(f64, f64)> {
    let class_at = |lambda: f64| -> Result<Vec<Q>> {
        loads(&lambda, t, r, groups)
            .into_iter()
            .map(|s| from_f64(s).ok_or_else(|| Error::InvalidInput(format!("non-finite load {s}"))))
            .collect()
    };
    let vol = |lambda: f64| -> Result<f64> { Ok(to_f64(&oracle.volume(&class_at(lambda)?, s_k)?)) };
    let support = |lambda: f64| -> Result<Vec<usize>> { oracle.negative_support(&class_at(lambda)?, s_k) };

    let m = min_of(t);
    let lambda0 = m - 1.0;
    let mut lo = m;
    let mut width = 1.0;
    let mut hi = m + width;
    let mut doublings = 0;
    while vol(hi)? > 0.0 {
        lo = hi;
        width *= 2.0;
        hi = m + width;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::InvalidInput(
                "volume profile never vanishes; divisors are not effective enough".into(),
            ));
        }
    }
    while hi - lo > quad.tol {
        let mid = 0.5 * (lo + hi);
        if vol(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda_max = hi;

    let mut cuts: Vec<f64> = vec![lambda0, m];
    cuts.extend(
        breakpoints(t, r, groups)
            .into_iter()
            .filter(|&x| x > m && x < lambda_max),
    );
    cuts.push(lambda_max);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    cuts.dedup();

    // chamber walls: sample the negative support and bisect where it changes
    const SAMPLES: usize = 8;
    let mut walls = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= quad.tol || a < m {
            continue;
        }
        let xs: Vec<f64> = (0..SAMPLES)
            .map(|j| a + (b - a) * (j as f64 + 0.5) / SAMPLES as f64)
            .collect();
        let mut prev = support(xs[0])?;
        for pair in xs.windows(2) {
            let next = support(pair[1])?;
            if next != prev {
                let (mut l, mut h) = (pair[0], pair[1]);
                while h - l > quad.tol {
                    let mid = 0.5 * (l + h);
                    if support(mid)? == prev {
                        l = mid;
                    } else {
                        h = mid;
                    }
                }
                walls.push(0.5 * (l + h));
            }
            prev = next;
        }
    }
    cuts.extend(walls);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    cuts.dedup();

    let total = lambda_max - lambda0;
    let pieces: Vec<Result<f64>> = cuts
        .par_windows(2)
        .map(|w| {
            let tol = quad.tol * (w[1] - w[0]) / total;
            adaptive_simpson(&vol, w[0], w[1], tol, quad.max_depth)
        })
        .collect();
    let mut integral = 0.0;
    for p in pieces {
        integral += p?;
    }
    Ok((lambda0 + integral / v_s, lambda_max))
}
