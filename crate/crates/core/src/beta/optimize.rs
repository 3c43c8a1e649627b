//! Derivative-free maximization of concave, piecewise smooth objectives:
//! cyclic coordinate ascent with golden-section line searches and a pattern
//! move along each sweep's net displacement.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            tol: 1e-7,
            max_iters: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Completed sweeps.
    pub iterations: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_STEP: f64 = 1e9;

/// Maximizes `φ(τ) = f(x + τ d)` for concave `φ`. Returns `(τ, φ(τ))`, never
/// worse than `τ = 0`. `coord` is only used to label an unbounded direction.
fn line_search<F>(phi: &mut F, f0: f64, tol: f64, coord: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let step = 0.5;
    let fp = phi(step)?;
    let (mut lo, mut hi);
    if fp > f0 {
        // expand to the right until the objective stops increasing
        let (mut a, mut b, mut fb) = (0.0, step, fp);
        loop {
            let c = b + 2.0 * (b - a);
            if c.abs() > MAX_STEP {
                return Err(Error::Unbounded(coord));
            }
            let fc = phi(c)?;
            if fc <= fb {
                lo = a;
                hi = c;
                break;
            }
            a = b;
            b = c;
            fb = fc;
        }
    } else {
        let fm = phi(-step)?;
        if fm > f0 {
            let (mut a, mut b, mut fb) = (0.0, -step, fm);
            loop {
                let c = b + 2.0 * (b - a);
                if c.abs() > MAX_STEP {
                    return Err(Error::Unbounded(coord));
                }
                let fc = phi(c)?;
                if fc <= fb {
                    lo = c;
                    hi = a;
                    break;
                }
                a = b;
                b = c;
                fb = fc;
            }
        } else {
            lo = -step;
            hi = step;
        }
    }
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = phi(x1)?;
    let mut f2 = phi(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = phi(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = phi(x1)?;
        }
    }
    let (t, ft) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if ft > f0 {
        Ok((t, ft))
    } else {
        Ok((0.0, f0))
    }
}

/// Maximizes `f` starting at `x0`, holding the coordinates in `fixed` constant.
pub fn maximize<F>(mut f: F, x0: &[f64], fixed: &[usize], cfg: &OptConfig) -> Result<OptResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let free: Vec<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    if free.is_empty() {
        return Ok(OptResult {
            x,
            value: fx,
            iterations: 0,
        });
    }
    let line_tol = cfg.tol * 0.1;
    for iter in 1..=cfg.max_iters {
        let start = x.clone();
        let f_start = fx;
        for &i in &free {
            let base = x.clone();
            let mut phi = |tau: f64| {
                let mut y = base.clone();
                y[i] += tau;
                f(&y)
            };
            let (tau, ft) = line_search(&mut phi, fx, line_tol, i)?;
            x[i] += tau;
            fx = ft;
        }
        let dir: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
        let moved = dir.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if moved > cfg.tol {
            let base = x.clone();
            let mut phi = |tau: f64| {
                let y: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + tau * d).collect();
                f(&y)
            };
            let (tau, ft) = line_search(&mut phi, fx, line_tol, usize::MAX)?;
            for (xi, d) in x.iter_mut().zip(&dir) {
                *xi += tau * d;
            }
            fx = ft;
        }
        let total = x
            .iter()
            .zip(&start)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if total <= cfg.tol && fx - f_start <= cfg.tol * cfg.tol * (1.0 + fx.abs()) {
            return Ok(OptResult {
                x,
                value: fx,
                iterations: iter,
            });
        }
    }
    Err(Error::NonConvergence {
        iters: cfg.max_iters,
        best: fx,
    })
}
