use super::{BetaProblem, BetaReport};
use crate::error::{Error, Result};
use crate::rational::Q;
use num::Signed;
use rayon::prelude::*;

/// The minimum is taken over the sampled grid only.
pub const SCAN_LABEL: &str = "lower-bound heuristic over the sampled grid";

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub beta: f64,
    pub energy: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub xi: Vec<Q>,
    pub outcome: std::result::Result<ScanPoint, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub label: &'static str,
    pub rows: Vec<ScanRow>,
    pub min_ratio: Option<f64>,
    pub argmin: Option<Vec<Q>>,
    pub failures: usize,
}

fn evaluate(base: &BetaProblem, xi: &[Q]) -> Result<ScanPoint> {
    if xi.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidInput("scan points must lie in the open simplex".into()));
    }
    let BetaReport {
        beta,
        energy,
        ratio,
        ..
    } = base.with_xi(xi.to_vec())?.beta()?;
    let ratio = ratio.ok_or_else(|| Error::InvalidInput(format!("energy {energy} is not positive")))?;
    Ok(ScanPoint {
        beta,
        energy,
        ratio,
    })
}

/// `min β/g` over `grid`, evaluated in parallel. Failed members are kept as rows.
pub fn stability_scan(base: &BetaProblem, grid: &[Vec<Q>]) -> Result<ScanReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty scan grid".into()));
    }
    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|xi| ScanRow {
            xi: xi.clone(),
            outcome: evaluate(base, xi),
        })
        .collect();
    let mut min_ratio: Option<f64> = None;
    let mut argmin = None;
    let mut failures = 0;
    for row in &rows {
        match &row.outcome {
            Ok(p) => {
                if min_ratio.map_or(true, |m| p.ratio < m) {
                    min_ratio = Some(p.ratio);
                    argmin = Some(row.xi.clone());
                }
            }
            Err(_) => failures += 1,
        }
    }
    Ok(ScanReport {
        label: SCAN_LABEL,
        rows,
        min_ratio,
        argmin,
        failures,
    })
}
