//! Seeded random models and vertical divisors for exhaustive checks.

use crate::error::Result;
use crate::model::{CurveData, SncModel, STRICT_TRANSFORM_LABEL};
use crate::rational::{q, qf, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub genera: Vec<u32>,
    pub max_blowups: usize,
    /// Bound on `|a_i|` for the random divisor.
    pub max_coeff: i64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            genera: vec![0, 1],
            max_blowups: 6,
            max_coeff: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildStep {
    pub support: Vec<String>,
    pub new_label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub curve: CurveData,
    pub steps: Vec<BuildStep>,
    pub model: SncModel,
    /// Coefficients `a_i` of `D = Σ a_i E_i`.
    pub coeffs: Vec<Q>,
}

/// Applies `steps` to the trivial model over `curve`.
pub fn replay(curve: &CurveData, steps: &[BuildStep]) -> Result<SncModel> {
    let mut m = SncModel::trivial(curve.clone());
    for s in steps {
        let support: Vec<&str> = s.support.iter().map(String::as_str).collect();
        m = m.blowup(&support, &s.new_label)?;
    }
    Ok(m)
}

/// Every torus-fixed point that can be blown up next: nodes, points where a
/// tracked fiber meets the central fiber, and a fresh point of `E0`.
pub fn blowup_candidates(m: &SncModel) -> Vec<Vec<String>> {
    let comps = m.components();
    let mut out = vec![vec![STRICT_TRANSFORM_LABEL.to_string()]];
    for (i, j) in m.dual_edges() {
        out.push(vec![comps[i].label.clone(), comps[j].label.clone()]);
    }
    for h in m.fiber_curves() {
        for c in &comps {
            if m.product(&c.label, &h.label) == Ok(1) {
                out.push(vec![c.label.clone(), h.label.clone()]);
            }
        }
    }
    out
}

pub fn random_model<R: Rng>(rng: &mut R, cfg: &CorpusConfig) -> Result<(CurveData, Vec<BuildStep>, SncModel)> {
    let genus = *cfg.genera.choose(rng).unwrap_or(&0);
    let degree = qf(rng.gen_range(1..=6), rng.gen_range(1..=2));
    let curve = CurveData::new(genus, degree)?;
    let mut m = SncModel::trivial(curve.clone());
    let mut steps = Vec::new();
    let n = rng.gen_range(0..=cfg.max_blowups);
    for k in 1..=n {
        let cands = blowup_candidates(&m);
        let support = cands[rng.gen_range(0..cands.len())].clone();
        let new_label = format!("E{k}");
        let refs: Vec<&str> = support.iter().map(String::as_str).collect();
        m = m.blowup(&refs, &new_label)?;
        steps.push(BuildStep { support, new_label });
    }
    Ok((curve, steps, m))
}

pub fn random_entry<R: Rng>(rng: &mut R, cfg: &CorpusConfig) -> Result<CorpusEntry> {
    let (curve, steps, model) = random_model(rng, cfg)?;
    let coeffs = (0..model.n_components())
        .map(|_| q(rng.gen_range(-cfg.max_coeff..=cfg.max_coeff)))
        .collect();
    Ok(CorpusEntry {
        curve,
        steps,
        model,
        coeffs,
    })
}

/// `count` entries from a ChaCha stream seeded with `seed`.
pub fn generate(seed: u64, count: usize, cfg: &CorpusConfig) -> Result<Vec<CorpusEntry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_entry(&mut rng, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = CorpusConfig::default();
        assert_eq!(generate(7, 20, &cfg).unwrap(), generate(7, 20, &cfg).unwrap());
    }

    #[test]
    fn replay_reproduces_models() {
        for e in generate(3, 50, &CorpusConfig::default()).unwrap() {
            assert!(e.steps.len() <= 6);
            assert_eq!(replay(&e.curve, &e.steps).unwrap(), e.model);
            assert!(e.model.vertical_lattice().is_ok());
            assert!(e.coeffs.iter().all(|a| a.abs() <= q(10)));
        }
    }
}
