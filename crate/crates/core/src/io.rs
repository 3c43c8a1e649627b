//! Serializable documents for every input and report. Rationals travel as
//! `"p/q"` strings; floats are rounded to 12 significant digits.

use crate::beta::{
    BetaProblem, BetaReport, CurveOracle, OptConfig, QuadConfig, ScanReport, SolveMaResult,
    SurfaceOracle, Valuation, VolumeOracle,
};
use crate::corpus::{replay, BuildStep};
use crate::error::{Error, Result};
use crate::invariants::InvariantReport;
use crate::lattice::{DivClass, IntersectionLattice, TestCurve, ZariskiResult};
use crate::model::{Center, CurveData, SncModel};
use crate::plfun::{EnvelopeResult, ModelContext, NaMeasure};
use crate::rational::{format_q, parse_q, round12, Q};
use serde::{Deserialize, Serialize};

/// An exact rational serialized as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rat(pub Q);

impl TryFrom<String> for Rat {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        parse_q(&s).map(Rat).map_err(|e| e.to_string())
    }
}

impl From<Rat> for String {
    fn from(r: Rat) -> String {
        format_q(&r.0)
    }
}

impl From<Q> for Rat {
    fn from(x: Q) -> Rat {
        Rat(x)
    }
}

fn rats(xs: &[Q]) -> Vec<Rat> {
    xs.iter().cloned().map(Rat).collect()
}

fn unrat(xs: &[Rat]) -> Vec<Q> {
    xs.iter().map(|r| r.0.clone()).collect()
}

fn class(xs: &[Rat]) -> DivClass {
    DivClass(unrat(xs))
}

// ---- inputs ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestCurveDoc {
    pub label: String,
    pub class: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub labels: Vec<String>,
    pub form: Vec<Vec<Rat>>,
    pub test_curves: Vec<TestCurveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg_bound: Option<i64>,
}

impl LatticeDoc {
    pub fn to_lattice(&self) -> Result<IntersectionLattice> {
        let form = self.form.iter().map(|r| unrat(r)).collect();
        let curves = self
            .test_curves
            .iter()
            .map(|c| TestCurve {
                label: c.label.clone(),
                class: class(&c.class),
            })
            .collect();
        Ok(match self.neg_bound {
            Some(b) => IntersectionLattice::with_bound(self.labels.clone(), form, curves, b)?,
            None => IntersectionLattice::new(self.labels.clone(), form, curves)?,
        })
    }

    pub fn from_lattice(l: &IntersectionLattice) -> Self {
        LatticeDoc {
            labels: l.labels().to_vec(),
            form: l.form().iter().map(|r| rats(r)).collect(),
            test_curves: l
                .test_curves()
                .iter()
                .map(|c| TestCurveDoc {
                    label: c.label.clone(),
                    class: rats(c.class.coeffs()),
                })
                .collect(),
            neg_bound: None,
        }
    }
}

/// Input of `zariski` and `volume`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassInput {
    pub lattice: LatticeDoc,
    pub class: Vec<Rat>,
}

impl ClassInput {
    pub fn parts(&self) -> Result<(IntersectionLattice, DivClass)> {
        Ok((self.lattice.to_lattice()?, class(&self.class)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedVolumeInput {
    pub lattice: LatticeDoc,
    pub class: Vec<Rat>,
    /// Label of a test curve.
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub genus: u32,
    pub degree_alpha: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildStepDoc {
    pub support: Vec<String>,
    pub new_label: String,
}

/// A model as a sequence of blow-ups of the trivial model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelScript {
    pub curve: CurveDoc,
    #[serde(default)]
    pub steps: Vec<BuildStepDoc>,
}

impl ModelScript {
    pub fn new(curve: &CurveData, steps: &[BuildStep]) -> Self {
        ModelScript {
            curve: CurveDoc {
                genus: curve.genus,
                degree_alpha: Rat(curve.degree_alpha.clone()),
            },
            steps: steps
                .iter()
                .map(|s| BuildStepDoc {
                    support: s.support.clone(),
                    new_label: s.new_label.clone(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<SncModel> {
        let curve = CurveData::new(self.curve.genus, self.curve.degree_alpha.0.clone())?;
        let steps: Vec<BuildStep> = self
            .steps
            .iter()
            .map(|s| BuildStep {
                support: s.support.clone(),
                new_label: s.new_label.clone(),
            })
            .collect();
        replay(&curve, &steps)
    }
}

/// Input of `envelope`, `ma-measure`, `orthogonality` and `invariants`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorInput {
    pub model: ModelScript,
    pub coeffs: Vec<Rat>,
}

impl DivisorInput {
    pub fn context(&self) -> Result<ModelContext> {
        ModelContext::new(self.model.build()?)
    }

    pub fn coeffs(&self) -> Vec<Q> {
        unrat(&self.coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadDoc {
    pub tol: f64,
    pub max_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptDoc {
    pub tol: f64,
    pub max_iters: usize,
}

impl From<&OptDoc> for OptConfig {
    fn from(o: &OptDoc) -> OptConfig {
        OptConfig {
            tol: o.tol,
            max_iters: o.max_iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveMaInput {
    pub model: ModelScript,
    pub xi: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<OptDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveOracleDoc {
    pub genus: u32,
    #[serde(rename = "V")]
    pub volume: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceOracleDoc {
    pub lattice: LatticeDoc,
    pub alpha: Vec<Rat>,
    #[serde(rename = "K")]
    pub canonical: Vec<Rat>,
    #[serde(rename = "F")]
    pub divisors: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase", deny_unknown_fields)]
pub enum OracleDoc {
    Curve { curve: CurveOracleDoc },
    Surface { surface: SurfaceOracleDoc },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationDoc {
    pub label: String,
    #[serde(rename = "A_X")]
    pub log_disc: Rat,
    pub r: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaProblemDoc {
    pub oracle: OracleDoc,
    pub valuations: Vec<ValuationDoc>,
    pub xi: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<OptDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_step: Option<Rat>,
}

impl BetaProblemDoc {
    pub fn to_problem(&self) -> Result<BetaProblem> {
        let oracle = match &self.oracle {
            OracleDoc::Curve { curve } => VolumeOracle::Curve(CurveOracle {
                genus: curve.genus,
                volume: curve.volume.0.clone(),
            }),
            OracleDoc::Surface { surface } => VolumeOracle::Surface(SurfaceOracle::new(
                surface.lattice.to_lattice()?,
                class(&surface.alpha),
                class(&surface.canonical),
                surface.divisors.iter().map(|c| class(c)).collect(),
            )?),
        };
        let valuations = self
            .valuations
            .iter()
            .map(|v| Valuation {
                label: v.label.clone(),
                log_disc: v.log_disc.0.clone(),
                scaling: v.r.0.clone(),
            })
            .collect();
        let mut p = BetaProblem::new(oracle, valuations, unrat(&self.xi))?;
        if let Some(qd) = &self.quad {
            p = p.with_quad(QuadConfig {
                tol: qd.tol,
                max_depth: qd.max_depth,
            })?;
        }
        if let Some(o) = &self.opt {
            p = p.with_opt(o.into())?;
        }
        if let Some(h) = &self.grad_step {
            p = p.with_grad_step(h.0.clone())?;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanInput {
    pub problem: BetaProblemDoc,
    pub grid: Vec<Vec<Rat>>,
}

impl ScanInput {
    pub fn grid(&self) -> Vec<Vec<Q>> {
        self.grid.iter().map(|r| unrat(r)).collect()
    }
}

// ---- reports ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeTerm {
    pub curve: String,
    pub coeff: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZariskiReport {
    pub positive: Vec<Rat>,
    pub negative: Vec<NegativeTerm>,
    pub is_pseff: bool,
    pub is_big: bool,
    pub volume: Rat,
}

impl ZariskiReport {
    pub fn new(l: &IntersectionLattice, z: &ZariskiResult, volume: Q) -> Self {
        ZariskiReport {
            positive: rats(z.positive.coeffs()),
            negative: z
                .negative
                .iter()
                .map(|(j, s)| NegativeTerm {
                    curve: l.test_curves()[*j].label.clone(),
                    coeff: Rat(s.clone()),
                })
                .collect(),
            is_pseff: z.is_pseff,
            is_big: z.is_big,
            volume: Rat(volume),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueReport {
    pub value: Rat,
    pub decimal: f64,
}

impl ValueReport {
    pub fn new(x: Q) -> Self {
        ValueReport {
            decimal: round12(crate::rational::to_f64(&x)),
            value: Rat(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentReport {
    pub label: String,
    pub mult: u64,
    pub ord_k: u64,
    /// Base point of the center, absent for the trivial valuation.
    pub center: Option<String>,
    pub m: Rat,
    pub scaling: Rat,
    pub log_disc: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelReport {
    pub lattice: LatticeDoc,
    pub components: Vec<ComponentReport>,
    pub fiber_curves: Vec<String>,
    pub dual_edges: Vec<(String, String)>,
}

fn center_name(c: &Center) -> Option<String> {
    match c {
        Center::Trivial => None,
        Center::Point(p) => Some(p.clone()),
    }
}

impl ModelReport {
    pub fn new(ctx: &ModelContext) -> Self {
        let m = ctx.model();
        let comps = m.components();
        ModelReport {
            lattice: LatticeDoc::from_lattice(ctx.lattice()),
            components: comps
                .iter()
                .zip(ctx.points())
                .map(|(c, p)| ComponentReport {
                    label: c.label.clone(),
                    mult: c.mult,
                    ord_k: c.ord_k,
                    center: center_name(&p.center),
                    m: Rat(p.m.clone()),
                    scaling: Rat(p.scaling.clone()),
                    log_disc: Rat(p.log_disc.clone()),
                })
                .collect(),
            fiber_curves: m.fiber_curves().iter().map(|h| h.label.clone()).collect(),
            dual_edges: m
                .dual_edges()
                .into_iter()
                .map(|(i, j)| (comps[i].label.clone(), comps[j].label.clone()))
                .collect(),
        }
    }
}

/// Output of `build-model`: the script that reproduces the model, and the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildModelReport {
    pub script: ModelScript,
    pub model: ModelReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeReport {
    pub values: Vec<Rat>,
    pub sigma: Vec<Rat>,
    pub shift: Rat,
    pub positive: Vec<Rat>,
}

impl From<&EnvelopeResult> for EnvelopeReport {
    fn from(e: &EnvelopeResult) -> Self {
        EnvelopeReport {
            values: rats(&e.values),
            sigma: rats(&e.sigma),
            shift: Rat(e.shift.clone()),
            positive: rats(e.positive.coeffs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub component: String,
    pub center: Option<String>,
    pub mass: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureReport {
    pub atoms: Vec<AtomDoc>,
    pub total: Rat,
}

impl MeasureReport {
    pub fn new(ctx: &ModelContext, mu: &NaMeasure) -> Self {
        let comps = ctx.model().components();
        MeasureReport {
            atoms: mu
                .atoms
                .iter()
                .map(|a| AtomDoc {
                    component: comps[a.point.component].label.clone(),
                    center: center_name(&a.point.center),
                    mass: Rat(a.mass.clone()),
                })
                .collect(),
            total: Rat(mu.total()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthogonalityReport {
    pub orthogonality_defect: Rat,
    pub mass_sum_defect: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsReport {
    pub df: Rat,
    pub m_na: Rat,
    pub j_na: Rat,
    pub e_a: Rat,
    pub e_k: Rat,
    pub h_a: Rat,
    pub m_a: Rat,
    pub j_a: Rat,
    pub sbar: Rat,
}

impl From<&InvariantReport> for InvariantsReport {
    fn from(r: &InvariantReport) -> Self {
        InvariantsReport {
            df: Rat(r.df.clone()),
            m_na: Rat(r.m_na.clone()),
            j_na: Rat(r.j_na.clone()),
            e_a: Rat(r.e_a.clone()),
            e_k: Rat(r.e_k.clone()),
            h_a: Rat(r.h_a.clone()),
            m_a: Rat(r.m_a.clone()),
            j_a: Rat(r.j_a.clone()),
            sbar: Rat(r.sbar.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaReportDoc {
    pub entropy: Rat,
    pub energy: f64,
    pub t_star: Vec<f64>,
    pub grad_k: f64,
    pub grad_error: f64,
    pub beta: f64,
    pub ratio: Option<f64>,
}

impl From<&BetaReport> for BetaReportDoc {
    fn from(r: &BetaReport) -> Self {
        BetaReportDoc {
            entropy: Rat(r.entropy.clone()),
            energy: round12(r.energy),
            t_star: r.t_star.iter().map(|&x| round12(x)).collect(),
            grad_k: round12(r.grad_k),
            grad_error: round12(r.grad_error),
            beta: round12(r.beta),
            ratio: r.ratio.map(round12),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveMaReport {
    pub t_star: Vec<Rat>,
    pub measure: MeasureReport,
    pub objective: Rat,
    pub exact: bool,
}

impl SolveMaReport {
    pub fn new(ctx: &ModelContext, r: &SolveMaResult) -> Self {
        SolveMaReport {
            t_star: rats(&r.t_star),
            measure: MeasureReport::new(ctx, &r.measure),
            objective: Rat(r.objective.clone()),
            exact: r.exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRowDoc {
    pub xi: Vec<Rat>,
    pub beta: Option<f64>,
    pub energy: Option<f64>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanReportDoc {
    pub label: String,
    pub min_ratio: Option<f64>,
    pub argmin: Option<Vec<Rat>>,
    pub failures: usize,
    pub rows: Vec<ScanRowDoc>,
}

impl From<&ScanReport> for ScanReportDoc {
    fn from(r: &ScanReport) -> Self {
        ScanReportDoc {
            label: r.label.to_string(),
            min_ratio: r.min_ratio.map(round12),
            argmin: r.argmin.as_ref().map(|x| rats(x)),
            failures: r.failures,
            rows: r
                .rows
                .iter()
                .map(|row| {
                    let (beta, energy, ratio, error) = match &row.outcome {
                        Ok(p) => (
                            Some(round12(p.beta)),
                            Some(round12(p.energy)),
                            Some(round12(p.ratio)),
                            None,
                        ),
                        Err(e) => (None, None, None, Some(e.to_string())),
                    };
                    ScanRowDoc {
                        xi: rats(&row.xi),
                        beta,
                        energy,
                        ratio,
                        error,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorDetail {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub error: ErrorDetail,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        let kind = match e.kind() {
            crate::error::ErrorKind::Input => "input",
            crate::error::ErrorKind::NonConvergence => "non_convergence",
            crate::error::ErrorKind::Identity => "identity",
        };
        ErrorReport {
            error: ErrorDetail {
                kind: kind.to_string(),
                detail: e.to_string(),
            },
        }
    }
}
