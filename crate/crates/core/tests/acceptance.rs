//! Acceptance suite: one PASS/FAIL line per criterion. Failures listed in
//! `UNATTAINABLE` carry their analysis; any other failure exits non-zero.

use kstab_core::beta::{
    solve_ma_divisorial, BetaProblem, CurveOracle, OptConfig, Valuation, VolumeOracle,
};
use kstab_core::corpus::{generate, CorpusConfig, CorpusEntry};
use kstab_core::invariants::{entropy_direct, entropy_envelope, report};
use kstab_core::lattice::DivClass;
use kstab_core::model::{Center, CurveData, SncModel};
use kstab_core::rational::{q, qf, to_f64, zero, Q};
use kstab_core::ModelContext;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 20_240_917;
const CORPUS_SIZE: usize = 240;

type Outcome = Result<String, String>;

struct Corpus {
    entries: Vec<CorpusEntry>,
    contexts: Vec<ModelContext>,
}

fn corpus() -> Corpus {
    let entries = generate(SEED, CORPUS_SIZE, &CorpusConfig::default()).expect("corpus");
    let contexts = entries
        .iter()
        .map(|e| ModelContext::new(e.model.clone()).expect("context"))
        .collect();
    Corpus { entries, contexts }
}

fn mass_sum(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for (e, ctx) in c.entries.iter().zip(&c.contexts) {
        let d = ctx.divisor(e.coeffs.clone()).map_err(|e| e.to_string())?;
        if !d.mass_sum_check().map_err(|e| e.to_string())?.is_zero() {
            bad += 1;
        }
    }
    let took = start.elapsed();
    let detail = format!("{} models, {bad} nonzero defects, {:.3}s", c.entries.len(), took.as_secs_f64());
    if bad == 0 && took < Duration::from_secs(5) && c.entries.len() >= 200 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn orthogonality(c: &Corpus) -> Outcome {
    let mut bad = 0;
    for (e, ctx) in c.entries.iter().zip(&c.contexts) {
        let d = ctx.divisor(e.coeffs.clone()).map_err(|e| e.to_string())?;
        if !d.orthogonality_defect().map_err(|e| e.to_string())?.is_zero() {
            bad += 1;
        }
    }
    let detail = format!("{} models, {bad} nonzero defects", c.entries.len());
    if bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn m1() -> SncModel {
    SncModel::trivial(CurveData::new(0, q(2)).unwrap())
        .blowup(&["E0", "H_x"], "E1")
        .unwrap()
}

fn functional_identities(c: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    for (k, (e, ctx)) in c.entries.iter().zip(&c.contexts).enumerate() {
        let d = ctx.divisor(e.coeffs.clone()).map_err(|e| e.to_string())?;
        match report(&d) {
            Ok(r) => {
                let v = ctx.volume_alpha();
                if &r.m_a - &r.m_na / v != zero() || &r.j_a - &r.j_na / v != zero() {
                    bad.push(k);
                }
            }
            Err(err) => return Err(format!("entry {k}: {err}")),
        }
    }
    let ctx = ModelContext::new(m1()).unwrap();
    let d = ctx.divisor(vec![q(1), q(2)]).unwrap();
    let r = report(&d).map_err(|e| e.to_string())?;
    let fixture = r.df.is_zero() && r.m_na.is_zero() && r.j_na.is_zero();
    let detail = format!(
        "{} models, {} violations; fixture DF={} M_NA={} J_NA={}",
        c.entries.len(),
        bad.len(),
        r.df,
        r.m_na,
        r.j_na
    );
    if bad.is_empty() && fixture {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Returns the in-chamber exactness outcome and the across-wall tolerance outcome.
fn differentiability(c: &Corpus) -> Result<(Outcome, Outcome), String> {
    let h128 = qf(1, 128);
    let (mut classes, mut exact_small, mut exact_128, mut wall_cases) = (0, 0, 0, 0);
    let mut worst_rel: f64 = 0.0;
    let mut halving: Vec<f64> = Vec::new();
    let mut failures = Vec::new();
    let mut wall_failures = Vec::new();
    for (k, (e, ctx)) in c.entries.iter().zip(&c.contexts).enumerate() {
        let d = ctx.divisor(e.coeffs.clone()).map_err(|e| e.to_string())?;
        let (dn, _) = d.normalize_ge_fiber();
        let u = dn.class();
        let l = ctx.lattice();
        let i = k % ctx.n();
        let dir = ctx.component_class(i);
        let curve = l.curve_index(&ctx.model().components()[i].label).map_err(|e| e.to_string())?;
        let rv = l.restricted_volume(&u, curve).map_err(|e| e.to_string())?;
        let target = q(2) * &rv;
        let centered = |h: &Q| -> Result<Q, String> {
            let plus = l.volume(&u.axpy(h, &dir)).map_err(|e| e.to_string())?;
            let minus = l.volume(&u.axpy(&-h, &dir)).map_err(|e| e.to_string())?;
            Ok((plus - minus) / (q(2) * h))
        };
        classes += 1;
        let radius = l.chamber_radius(&u, &dir).map_err(|e| e.to_string())?;
        let inside = |h: &Q| radius.as_ref().map_or(true, |r| h < r);
        if let Some(r) = &radius {
            if r.is_positive() {
                let h = std::cmp::min(qf(1, 64), r / q(2));
                if centered(&h)? == target {
                    exact_small += 1;
                } else {
                    failures.push(format!("entry {k}: inexact below the wall distance"));
                }
            } else {
                wall_cases += 1;
            }
        } else if centered(&qf(1, 64))? == target {
            exact_small += 1;
        } else {
            failures.push(format!("entry {k}: inexact with no wall"));
        }
        let cd = centered(&h128)?;
        if inside(&h128) {
            if cd == target {
                exact_128 += 1;
            } else {
                failures.push(format!("entry {k}: inexact at h = 1/128 inside the chamber"));
            }
        } else {
            let rel = to_f64(&(&cd - &target).abs()) / to_f64(&target.abs()).max(1.0);
            worst_rel = worst_rel.max(rel);
            let finer = to_f64(&(centered(&qf(1, 256))? - &target).abs());
            if finer > 0.0 {
                halving.push(to_f64(&(&cd - &target).abs()) / finer);
            }
            if rel > 1e-6 {
                wall_failures.push(format!(
                    "entry {k}: relative error {rel:.3e} at h = 1/128 across a wall"
                ));
            }
        }
    }
    let inside = format!(
        "{classes} classes; exact below the wall distance {exact_small}, exact at h=1/128 inside the chamber {exact_128}"
    );
    let inside = if failures.is_empty() && classes >= 50 {
        Ok(inside)
    } else {
        Err(format!("{inside}; {} failures, first: {}", failures.len(), failures[0]))
    };
    let across = format!(
        "{wall_cases} of {classes} classes lie on a chamber wall; worst relative error at h=1/128 {worst_rel:.3e}; \
         error ratio h=1/128 vs h=1/256 in [{:.3}, {:.3}]",
        halving.iter().cloned().fold(f64::INFINITY, f64::min),
        halving.iter().cloned().fold(0.0, f64::max),
    );
    let across = if wall_failures.is_empty() {
        Ok(across)
    } else {
        Err(format!("{across}; {} above 1e-6, first: {}", wall_failures.len(), wall_failures[0]))
    };
    Ok((inside, across))
}

fn entropy_consistency(c: &Corpus) -> Outcome {
    let mut bad = 0;
    for (e, ctx) in c.entries.iter().zip(&c.contexts) {
        let d = ctx.divisor(e.coeffs.clone()).map_err(|e| e.to_string())?;
        let a = entropy_envelope(&d).map_err(|e| e.to_string())?;
        let b = entropy_direct(&d).map_err(|e| e.to_string())?;
        if a != b {
            bad += 1;
        }
    }
    let detail = format!("{} models, {bad} mismatches", c.entries.len());
    if bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn curve_problem(genus: u32, v: Q, vals: Vec<Valuation>, xi: Vec<Q>) -> BetaProblem {
    BetaProblem::new(VolumeOracle::Curve(CurveOracle { genus, volume: v }), vals, xi).unwrap()
}

fn point(label: &str) -> Valuation {
    Valuation {
        label: label.into(),
        log_disc: q(1),
        scaling: q(1),
    }
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Outcome {
    let detail = format!("{label}: β = {got:.9}, expected {want} within {tol:e}");
    if (got - want).abs() <= tol {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn beta_line_one_point() -> Outcome {
    let start = Instant::now();
    let b = curve_problem(0, q(2), vec![point("x")], vec![q(1)]).beta().map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let out = within("P¹, α = -K, one point", b.beta, 0.0, 1e-5);
    if took >= Duration::from_secs(1) {
        return Err(format!("took {:.3}s", took.as_secs_f64()));
    }
    out
}

fn beta_elliptic() -> Outcome {
    let b = curve_problem(1, q(1), vec![point("x")], vec![q(1)]).beta().map_err(|e| e.to_string())?;
    within("elliptic curve, V = 1", b.beta, 1.0, 1e-5)
}

fn beta_line_two_points() -> Outcome {
    let b = curve_problem(0, q(2), vec![point("x"), point("y")], vec![qf(1, 2), qf(1, 2)])
        .beta()
        .map_err(|e| e.to_string())?;
    within("P¹, α = -K, two points, ξ = (1/2, 1/2)", b.beta, 0.0, 1e-5)
        .map_err(|d| format!("{d}; g = {:.9}, grad = {:.9}", b.energy, b.grad_k))
}

/// Valuations of the exceptional atoms of a model measure, as the β pipeline sees them.
fn pipeline_problem(ctx: &ModelContext, masses: &[Q]) -> Result<BetaProblem, String> {
    let mut vals = Vec::new();
    let mut xi = Vec::new();
    for (p, m) in ctx.points().iter().zip(masses) {
        if !m.is_positive() {
            continue;
        }
        let Center::Point(x) = &p.center else {
            return Err("mass at the trivial valuation".into());
        };
        vals.push(Valuation {
            label: x.clone(),
            log_disc: &p.log_disc - q(1),
            scaling: p.scaling.clone(),
        });
        xi.push(m.clone());
    }
    let curve = ctx.model().curve();
    BetaProblem::new(
        VolumeOracle::Curve(CurveOracle {
            genus: curve.genus,
            volume: curve.degree_alpha.clone(),
        }),
        vals,
        xi,
    )
    .map_err(|e| e.to_string())
}

fn random_exceptional_xi(rng: &mut ChaCha8Rng, ctx: &ModelContext) -> Vec<Q> {
    let s = ctx.model().strict_transform_index();
    let w: Vec<Q> = (0..ctx.n())
        .map(|i| if i == s { zero() } else { q(rng.gen_range(1..=9)) })
        .collect();
    let total: Q = w.iter().sum();
    w.into_iter().map(|x| x / &total).collect()
}

fn legendre_consistency(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let opt = OptConfig::default();
    let (mut cases, mut worst_mass, mut worst_g) = (0, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for (k, ctx) in c.contexts.iter().enumerate() {
        if cases == 20 {
            break;
        }
        if ctx.n() < 2 {
            continue;
        }
        cases += 1;
        let xi = random_exceptional_xi(&mut rng, ctx);
        let sol = solve_ma_divisorial(ctx, &xi, &opt).map_err(|e| format!("entry {k}: {e}"))?;
        let mass_err = sol
            .measure
            .masses()
            .iter()
            .zip(&xi)
            .map(|(a, b)| to_f64(&(a - b)).abs())
            .fold(0.0, f64::max);
        let p = pipeline_problem(ctx, &xi)?;
        let g = p.legendre_energy(&zero()).map_err(|e| format!("entry {k}: {e}"))?.energy;
        let g_err = (g - to_f64(&sol.objective)).abs();
        worst_mass = worst_mass.max(mass_err);
        worst_g = worst_g.max(g_err);
        if mass_err > 1e-6 || g_err > 1e-6 {
            failures.push(k);
        }
    }
    let detail = format!(
        "{cases} measures, worst mass error {worst_mass:.3e}, worst |g - (E - ξ·t*)| {worst_g:.3e}"
    );
    if failures.is_empty() && cases == 20 {
        Ok(detail)
    } else {
        Err(format!("{detail}; failing entries {failures:?}"))
    }
}

fn beta_equals_mabuchi() -> Outcome {
    // divisors weighted towards E0 push the strict transform into the negative part
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let cfg = CorpusConfig::default();
    let (mut cases, mut tried, mut worst) = (0, 0, 0.0f64);
    let mut failures = Vec::new();
    while cases < 20 && tried < 5000 {
        tried += 1;
        let e = kstab_core::corpus::random_entry(&mut rng, &cfg).map_err(|e| e.to_string())?;
        let ctx = ModelContext::new(e.model).map_err(|e| e.to_string())?;
        let mut coeffs = e.coeffs;
        coeffs[ctx.model().strict_transform_index()] = q(10);
        let d = ctx.divisor(coeffs).map_err(|e| e.to_string())?;
        let mu = d.ma_envelope().map_err(|e| e.to_string())?;
        if !mu.masses()[ctx.model().strict_transform_index()].is_zero() {
            continue;
        }
        cases += 1;
        let m_a = to_f64(&report(&d).map_err(|e| e.to_string())?.m_a);
        let b = pipeline_problem(&ctx, &mu.masses())?.beta().map_err(|e| e.to_string())?;
        let err = (b.beta - m_a).abs();
        worst = worst.max(err);
        if err > 1e-5 {
            failures.push(format!("β={:.9} M_A={m_a:.9}", b.beta));
        }
    }
    let detail = format!("{cases} envelopes ({tried} drawn), worst |β - M_A| {worst:.3e}");
    if failures.is_empty() && cases == 20 {
        Ok(detail)
    } else {
        Err(format!("{detail}; {failures:?}"))
    }
}

fn random_curve_problem(rng: &mut ChaCha8Rng) -> BetaProblem {
    let genus = rng.gen_range(0..=2u32);
    let v = qf(rng.gen_range(1..=8), rng.gen_range(1..=2));
    let ell = rng.gen_range(1..=4usize);
    let n_points = rng.gen_range(1..=ell);
    let vals: Vec<Valuation> = (0..ell)
        .map(|i| Valuation {
            label: format!("x{}", i % n_points),
            log_disc: q(rng.gen_range(1..=4)),
            scaling: qf(rng.gen_range(1..=6), rng.gen_range(1..=4)),
        })
        .collect();
    let w: Vec<Q> = (0..ell).map(|_| q(rng.gen_range(1..=9))).collect();
    let total: Q = w.iter().sum();
    curve_problem(genus, v, vals, w.into_iter().map(|x| x / &total).collect())
}

fn random_t(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

fn property_suites(c: &Corpus) -> Outcome {
    const N: usize = 500;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 13);
    let mut violations = [0usize; 6];
    let names = [
        "concavity",
        "translation",
        "monotonicity",
        "energy ≥ 0",
        "Zariski orthogonality",
        "fiber identities",
    ];
    let tol = 1e-9;
    for _ in 0..N {
        let p = random_curve_problem(&mut rng);
        let n = p.valuations().len();
        let (t1, t2) = (random_t(&mut rng, n), random_t(&mut rng, n));
        let mid: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| 0.5 * (a + b)).collect();
        let f = |t: &[f64]| p.f_profile(t, &zero()).unwrap();
        if f(&mid) < 0.5 * (f(&t1) + f(&t2)) - tol {
            violations[0] += 1;
        }
        let c: f64 = rng.gen_range(-5.0..5.0);
        let shifted: Vec<f64> = t1.iter().map(|x| x + c).collect();
        if (f(&shifted) - f(&t1) - c).abs() > tol {
            violations[1] += 1;
        }
        let i = rng.gen_range(0..n);
        let mut up = t1.clone();
        up[i] += rng.gen_range(0.0..2.0);
        if f(&up) < f(&t1) - tol {
            violations[2] += 1;
        }
        match p.legendre_energy(&zero()) {
            Ok(l) if l.energy >= -p.opt.tol => {}
            _ => violations[3] += 1,
        }
    }
    let mut zariski_cases = 0;
    let mut fiber_cases = 0;
    while zariski_cases < N {
        for ctx in &c.contexts {
            if zariski_cases == N {
                break;
            }
            let l = ctx.lattice();
            let model = ctx.model();
            let coeffs: Vec<Q> = (0..ctx.n()).map(|_| q(rng.gen_range(-10..=10))).collect();
            let u = model.a_class().add(&model.vertical_class(&coeffs)).axpy(
                &q(rng.gen_range(0..=3)),
                &model.kx_class(),
            );
            let z = l.zariski(&u).map_err(|e| e.to_string())?;
            zariski_cases += 1;
            if !z.is_pseff {
                continue;
            }
            let nef = l.is_nef(&z.positive).map_err(|e| e.to_string())?;
            let orth = z.negative.iter().all(|(j, s)| {
                s.is_positive()
                    && l.intersect(&z.positive, &l.test_curves()[*j].class).unwrap().is_zero()
            });
            let mut n_class = DivClass::zero(l.rank());
            for (j, s) in &z.negative {
                n_class = n_class.axpy(s, &l.test_curves()[*j].class);
            }
            if !nef || !orth || z.positive.add(&n_class) != u {
                violations[4] += 1;
            }
        }
    }
    while fiber_cases < N {
        for ctx in &c.contexts {
            if fiber_cases == N {
                break;
            }
            fiber_cases += 1;
            let l = ctx.lattice();
            let m = ctx.model();
            let f = m.fiber_class();
            let mut ok = l.intersect(&f, &m.a_class()).unwrap() == *ctx.volume_alpha()
                && l.intersect(&f, &f).unwrap().is_zero()
                && l.intersect(&f, &m.kx_class()).unwrap() == q(m.curve().degree_k());
            for i in 0..ctx.n() {
                ok &= l.intersect(&f, &ctx.component_class(i)).unwrap().is_zero();
            }
            for j in 0..m.fiber_curves().len() {
                let h = DivClass::basis(m.rank(), m.fiber_basis_index(j));
                ok &= l.intersect(&f, &h).unwrap() == q(1);
            }
            if !ok {
                violations[5] += 1;
            }
        }
    }
    let took = start.elapsed();
    let parts: Vec<String> = names
        .iter()
        .zip(&violations)
        .map(|(n, v)| format!("{n}: {v}"))
        .collect();
    let detail = format!(
        "{N} instances per suite, violations [{}], {:.2}s",
        parts.join(", "),
        took.as_secs_f64()
    );
    if violations.iter().all(|&v| v == 0) && took < Duration::from_secs(60) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criteria whose stated tolerance cannot hold; they are still run and reported.
const UNATTAINABLE: &[(&str, &str)] = &[
    (
        "4b",
        "across a Zariski chamber wall the volume is C¹ but not C², so the centered \
         difference has error linear in h (ratio 2 when h halves)",
    ),
    (
        "6c",
        "with g(ξ) = V(1 + d²)/4 for d = ξ₁ - ξ₂ on two points of P¹, the K-gradient is \
         -1/2 at d = 0, so β = 1/2; the model-side Mabuchi functional of the matching \
         envelope agrees",
    ),
];

fn timed(run: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let start = Instant::now();
    let out = run();
    (out, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let c = corpus();
    let mut results: Vec<(&str, &str, Outcome, f64)> = Vec::new();
    let (o, t) = timed(|| mass_sum(&c));
    results.push(("1", "mass-sum identity", o, t));
    let (o, t) = timed(|| orthogonality(&c));
    results.push(("2", "orthogonality", o, t));
    let (o, t) = timed(|| functional_identities(&c));
    results.push(("3", "functional identities", o, t));
    let start = Instant::now();
    let (inside, across) = match differentiability(&c) {
        Ok(pair) => pair,
        Err(e) => (Err(e.clone()), Err(e)),
    };
    let t = start.elapsed().as_secs_f64();
    results.push(("4a", "volume differentiability inside chambers", inside, t));
    results.push(("4b", "volume differentiability across walls at h=1/128", across, t));
    let (o, t) = timed(|| entropy_consistency(&c));
    results.push(("5", "entropy consistency", o, t));
    let (o, t) = timed(beta_line_one_point);
    results.push(("6a", "beta closed form, P¹ one point", o, t));
    let (o, t) = timed(beta_elliptic);
    results.push(("6b", "beta closed form, elliptic curve", o, t));
    let (o, t) = timed(beta_line_two_points);
    results.push(("6c", "beta closed form, P¹ two symmetric points", o, t));
    let (o, t) = timed(|| legendre_consistency(&c));
    results.push(("7", "Legendre/solver consistency", o, t));
    let (o, t) = timed(beta_equals_mabuchi);
    results.push(("8", "beta equals Mabuchi", o, t));
    let (o, t) = timed(|| property_suites(&c));
    results.push(("9", "property suites", o, t));

    let (mut passed, mut known, mut unexpected) = (0, 0, 0);
    for (id, name, outcome, secs) in &results {
        match outcome {
            Ok(d) => {
                passed += 1;
                println!("PASS [{id} {name}] {d} ({secs:.2}s)");
            }
            Err(d) => {
                println!("FAIL [{id} {name}] {d} ({secs:.2}s)");
                match UNATTAINABLE.iter().find(|(k, _)| k == id) {
                    Some((_, why)) => {
                        known += 1;
                        println!("     unattainable as stated: {why}");
                    }
                    None => unexpected += 1,
                }
            }
        }
    }
    println!(
        "{passed} of {} criteria passed; {known} failed as analyzed; {unexpected} unexpected failures",
        results.len()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
