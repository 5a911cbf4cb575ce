//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 7 is known to be out of reach (see the README); it is reported
//! as FAIL but does not make the process exit with an error.

use num::Zero;
use std::time::{Duration, Instant};
use zforge::harness::{default_config, default_corpus, make_body, run_suite, BodySpec, Family, SuiteConfig};
use zforge::lattice::{count_lattice, mu_measure, projection_count};
use zforge::moments::{
    continuous_ray_moment, star_volume, BallSource, MomentRequest, MomentRoute, SphereRule, StarRadial,
};
use zforge::polytope::{cross_polytope, cube, make_polytope, scale, standard_simplex, volume, Direction, Polytope};
use zforge::rational::{q_to_json, qi, qr, to_f64, Q};
use zforge::steiner::steiner_symmetrize;
use zforge::suite::{checker_ids, verify, CheckParams, InequalityReport, Verdict};
use zforge::sweep::{limit_sweep, SweepTarget};

// Tolerances and budgets.
const M0_TOL: f64 = 1e-12;
const BUDGET_1: Duration = Duration::from_secs(1);
const ZHANG_EQ_TOL_2D: f64 = 2e-3;
const ZHANG_EQ_TOL_3D: f64 = 5e-3;
const ZHANG_STRICT: f64 = 1e-2;
const BUDGET_2: Duration = Duration::from_secs(30);
const ROUTE_REL_TOL: f64 = 1e-9;
const BUDGET_3: Duration = Duration::from_secs(120);
const RHS_M0_TOL: f64 = 1e-10;
const STAR_VOLUME_TOL: f64 = 1e-3;
const SWEEP_SCALE: i64 = 64;
const GN_TOL: f64 = 0.05;
const ZHANG_LIMIT_TOL: f64 = 0.10;
const B_LIMIT_X: i64 = 10_000;
const B_LIMIT_TOL: f64 = 1e-3;
const FUZZ_BODIES: u64 = 200;
const BUDGET_8: Duration = Duration::from_secs(300);
const KNOWN_INFEASIBLE: &[usize] = &[7];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run(id: &str, k: &Polytope) -> Result<InequalityReport, String> {
    verify(id, k, &CheckParams::default()).map_err(|e| format!("{id}: {e}"))
}

fn exact(v: &zforge::MeasureValue) -> Option<Q> {
    v.exact.clone()
}

fn corpus() -> Vec<(String, Polytope)> {
    default_corpus().iter().enumerate().map(|(i, s)| (s.label(i), make_body(s).expect("corpus body"))).collect()
}

fn timed(budget: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < budget, format!("took {t:.2?}, budget {budget:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let k = cube(2, &qi(-1), &qi(1));
    let a = run("discrete_zhang_mu", &k)?;
    ensure(
        exact(&a.lhs) == Some(qi(12)) && exact(&a.rhs) == Some(qi(24)),
        format!("discrete_zhang_mu {:?} vs {:?}", a.lhs.value, a.rhs.value),
    )?;
    let b = run("purely_discrete_zhang", &k)?;
    ensure(
        exact(&b.lhs) == Some(qi(96)) && exact(&b.rhs) == Some(qi(192)),
        format!("purely_discrete_zhang {} vs {}", b.lhs.value, b.rhs.value),
    )?;
    let m0 = &b.context["m0"];
    let m0v = zforge::rational::q_from_json(m0).map(|q| to_f64(&q)).ok_or("m0 missing")?;
    ensure((m0v - 3.0).abs() <= M0_TOL, format!("m0 = {m0}"))?;
    ensure(b.verdict == Verdict::Holds && a.verdict == Verdict::Holds, "verdict")?;
    Ok(format!("12 <= 24, 96 <= 192, m0 = {}, {}", q_to_json(&qi(3)), timed(BUDGET_1, start)?))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, tol) in [(2usize, ZHANG_EQ_TOL_2D), (3, ZHANG_EQ_TOL_3D)] {
        let r = run("zhang_volume", &standard_simplex(n))?;
        let rel = (r.lhs.value - r.rhs.value).abs() / r.rhs.value;
        ensure(rel <= tol, format!("simplex n={n}: relative gap {rel:.3e} > {tol:e}"))?;
        notes.push(format!("T{n} {rel:.1e}"));
        for (name, k) in [("cube", cube(n, &qi(0), &qi(1))), ("cross", cross_polytope(n, &qi(1)))] {
            let r = run("zhang_volume", &k)?;
            let slack = r.rhs.value - r.lhs.value;
            ensure(slack > ZHANG_STRICT * r.rhs.value, format!("{name} n={n}: slack {slack:.3e} not strict"))?;
        }
    }
    Ok(format!("{}, {}", notes.join(", "), timed(BUDGET_2, start)?))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let bodies = corpus();
    ensure(bodies.len() >= 12, "corpus too small")?;
    let mut worst = 0.0f64;
    for (name, k) in &bodies {
        let n = k.dim();
        let mut ps = vec![1.0, 2.0, n as f64];
        ps.dedup();
        for p in ps {
            let vals: Vec<_> = [MomentRoute::RayQuadrature, MomentRoute::SymmetralSlab, MomentRoute::ProjectionPower]
                .into_iter()
                .map(|route| continuous_ray_moment(&MomentRequest::new(k.clone(), Direction::axis(n, n - 1), p, route)))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("{name}: {e}"))?;
            let hi = vals.iter().map(|v| v.value).fold(f64::MIN, f64::max);
            let lo = vals.iter().map(|v| v.value).fold(f64::MAX, f64::min);
            let err: f64 = vals.iter().map(|v| v.abs_error).sum();
            let tol = (ROUTE_REL_TOL * hi).max(err);
            ensure(hi - lo <= tol, format!("{name} p={p}: spread {:.3e} > {tol:.3e}", hi - lo))?;
            worst = worst.max((hi - lo) / hi);
        }
        let r = run("identity_triple_discrete", k)?;
        ensure(
            r.verdict == Verdict::Holds && r.lhs.exact.as_ref().is_some_and(Zero::is_zero),
            format!("{name}: discrete identities differ"),
        )?;
    }
    Ok(format!("{} bodies, worst relative spread {worst:.1e}, {}", bodies.len(), timed(BUDGET_3, start)?))
}

fn criterion_4() -> Check {
    let bodies = corpus();
    for (name, k) in &bodies {
        let e = |m: String| format!("{name}: {m}");
        let g = qi(count_lattice(k, 0).map_err(|x| e(x.to_string()))? as i64);
        let gp = qi(projection_count(k, 0).map_err(|x| e(x.to_string()))? as i64);
        let mu = mu_measure(k).map_err(|x| e(x.to_string()))?;
        ensure(&g - &gp <= mu && mu <= &g + &gp, e("sandwich".into()))?;
        let s = steiner_symmetrize(k).map_err(|x| e(x.to_string()))?;
        ensure(mu_measure(&s).map_err(|x| e(x.to_string()))? == mu, e("mu(S(K)) != mu(K)".into()))?;
        ensure(volume(&s) == volume(k), e("vol(S(K)) != vol(K)".into()))?;
        ensure(steiner_symmetrize(&s).map_err(|x| e(x.to_string()))? == s, e("S not idempotent".into()))?;
        for lam in [qi(2), qi(3)] {
            let a = steiner_symmetrize(&scale(k, &lam)).map_err(|x| e(x.to_string()))?;
            ensure(a == scale(&s, &lam), e(format!("S(λK) != λS(K) at λ = {lam}")))?;
        }
    }
    Ok(format!("{} bodies, exact", bodies.len()))
}

fn criterion_5() -> Check {
    let bodies = corpus();
    let mut cdb = 0;
    for (name, k) in &bodies {
        for id in ["berwald_continuous", "berwald_discrete"] {
            let r = run(id, k)?;
            ensure(r.verdict == Verdict::Holds, format!("{name}: {id} {:?}", r.verdict))?;
        }
        let r = run("completely_discrete_berwald", k)?;
        if r.skipped {
            continue;
        }
        cdb += 1;
        ensure(r.verdict == Verdict::Holds, format!("{name}: completely_discrete_berwald {:?}", r.verdict))?;
        let gap = &r.context["rhs_minus_m0"];
        let g = zforge::rational::q_from_json(gap)
            .map(|q| to_f64(&q))
            .or_else(|| gap.as_f64())
            .ok_or("rhs_minus_m0 missing")?;
        ensure(g.abs() <= RHS_M0_TOL, format!("{name}: RHS(1) - m0 = {g:e}"))?;
    }
    Ok(format!("{} bodies, completely discrete chain on {cdb}", bodies.len()))
}

fn criterion_6() -> Check {
    let bodies = corpus();
    let origin = |k: &Polytope| k.contains(&vec![Q::zero(); k.dim()]);
    let mut with_origin = 0;
    let mut worst_vol = 0.0f64;
    for (name, k) in &bodies {
        if origin(k) {
            with_origin += 1;
            for id in ["ball_inclusion_discrete", "convexhull_inclusion", "difference_set_inclusion"] {
                let r = run(id, k)?;
                ensure(r.verdict == Verdict::Holds, format!("{name}: {id} {:?}", r.verdict))?;
            }
        }
        if k.dim() == 2 {
            let r = run("volume_identity_discrete", k)?;
            ensure(
                r.skipped || r.verdict == Verdict::Holds,
                format!("{name}: volume_identity_discrete {:?}", r.verdict),
            )?;
            let star = StarRadial::ball_body(BallSource::Continuous, k, 2.0).map_err(|e| e.to_string())?;
            let sv = star_volume(&star, SphereRule::Circle(2048)).map_err(|e| e.to_string())?;
            let vol = to_f64(&volume(k));
            let rel = (sv.value - vol).abs() / vol;
            ensure(rel <= STAR_VOLUME_TOL, format!("{name}: vol(K_2(g_K)) off by {rel:.2e}"))?;
            worst_vol = worst_vol.max(rel);
        }
    }
    let single = make_polytope(&[vec![qi(0), qi(0)], vec![qr(1, 2), qi(1)], vec![qr(1, 2), qi(-1)]], 2)
        .map_err(|e| e.to_string())?;
    let r = run("one_point_collapse", &single)?;
    ensure(
        !r.skipped && r.verdict == Verdict::Holds && r.lhs.exact.is_some() && r.lhs.exact == r.rhs.exact,
        "one_point_collapse not exact",
    )?;
    Ok(format!("{with_origin} bodies contain 0, worst star volume gap {worst_vol:.1e}, collapse exact"))
}

fn criterion_7() -> Check {
    let lam = [qi(SWEEP_SCALE)];
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, k) in [("T", standard_simplex(2)), ("[0,1]^2", cube(2, &qi(0), &qi(1)))] {
        let gn = limit_sweep(&k, SweepTarget::GnVolume, &lam).map_err(|e| e.to_string())?;
        if gn[0].rel_error > GN_TOL {
            failures.push(format!("{name} G_n {:.3}", gn[0].rel_error));
        }
        for target in [SweepTarget::DiscreteToContinuousZhang, SweepTarget::PurelyDiscreteToContinuous] {
            for row in limit_sweep(&k, target, &lam).map_err(|e| e.to_string())? {
                let tag = format!("{name} {target:?} {} {:.3}", row.label, row.rel_error);
                if row.rel_error > ZHANG_LIMIT_TOL {
                    failures.push(tag);
                } else {
                    notes.push(tag);
                }
            }
        }
    }
    let b = limit_sweep(&standard_simplex(2), SweepTarget::BLimit, &[qi(B_LIMIT_X)]).map_err(|e| e.to_string())?;
    for row in &b {
        if (row.value - row.reference).abs() > B_LIMIT_TOL {
            failures.push(format!("B {} = {}", row.label, row.value));
        }
    }
    if failures.is_empty() {
        Ok(format!("all within tolerance: {}", notes.join("; ")))
    } else {
        Err(format!("outside tolerance: {}", failures.join("; ")))
    }
}

fn fuzz_spec(i: u64) -> BodySpec {
    let dim = if i % 5 < 3 { 2 } else { 3 };
    let mut s = BodySpec::new(Family::RandomHull, dim).named(&format!("fuzz-{i}"));
    s.params.seed = Some(1000 + i);
    s.params.count = Some(dim + 2 + (i as usize % 5));
    s.params.radius = Some(qi(2 + (i % 2) as i64));
    s
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let cfg = SuiteConfig { bodies: (0..FUZZ_BODIES).map(fuzz_spec).collect(), ..SuiteConfig::default() };
    let r = run_suite(&cfg, 8).map_err(|e| e.to_string())?;
    ensure(r.summary.total == FUZZ_BODIES as usize * checker_ids().len(), "missing reports")?;
    let hard: Vec<_> =
        r.reports.iter().filter(|x| x.reason.as_deref().is_some_and(|s| s.contains("hard failure"))).collect();
    if let Some(h) = hard.first() {
        return Err(format!("{} hard failures, first {} on {}", hard.len(), h.id, h.body));
    }
    let fails: Vec<_> = r.reports.iter().filter(|x| x.verdict == Verdict::Fails).collect();
    if let Some(f) = fails.first() {
        return Err(format!("{} fails, first {} on {}", fails.len(), f.id, f.body));
    }
    let s = &r.summary;
    Ok(format!(
        "{} reports: {} hold, {} inconclusive, {} skipped, {}",
        s.total,
        s.holds,
        s.inconclusive,
        s.skipped,
        timed(BUDGET_8, start)?
    ))
}

fn criterion_9() -> Check {
    let cfg = default_config();
    let one = run_suite(&cfg, 1).map_err(|e| e.to_string())?;
    let eight = run_suite(&cfg, 8).map_err(|e| e.to_string())?;
    let (a, b) = (one.to_json(), eight.to_json());
    ensure(a == b, "JSON differs between 1 and 8 workers")?;
    ensure(one.to_csv().map_err(|e| e.to_string())? == eight.to_csv().map_err(|e| e.to_string())?, "CSV differs")?;
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Check); 9] = [
        (1, "exact discrete worked example", criterion_1),
        (2, "Zhang equality case", criterion_2),
        (3, "identity triples", criterion_3),
        (4, "sandwich and symmetrization invariants", criterion_4),
        (5, "Berwald suites", criterion_5),
        (6, "ball-body suite", criterion_6),
        (7, "convergence sweeps", criterion_7),
        (8, "differential fuzz", criterion_8),
        (9, "determinism", criterion_9),
    ];
    let mut unexpected = 0;
    for (i, name, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {i} ({name}): PASS  {msg}"),
            Err(msg) if KNOWN_INFEASIBLE.contains(&i) => {
                println!("criterion {i} ({name}): FAIL (known infeasible)  {msg}")
            }
            Err(msg) => {
                unexpected += 1;
                println!("criterion {i} ({name}): FAIL  {msg}");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
