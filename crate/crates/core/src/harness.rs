//! Body specifications, suite configuration and orchestration.

use crate::error::{Error, Result};
use crate::polytope::{
    boxed, cross_polytope, make_polytope, max_section_anchor, standard_simplex, transform, translate, Polytope,
};
use crate::rational::{self, qi, qr, Q};
use crate::suite::{checker_ids, lookup, verify, CheckParams, InequalityReport, Verdict};
use crate::sweep::{limit_sweep, SweepRow, SweepTarget};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const SCHEMA: &str = "zhang-forge/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Simplex,
    Cube,
    Cross,
    RandomHull,
    Custom,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BodyParams {
    /// Box edge `[lo, hi]` (cube).
    #[serde(with = "rational::serde_qvec", skip_serializing_if = "Vec::is_empty")]
    pub edge: Vec<Q>,
    /// Dilation factor (simplex) or radius (cross, random_hull).
    #[serde(with = "rational::serde_q_opt", skip_serializing_if = "Option::is_none")]
    pub radius: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Denominator of random coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<i64>,
    #[serde(with = "rational::serde_qvecs", skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    #[serde(with = "rational::serde_qvecs")]
    pub matrix: Vec<Vec<Q>>,
    #[serde(with = "rational::serde_qvec")]
    pub vector: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub family: Family,
    pub dim: usize,
    #[serde(default)]
    pub params: BodyParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<Affine>,
    #[serde(default)]
    pub anchor: bool,
}

impl BodySpec {
    pub fn new(family: Family, dim: usize) -> Self {
        BodySpec { name: None, family, dim, params: BodyParams::default(), affine: None, anchor: false }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn label(&self, index: usize) -> String {
        self.name.clone().unwrap_or_else(|| {
            format!(
                "{}-{}d-{index}",
                serde_json::to_value(self.family).expect("json").as_str().unwrap_or("body"),
                self.dim
            )
        })
    }
}

const MAX_REJECTIONS: usize = 100;

fn random_hull(spec: &BodySpec) -> Result<Polytope> {
    let n = spec.dim;
    let count = spec.params.count.unwrap_or(8);
    let radius = spec.params.radius.clone().unwrap_or_else(|| qi(2));
    let den = spec.params.denominator.unwrap_or(4);
    if count < n + 1 || den <= 0 || !radius.is_positive() {
        return Err(Error::DegenerateSpec(format!(
            "random_hull needs at least {} points, a positive radius and denominator",
            n + 1
        )));
    }
    let span = rational::int_to_i64(&rational::floor_int(&(&radius * qi(den))));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.params.seed.unwrap_or(0));
    for _ in 0..MAX_REJECTIONS {
        let pts: Vec<Vec<Q>> =
            (0..count).map(|_| (0..n).map(|_| qr(rng.gen_range(-span..=span), den)).collect()).collect();
        let p = make_polytope(&pts, n)?;
        if p.is_full_dim() {
            return Ok(p);
        }
    }
    Err(Error::DegenerateSpec(format!("no full-dimensional hull after {MAX_REJECTIONS} draws")))
}

pub fn make_body(spec: &BodySpec) -> Result<Polytope> {
    let n = spec.dim;
    if !(1..=4).contains(&n) {
        return Err(Error::DegenerateSpec(format!("dimension {n} outside 1..=4")));
    }
    let mut body = match spec.family {
        Family::Simplex => {
            let s = standard_simplex(n);
            match &spec.params.radius {
                Some(r) => crate::polytope::scale(&s, r),
                None => s,
            }
        }
        Family::Cube => {
            let (lo, hi) = match spec.params.edge.as_slice() {
                [] => (Q::zero(), qi(1)),
                [a, b] => (a.clone(), b.clone()),
                _ => return Err(Error::DegenerateSpec("cube edge must be [lo, hi]".into())),
            };
            if lo >= hi {
                return Err(Error::DegenerateSpec("cube edge is empty".into()));
            }
            boxed(&vec![(lo, hi); n])
        }
        Family::Cross => {
            let r = spec.params.radius.clone().unwrap_or_else(|| qi(1));
            if !r.is_positive() {
                return Err(Error::DegenerateSpec("cross-polytope radius must be positive".into()));
            }
            cross_polytope(n, &r)
        }
        Family::RandomHull => random_hull(spec)?,
        Family::Custom => {
            if spec.params.points.is_empty() {
                return Err(Error::DegenerateSpec("custom body without points".into()));
            }
            make_polytope(&spec.params.points, n)?
        }
    };
    if let Some(a) = &spec.affine {
        body = transform(&body, &a.matrix, &a.vector).map_err(|e| Error::DegenerateSpec(format!("affine map: {e}")))?;
    }
    if !body.is_full_dim() {
        return Err(Error::DegenerateSpec("body is not full-dimensional".into()));
    }
    if spec.anchor && n >= 2 {
        let (y, _) = max_section_anchor(&body)?;
        let shift: Vec<Q> = y.iter().map(|v| -v).chain(std::iter::once(Q::zero())).collect();
        body = translate(&body, &shift);
    }
    Ok(body)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub body: BodySpec,
    pub targets: Vec<SweepTarget>,
    #[serde(with = "rational::serde_qvec")]
    pub scales: Vec<Q>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub bodies: Vec<BodySpec>,
    /// Checker ids; empty means all.
    pub checkers: Vec<String>,
    pub params: CheckParams,
    pub sweeps: Vec<SweepSpec>,
    pub output_dir: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    pub fn validate(&self) -> Result<()> {
        for id in &self.checkers {
            lookup(id).map_err(|_| Error::Config(format!("unknown checker id {id:?}")))?;
        }
        for b in self.bodies.iter().chain(self.sweeps.iter().map(|s| &s.body)) {
            if !(2..=3).contains(&b.dim) {
                return Err(Error::Config(format!("suite bodies must have dimension 2 or 3, got {}", b.dim)));
            }
        }
        Ok(())
    }

    pub fn checker_list(&self) -> Vec<String> {
        if self.checkers.is_empty() {
            checker_ids().into_iter().map(String::from).collect()
        } else {
            self.checkers.clone()
        }
    }
}

fn pts(v: &[&[i64]]) -> Vec<Vec<Q>> {
    v.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect()
}

fn custom(name: &str, dim: usize, points: Vec<Vec<Q>>) -> BodySpec {
    let mut b = BodySpec::new(Family::Custom, dim).named(name);
    b.params.points = points;
    b
}

fn cube_spec(name: &str, dim: usize, lo: i64, hi: i64) -> BodySpec {
    let mut b = BodySpec::new(Family::Cube, dim).named(name);
    b.params.edge = vec![qi(lo), qi(hi)];
    b
}

fn random_spec(name: &str, dim: usize, count: usize, seed: u64, radius: i64) -> BodySpec {
    let mut b = BodySpec::new(Family::RandomHull, dim).named(name);
    b.params.count = Some(count);
    b.params.seed = Some(seed);
    b.params.radius = Some(qi(radius));
    b
}

/// The built-in corpus of planar and spatial bodies.
pub fn default_corpus() -> Vec<BodySpec> {
    let mut two_t = BodySpec::new(Family::Simplex, 2).named("2T");
    two_t.params.radius = Some(qi(2));
    let mut cross2 = BodySpec::new(Family::Cross, 2).named("cross2-r2");
    cross2.params.radius = Some(qi(2));
    let mut sheared = BodySpec::new(Family::Cube, 2).named("sheared-square");
    sheared.affine =
        Some(Affine { matrix: vec![vec![qi(1), qi(0)], vec![qr(1, 2), qi(1)]], vector: vec![qi(0), qr(-1, 3)] });
    sheared.params.edge = vec![qi(-1), qi(2)];
    vec![
        BodySpec::new(Family::Simplex, 2).named("T"),
        cube_spec("unit-square", 2, 0, 1),
        cube_spec("square-1", 2, -1, 1),
        cube_spec("square-0-2", 2, 0, 2),
        two_t,
        cross2,
        custom(
            "thin-box",
            2,
            vec![vec![qi(-2), qr(1, 3)], vec![qi(2), qr(1, 3)], vec![qi(-2), qr(1, 2)], vec![qi(2), qr(1, 2)]],
        ),
        custom("quadrilateral", 2, pts(&[&[0, -2], &[3, 1], &[-1, 3], &[2, -1]])),
        custom("one-point", 2, vec![vec![qi(0), qi(0)], vec![qr(1, 2), qi(1)], vec![qr(1, 2), qi(-1)]]),
        sheared,
        random_spec("random2-a", 2, 8, 7, 3),
        BodySpec::new(Family::Simplex, 3).named("T3"),
        cube_spec("unit-cube", 3, 0, 1),
        cube_spec("cube-1", 3, -1, 1),
        BodySpec::new(Family::Cross, 3).named("cross3"),
        custom("wedge3", 3, pts(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[2, 0, 1], &[0, 2, 1]])),
        random_spec("random3-a", 3, 9, 11, 2),
    ]
}

/// Sweeps over `T` and `[0,1]^2` at `λ ∈ {4, 16, 64}`.
pub fn default_sweeps() -> Vec<SweepSpec> {
    let scales = vec![qi(4), qi(16), qi(64)];
    vec![
        SweepSpec {
            body: BodySpec::new(Family::Simplex, 2).named("T"),
            targets: SweepTarget::ALL.to_vec(),
            scales: scales.clone(),
        },
        SweepSpec { body: cube_spec("unit-square", 2, 0, 1), targets: SweepTarget::ALL.to_vec(), scales },
    ]
}

pub fn default_config() -> SuiteConfig {
    SuiteConfig { bodies: default_corpus(), sweeps: default_sweeps(), ..SuiteConfig::default() }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn exit_code(&self) -> i32 {
        if self.fails > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub body: String,
    pub target: SweepTarget,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub config: SuiteConfig,
    pub reports: Vec<InequalityReport>,
    pub sweeps: Vec<SweepResult>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "body", "lhs", "rhs", "slack", "verdict"]).map_err(|e| Error::Config(e.to_string()))?;
        for r in &self.reports {
            let verdict = if r.skipped {
                "skipped".to_string()
            } else {
                serde_json::to_value(r.verdict).expect("json").as_str().unwrap_or("").to_string()
            };
            w.write_record([
                r.id.clone(),
                r.body.clone(),
                r.lhs.value.to_string(),
                r.rhs.value.to_string(),
                r.slack.value.to_string(),
                verdict,
            ])
            .map_err(|e| Error::Config(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf8 csv"))
    }

    /// Writes `report.json` and `report.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let io = |p: &Path, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let jp = dir.join("report.json");
        std::fs::write(&jp, self.to_json()).map_err(|e| io(&jp, e))?;
        let cp = dir.join("report.csv");
        std::fs::write(&cp, self.to_csv()?).map_err(|e| io(&cp, e))?;
        Ok(())
    }
}

fn error_report(id: &str, label: &str, e: &Error) -> InequalityReport {
    let info = lookup(id).expect("validated id");
    let blank = crate::polytope::MeasureValue::approx(0.0, 0.0).uncertified();
    InequalityReport {
        id: id.to_string(),
        reference: info.reference.to_string(),
        body: label.to_string(),
        lhs: blank.clone(),
        rhs: blank.clone(),
        slack: blank,
        verdict: Verdict::Inconclusive,
        skipped: false,
        reason: Some(format!("error: {e}")),
        context: Default::default(),
    }
}

/// Runs every (body, checker) pair and the sweeps on a pool of `jobs`
/// threads; results keep configuration order.
pub fn run_suite(config: &SuiteConfig, jobs: usize) -> Result<SuiteReport> {
    config.validate()?;
    let bodies: Vec<(String, Polytope)> =
        config.bodies.iter().enumerate().map(|(i, s)| make_body(s).map(|p| (s.label(i), p))).collect::<Result<_>>()?;
    let ids = config.checker_list();
    let tasks: Vec<(usize, &str)> =
        (0..bodies.len()).flat_map(|b| ids.iter().map(move |id| (b, id.as_str()))).collect();
    let sweep_tasks: Vec<(usize, SweepTarget)> =
        config.sweeps.iter().enumerate().flat_map(|(i, s)| s.targets.iter().map(move |&t| (i, t))).collect();
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Config(e.to_string()))?;
    let (reports, sweeps) = pool.install(|| {
        let reports: Vec<InequalityReport> = tasks
            .par_iter()
            .map(|&(b, id)| {
                let (label, body) = &bodies[b];
                let mut r = verify(id, body, &config.params).unwrap_or_else(|e| error_report(id, label, &e));
                r.body = label.clone();
                r
            })
            .collect();
        let sweeps: Vec<Result<SweepResult>> = sweep_tasks
            .par_iter()
            .map(|&(i, target)| {
                let s = &config.sweeps[i];
                let body = make_body(&s.body)?;
                Ok(SweepResult { body: s.body.label(i), target, rows: limit_sweep(&body, target, &s.scales)? })
            })
            .collect();
        (reports, sweeps)
    });
    let sweeps = sweeps.into_iter().collect::<Result<Vec<_>>>()?;
    let mut summary = Summary { total: reports.len(), ..Summary::default() };
    for r in &reports {
        if r.skipped {
            summary.skipped += 1;
            continue;
        }
        match r.verdict {
            Verdict::Holds => summary.holds += 1,
            Verdict::Fails => summary.fails += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
    }
    Ok(SuiteReport { schema: SCHEMA.to_string(), config: config.clone(), reports, sweeps, summary })
}

/// Output directory: the override, else the environment, else the config, else `.`.
pub fn output_dir(config: &SuiteConfig, cli: Option<&Path>) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Ok(p) = std::env::var("ZFORGE_OUT_DIR") {
        return PathBuf::from(p);
    }
    config.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

pub fn body_summary(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(|v| Value::Array(v.iter().map(rational::q_to_json).collect())).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert_eq!(make_body(&BodySpec::new(Family::Simplex, 2)).unwrap(), standard_simplex(2));
        let sq = make_body(&cube_spec("s", 2, -1, 1)).unwrap();
        assert_eq!(sq, crate::polytope::cube(2, &qi(-1), &qi(1)));
        let r = random_spec("r", 2, 8, 7, 3);
        assert_eq!(make_body(&r).unwrap(), make_body(&r).unwrap());
        assert!(make_body(&random_spec("bad", 3, 3, 1, 1)).is_err());
    }

    #[test]
    fn corpus_is_large_enough_and_valid() {
        let c = default_corpus();
        assert!(c.len() >= 12);
        for s in &c {
            make_body(s).unwrap();
        }
    }

    #[test]
    fn unknown_checker_is_config_error() {
        let cfg = r#"{"bodies": [], "checkers": ["nope"]}"#;
        assert!(matches!(SuiteConfig::from_json_str(cfg), Err(Error::Config(_))));
    }

    #[test]
    fn empty_suite() {
        let r = run_suite(&SuiteConfig::default(), 2).unwrap();
        assert_eq!(r.summary.total, 0);
        assert_eq!(r.summary.exit_code(), 0);
    }

    #[test]
    fn shipped_configs_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        assert_eq!(SuiteConfig::load(&dir.join("default.json")).unwrap(), default_config());
        let ex = SuiteConfig::load(&dir.join("example.json")).unwrap();
        assert_eq!(ex.bodies[2].params.points[0][1], qr(1, 3));
    }

    #[test]
    fn config_round_trip() {
        let cfg = default_config();
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(SuiteConfig::from_json_str(&s).unwrap(), cfg);
    }
}
