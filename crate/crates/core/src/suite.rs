//! Registry of inequality and identity checkers producing `InequalityReport`s.

use crate::error::{Error, Result};
use crate::lattice::{
    count_lattice, lattice_points, mu_measure, mu_measure_open, projection_count, ray_decomposition, FloatRays,
};
use crate::moments::{
    binom_q, binom_real, continuous_ray_moment, radial_ball_body, section_power_integral, star_volume, BallSource,
    MomentRequest, MomentRoute, SphereRule, StarRadial,
};
use crate::polytope::{
    intersect, max_section_anchor, project_drop_last, projection_volume, to_json, translate, volume, Direction,
    MeasureValue, Polytope,
};
use crate::profiles::{
    b_coeff, b_coeff_q, column_lengths, crossing_point, diamond_extension, hypotheses, section_length,
    section_profiles, solve_m0_profiles, RootValue, SectionProfiles,
};
use crate::quadrature::{circle_directions, fibonacci_sphere};
use crate::rational::{self, pow_q, q_to_json, qi, qr, to_f64, Q};
use crate::sections::{base_volume, section_power, SectionCells};
use crate::steiner::steiner_symmetrize;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    fn severity(self) -> u8 {
        match self {
            Verdict::Holds => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fails => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: String,
    /// Plain-language name of the statement being checked.
    pub reference: String,
    pub body: String,
    pub lhs: MeasureValue,
    pub rhs: MeasureValue,
    pub slack: MeasureValue,
    pub verdict: Verdict,
    /// Set when a precondition failed and nothing was compared.
    pub skipped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub context: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckParams {
    pub seed: u64,
    pub directions_2d: usize,
    pub directions_3d: usize,
    /// Multiplier on sphere quadrature resolution.
    pub quad_scale: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { seed: 0, directions_2d: 360, directions_3d: 1000, quad_scale: 1 }
    }
}

pub struct CheckerInfo {
    pub id: &'static str,
    pub reference: &'static str,
}

pub const REGISTRY: &[CheckerInfo] = &[
    CheckerInfo {
        id: "zhang_preintegration",
        reference: "Zhang inequality before integration over directions, axis e_n",
    },
    CheckerInfo {
        id: "zhang_preintegration_2",
        reference: "same inequality written as a moment of the Steiner symmetral",
    },
    CheckerInfo { id: "zhang_directional", reference: "Zhang inequality before integration along rational directions" },
    CheckerInfo { id: "discrete_zhang_mu", reference: "discrete Zhang inequality for the column measure mu" },
    CheckerInfo { id: "lattice_zhang", reference: "discrete Zhang inequality with the lattice point enumerator only" },
    CheckerInfo { id: "purely_discrete_zhang", reference: "purely discrete Zhang inequality with B_m0 coefficients" },
    CheckerInfo {
        id: "berwald_continuous",
        reference: "Berwald reverse Hoelder chain for the section length function",
    },
    CheckerInfo { id: "berwald_discrete", reference: "discrete Berwald inequality with the diamond extension" },
    CheckerInfo {
        id: "completely_discrete_berwald",
        reference: "completely discrete Berwald inequality for section profiles",
    },
    CheckerInfo { id: "zhang_volume", reference: "Zhang projection inequality via the polar projection body volume" },
    CheckerInfo { id: "different_inclusion", reference: "monotone chain of radial power bounds for 0 <= p < q" },
    CheckerInfo { id: "mu_gn_sandwich", reference: "G_n(K) - G_{n-1}(P) <= mu(K) <= G_n(K) + G_{n-1}(P)" },
    CheckerInfo { id: "identity_triple_continuous", reference: "three expressions of the continuous ray moment agree" },
    CheckerInfo { id: "identity_triple_discrete", reference: "three expressions of the mu ray moment agree exactly" },
    CheckerInfo {
        id: "ball_inclusion_discrete",
        reference: "inclusion of Ball bodies of the discrete covariogram, 0 < p < q",
    },
    CheckerInfo {
        id: "convexhull_inclusion",
        reference: "convex hull of K_p(g~_K) inside the rescaled K_p(g~_{K+C_n})",
    },
    CheckerInfo { id: "difference_set_inclusion", reference: "(K ∩ Z^n) - K inside the rescaled K_p(g~_{K+C_n})" },
    CheckerInfo { id: "volume_identity_discrete", reference: "vol(K_n(g~_K)) = vol(K)" },
    CheckerInfo { id: "one_point_collapse", reference: "K_p(g~_K) = -K when K ∩ Z^n is a single point" },
];

pub fn checker_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

pub fn lookup(id: &str) -> Result<&'static CheckerInfo> {
    REGISTRY.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownChecker(id.to_string()))
}

/// One side-by-side comparison `lhs <= rhs`.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub label: String,
    pub lhs: MeasureValue,
    pub rhs: MeasureValue,
    exact_holds: Option<bool>,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: MeasureValue, rhs: MeasureValue) -> Self {
        Comparison { label: label.into(), lhs, rhs, exact_holds: None }
    }

    /// The sides are reported as given but the verdict was decided exactly.
    fn decided(label: impl Into<String>, lhs: MeasureValue, rhs: MeasureValue, holds: bool) -> Self {
        Comparison { label: label.into(), lhs, rhs, exact_holds: Some(holds) }
    }

    pub fn verdict(&self) -> Verdict {
        if let Some(h) = self.exact_holds {
            return if h { Verdict::Holds } else { Verdict::Fails };
        }
        if let (Some(a), Some(b)) = (&self.lhs.exact, &self.rhs.exact) {
            return if a <= b { Verdict::Holds } else { Verdict::Fails };
        }
        if !(self.lhs.certified && self.rhs.certified) {
            return Verdict::Inconclusive;
        }
        let scale = self.lhs.value.abs().max(self.rhs.value.abs());
        let tol = self.lhs.abs_error + self.rhs.abs_error + 4.0 * f64::EPSILON * scale;
        if self.rhs.value - self.lhs.value >= -tol {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    fn rel_slack(&self) -> f64 {
        let scale = self.lhs.value.abs().max(self.rhs.value.abs()).max(f64::MIN_POSITIVE);
        (self.rhs.value - self.lhs.value) / scale
    }

    fn is_approx(&self) -> bool {
        self.exact_holds.is_none() && !(self.lhs.is_exact() && self.rhs.is_exact())
    }
}

/// Worst comparison: failures first, then inconclusive, then the tightest.
fn worst(cs: &[Comparison]) -> Option<&Comparison> {
    cs.iter().max_by(|a, b| {
        let (va, vb) = (a.verdict().severity(), b.verdict().severity());
        va.cmp(&vb).then_with(|| b.rel_slack().total_cmp(&a.rel_slack())).then(std::cmp::Ordering::Greater)
    })
}

struct Outcome {
    comparisons: Vec<Comparison>,
    context: BTreeMap<String, Value>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { comparisons: Vec::new(), context: BTreeMap::new() }
    }

    fn ctx(&mut self, k: &str, v: Value) {
        self.context.insert(k.to_string(), v);
    }

    fn push(&mut self, c: Comparison) {
        self.comparisons.push(c);
    }
}

fn qjson(v: &Q) -> Value {
    q_to_json(v)
}

fn qvec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_to_json).collect())
}

fn ex(q: Q) -> MeasureValue {
    MeasureValue::exact(q)
}

fn qu(v: usize) -> Q {
    qi(v as i64)
}

/// `C(2n, n) / n^n`.
pub fn zhang_constant(n: usize) -> Q {
    binom_q(n, n as u32) / pow_q(&qu(n), n as u32)
}

/// `a^{1/ra} <= b^{1/rb}` for nonnegative rationals.
fn root_le(a: &Q, ra: u32, b: &Q, rb: u32) -> bool {
    pow_q(a, rb) <= pow_q(b, ra)
}

fn root_mv(x: &MeasureValue, k: u32) -> MeasureValue {
    crate::moments::root(x, k as f64)
}

fn is_precondition(e: &Error) -> bool {
    matches!(
        e,
        Error::HypothesesViolated(_)
            | Error::OriginMissing
            | Error::EmptyProjectionLattice
            | Error::ZeroBase
            | Error::DegenerateBody(_)
    )
}

fn is_hard(e: &Error) -> bool {
    matches!(e, Error::NoRoot(_) | Error::NoCrossing)
}

/// Translate so that the vertical section through the origin is longest.
fn anchor_sections(k: &Polytope, out: &mut Outcome) -> Result<Polytope> {
    let n = k.dim();
    let (y, best) = max_section_anchor(k)?;
    let zero = vec![Q::zero(); n - 1];
    let shift: Vec<Q> = if section_length(k, &zero)? == best {
        vec![Q::zero(); n]
    } else {
        y.iter().map(|v| -v).chain(std::iter::once(Q::zero())).collect()
    };
    out.ctx("translation", qvec_json(&shift));
    Ok(translate(k, &shift))
}

/// Translate so that the lattice column count of the symmetral peaks at 0.
fn anchor_columns(k: &Polytope, out: &mut Outcome) -> Result<Polytope> {
    let n = k.dim();
    if hypotheses(k)?.max_at_origin {
        out.ctx("translation", qvec_json(&vec![Q::zero(); n]));
        return Ok(k.clone());
    }
    let (y, _) = max_section_anchor(k)?;
    let shift: Vec<Q> = y.iter().map(|v| -v).chain(std::iter::once(Q::zero())).collect();
    out.ctx("translation", qvec_json(&shift));
    Ok(translate(k, &shift))
}

/// Translate by minus the lexicographically smallest lattice point when the
/// origin is missing; lattice translations leave `g~_K` unchanged.
fn anchor_origin(k: &Polytope, out: &mut Outcome) -> Result<Polytope> {
    let n = k.dim();
    let zero = vec![Q::zero(); n];
    let shift = if k.contains(&zero) {
        zero
    } else {
        let pts = lattice_points(k, 0)?;
        let z = pts.points.first().ok_or_else(|| Error::HypothesesViolated("body contains no lattice point".into()))?;
        z.iter().map(|&v| qi(-v)).collect()
    };
    out.ctx("translation", qvec_json(&shift));
    Ok(translate(k, &shift))
}

fn sphere_rule(n: usize, params: &CheckParams) -> SphereRule {
    let s = params.quad_scale.max(1);
    match SphereRule::default_for(n) {
        SphereRule::Circle(m) => SphereRule::Circle(m * s),
        SphereRule::Product(a, b) => SphereRule::Product(a * s, b * s),
    }
}

/// Sampled unit directions plus the directions of all vertices and their negatives.
pub fn sample_directions(k: &Polytope, params: &CheckParams) -> Vec<Vec<f64>> {
    let n = k.dim();
    let mut dirs =
        if n == 2 { circle_directions(params.directions_2d) } else { fibonacci_sphere(params.directions_3d) };
    for v in k.vertices_f64() {
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            dirs.push(v.iter().map(|x| x / r).collect());
            dirs.push(v.iter().map(|x| -x / r).collect());
        }
    }
    dirs
}

/// Rational directions used where exact values are wanted.
fn rational_directions(n: usize) -> Vec<Vec<i64>> {
    if n == 2 {
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![2, -1], vec![3, 4], vec![-1, 3]]
    } else {
        vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![1, 2, 2],
            vec![2, -1, 1],
            vec![0, 3, 4],
            vec![1, 0, 2],
        ]
    }
}

/// Directions with rational unit vectors.
fn exact_unit_directions(n: usize) -> Vec<Vec<i64>> {
    let mut base: Vec<Vec<i64>> = if n == 2 {
        vec![vec![1, 0], vec![0, 1], vec![3, 4], vec![4, 3], vec![3, -4], vec![5, 12]]
    } else {
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 2, 2], vec![2, -1, 2], vec![0, 3, 4], vec![2, 3, 6]]
    };
    let neg: Vec<Vec<i64>> = base.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    base.extend(neg);
    base
}

fn ints_json(v: &[i64]) -> Value {
    json!(v)
}

fn last_axis(n: usize) -> Direction {
    Direction::axis(n, n - 1)
}

fn float_mv(v: f64) -> MeasureValue {
    MeasureValue::approx(v, 64.0 * f64::EPSILON * v.abs())
}

fn key_seed(seed: u64, key: &str) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    seed ^ h.finish()
}

// ---------------------------------------------------------------- checkers

fn zhang_preintegration(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let moment = section_power(k, n as u32 + 1)? / qu(n + 1);
    let lhs = zhang_constant(n) * &moment;
    let vol = volume(k);
    let base = base_volume(k)?;
    let rhs = pow_q(&vol, n as u32 + 1) / pow_q(&base, n as u32);
    out.ctx("moment", qjson(&moment));
    out.ctx("projection_volume", qjson(&base));
    out.push(Comparison::new("e_n", ex(lhs), ex(rhs)));
    Ok(out)
}

fn zhang_preintegration_2(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let req = MomentRequest::new(k.clone(), last_axis(n), n as f64, MomentRoute::SymmetralSlab);
    let slab = continuous_ray_moment(&req)?;
    let lhs = slab.scale(&zhang_constant(n));
    let vol = volume(k);
    let base = base_volume(k)?;
    let rhs = pow_q(&vol, n as u32 + 1) / pow_q(&base, n as u32);
    out.ctx("symmetral_moment", serde_json::to_value(&slab).expect("json"));
    out.push(Comparison::new("e_n", lhs, ex(rhs)));
    Ok(out)
}

fn zhang_directional(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let vol = ex(volume(k));
    let c = zhang_constant(n);
    for d in rational_directions(n) {
        let dir = Direction::from_ints(&d)?;
        let m = section_power_integral(k, &dir, (n + 1) as f64)?.scale(&(Q::one() / qu(n + 1)));
        let lhs = m.scale(&c);
        let proj = projection_volume(k, &dir)?;
        let rhs = vol.powi(n as u32 + 1).div(&proj.powi(n as u32));
        out.push(Comparison::new(format!("theta={d:?}"), lhs, rhs));
    }
    Ok(out)
}

fn discrete_zhang_mu(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_sections(k, &mut out)?;
    let cols = column_lengths(&k)?;
    let g = count_lattice(&project_drop_last(&k)?, 0)?;
    if g == 0 {
        return Err(Error::EmptyProjectionLattice);
    }
    let sum: Q = cols.iter().map(|(_, l)| pow_q(l, n as u32 + 1)).sum();
    let lhs = zhang_constant(n) * &sum / qu(n + 1);
    let s = steiner_symmetrize(&k)?;
    let mu = mu_measure_open(&s, n - 1)?;
    let rhs = pow_q(&mu, n as u32 + 1) / pow_q(&qu(g), n as u32);
    out.ctx("mu_symmetral_open", qjson(&mu));
    out.ctx("projection_count", json!(g));
    out.push(Comparison::new("e_n", ex(lhs), ex(rhs)));
    Ok(out)
}

fn lattice_zhang(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_sections(k, &mut out)?;
    let (_, rho) = max_section_anchor(&k)?;
    let p = project_drop_last(&k)?;
    let g = count_lattice(&p, 0)?;
    if g == 0 {
        return Err(Error::EmptyProjectionLattice);
    }
    let dec = ray_decomposition(&k, &last_axis(n), false)?;
    let moment: Q = dec.entries.iter().map(|e| pow_q(&e.interval.hi, n as u32)).sum();
    let c = zhang_constant(n);
    let lhs = &c * &moment;
    let s = steiner_symmetrize(&k)?;
    let gs = count_lattice(&s, n - 1)?;
    let gp = count_lattice(&p, n - 1)?;
    let rhs = &c * pow_q(&rho, n as u32) * qu(g) + pow_q(&qu(gs + gp), n as u32 + 1) / pow_q(&qu(g), n as u32);
    out.ctx("difference_radial", qjson(&rho));
    out.ctx("symmetral_open_count", json!(gs));
    out.ctx("projection_open_count", json!(gp));
    out.push(Comparison::new("e_n", ex(lhs), ex(rhs)));
    Ok(out)
}

fn b_value(m0: &RootValue, p: u32, n: usize) -> MeasureValue {
    match &m0.exact {
        Some(m) => ex(b_coeff_q(m, p, n)),
        None => {
            let v = b_coeff(m0.value, p as f64, n);
            MeasureValue::approx(v, 1e-10 * v.abs())
        }
    }
}

fn root_json(m0: &RootValue) -> Value {
    match &m0.exact {
        Some(q) => qjson(q),
        None => json!(m0.value),
    }
}

fn purely_discrete_zhang(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_columns(k, &mut out)?;
    let prof = section_profiles(&k)?;
    let p = project_drop_last(&k)?;
    let s = steiner_symmetrize(&k)?;
    let gs = count_lattice(&s, n - 1)?;
    let gp = count_lattice(&p, n - 1)?;
    let g = prof.base_count;
    let rhs = pow_q(&qu(gs + gp), n as u32 + 1) / pow_q(&qu(g), n as u32);
    out.ctx("M", json!(prof.m));
    if prof.m == 0 {
        out.ctx("trivial", json!(true));
        out.push(Comparison::new("M=0", ex(Q::zero()), ex(rhs)));
        return Ok(out);
    }
    let m0 = solve_m0_profiles(&prof, n, 1.0)?;
    out.ctx("m0", root_json(&m0));
    let moment: Q = prof.f.iter().enumerate().skip(1).map(|(h, &c)| qi(2) * pow_q(&qu(h), n as u32) * qu(c)).sum();
    let b1 = b_value(&m0, 1, n);
    let bn = b_value(&m0, n as u32 + 1, n);
    let factor = b1.powi(n as u32 + 1).div(&bn).scale(&qu(n + 1));
    let lhs = factor.scale(&(pow_q(&qi(2), n as u32) * &moment));
    out.ctx("lattice_moment", qjson(&moment));
    out.push(Comparison::new("e_n", lhs, ex(rhs)));
    Ok(out)
}

/// `(C(d+p, d) / vol(P) ∫_P len^p)^{1/p}` on the `(n-1)`-dimensional base.
fn berwald_continuous(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let d = n - 1;
    let mut out = Outcome::new();
    let cells = SectionCells::new(k)?;
    let base = cells.base_volume();
    let mut grid: Vec<f64> = vec![-0.5, 1.0, 2.0, n as f64, (n + 1) as f64];
    grid.dedup();
    // (exponent, A_p exact or approx)
    let mut means: Vec<(f64, MeasureValue)> = Vec::new();
    for &p in &grid {
        let a = if p.fract() == 0.0 && p > 0.0 {
            ex(binom_q(d, p as u32) * cells.power_integral(p as u32) / &base)
        } else {
            cells
                .power_integral_f64(p)?
                .div(&ex(base.clone()))
                .mul(&MeasureValue::approx(binom_real(d, p), 4.0 * f64::EPSILON))
        };
        means.push((p, a));
    }
    let mut chain = Vec::new();
    for (p, a) in &means {
        let c = a.powf(1.0 / p);
        chain.push(json!({"p": p, "value": c.value}));
    }
    out.ctx("chain", Value::Array(chain));
    for w in means.windows(2) {
        let ((p, ap), (q, aq)) = (&w[0], &w[1]);
        let lhs = aq.powf(1.0 / q);
        let rhs = ap.powf(1.0 / p);
        let label = format!("p={p},q={q}");
        match (&ap.exact, &aq.exact) {
            (Some(x), Some(y)) => {
                let holds = root_le(y, *q as u32, x, *p as u32);
                out.push(Comparison::decided(label, root_mv(aq, *q as u32), root_mv(ap, *p as u32), holds));
            }
            _ => out.push(Comparison::new(label, lhs, rhs)),
        }
    }
    Ok(out)
}

fn berwald_discrete(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let d = n - 1;
    let mut out = Outcome::new();
    let k = anchor_sections(k, &mut out)?;
    let p = project_drop_last(&k)?;
    let g = count_lattice(&p, 0)?;
    if g == 0 {
        return Err(Error::EmptyProjectionLattice);
    }
    let half = qr(1, 2);
    let f: Vec<Q> = column_lengths(&k)?.into_iter().map(|(_, l)| l * &half).collect();
    let window = lattice_points(&p, d)?;
    let mut fd = Vec::with_capacity(window.len());
    for y in &window.points {
        let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
        fd.push(diamond_extension(&k, &yq)?);
    }
    let gq = qu(g);
    for (pe, qe) in [(1u32, 2u32), (1, n as u32 + 1), (2, 5)] {
        let a: Q = binom_q(d, qe) * f.iter().map(|v| pow_q(v, qe)).sum::<Q>() / &gq;
        let b: Q = binom_q(d, pe) * fd.iter().map(|v| pow_q(v, pe)).sum::<Q>() / &gq;
        let holds = root_le(&a, qe, &b, pe);
        out.push(Comparison::decided(format!("p={pe},q={qe}"), root_mv(&ex(a), qe), root_mv(&ex(b), pe), holds));
    }
    out.ctx("projection_count", json!(g));
    Ok(out)
}

fn completely_discrete_berwald(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_columns(k, &mut out)?;
    let hyp = hypotheses(&k)?;
    if !hyp.satisfied() {
        return Err(Error::HypothesesViolated(format!("max at origin: {}, M = {}", hyp.max_at_origin, hyp.m)));
    }
    let prof = section_profiles(&k)?;
    out.ctx("M", json!(prof.m));
    out.ctx("f", json!(prof.f));
    out.ctx("f_tilde", json!(prof.f_tilde));
    let gq = qu(prof.base_count);
    let mut roots = BTreeMap::new();
    let mut crossings = BTreeMap::new();
    for (pe, qe) in [(1u32, 2u32), (1, n as u32 + 1), (2, n as u32 + 1)] {
        let m0 = solve_m0_profiles(&prof, n, pe as f64)?;
        let kstar = crossing_point(&prof, n, &m0)?;
        verify_crossing(&prof, n, &m0, kstar)?;
        roots.insert(format!("p={pe}"), root_json(&m0));
        crossings.insert(format!("p={pe}"), json!(kstar));
        let label = format!("p={pe},q={qe}");
        match &m0.exact {
            Some(m) => {
                let a = prof.weighted_sum_q(qe, false) / (b_coeff_q(m, qe, n) * &gq);
                let b = prof.weighted_sum_q(pe, true) / (b_coeff_q(m, pe, n) * &gq);
                if pe == 1 {
                    out.ctx("rhs_minus_m0", qjson(&(&b - m)));
                }
                let holds = root_le(&a, qe, &b, pe);
                out.push(Comparison::decided(label, root_mv(&ex(a), qe), root_mv(&ex(b), pe), holds));
            }
            None => {
                let a =
                    prof.weighted_sum(qe as f64, false) / (b_coeff(m0.value, qe as f64, n) * prof.base_count as f64);
                let b = prof.weighted_sum(pe as f64, true) / (b_coeff(m0.value, pe as f64, n) * prof.base_count as f64);
                let lhs = a.powf(1.0 / qe as f64);
                let rhs = b.powf(1.0 / pe as f64);
                if pe == 1 {
                    out.ctx("rhs_minus_m0", json!(rhs - m0.value));
                }
                out.push(Comparison::new(
                    label,
                    MeasureValue::approx(lhs, 1e-9 * lhs),
                    MeasureValue::approx(rhs, 1e-9 * rhs),
                ));
            }
        }
    }
    out.ctx("m0", json!(roots));
    out.ctx("crossing", json!(crossings));
    Ok(out)
}

/// Independent re-check of the crossing-point postcondition.
fn verify_crossing(prof: &SectionProfiles, n: usize, m0: &RootValue, kstar: usize) -> Result<()> {
    let top = (m0.value.ceil() as usize + 1).max(prof.f.len());
    for h in 0..=top {
        let (gv, gq) = crate::profiles::g_profile(m0, n, prof.base_count, h);
        let ok = if h < kstar {
            match &gq {
                Some(g) => qu(prof.f_tilde_at(h)) >= *g,
                None => prof.f_tilde_at(h) as f64 >= gv - 1e-9,
            }
        } else {
            match &gq {
                Some(g) => *g >= qu(prof.f_at(h)),
                None => gv >= prof.f_at(h) as f64 - 1e-9,
            }
        };
        if !ok {
            return Err(Error::NoCrossing);
        }
    }
    Ok(())
}

fn zhang_volume(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let star = StarRadial::polar_projection(k)?;
    let pv = star_volume(&star, sphere_rule(n, params))?;
    let vol = volume(k);
    let rhs = pv.scale(&pow_q(&vol, n as u32 - 1));
    out.ctx("polar_projection_volume", serde_json::to_value(&pv).expect("json"));
    out.push(Comparison::new("volume", ex(zhang_constant(n)), rhs));
    Ok(out)
}

/// `X(p) = C(n+p, n) n M_p / vol(P)` with `M_0 = vol(K)`; `X(p)^{1/(p+1)}` is nonincreasing.
fn different_inclusion(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let base = base_volume(k)?;
    let mut grid: Vec<u32> = vec![0, 1, 2, n as u32, n as u32 + 1];
    grid.sort();
    grid.dedup();
    let xs: Vec<(u32, Q)> = grid
        .iter()
        .map(|&p| {
            let m = if p == 0 { Ok(volume(k)) } else { section_power(k, p + 1).map(|s| s / qi(p as i64 + 1)) };
            m.map(|m| (p, binom_q(n, p) * qu(n) * m / &base))
        })
        .collect::<Result<_>>()?;
    for w in xs.windows(2) {
        let ((p, xp), (q, xq)) = (&w[0], &w[1]);
        let holds = root_le(xq, q + 1, xp, p + 1);
        out.push(Comparison::decided(
            format!("p={p},q={q}"),
            root_mv(&ex(xq.clone()), q + 1),
            root_mv(&ex(xp.clone()), p + 1),
            holds,
        ));
    }
    Ok(out)
}

fn mu_gn_sandwich(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let mut out = Outcome::new();
    let g = qu(count_lattice(k, 0)?);
    let gp = qu(projection_count(k, 0)?);
    let mu = mu_measure(k)?;
    out.ctx("lattice_count", qjson(&g));
    out.ctx("projection_count", qjson(&gp));
    out.ctx("mu", qjson(&mu));
    out.push(Comparison::new("lower", ex(&g - &gp), ex(mu.clone())));
    out.push(Comparison::new("upper", ex(mu), ex(&g + &gp)));
    Ok(out)
}

fn identity_exponents(n: usize) -> Vec<u32> {
    let mut v = vec![1, 2, n as u32];
    v.sort();
    v.dedup();
    v
}

fn identity_triple_continuous(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let mut rows = Vec::new();
    for p in identity_exponents(n) {
        let mut vals = Vec::new();
        for route in [MomentRoute::RayQuadrature, MomentRoute::SymmetralSlab, MomentRoute::ProjectionPower] {
            vals.push(continuous_ray_moment(&MomentRequest::new(k.clone(), last_axis(n), p as f64, route))?);
        }
        let hi = vals.iter().map(|v| v.value).fold(f64::MIN, f64::max);
        let lo = vals.iter().map(|v| v.value).fold(f64::MAX, f64::min);
        let err: f64 = vals.iter().map(|v| v.abs_error).sum();
        let tol = (1e-9 * hi.abs()).max(err);
        rows.push(json!({"p": p, "values": vals.iter().map(|v| v.value).collect::<Vec<_>>()}));
        out.push(Comparison::new(format!("p={p}"), MeasureValue::approx(hi - lo, 0.0), MeasureValue::approx(tol, 0.0)));
    }
    out.ctx("routes", Value::Array(rows));
    Ok(out)
}

/// `p ∫ r^{p-1} φ(r) dr` for `φ` linear on `[a, b]`.
fn linear_moment(p: u32, a: &Q, b: &Q, fa: &Q, fb: &Q) -> Q {
    let c1 = (fb - fa) / (b - a);
    let c0 = fa - &c1 * a;
    let pq = qi(p as i64);
    c0 * (pow_q(b, p) - pow_q(a, p)) + c1 * &pq / (&pq + qi(1)) * (pow_q(b, p + 1) - pow_q(a, p + 1))
}

fn identity_triple_discrete(k: &Polytope, _: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let cols = column_lengths(k)?;
    let s = steiner_symmetrize(k)?;
    let scols = column_lengths(&s)?;
    // breakpoints of r -> mu(K ∩ (r e_n + K))
    let mut bps: Vec<Q> = cols.iter().map(|(_, l)| l.clone()).collect();
    bps.push(Q::zero());
    bps.sort();
    bps.dedup();
    let top = bps.last().cloned().unwrap_or_else(Q::zero);
    let mut phi = Vec::with_capacity(bps.len());
    for r in &bps {
        let v = if *r >= top {
            Q::zero()
        } else {
            let mut shift = vec![Q::zero(); n];
            shift[n - 1] = r.clone();
            match intersect(k, &translate(k, &shift))? {
                Some(c) => mu_measure(&c)?,
                None => Q::zero(),
            }
        };
        phi.push(v);
    }
    let mut rows = Vec::new();
    for p in identity_exponents(n) {
        let a: Q = cols.iter().map(|(_, l)| pow_q(l, p + 1)).sum::<Q>() / qi(p as i64 + 1);
        let b: Q = (0..bps.len().saturating_sub(1))
            .map(|i| linear_moment(p, &bps[i], &bps[i + 1], &phi[i], &phi[i + 1]))
            .sum();
        let half = qr(1, 2);
        let c: Q = pow_q(&qi(2), p)
            * scols.iter().map(|(_, l)| qi(2) * pow_q(&(l * &half), p + 1) / qi(p as i64 + 1)).sum::<Q>();
        let hi = [&a, &b, &c].into_iter().max().expect("three").clone();
        let lo = [&a, &b, &c].into_iter().min().expect("three").clone();
        rows.push(json!({"p": p, "values": [qjson(&a), qjson(&b), qjson(&c)]}));
        out.push(Comparison::new(format!("p={p}"), ex(hi - lo), ex(Q::zero())));
    }
    out.ctx("routes", Value::Array(rows));
    Ok(out)
}

fn ball_pairs(n: usize) -> Vec<(u32, u32)> {
    let mut v = vec![(1, 2), (1, n as u32), (2, n as u32 + 1)];
    v.dedup();
    v
}

fn ball_inclusion_discrete(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_origin(k, &mut out)?;
    let closed = FloatRays::new(&k, false)?;
    let open = FloatRays::new(&k, true)?;
    let g = closed.count() as f64;
    let dirs = sample_directions(&k, params);
    for (pe, qe) in ball_pairs(n) {
        let (pf, qf) = (pe as f64, qe as f64);
        let cq = to_f64(&binom_q(n, qe)).powf(1.0 / qf);
        let cp = to_f64(&binom_q(n, pe));
        let mut cmp: Vec<Comparison> = Vec::with_capacity(dirs.len());
        for t in &dirs {
            let lhs = cq * (closed.moment(t, qf) / g).powf(1.0 / qf);
            let rhs = (cp * open.moment(t, pf) / g).powf(1.0 / pf);
            cmp.push(Comparison::new(format!("p={pe},q={qe},theta={t:?}"), float_mv(lhs), float_mv(rhs)));
        }
        if let Some(w) = worst(&cmp) {
            out.push(w.clone());
        }
    }
    out.ctx("directions", json!(dirs.len()));
    Ok(out)
}

fn convexhull_inclusion(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_origin(k, &mut out)?;
    let closed = FloatRays::new(&k, false)?;
    let open = FloatRays::new(&k, true)?;
    let g = closed.count() as f64;
    let dirs = sample_directions(&k, params);
    let mut rng = ChaCha8Rng::seed_from_u64(key_seed(params.seed, &format!("convexhull_inclusion:{}", to_json(&k))));
    for pe in [1u32, 2] {
        let pf = pe as f64;
        let pts: Vec<Vec<f64>> = dirs
            .iter()
            .map(|t| {
                let r = (closed.moment(t, pf) / g).powf(1.0 / pf);
                t.iter().map(|x| x * r).collect()
            })
            .collect();
        let m = pts.len();
        let mut combos: Vec<Vec<f64>> = (0..m).map(|i| mid(&pts[i], &pts[(i + 1) % m])).collect();
        for _ in 0..m {
            let idx: Vec<usize> = (0..3).map(|_| rng.gen_range(0..m)).collect();
            let mut w: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let z: Vec<f64> = (0..n).map(|j| idx.iter().zip(&w).map(|(&i, wi)| wi * pts[i][j]).sum()).collect();
            combos.push(z);
        }
        let mut cmp = Vec::with_capacity(combos.len());
        for z in combos {
            let r = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r < 1e-12 {
                continue;
            }
            let u: Vec<f64> = z.iter().map(|x| x / r).collect();
            let bound = (open.moment(&u, pf) / g).powf(1.0 / pf);
            cmp.push(Comparison::new(format!("p={pe},point={z:?}"), float_mv(r), float_mv(bound)));
        }
        if let Some(w) = worst(&cmp) {
            out.push(w.clone());
        }
    }
    Ok(out)
}

fn mid(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

fn difference_set_inclusion(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_origin(k, &mut out)?;
    let closed = FloatRays::new(&k, false)?;
    let open = FloatRays::new(&k, true)?;
    let g = closed.count() as f64;
    let dirs = sample_directions(&k, params);
    for pe in identity_exponents(n) {
        let pf = pe as f64;
        let cp = to_f64(&binom_q(n, pe));
        let cmp: Vec<Comparison> = dirs
            .iter()
            .map(|t| {
                let lhs = closed.endpoints(t).into_iter().fold(0.0, f64::max);
                let rhs = (cp * open.moment(t, pf) / g).powf(1.0 / pf);
                Comparison::new(format!("p={pe},theta={t:?}"), float_mv(lhs), float_mv(rhs))
            })
            .collect();
        if let Some(w) = worst(&cmp) {
            out.push(w.clone());
        }
    }
    Ok(out)
}

fn volume_identity_discrete(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let k = anchor_origin(k, &mut out)?;
    let star = StarRadial::ball_body(BallSource::DiscreteK, &k, n as f64)?;
    let sv = star_volume(&star, sphere_rule(n, params))?;
    let vol = to_f64(&volume(&k));
    let tol = if n == 2 { 1e-3 } else { 1e-2 };
    let rel = (sv.value - vol).abs() / vol;
    out.ctx("star_volume", serde_json::to_value(&sv).expect("json"));
    out.ctx("volume", json!(vol));
    out.ctx("tolerance", json!(tol));
    out.push(Comparison::new("relative_gap", MeasureValue::approx(rel, 0.0), MeasureValue::approx(tol, 0.0)));
    Ok(out)
}

/// `ρ_{-K}(θ)` from the halfspaces, exact for rational unit vectors.
fn reflected_radial(k: &Polytope, u: &[Q]) -> Q {
    k.halfspaces()
        .iter()
        .filter_map(|h| {
            let d = -rational::dot(&h.normal, u);
            d.is_positive().then(|| &h.offset / d)
        })
        .min()
        .unwrap_or_else(Q::zero)
}

fn one_point_collapse(k: &Polytope, params: &CheckParams) -> Result<Outcome> {
    let n = k.dim();
    let mut out = Outcome::new();
    let pts = lattice_points(k, 0)?;
    if pts.len() != 1 {
        return Err(Error::HypothesesViolated(format!("body holds {} lattice points, not one", pts.len())));
    }
    let shift: Vec<Q> = pts.points[0].iter().map(|&v| qi(-v)).collect();
    out.ctx("translation", qvec_json(&shift));
    let k = translate(k, &shift);
    for d in exact_unit_directions(n) {
        let dir = Direction::from_ints(&d)?;
        let u = dir.exact_unit().expect("rational unit vector");
        let want = reflected_radial(&k, &u);
        for pe in [1u32, 2, 3] {
            let got = radial_ball_body(BallSource::DiscreteK, &k, &dir, pe as f64)?;
            let gap = match &got.exact {
                Some(q) => ex((q - &want).abs()),
                None => MeasureValue::approx((got.value - to_f64(&want)).abs(), got.abs_error),
            };
            out.push(Comparison::new(format!("p={pe},theta={}", ints_json(&d)), gap, ex(Q::zero())));
        }
    }
    let closed = FloatRays::new(&k, false)?;
    let fb = k
        .halfspaces()
        .iter()
        .map(|h| (h.normal.iter().map(to_f64).collect::<Vec<f64>>(), to_f64(&h.offset)))
        .collect::<Vec<_>>();
    let mut cmp = Vec::new();
    for t in sample_directions(&k, params) {
        let want = fb
            .iter()
            .filter_map(|(a, b)| {
                let d = -rational::dot_f64(a, &t);
                (d > 0.0).then(|| b / d)
            })
            .fold(f64::INFINITY, f64::min);
        let got = closed.moment(&t, 1.0);
        let tol = 1e-9 * want.abs().max(1.0);
        cmp.push(Comparison::new(
            format!("sampled,theta={t:?}"),
            MeasureValue::approx((got - want).abs(), 0.0),
            MeasureValue::approx(tol, 0.0),
        ));
    }
    if let Some(w) = worst(&cmp) {
        out.push(w.clone());
    }
    Ok(out)
}

type CheckFn = fn(&Polytope, &CheckParams) -> Result<Outcome>;

fn dispatch(id: &str) -> Result<CheckFn> {
    Ok(match id {
        "zhang_preintegration" => zhang_preintegration,
        "zhang_preintegration_2" => zhang_preintegration_2,
        "zhang_directional" => zhang_directional,
        "discrete_zhang_mu" => discrete_zhang_mu,
        "lattice_zhang" => lattice_zhang,
        "purely_discrete_zhang" => purely_discrete_zhang,
        "berwald_continuous" => berwald_continuous,
        "berwald_discrete" => berwald_discrete,
        "completely_discrete_berwald" => completely_discrete_berwald,
        "zhang_volume" => zhang_volume,
        "different_inclusion" => different_inclusion,
        "mu_gn_sandwich" => mu_gn_sandwich,
        "identity_triple_continuous" => identity_triple_continuous,
        "identity_triple_discrete" => identity_triple_discrete,
        "ball_inclusion_discrete" => ball_inclusion_discrete,
        "convexhull_inclusion" => convexhull_inclusion,
        "difference_set_inclusion" => difference_set_inclusion,
        "volume_identity_discrete" => volume_identity_discrete,
        "one_point_collapse" => one_point_collapse,
        other => return Err(Error::UnknownChecker(other.to_string())),
    })
}

fn blank() -> MeasureValue {
    MeasureValue::approx(0.0, 0.0).uncertified()
}

fn empty_report(info: &CheckerInfo, verdict: Verdict, skipped: bool, reason: String) -> InequalityReport {
    InequalityReport {
        id: info.id.to_string(),
        reference: info.reference.to_string(),
        body: String::new(),
        lhs: blank(),
        rhs: blank(),
        slack: blank(),
        verdict,
        skipped,
        reason: Some(reason),
        context: BTreeMap::new(),
    }
}

fn run_once(info: &CheckerInfo, k: &Polytope, params: &CheckParams) -> Result<(InequalityReport, bool)> {
    let f = dispatch(info.id)?;
    let outcome = match f(k, params) {
        Ok(o) => o,
        Err(e) if is_precondition(&e) => {
            return Ok((empty_report(info, Verdict::Inconclusive, true, format!("precondition not met: {e}")), false))
        }
        Err(e) if is_hard(&e) => {
            return Ok((empty_report(info, Verdict::Fails, false, format!("hard failure: {e}")), false))
        }
        Err(e) => return Err(e),
    };
    let Some(w) = worst(&outcome.comparisons) else {
        return Ok((empty_report(info, Verdict::Inconclusive, true, "nothing to compare".into()), false));
    };
    let verdict = w.verdict();
    let approx = outcome.comparisons.iter().any(|c| c.is_approx());
    let mut context = outcome.context;
    context.insert("binding".into(), json!(w.label));
    context.insert("comparisons".into(), json!(outcome.comparisons.len()));
    let reason = match verdict {
        Verdict::Inconclusive => Some("error estimates are not certified bounds".into()),
        _ => None,
    };
    let report = InequalityReport {
        id: info.id.to_string(),
        reference: info.reference.to_string(),
        body: String::new(),
        lhs: w.lhs.clone(),
        rhs: w.rhs.clone(),
        slack: w.rhs.sub(&w.lhs),
        verdict,
        skipped: false,
        reason,
        context,
    };
    Ok((report, approx))
}

/// Run one checker on one body; a failing comparison that involved
/// approximate values is retried once at doubled quadrature resolution.
pub fn verify(id: &str, k: &Polytope, params: &CheckParams) -> Result<InequalityReport> {
    let info = lookup(id)?;
    if k.dim() < 2 || k.dim() > 3 {
        return Err(Error::InvalidParameter(format!("checkers support dimensions 2 and 3, got {}", k.dim())));
    }
    if !k.is_full_dim() {
        return Err(Error::DegenerateBody("checkers need a full-dimensional body".into()));
    }
    let (report, approx) = run_once(info, k, params)?;
    if report.verdict == Verdict::Fails && approx && !report.skipped {
        let mut p2 = params.clone();
        p2.quad_scale = params.quad_scale.max(1) * 2;
        let (mut again, _) = run_once(info, k, &p2)?;
        again.context.insert("retried".into(), json!(true));
        return Ok(again);
    }
    Ok(report)
}
