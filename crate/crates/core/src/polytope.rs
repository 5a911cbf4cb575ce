//! Exact convex polytopes with both halfspace and vertex representations.

use crate::error::{Error, Result};
use crate::hull::{canonical, convex_hull, halfspace_vertices, RawHalfspace};
use crate::linalg::{affine_rank, det, rank};
use crate::lp::{solve_lexmin, LinearProgram, LpOutcome, Relation};
use crate::rational::{self, dot, from_f64, q_from_json, q_to_json, qi, rational_sqrt, to_f64, Q};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(rename = "a", with = "rational::serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(rename = "b", with = "rational::serde_q")]
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        let (normal, offset) = canonical(&normal, &offset);
        Halfspace { normal, offset }
    }

    pub fn slack(&self, x: &[Q]) -> Q {
        &self.offset - dot(&self.normal, x)
    }

    fn raw(&self) -> RawHalfspace {
        (self.normal.clone(), self.offset.clone())
    }
}

/// Closed or open interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational::serde_q")]
    pub lo: Q,
    #[serde(with = "rational::serde_q")]
    pub hi: Q,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: Q, hi: Q) -> Self {
        Interval { lo, hi, lo_open: false, hi_open: false }
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &Q) -> bool {
        let above = if self.lo_open { *t > self.lo } else { *t >= self.lo };
        let below = if self.hi_open { *t < self.hi } else { *t <= self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }
}

/// A nonzero direction: exact rational components and a binary64 unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub raw: Vec<Q>,
    pub unit: Vec<f64>,
    norm: Option<Q>,
}

impl Direction {
    pub fn new(raw: Vec<Q>) -> Result<Self> {
        if raw.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidParameter("zero direction".into()));
        }
        let sq: Q = raw.iter().map(|v| v * v).sum();
        let norm = rational_sqrt(&sq);
        let nf = to_f64(&sq).sqrt();
        let unit = match &norm {
            Some(n) => raw.iter().map(|v| to_f64(&(v / n))).collect(),
            None => raw.iter().map(|v| to_f64(v) / nf).collect(),
        };
        Ok(Direction { raw, unit, norm })
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        let mut raw = vec![Q::zero(); dim];
        raw[i] = Q::one();
        Direction::new(raw).expect("axis")
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Direction::new(v.iter().map(|&x| qi(x)).collect())
    }

    /// Exact direction through a binary64 vector.
    pub fn from_f64(v: &[f64]) -> Result<Self> {
        Direction::new(v.iter().map(|&x| from_f64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.raw.len()
    }

    /// Euclidean norm of `raw` when it is rational.
    pub fn exact_norm(&self) -> Option<&Q> {
        self.norm.as_ref()
    }

    /// Exact unit vector, when the norm is rational.
    pub fn exact_unit(&self) -> Option<Vec<Q>> {
        self.norm.as_ref().map(|n| self.raw.iter().map(|v| v / n).collect())
    }

    pub fn norm_f64(&self) -> f64 {
        self.raw.iter().map(|v| to_f64(v).powi(2)).sum::<f64>().sqrt()
    }
}

/// A real number with an optional exact value and an absolute error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    #[serde(with = "rational::serde_q_opt")]
    pub exact: Option<Q>,
    pub abs_error: f64,
    /// False when `abs_error` is only an estimate, not a bound.
    #[serde(default = "yes")]
    pub certified: bool,
}

fn yes() -> bool {
    true
}

const ROUND: f64 = 4.0 * f64::EPSILON;

impl MeasureValue {
    pub fn exact(q: Q) -> Self {
        MeasureValue { value: to_f64(&q), exact: Some(q), abs_error: 0.0, certified: true }
    }

    pub fn approx(value: f64, abs_error: f64) -> Self {
        MeasureValue { value, exact: None, abs_error: abs_error.abs(), certified: true }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn uncertified(mut self) -> Self {
        self.certified = false;
        self
    }

    fn cert(mut self, c: bool) -> Self {
        self.certified &= c;
        self
    }

    fn float_err(&self) -> f64 {
        if self.exact.is_some() {
            self.value.abs() * f64::EPSILON
        } else {
            self.abs_error
        }
    }

    pub fn add(&self, o: &MeasureValue) -> MeasureValue {
        self.add_raw(o).cert(self.certified && o.certified)
    }

    fn add_raw(&self, o: &MeasureValue) -> MeasureValue {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => MeasureValue::exact(a + b),
            _ => {
                let v = self.value + o.value;
                MeasureValue::approx(v, self.float_err() + o.float_err() + ROUND * v.abs())
            }
        }
    }

    pub fn sub(&self, o: &MeasureValue) -> MeasureValue {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MeasureValue {
        MeasureValue {
            value: -self.value,
            exact: self.exact.as_ref().map(|q| -q),
            abs_error: self.abs_error,
            certified: self.certified,
        }
    }

    pub fn mul(&self, o: &MeasureValue) -> MeasureValue {
        self.mul_raw(o).cert(self.certified && o.certified)
    }

    fn mul_raw(&self, o: &MeasureValue) -> MeasureValue {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => MeasureValue::exact(a * b),
            _ => {
                let v = self.value * o.value;
                let (e1, e2) = (self.float_err(), o.float_err());
                MeasureValue::approx(v, self.value.abs() * e2 + o.value.abs() * e1 + e1 * e2 + ROUND * v.abs())
            }
        }
    }

    pub fn div(&self, o: &MeasureValue) -> MeasureValue {
        self.div_raw(o).cert(self.certified && o.certified)
    }

    fn div_raw(&self, o: &MeasureValue) -> MeasureValue {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) if !b.is_zero() => MeasureValue::exact(a / b),
            _ => {
                let v = self.value / o.value;
                let (e1, e2) = (self.float_err(), o.float_err());
                let denom = (o.value.abs() - e2).max(o.value.abs() * 0.5);
                MeasureValue::approx(v, (e1 + v.abs() * e2) / denom + ROUND * v.abs())
            }
        }
    }

    pub fn scale(&self, q: &Q) -> MeasureValue {
        self.mul(&MeasureValue::exact(q.clone()))
    }

    pub fn powi(&self, k: u32) -> MeasureValue {
        self.powi_raw(k).cert(self.certified)
    }

    fn powi_raw(&self, k: u32) -> MeasureValue {
        match &self.exact {
            Some(a) => MeasureValue::exact(rational::pow_q(a, k)),
            None => {
                let v = self.value.powi(k as i32);
                let d = if k == 0 { 0.0 } else { k as f64 * self.value.abs().powi(k as i32 - 1) };
                MeasureValue::approx(v, d * self.abs_error + ROUND * (k as f64 + 1.0) * v.abs())
            }
        }
    }

    /// Real power; exact for nonnegative integer exponents of exact values.
    pub fn powf(&self, x: f64) -> MeasureValue {
        self.powf_raw(x).cert(self.certified)
    }

    fn powf_raw(&self, x: f64) -> MeasureValue {
        if x >= 0.0 && x.fract() == 0.0 && x <= 64.0 && self.exact.is_some() {
            return self.powi(x as u32);
        }
        let v = self.value.powf(x);
        let e = self.float_err();
        let d = if self.value > 0.0 { (x * self.value.powf(x - 1.0)).abs() } else { 0.0 };
        MeasureValue::approx(v, d * e + ROUND * (1.0 + x.abs()) * v.abs())
    }
}

/// Convex polytope in `R^dim` (`dim <= 4`).
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vec<Q>>,
    affine_dim: usize,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Polytope {
    fn eq(&self, o: &Polytope) -> bool {
        self.dim == o.dim && self.vertices == o.vertices
    }
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Facet halfspaces together with the vertex indices on each facet.
    pub fn facets(&self) -> impl Iterator<Item = (&Halfspace, &[usize])> {
        self.halfspaces.iter().zip(self.incidence.iter().map(|v| v.as_slice()))
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Component-wise bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec<Q>, Vec<Q>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for j in 0..self.dim {
                if v[j] < lo[j] {
                    lo[j] = v[j].clone();
                }
                if v[j] > hi[j] {
                    hi[j] = v[j].clone();
                }
            }
        }
        (lo, hi)
    }

    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect()
    }

    /// Vertex pairs spanning an edge (a face of affine dimension one).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let nv = self.vertices.len();
        let mut out = Vec::new();
        if self.affine_dim < 2 {
            if nv == 2 {
                out.push((0, 1));
            }
            return out;
        }
        for i in 0..nv {
            for j in i + 1..nv {
                let common: Vec<&Halfspace> =
                    self.facets().filter(|(_, inc)| inc.contains(&i) && inc.contains(&j)).map(|(h, _)| h).collect();
                if common.is_empty() {
                    continue;
                }
                let normals: Vec<Vec<Q>> = common.iter().map(|h| h.normal.clone()).collect();
                if rank(&normals) + 1 < self.dim {
                    continue;
                }
                // the face cut out by the common facets must be exactly the segment
                let face: Vec<usize> =
                    (0..nv).filter(|&k| common.iter().all(|h| h.slack(&self.vertices[k]).is_zero())).collect();
                if face.len() == 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn from_hull(dim: usize, hull: crate::hull::Hull) -> Polytope {
    let halfspaces = hull.halfspaces.into_iter().map(|(a, b)| Halfspace { normal: a, offset: b }).collect();
    Polytope { dim, halfspaces, vertices: hull.vertices, affine_dim: hull.affine_dim, incidence: hull.incidence }
}

/// Convex hull of a finite point set.
pub fn make_polytope(points: &[Vec<Q>], dim: usize) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::DegenerateBody("empty point set".into()));
    }
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    Ok(from_hull(dim, convex_hull(points)))
}

pub fn make_polytope_i64(points: &[&[i64]]) -> Result<Polytope> {
    let pts: Vec<Vec<Q>> = points.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect();
    let dim = pts.first().map(|p| p.len()).unwrap_or(0);
    make_polytope(&pts, dim)
}

/// Bounded halfspace intersection; `Ok(None)` when empty.
pub fn from_halfspaces(dim: usize, hs: &[Halfspace]) -> Result<Option<Polytope>> {
    for h in hs {
        if h.normal.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: h.normal.len() });
        }
    }
    let raw: Vec<RawHalfspace> = hs.iter().map(|h| h.raw()).collect();
    match halfspace_vertices(dim, &raw)? {
        None => Ok(None),
        Some(v) => make_polytope(&v, dim).map(Some),
    }
}

pub fn volume(p: &Polytope) -> Q {
    if !p.is_full_dim() {
        return Q::zero();
    }
    if p.dim == 1 {
        return &p.vertices[1][0] - &p.vertices[0][0];
    }
    let mut total = Q::zero();
    for s in triangulate(p) {
        let v0 = &p.vertices[s[0]];
        let m: Vec<Vec<Q>> =
            s[1..].iter().map(|&i| p.vertices[i].iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
        total += det(&m).abs();
    }
    let mut fact = Q::one();
    for k in 2..=p.dim {
        fact *= qi(k as i64);
    }
    total / fact
}

/// Pulling triangulation into full-dimensional simplices (vertex indices).
pub fn triangulate(p: &Polytope) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..p.vertices.len()).collect();
    let mut out = Vec::new();
    tri_face(p, &all, p.dim, &mut out);
    out
}

fn tri_face(p: &Polytope, face: &[usize], d: usize, out: &mut Vec<Vec<usize>>) {
    if face.len() == d + 1 {
        out.push(face.to_vec());
        return;
    }
    let apex = face[0];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for inc in &p.incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|v| inc.contains(v)).collect();
        if sub.len() < d || sub.contains(&apex) || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<&Vec<Q>> = sub.iter().map(|&i| &p.vertices[i]).collect();
        if affine_rank(&pts) != d as isize - 1 {
            continue;
        }
        seen.insert(sub.clone());
        let mut parts = Vec::new();
        tri_face(p, &sub, d - 1, &mut parts);
        for mut s in parts {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

pub fn intersect(a: &Polytope, b: &Polytope) -> Result<Option<Polytope>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let hs: Vec<Halfspace> = a.halfspaces.iter().chain(b.halfspaces.iter()).cloned().collect();
    from_halfspaces(a.dim, &hs)
}

pub fn minkowski_sum(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let mut pts = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for u in &a.vertices {
        for v in &b.vertices {
            pts.push(u.iter().zip(v).map(|(x, y)| x + y).collect());
        }
    }
    make_polytope(&pts, a.dim)
}

pub fn difference_body(p: &Polytope) -> Result<Polytope> {
    minkowski_sum(p, &reflect(p))
}

pub fn reflect(p: &Polytope) -> Polytope {
    scale(p, &-Q::one())
}

/// Image under `x -> A x + b`; `A` must be nonsingular.
pub fn transform(p: &Polytope, a: &[Vec<Q>], b: &[Q]) -> Result<Polytope> {
    if a.len() != p.dim || b.len() != p.dim || a.iter().any(|r| r.len() != p.dim) {
        return Err(Error::DimensionMismatch { expected: p.dim, found: a.len() });
    }
    if det(a).is_zero() {
        return Err(Error::SingularMap);
    }
    let pts: Vec<Vec<Q>> =
        p.vertices.iter().map(|v| a.iter().zip(b).map(|(row, bi)| dot(row, v) + bi).collect()).collect();
    make_polytope(&pts, p.dim)
}

pub fn translate(p: &Polytope, t: &[Q]) -> Polytope {
    let halfspaces = p
        .halfspaces
        .iter()
        .map(|h| Halfspace { normal: h.normal.clone(), offset: &h.offset + dot(&h.normal, t) })
        .collect();
    let vertices = p.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
    Polytope { dim: p.dim, halfspaces, vertices, affine_dim: p.affine_dim, incidence: p.incidence.clone() }
}

/// Dilation `lambda * P` (any nonzero rational factor).
pub fn scale(p: &Polytope, lambda: &Q) -> Polytope {
    assert!(!lambda.is_zero(), "zero dilation");
    let pts: Vec<Vec<Q>> = p.vertices.iter().map(|v| v.iter().map(|x| x * lambda).collect()).collect();
    if lambda.is_positive() {
        let halfspaces =
            p.halfspaces.iter().map(|h| Halfspace { normal: h.normal.clone(), offset: &h.offset * lambda }).collect();
        return Polytope {
            dim: p.dim,
            halfspaces,
            vertices: pts,
            affine_dim: p.affine_dim,
            incidence: p.incidence.clone(),
        };
    }
    make_polytope(&pts, p.dim).expect("dilated polytope")
}

/// Orthogonal projection dropping the last coordinate.
pub fn project_drop_last(p: &Polytope) -> Result<Polytope> {
    if p.dim < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim });
    }
    let pts: Vec<Vec<Q>> = p.vertices.iter().map(|v| v[..p.dim - 1].to_vec()).collect();
    make_polytope(&pts, p.dim - 1)
}

/// `{t : (y, t) in P}` for a point `y` of `R^{n-1}`.
pub fn vertical_section(p: &Polytope, y: &[Q]) -> Result<Option<Interval>> {
    if y.len() + 1 != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim - 1, found: y.len() });
    }
    Ok(column_range(&p.halfspaces, y).map(|(lo, hi)| Interval::closed(lo, hi)))
}

/// Range of the last coordinate over the column above `y`, from halfspaces.
pub fn column_range(hs: &[Halfspace], y: &[Q]) -> Option<(Q, Q)> {
    let n = y.len();
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for h in hs {
        let rest = &h.offset - dot(&h.normal[..n], y);
        let an = &h.normal[n];
        if an.is_zero() {
            if rest.is_negative() {
                return None;
            }
            continue;
        }
        let t = rest / an;
        if an.is_positive() {
            if hi.as_ref().is_none_or(|v| t < *v) {
                hi = Some(t);
            }
        } else if lo.as_ref().is_none_or(|v| t > *v) {
            lo = Some(t);
        }
    }
    let (lo, hi) = (lo?, hi?);
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// `{y : (y, r) in P}` as a polytope of dimension `n - 1`.
pub fn slice_at_height(p: &Polytope, r: &Q) -> Result<Option<Polytope>> {
    let n = p.dim;
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let hs: Vec<Halfspace> = p
        .halfspaces
        .iter()
        .filter(|h| h.normal[..n - 1].iter().any(|v| !v.is_zero()) || (&h.offset - &h.normal[n - 1] * r).is_negative())
        .map(|h| Halfspace::new(h.normal[..n - 1].to_vec(), &h.offset - &h.normal[n - 1] * r))
        .collect();
    if hs.iter().any(|h| h.normal.iter().all(|v| v.is_zero())) {
        return Ok(None);
    }
    from_halfspaces(n - 1, &hs)
}

/// Slices at several heights from one edge enumeration: each slice is the hull
/// of the vertices at that height and the edge crossings.
pub fn slices_at_heights(p: &Polytope, rs: &[Q]) -> Result<Vec<Option<Polytope>>> {
    let n = p.dim;
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    if !p.is_full_dim() {
        return rs.iter().map(|r| slice_at_height(p, r)).collect();
    }
    let edges = p.edges();
    let vs = &p.vertices;
    rs.iter()
        .map(|r| {
            let mut pts: Vec<Vec<Q>> = vs.iter().filter(|v| &v[n - 1] == r).map(|v| v[..n - 1].to_vec()).collect();
            for &(i, j) in &edges {
                let (a, b) = (&vs[i], &vs[j]);
                let (ha, hb) = (&a[n - 1], &b[n - 1]);
                if (ha < r && r < hb) || (hb < r && r < ha) {
                    let t = (r - ha) / (hb - ha);
                    pts.push((0..n - 1).map(|c| &a[c] + (&b[c] - &a[c]) * &t).collect());
                }
            }
            if pts.is_empty() {
                Ok(None)
            } else {
                make_polytope(&pts, n - 1).map(Some)
            }
        })
        .collect()
}

/// Per-facet weights `vol_{n-1}(F) / |a_F|` for the Cauchy projection formula.
pub fn facet_shadow_weights(p: &Polytope) -> Result<Vec<(Vec<Q>, Q)>> {
    if !p.is_full_dim() {
        return Err(Error::DegenerateBody("projection volume needs a full-dimensional body".into()));
    }
    let n = p.dim;
    let mut out = Vec::new();
    for (h, inc) in p.facets() {
        if n == 1 {
            out.push((h.normal.clone(), Q::one() / h.normal[0].abs()));
            continue;
        }
        let k = (0..n).find(|&j| !h.normal[j].is_zero()).expect("nonzero normal");
        let pts: Vec<Vec<Q>> = inc
            .iter()
            .map(|&i| p.vertices[i].iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v.clone()).collect())
            .collect();
        let face = make_polytope(&pts, n - 1)?;
        out.push((h.normal.clone(), volume(&face) / h.normal[k].abs()));
    }
    Ok(out)
}

/// `vol_{n-1}` of the orthogonal projection onto the hyperplane normal to `dir`.
pub fn projection_volume(p: &Polytope, dir: &Direction) -> Result<MeasureValue> {
    if dir.dim() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: dir.dim() });
    }
    let weights = facet_shadow_weights(p)?;
    let half = crate::rational::qr(1, 2);
    let s: Q = weights.iter().map(|(a, w)| dot(a, &dir.raw).abs() * w).sum::<Q>() * half;
    Ok(match dir.exact_norm() {
        Some(nrm) => MeasureValue::exact(s / nrm),
        None => {
            let v = to_f64(&s) / dir.norm_f64();
            MeasureValue::approx(v, 8.0 * f64::EPSILON * v.abs())
        }
    })
}

/// Binary64 evaluator of the shadow function `theta -> vol_{n-1}(P | theta^perp)`.
#[derive(Clone, Debug)]
pub struct ShadowFunction {
    terms: Vec<(Vec<f64>, f64)>,
}

impl ShadowFunction {
    pub fn new(p: &Polytope) -> Result<Self> {
        let terms = facet_shadow_weights(p)?
            .into_iter()
            .map(|(a, w)| (a.iter().map(to_f64).collect(), to_f64(&w) * 0.5))
            .collect();
        Ok(ShadowFunction { terms })
    }

    /// Value at a unit vector.
    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.terms.iter().map(|(a, w)| crate::rational::dot_f64(a, theta).abs() * w).sum()
    }

    pub fn normals(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.terms.iter().map(|(a, _)| a)
    }
}

/// Point `y*` of the projection maximizing the vertical section length,
/// lexicographically smallest among maximizers, with that length.
pub fn max_section_anchor(p: &Polytope) -> Result<(Vec<Q>, Q)> {
    let n = p.dim;
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    // variables: y (n-1), t1, t2
    let nv = n + 1;
    let mut obj = vec![Q::zero(); nv];
    obj[n - 1] = -Q::one();
    obj[n] = Q::one();
    let mut lp = LinearProgram::new(nv).maximize(obj);
    for h in &p.halfspaces {
        for t in [n - 1, n] {
            let mut row = vec![Q::zero(); nv];
            row[..n - 1].clone_from_slice(&h.normal[..n - 1]);
            row[t] = h.normal[n - 1].clone();
            lp.push(row, Relation::Le, h.offset.clone());
        }
    }
    let lex: Vec<usize> = (0..n - 1).collect();
    match solve_lexmin(&lp, &lex) {
        LpOutcome::Optimal { x, value } => Ok((x[..n - 1].to_vec(), value)),
        LpOutcome::Unbounded => Err(Error::Unbounded),
        LpOutcome::Infeasible => Err(Error::DegenerateBody("empty body".into())),
    }
}

/// Largest `r >= 0` with `r * theta_raw / |theta_raw|` in `K - K`, by LP.
pub fn difference_radial_exact(p: &Polytope, dir: &Direction) -> Result<MeasureValue> {
    let n = p.dim;
    // variables: x (n), r; x in K, x - r*raw in K
    let nv = n + 1;
    let mut obj = vec![Q::zero(); nv];
    obj[n] = Q::one();
    let mut lp = LinearProgram::new(nv).maximize(obj);
    for h in &p.halfspaces {
        let mut row = h.normal.clone();
        row.push(Q::zero());
        lp.push(row, Relation::Le, h.offset.clone());
        let mut row2 = h.normal.clone();
        row2.push(-dot(&h.normal, &dir.raw));
        lp.push(row2, Relation::Le, h.offset.clone());
    }
    let r = match lp.solve() {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Unbounded => return Err(Error::Unbounded),
        LpOutcome::Infeasible => return Err(Error::DegenerateBody("empty body".into())),
    };
    Ok(match dir.exact_norm() {
        Some(nrm) => MeasureValue::exact(r * nrm),
        None => {
            let v = to_f64(&r) * dir.norm_f64();
            MeasureValue::approx(v, 4.0 * f64::EPSILON * v)
        }
    })
}

pub fn to_json(p: &Polytope) -> Value {
    json!({
        "dim": p.dim,
        "vertices": p.vertices.iter().map(|v| Value::Array(v.iter().map(q_to_json).collect())).collect::<Vec<_>>(),
        "halfspaces": p.halfspaces,
    })
}

/// Reads `{dim, vertices}` or `{dim, halfspaces}`; vertices take precedence.
pub fn from_json(v: &Value) -> Result<Polytope> {
    let dim =
        v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Config("polytope needs `dim`".into()))? as usize;
    if let Some(vs) = v.get("vertices").and_then(Value::as_array) {
        if !vs.is_empty() {
            let mut pts = Vec::new();
            for p in vs {
                let coords = p.as_array().ok_or_else(|| Error::Config("vertex must be an array".into()))?;
                let pt: Option<Vec<Q>> = coords.iter().map(q_from_json).collect();
                pts.push(pt.ok_or_else(|| Error::Config(format!("bad vertex {p}")))?);
            }
            return make_polytope(&pts, dim);
        }
    }
    let hs: Vec<Halfspace> = serde_json::from_value(v.get("halfspaces").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Config(format!("bad halfspaces: {e}")))?;
    from_halfspaces(dim, &hs)?.ok_or_else(|| Error::DegenerateBody("empty halfspace system".into()))
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Standard simplex `conv{0, e_1, ..., e_n}`.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![vec![Q::zero(); n]];
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        pts.push(e);
    }
    make_polytope(&pts, n).expect("simplex")
}

/// Axis box `[lo, hi]^n`.
pub fn cube(n: usize, lo: &Q, hi: &Q) -> Polytope {
    let mut pts = Vec::new();
    for mask in 0..(1usize << n) {
        pts.push((0..n).map(|j| if mask >> j & 1 == 1 { hi.clone() } else { lo.clone() }).collect());
    }
    make_polytope(&pts, n).expect("cube")
}

/// Box with per-axis bounds.
pub fn boxed(bounds: &[(Q, Q)]) -> Polytope {
    let n = bounds.len();
    let mut pts = Vec::new();
    for mask in 0..(1usize << n) {
        pts.push((0..n).map(|j| if mask >> j & 1 == 1 { bounds[j].1.clone() } else { bounds[j].0.clone() }).collect());
    }
    make_polytope(&pts, n).expect("box")
}

/// Cross-polytope `conv{±r e_i}`.
pub fn cross_polytope(n: usize, r: &Q) -> Polytope {
    let mut pts = Vec::new();
    for i in 0..n {
        for s in [r.clone(), -r.clone()] {
            let mut e = vec![Q::zero(); n];
            e[i] = s;
            pts.push(e);
        }
    }
    make_polytope(&pts, n).expect("cross-polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn tri() -> Polytope {
        make_polytope_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    #[test]
    fn triangle_volume_and_facets() {
        let t = tri();
        assert_eq!(volume(&t), qr(1, 2));
        assert_eq!(t.halfspaces().len(), 3);
        assert!(t.halfspaces().contains(&Halfspace::new(vec![qi(1), qi(1)], qi(1))));
    }

    #[test]
    fn difference_body_of_triangle_is_hexagon() {
        let d = difference_body(&tri()).unwrap();
        assert_eq!(d.vertices().len(), 6);
        assert_eq!(volume(&d), qi(3));
    }

    #[test]
    fn unit_cube_and_simplex_volumes() {
        assert_eq!(volume(&cube(3, &qi(0), &qi(1))), qi(1));
        assert_eq!(volume(&standard_simplex(3)), qr(1, 6));
        assert_eq!(volume(&cube(4, &qi(-1), &qi(1))), qi(16));
        assert_eq!(volume(&standard_simplex(4)), qr(1, 24));
        assert_eq!(volume(&cross_polytope(3, &qi(1))), qr(4, 3));
    }

    #[test]
    fn degenerate_intersection_has_zero_volume() {
        let a = cube(2, &qi(0), &qi(1));
        let b = translate(&a, &[qi(1), qi(0)]);
        let c = intersect(&a, &b).unwrap().unwrap();
        assert_eq!(c.affine_dim(), 1);
        assert_eq!(volume(&c), qi(0));
        let far = translate(&a, &[qi(3), qi(0)]);
        assert!(intersect(&a, &far).unwrap().is_none());
    }

    #[test]
    fn projection_of_square_along_diagonal() {
        let sq = cube(2, &qi(0), &qi(1));
        let pv = projection_volume(&sq, &Direction::from_ints(&[1, 1]).unwrap()).unwrap();
        assert!(pv.exact.is_none());
        assert!((pv.value - 2f64.sqrt()).abs() < 1e-14);
        let pe = projection_volume(&sq, &Direction::from_ints(&[0, 1]).unwrap()).unwrap();
        assert_eq!(pe.exact, Some(qi(1)));
    }

    #[test]
    fn section_anchor_examples() {
        let sq = cube(2, &qi(0), &qi(1));
        assert_eq!(max_section_anchor(&sq).unwrap(), (vec![qi(0)], qi(1)));
        assert_eq!(max_section_anchor(&tri()).unwrap(), (vec![qi(0)], qi(1)));
        let moved = translate(&sq, &[qi(3), qi(0)]);
        assert_eq!(max_section_anchor(&moved).unwrap().0, vec![qi(3)]);
    }

    #[test]
    fn vertical_sections_and_slices() {
        let t = tri();
        assert_eq!(vertical_section(&t, &[qr(1, 4)]).unwrap(), Some(Interval::closed(qi(0), qr(3, 4))));
        assert_eq!(vertical_section(&t, &[qi(2)]).unwrap(), None);
        let s = slice_at_height(&standard_simplex(3), &qr(1, 2)).unwrap().unwrap();
        assert_eq!(volume(&s), qr(1, 8));
        let top = slice_at_height(&t, &qi(1)).unwrap().unwrap();
        assert_eq!(top.affine_dim(), 0);
    }

    #[test]
    fn transform_errors() {
        let t = tri();
        let sing = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert_eq!(transform(&t, &sing, &[qi(0), qi(0)]), Err(Error::SingularMap));
        let shear = vec![vec![qi(1), qi(1)], vec![qi(0), qi(1)]];
        assert_eq!(volume(&transform(&t, &shear, &[qi(1), qi(0)]).unwrap()), qr(1, 2));
        assert!(matches!(make_polytope(&[vec![qi(0)], vec![qi(1), qi(2)]], 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unbounded_halfspaces_rejected() {
        let hs = vec![Halfspace::new(vec![qi(1), qi(0)], qi(1)), Halfspace::new(vec![qi(0), qi(1)], qi(1))];
        assert_eq!(from_halfspaces(2, &hs).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn json_round_trip() {
        let t = tri();
        let j = serde_json::to_value(&t).unwrap();
        let back: Polytope = serde_json::from_value(j.clone()).unwrap();
        assert_eq!(back, t);
        let only_h = json!({"dim": 2, "halfspaces": j["halfspaces"]});
        assert_eq!(from_json(&only_h).unwrap(), t);
    }

    #[test]
    fn difference_radial_of_square() {
        let sq = cube(2, &qi(0), &qi(1));
        let r = difference_radial_exact(&sq, &Direction::from_ints(&[2, 1]).unwrap()).unwrap();
        assert!((r.value - 5f64.sqrt() / 2.0).abs() < 1e-14);
    }
}
