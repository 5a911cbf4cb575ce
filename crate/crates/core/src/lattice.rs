//! Lattice-point enumeration, the column measure `mu`, discrete covariograms
//! and ray decompositions of discrete covariogram moments.
//!
//! Sets of the form `P + C_k`, with `C_k = (-1, 1)^k x {0}^{n-k}`, are handled
//! through the closed polytope `Q = P + [-1, 1]^k x {0}`: a point lies in
//! `P + C_k` exactly when it satisfies every facet of `Q` whose normal has a
//! nonzero component among the first `k` coordinates strictly, and the
//! remaining facets weakly.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polytope::{self, make_polytope, minkowski_sum, Direction, Halfspace, Interval, MeasureValue, Polytope};
use crate::rational::{self, ceil_int, dot, dot_f64, floor_int, int_to_i64, qi, to_f64, Q};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Sorted, duplicate-free set of integer points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePointSet {
    pub points: Vec<Vec<i64>>,
}

impl LatticePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(x)).is_ok()
    }
}

/// Halfspaces of a region together with per-facet strictness.
#[derive(Clone, Debug)]
pub struct Region {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    pub strict: Vec<bool>,
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
}

fn cube_k(n: usize, k: usize) -> Polytope {
    let bounds: Vec<(Q, Q)> =
        (0..n).map(|j| if j < k { (-Q::one(), Q::one()) } else { (Q::zero(), Q::zero()) }).collect();
    let mut pts = Vec::new();
    for mask in 0..(1usize << k) {
        pts.push(
            (0..n)
                .map(|j| if j < k && mask >> j & 1 == 1 { bounds[j].1.clone() } else { bounds[j].0.clone() })
                .collect(),
        );
    }
    make_polytope(&pts, n).expect("cube")
}

/// The region `P + C_k` (closed `P` when `k == 0`).
pub fn region(p: &Polytope, k: usize) -> Result<Region> {
    let n = p.dim();
    if k > n {
        return Err(Error::InvalidParameter(format!("open cube rank {k} exceeds dimension {n}")));
    }
    let q = if k == 0 { p.clone() } else { minkowski_sum(p, &cube_k(n, k))? };
    let halfspaces = q.halfspaces().to_vec();
    let strict = halfspaces.iter().map(|h| h.normal[..k].iter().any(|v| !v.is_zero())).collect();
    let (lo, hi) = q.bounding_box();
    Ok(Region { dim: n, halfspaces, strict, lo, hi })
}

impl Region {
    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().zip(&self.strict).all(|(h, &s)| {
            let sl = h.slack(x);
            if s {
                sl.is_positive()
            } else {
                !sl.is_negative()
            }
        })
    }

    /// Last-coordinate interval above column `y`, with open/closed ends.
    pub fn column(&self, y: &[Q]) -> Option<Interval> {
        let n = y.len();
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for (h, &s) in self.halfspaces.iter().zip(&self.strict) {
            let rest = &h.offset - dot(&h.normal[..n], y);
            let an = &h.normal[n];
            if an.is_zero() {
                if rest.is_negative() || (s && rest.is_zero()) {
                    return None;
                }
                continue;
            }
            let t = rest / an;
            if an.is_positive() {
                let replace = match &hi {
                    None => true,
                    Some((v, o)) => t < *v || (t == *v && s && !o),
                };
                if replace {
                    hi = Some((t, s));
                }
            } else {
                let replace = match &lo {
                    None => true,
                    Some((v, o)) => t > *v || (t == *v && s && !o),
                };
                if replace {
                    lo = Some((t, s));
                }
            }
        }
        let ((lo, lo_open), (hi, hi_open)) = (lo?, hi?);
        let iv = Interval { lo, hi, lo_open, hi_open };
        if iv.is_empty() {
            None
        } else {
            Some(iv)
        }
    }

    /// Integer columns of the bounding box of the first `n - 1` coordinates.
    pub fn columns(&self) -> Vec<Vec<i64>> {
        let n = self.dim;
        let mut out = vec![Vec::new()];
        for j in 0..n - 1 {
            let a = int_to_i64(&ceil_int(&self.lo[j]));
            let b = int_to_i64(&floor_int(&self.hi[j]));
            let mut next = Vec::new();
            for prefix in &out {
                for v in a..=b {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    pub fn lattice_points(&self) -> LatticePointSet {
        let mut points = Vec::new();
        for y in self.columns() {
            let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
            if let Some(iv) = self.column(&yq) {
                let (a, b) = integer_range(&iv);
                for t in a..=b {
                    let mut p = y.clone();
                    p.push(t);
                    points.push(p);
                }
            }
        }
        LatticePointSet { points }
    }

    /// Column measure: sum over integer columns of the section length.
    pub fn mu(&self) -> Q {
        let mut total = Q::zero();
        for y in self.columns() {
            let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
            if let Some(iv) = self.column(&yq) {
                total += iv.length();
            }
        }
        total
    }
}

/// Integers in an interval, as an inclusive range (possibly empty).
pub fn integer_range(iv: &Interval) -> (i64, i64) {
    let a = if iv.lo_open { floor_int(&iv.lo) + 1 } else { ceil_int(&iv.lo) };
    let b = if iv.hi_open { ceil_int(&iv.hi) - 1 } else { floor_int(&iv.hi) };
    (int_to_i64(&a), int_to_i64(&b))
}

/// Integer points of `P + C_k` (of `P` itself when `k == 0`).
pub fn lattice_points(p: &Polytope, k: usize) -> Result<LatticePointSet> {
    Ok(region(p, k)?.lattice_points())
}

pub fn count_lattice(p: &Polytope, k: usize) -> Result<usize> {
    Ok(lattice_points(p, k)?.len())
}

/// `mu(P) = sum_{y in Z^{n-1}} vol_1(P ∩ (y + <e_n>))`.
pub fn mu_measure(p: &Polytope) -> Result<Q> {
    mu_measure_open(p, 0)
}

/// `mu(P + C_k)`.
pub fn mu_measure_open(p: &Polytope, k: usize) -> Result<Q> {
    if p.dim() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    Ok(region(p, k)?.mu())
}

/// Membership in `P + C_k` decided by minimizing the sup-distance over the
/// first `k` coordinates with an LP; used to cross-check `region`.
pub fn in_open_cube_sum_lp(p: &Polytope, k: usize, x: &[Q]) -> bool {
    let n = p.dim();
    if k == 0 {
        return p.contains(x);
    }
    // variables: z (n), s; minimize s, |x_j - z_j| <= s (j < k), z_j = x_j (j >= k)
    let nv = n + 1;
    let mut obj = vec![Q::zero(); nv];
    obj[n] = -Q::one();
    let mut lp = LinearProgram::new(nv).maximize(obj);
    for h in p.halfspaces() {
        let mut row = h.normal.clone();
        row.push(Q::zero());
        lp.push(row, Relation::Le, h.offset.clone());
    }
    for j in 0..n {
        let mut row = vec![Q::zero(); nv];
        row[j] = Q::one();
        if j < k {
            let mut r1 = row.clone();
            r1[n] = -Q::one();
            lp.push(r1, Relation::Le, x[j].clone());
            let mut r2 = row.clone();
            r2[n] = Q::one();
            lp.push(r2, Relation::Ge, x[j].clone());
        } else {
            lp.push(row, Relation::Eq, x[j].clone());
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => -value < Q::one(),
        _ => false,
    }
}

/// `#{y in P ∩ Z^n : y - x in P}`; with `open_cube`, the same for `P + C_n`.
pub fn discrete_covariogram(p: &Polytope, x: &[i64], open_cube: bool) -> Result<usize> {
    let k = if open_cube { p.dim() } else { 0 };
    let reg = region(p, k)?;
    let pts = reg.lattice_points();
    Ok(pts
        .points
        .iter()
        .filter(|y| {
            let z: Vec<i64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
            pts.contains(&z)
        })
        .count())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayEntry {
    pub point: Vec<i64>,
    #[serde(flatten)]
    pub interval: Interval,
}

/// For every lattice point `y` of `K` (or `K + C_n`), the interval of
/// `r >= 0` with `y - r theta` in the same set. Interval endpoints are in
/// units of `|raw|` times `param_scale`; `param_scale` is exact (one) when
/// the direction has a rational norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayDecomposition {
    pub open_cube: bool,
    pub entries: Vec<RayEntry>,
    pub param_scale: f64,
    #[serde(skip)]
    exact_scale: bool,
}

impl RayDecomposition {
    pub fn is_exact(&self) -> bool {
        self.exact_scale
    }

    /// Largest right endpoint: the radial function of `(K ∩ Z^n) - K`.
    pub fn max_endpoint(&self) -> MeasureValue {
        let m = self.entries.iter().map(|e| e.interval.hi.clone()).max().unwrap_or_else(Q::zero);
        if self.exact_scale {
            MeasureValue::exact(m)
        } else {
            let v = to_f64(&m) * self.param_scale;
            MeasureValue::approx(v, 4.0 * f64::EPSILON * v)
        }
    }
}

pub fn ray_decomposition(p: &Polytope, dir: &Direction, open_cube: bool) -> Result<RayDecomposition> {
    let n = p.dim();
    if dir.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: dir.dim() });
    }
    let reg = region(p, if open_cube { n } else { 0 })?;
    let (step, exact_scale, param_scale): (Vec<Q>, bool, f64) = match dir.exact_unit() {
        Some(u) => (u, true, 1.0),
        None => (dir.raw.clone(), false, 1.0 / dir.norm_f64()),
    };
    let d: Vec<Q> = reg.halfspaces.iter().map(|h| dot(&h.normal, &step)).collect();
    let mut entries = Vec::new();
    for y in reg.lattice_points().points {
        let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
        let mut best: Option<(Q, bool)> = None;
        for ((h, di), &s) in reg.halfspaces.iter().zip(&d).zip(&reg.strict) {
            if !di.is_negative() {
                continue;
            }
            let r = h.slack(&yq) / -di;
            let replace = match &best {
                None => true,
                Some((v, o)) => r < *v || (r == *v && s && !o),
            };
            if replace {
                best = Some((r, s));
            }
        }
        let (hi, hi_open) = best.ok_or(Error::Unbounded)?;
        entries.push(RayEntry { point: y, interval: Interval { lo: Q::zero(), hi, lo_open: false, hi_open } });
    }
    Ok(RayDecomposition { open_cube, entries, param_scale, exact_scale })
}

/// `p ∫_0^∞ r^{p-1} #(...)(r theta) dr = sum (b^p - a^p)`, `p > 0`.
pub fn discrete_ray_moment(dec: &RayDecomposition, p: f64) -> Result<MeasureValue> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("ray moment exponent must be positive, got {p}")));
    }
    if dec.exact_scale && p.fract() == 0.0 && p <= 64.0 {
        let k = p as u32;
        let s: Q =
            dec.entries.iter().map(|e| rational::pow_q(&e.interval.hi, k) - rational::pow_q(&e.interval.lo, k)).sum();
        return Ok(MeasureValue::exact(s));
    }
    let mut s = 0.0;
    for e in &dec.entries {
        let b = to_f64(&e.interval.hi) * dec.param_scale;
        let a = to_f64(&e.interval.lo) * dec.param_scale;
        s += b.powf(p) - a.powf(p);
    }
    Ok(MeasureValue::approx(s, 16.0 * f64::EPSILON * (1.0 + p) * s.abs() * (dec.entries.len() as f64).max(1.0)))
}

/// Binary64 ray decompositions for many directions of one body.
#[derive(Clone, Debug)]
pub struct FloatRays {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    normals: Vec<Vec<f64>>,
    slacks: Vec<Vec<f64>>,
}

impl FloatRays {
    pub fn new(p: &Polytope, open_cube: bool) -> Result<Self> {
        let n = p.dim();
        let reg = region(p, if open_cube { n } else { 0 })?;
        let pts = reg.lattice_points().points;
        let normals = reg.halfspaces.iter().map(|h| h.normal.iter().map(to_f64).collect()).collect();
        let slacks = pts
            .iter()
            .map(|y| {
                let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
                reg.halfspaces.iter().map(|h| to_f64(&h.slack(&yq))).collect()
            })
            .collect();
        Ok(FloatRays { dim: n, points: pts, normals, slacks })
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// Right endpoints `b_y(theta)` for a unit vector `theta`.
    pub fn endpoints(&self, theta: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = self.normals.iter().map(|a| dot_f64(a, theta)).collect();
        self.slacks
            .iter()
            .map(|s| {
                let mut best = f64::INFINITY;
                for (si, di) in s.iter().zip(&d) {
                    if *di < 0.0 {
                        let r = si / -di;
                        if r < best {
                            best = r;
                        }
                    }
                }
                best
            })
            .collect()
    }

    /// `sum_y b_y(theta)^p`.
    pub fn moment(&self, theta: &[f64], p: f64) -> f64 {
        self.endpoints(theta).iter().map(|b| b.powf(p)).sum()
    }
}

/// Projection lattice count helper: `G_{n-1}(P(K))`.
pub fn projection_count(p: &Polytope, k: usize) -> Result<usize> {
    count_lattice(&polytope::project_drop_last(p)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{boxed, cube, make_polytope_i64};
    use crate::rational::qr;

    #[test]
    fn mu_examples() {
        assert_eq!(mu_measure(&cube(2, &qi(0), &qi(2))).unwrap(), qi(6));
        let thin = boxed(&[(qi(-2), qi(2)), (qr(1, 3), qr(1, 2))]);
        assert_eq!(mu_measure(&thin).unwrap(), qr(5, 6));
        assert_eq!(count_lattice(&thin, 0).unwrap(), 0);
        let t = make_polytope_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(mu_measure(&t).unwrap(), qi(1));
    }

    #[test]
    fn open_cube_sums() {
        let sq = cube(2, &qi(0), &qi(1));
        // (-1, 2)^2 contains {0, 1}^2
        assert_eq!(lattice_points(&sq, 2).unwrap().points, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        // [-1,1]^2 + C_1 = (-2, 2) x [-1, 1]
        let b = cube(2, &qi(-1), &qi(1));
        assert_eq!(count_lattice(&b, 1).unwrap(), 9);
        assert_eq!(mu_measure_open(&b, 1).unwrap(), qi(6));
    }

    #[test]
    fn ray_decomposition_examples() {
        let sq2 = cube(2, &qi(0), &qi(2));
        let dec = ray_decomposition(&sq2, &Direction::axis(2, 0), false).unwrap();
        for e in &dec.entries {
            assert_eq!(e.interval, Interval::closed(qi(0), qi(e.point[0])));
        }
        assert_eq!(discrete_ray_moment(&dec, 1.0).unwrap().exact, Some(qi(9)));
        assert_eq!(discrete_ray_moment(&dec, 2.0).unwrap().exact, Some(qi(15)));
        let sq = cube(2, &qi(0), &qi(1));
        let open = ray_decomposition(&sq, &Direction::axis(2, 0), true).unwrap();
        for e in &open.entries {
            assert!(e.interval.hi_open);
            assert_eq!(e.interval.hi, qi(e.point[0] + 1));
        }
        assert_eq!(discrete_ray_moment(&open, 1.0).unwrap().exact, Some(qi(6)));
    }

    #[test]
    fn lp_membership_agrees_with_region() {
        let t = make_polytope_i64(&[&[0, 0], &[3, 1], &[1, 2]]).unwrap();
        for k in 0..=2 {
            let reg = region(&t, k).unwrap();
            for x in -3..6 {
                for y in -3..5 {
                    let pt = vec![qi(x), qi(y)];
                    assert_eq!(reg.contains(&pt), in_open_cube_sum_lp(&t, k, &pt), "k={k} ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn float_rays_match_exact() {
        let t = make_polytope_i64(&[&[0, 0], &[3, 1], &[1, 2]]).unwrap();
        let dir = Direction::from_ints(&[3, 4]).unwrap();
        for open in [false, true] {
            let dec = ray_decomposition(&t, &dir, open).unwrap();
            let fr = FloatRays::new(&t, open).unwrap();
            let b = fr.endpoints(&dir.unit);
            for (e, bf) in dec.entries.iter().zip(&b) {
                assert!((to_f64(&e.interval.hi) - bf).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn discrete_covariogram_counts() {
        let sq = cube(2, &qi(0), &qi(2));
        assert_eq!(discrete_covariogram(&sq, &[0, 0], false).unwrap(), 9);
        assert_eq!(discrete_covariogram(&sq, &[1, 0], false).unwrap(), 6);
        assert_eq!(discrete_covariogram(&sq, &[3, 0], false).unwrap(), 0);
    }
}
