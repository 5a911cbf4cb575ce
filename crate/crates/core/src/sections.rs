//! Integrals of powers of the vertical section-length function over the
//! projection `P(K)`.
//!
//! On the common refinement of the projected upper and lower facets the
//! section length is affine, so each cell is triangulated and powers of an
//! affine function are integrated over simplices in closed form.

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::polytope::{intersect, make_polytope, triangulate, volume, MeasureValue, Polytope};
use crate::quadrature;
use crate::rational::{self, dot, qi, to_f64, Q};
use num::{One, Signed, Zero};

/// A simplex in `R^{n-1}` carrying the affine section length on it.
#[derive(Clone, Debug)]
pub struct SectionSimplex {
    pub vertices: Vec<Vec<Q>>,
    /// Section length at each vertex.
    pub values: Vec<Q>,
    /// `d! vol(simplex)`.
    pub det_abs: Q,
}

#[derive(Clone, Debug)]
pub struct SectionCells {
    pub base_dim: usize,
    pub simplices: Vec<SectionSimplex>,
}

fn affine_parts(p: &Polytope) -> (Vec<(Vec<Q>, Q, Vec<usize>)>, Vec<(Vec<Q>, Q, Vec<usize>)>) {
    let n = p.dim();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (h, inc) in p.facets() {
        let an = &h.normal[n - 1];
        if an.is_zero() {
            continue;
        }
        let coef: Vec<Q> = h.normal[..n - 1].iter().map(|v| -v / an).collect();
        let c = &h.offset / an;
        if an.is_positive() {
            upper.push((coef, c, inc.to_vec()));
        } else {
            lower.push((coef, c, inc.to_vec()));
        }
    }
    (upper, lower)
}

impl SectionCells {
    pub fn new(p: &Polytope) -> Result<Self> {
        let n = p.dim();
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: n });
        }
        if !p.is_full_dim() {
            return Err(Error::DegenerateBody("section integrals need a full-dimensional body".into()));
        }
        let d = n - 1;
        let (upper, lower) = affine_parts(p);
        let proj = |inc: &[usize]| -> Result<Polytope> {
            let pts: Vec<Vec<Q>> = inc.iter().map(|&i| p.vertices()[i][..d].to_vec()).collect();
            make_polytope(&pts, d)
        };
        let up: Vec<Polytope> = upper.iter().map(|u| proj(&u.2)).collect::<Result<_>>()?;
        let lo: Vec<Polytope> = lower.iter().map(|l| proj(&l.2)).collect::<Result<_>>()?;
        let mut simplices = Vec::new();
        for (ui, u) in upper.iter().enumerate() {
            let (ulo, uhi) = up[ui].bounding_box();
            for (li, l) in lower.iter().enumerate() {
                let (llo, lhi) = lo[li].bounding_box();
                if (0..d).any(|j| uhi[j] <= llo[j] || lhi[j] <= ulo[j]) {
                    continue;
                }
                let Some(cell) = intersect(&up[ui], &lo[li])? else {
                    continue;
                };
                if !cell.is_full_dim() {
                    continue;
                }
                let coef: Vec<Q> = u.0.iter().zip(&l.0).map(|(a, b)| a - b).collect();
                let c0 = &u.1 - &l.1;
                for s in triangulate(&cell) {
                    let verts: Vec<Vec<Q>> = s.iter().map(|&i| cell.vertices()[i].clone()).collect();
                    let values: Vec<Q> = verts.iter().map(|v| dot(&coef, v) + &c0).collect();
                    let m: Vec<Vec<Q>> =
                        verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect()).collect();
                    let det_abs = det(&m).abs();
                    simplices.push(SectionSimplex { vertices: verts, values, det_abs });
                }
            }
        }
        Ok(SectionCells { base_dim: d, simplices })
    }

    pub fn base_volume(&self) -> Q {
        let mut f = Q::one();
        for k in 2..=self.base_dim {
            f *= qi(k as i64);
        }
        self.simplices.iter().map(|s| s.det_abs.clone()).sum::<Q>() / f
    }

    /// `∫_{P(K)} len^k`, exact.
    pub fn power_integral(&self, k: u32) -> Q {
        let d = self.base_dim as u32;
        // k! / (k + d)!
        let mut ratio = Q::one();
        for j in k + 1..=k + d {
            ratio /= qi(j as i64);
        }
        let mut total = Q::zero();
        for s in &self.simplices {
            total += &s.det_abs * complete_homogeneous(&s.values, k);
        }
        total * ratio
    }

    /// `∫_{P(K)} len^alpha` for real `alpha > -1` (base dimension 1 or 2).
    pub fn power_integral_f64(&self, alpha: f64) -> Result<MeasureValue> {
        if alpha <= -1.0 {
            return Err(Error::InvalidParameter(format!("exponent {alpha} must exceed -1")));
        }
        if alpha >= 0.0 && alpha.fract() == 0.0 && alpha <= 64.0 {
            return Ok(MeasureValue::exact(self.power_integral(alpha as u32)));
        }
        if self.base_dim > 2 {
            return Err(Error::RouteUnsupported("real exponents need a base of dimension <= 2".into()));
        }
        let mut total = 0.0;
        let mut mag = 0.0;
        for s in &self.simplices {
            let mut t: Vec<f64> = s.values.iter().map(to_f64).collect();
            t.sort_by(|a, b| a.total_cmp(b));
            let fact = if self.base_dim == 2 { 2.0 } else { 1.0 };
            let vol = to_f64(&s.det_abs) / fact;
            let v = vol * mean_power(&t, alpha);
            total += v;
            mag += v.abs();
        }
        Ok(MeasureValue::approx(total, 1e-12 * mag + 1e-300))
    }
}

/// `h_k(x_0, ..., x_d)`: sum of all monomials of degree `k`.
pub fn complete_homogeneous(x: &[Q], k: u32) -> Q {
    let k = k as usize;
    let mut h = vec![Q::zero(); k + 1];
    h[0] = Q::one();
    for xi in x {
        for m in 1..=k {
            let prev = h[m - 1].clone();
            h[m] += prev * xi;
        }
    }
    h[k].clone()
}

/// Mean of `t^alpha` under the law of an affine function of a uniform point
/// of a simplex whose vertex values are `knots` (sorted, length 2 or 3).
fn mean_power(knots: &[f64], alpha: f64) -> f64 {
    let pieces: Vec<(f64, f64, f64, f64)> = match knots.len() {
        2 => {
            let (a, b) = (knots[0], knots[1]);
            if b - a <= 1e-14 * b.abs().max(1e-300) {
                return a.max(0.0).powf(alpha);
            }
            vec![(a, b, 1.0 / (b - a), 0.0)]
        }
        3 => {
            let (t0, t1, t2) = (knots[0], knots[1], knots[2]);
            let span = t2 - t0;
            if span <= 1e-14 * t2.abs().max(1e-300) {
                return t0.max(0.0).powf(alpha);
            }
            let mut v = Vec::new();
            if t1 - t0 > 0.0 {
                let c = 2.0 / (span * (t1 - t0));
                v.push((t0, t1, -c * t0, c));
            }
            if t2 - t1 > 0.0 {
                let c = 2.0 / (span * (t2 - t1));
                v.push((t1, t2, c * t2, -c));
            }
            v
        }
        _ => unreachable!("simplex of unsupported dimension"),
    };
    pieces.into_iter().map(|(a, b, c0, c1)| piece_integral(a.max(0.0), b.max(0.0), c0, c1, alpha)).sum()
}

/// `∫_a^b t^alpha (c0 + c1 t) dt`.
fn piece_integral(a: f64, b: f64, c0: f64, c1: f64, alpha: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= b - a {
        return quadrature::integrate(16, a, b, |t| t.powf(alpha) * (c0 + c1 * t));
    }
    let f = |t: f64| c0 * t.powf(alpha + 1.0) / (alpha + 1.0) + c1 * t.powf(alpha + 2.0) / (alpha + 2.0);
    f(b) - f(a)
}

/// `2^p ∫_{S} |x_n|^p dx` for a body symmetric in the last coordinate,
/// exact for nonnegative integer `p`.
pub fn slab_moment(s: &Polytope, p: f64) -> Result<MeasureValue> {
    let n = s.dim();
    let mut heights: Vec<Q> = s.vertices().iter().map(|v| v[n - 1].clone()).filter(|h| !h.is_negative()).collect();
    heights.push(Q::zero());
    heights.sort();
    heights.dedup();
    let exact = p >= 0.0 && p.fract() == 0.0 && p <= 64.0;
    let mut total_q = Q::zero();
    let mut total_f = 0.0;
    let mut mag = 0.0;
    // A(t) has degree <= n - 1 on each [a, b]; interpolate through n samples
    let m = n;
    let node_sets: Vec<Vec<Q>> = heights
        .windows(2)
        .map(|w| {
            (0..m)
                .map(|i| &w[0] + (&w[1] - &w[0]) * Q::new((i as i64).into(), ((m - 1).max(1) as i64).into()))
                .collect()
        })
        .collect();
    let flat: Vec<Q> = node_sets.iter().flatten().cloned().collect();
    let areas: Vec<Q> = crate::polytope::slices_at_heights(s, &flat)?
        .into_iter()
        .map(|o| o.map(|sl| volume(&sl)).unwrap_or_else(Q::zero))
        .collect();
    for (idx, w) in heights.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let nodes = &node_sets[idx];
        let vals = &areas[idx * m..(idx + 1) * m];
        let coefs = interpolate(nodes, vals);
        if exact {
            let k = p as u32;
            for (j, c) in coefs.iter().enumerate() {
                let e = k + j as u32 + 1;
                total_q += c * (rational::pow_q(b, e) - rational::pow_q(a, e)) / qi(e as i64);
            }
        } else {
            let (af, bf) = (to_f64(a), to_f64(b));
            for (j, c) in coefs.iter().enumerate() {
                let e = p + j as f64 + 1.0;
                let term = to_f64(c) * (bf.powf(e) - af.powf(e)) / e;
                total_f += term;
                mag += term.abs();
            }
        }
    }
    // symmetric halves and the 2^p factor
    if exact {
        let factor = rational::pow_q(&qi(2), p as u32) * qi(2);
        Ok(MeasureValue::exact(total_q * factor))
    } else {
        let factor = 2f64.powf(p) * 2.0;
        Ok(MeasureValue::approx(total_f * factor, 1e-12 * mag * factor))
    }
}

/// Monomial coefficients of the interpolating polynomial.
fn interpolate(nodes: &[Q], vals: &[Q]) -> Vec<Q> {
    let m = nodes.len();
    let rows: Vec<Vec<Q>> = nodes.iter().map(|t| (0..m).map(|j| rational::pow_q(t, j as u32)).collect()).collect();
    crate::linalg::solve(&rows, vals).expect("distinct interpolation nodes")
}

/// Exact `∫_{P(K)} len^{k}` and base volume, for direct use.
pub fn section_power(p: &Polytope, k: u32) -> Result<Q> {
    Ok(SectionCells::new(p)?.power_integral(k))
}

/// Check helper: base volume equals the projection volume.
pub fn base_volume(p: &Polytope) -> Result<Q> {
    Ok(SectionCells::new(p)?.base_volume())
}
