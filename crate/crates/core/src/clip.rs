//! Binary64 evaluation of the covariogram `g_K(x) = vol(K ∩ (K + x))` by
//! clipping the facets of each copy against the other copy.
//!
//! The boundary of `K ∩ (K + x)` is made of the pieces `F ∩ (K + x)` for
//! facets `F` of `K` and `(G + x) ∩ K` for facets `G` of `K`; the volume is
//! `(1/n) Σ h_F vol_{n-1}(piece)` with `h_F` the signed distance from a
//! reference point to the supporting hyperplane. A translated facet lying in
//! the plane of an original facet with the same normal is counted once.

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{dot_f64, to_f64};

#[derive(Clone, Debug)]
pub struct FloatBody {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    /// `(normal, offset, |normal|)`.
    pub facets: Vec<(Vec<f64>, f64, f64)>,
    /// Facet boundary, ordered cyclically for `n = 3`; a segment for `n = 2`.
    pub faces: Vec<Vec<Vec<f64>>>,
    pub edges: Vec<(Vec<f64>, Vec<f64>)>,
    pub center: Vec<f64>,
    scale: f64,
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl FloatBody {
    pub fn new(p: &Polytope) -> Result<Self> {
        let n = p.dim();
        if !(1..=3).contains(&n) {
            return Err(Error::RouteUnsupported(format!("binary64 clipping supports n <= 3, got {n}")));
        }
        if !p.is_full_dim() {
            return Err(Error::DegenerateBody("covariogram clipping needs a full-dimensional body".into()));
        }
        let vertices = p.vertices_f64();
        let nv = vertices.len() as f64;
        let center: Vec<f64> = (0..n).map(|j| vertices.iter().map(|v| v[j]).sum::<f64>() / nv).collect();
        let mut facets = Vec::new();
        let mut faces = Vec::new();
        for (h, inc) in p.facets() {
            let a: Vec<f64> = h.normal.iter().map(to_f64).collect();
            let na = norm(&a);
            facets.push((a.clone(), to_f64(&h.offset), na));
            let mut pts: Vec<Vec<f64>> = inc.iter().map(|&i| vertices[i].clone()).collect();
            if n == 3 {
                let c: Vec<f64> = (0..3).map(|j| pts.iter().map(|v| v[j]).sum::<f64>() / pts.len() as f64).collect();
                let u = sub(&pts[0], &c);
                let w = cross(&a, &u);
                pts.sort_by(|p1, p2| {
                    let d1 = sub(p1, &c);
                    let d2 = sub(p2, &c);
                    let t1 = dot_f64(&d1, &w).atan2(dot_f64(&d1, &u));
                    let t2 = dot_f64(&d2, &w).atan2(dot_f64(&d2, &u));
                    t1.total_cmp(&t2)
                });
            }
            faces.push(pts);
        }
        let edges = if n == 3 {
            p.edges().into_iter().map(|(i, j)| (vertices[i].clone(), vertices[j].clone())).collect()
        } else {
            Vec::new()
        };
        let scale = vertices.iter().map(|v| norm(&sub(v, &center))).fold(0.0, f64::max).max(1e-300);
        Ok(FloatBody { dim: n, vertices, facets, faces, edges, center, scale })
    }

    /// `vol(K ∩ (K + x))`.
    pub fn covariogram(&self, x: &[f64]) -> f64 {
        let n = self.dim;
        let eps = 1e-13 * self.scale;
        let shifted: Vec<(Vec<f64>, f64)> =
            self.facets.iter().map(|(a, b, _)| (a.clone(), b + dot_f64(a, x))).collect();
        let original: Vec<(Vec<f64>, f64)> = self.facets.iter().map(|(a, b, _)| (a.clone(), *b)).collect();
        if n == 1 {
            let lo = self.vertices[0][0].min(self.vertices[1][0]);
            let hi = self.vertices[0][0].max(self.vertices[1][0]);
            return ((hi.min(hi + x[0])) - (lo.max(lo + x[0]))).max(0.0);
        }
        let c: Vec<f64> = self.center.iter().zip(x).map(|(ci, xi)| ci + 0.5 * xi).collect();
        let mut total = 0.0;
        for (fi, (a, b, na)) in self.facets.iter().enumerate() {
            // facet of K clipped by K + x
            let h = (b - dot_f64(a, &c)) / na;
            total += h * self.piece_measure(&self.faces[fi], None, &shifted, eps);
            // facet of K + x clipped by K, unless it lies in the same plane
            let ax = dot_f64(a, x);
            if ax.abs() <= 1e-14 * na * (1.0 + norm(x)) {
                continue;
            }
            let h2 = (b + ax - dot_f64(a, &c)) / na;
            total += h2 * self.piece_measure(&self.faces[fi], Some(x), &original, eps);
        }
        (total / n as f64).max(0.0)
    }

    fn piece_measure(&self, face: &[Vec<f64>], shift: Option<&[f64]>, hs: &[(Vec<f64>, f64)], eps: f64) -> f64 {
        let mut poly: Vec<Vec<f64>> = match shift {
            Some(x) => face.iter().map(|v| v.iter().zip(x).map(|(a, b)| a + b).collect()).collect(),
            None => face.to_vec(),
        };
        if self.dim == 2 {
            let (u, v) = (&poly[0], &poly[1]);
            let d = sub(v, u);
            let (mut s0, mut s1) = (0.0f64, 1.0f64);
            for (a, b) in hs {
                let au = dot_f64(a, u) - b;
                let ad = dot_f64(a, &d);
                if ad.abs() < 1e-300 {
                    if au > eps {
                        return 0.0;
                    }
                    continue;
                }
                let s = -au / ad;
                if ad > 0.0 {
                    s1 = s1.min(s);
                } else {
                    s0 = s0.max(s);
                }
            }
            return (s1 - s0).max(0.0) * norm(&d);
        }
        for (a, b) in hs {
            if poly.len() < 3 {
                return 0.0;
            }
            let vals: Vec<f64> = poly.iter().map(|p| dot_f64(a, p) - b).collect();
            if vals.iter().all(|&v| v <= eps) {
                continue;
            }
            if vals.iter().all(|&v| v >= -eps) {
                return 0.0;
            }
            let mut out = Vec::with_capacity(poly.len() + 2);
            for i in 0..poly.len() {
                let j = (i + 1) % poly.len();
                let (pi, pj) = (&poly[i], &poly[j]);
                let (vi, vj) = (vals[i], vals[j]);
                if vi <= 0.0 {
                    out.push(pi.clone());
                }
                if (vi < 0.0 && vj > 0.0) || (vi > 0.0 && vj < 0.0) {
                    let t = vi / (vi - vj);
                    out.push(pi.iter().zip(pj).map(|(x, y)| x + t * (y - x)).collect());
                }
            }
            poly = out;
        }
        if poly.len() < 3 {
            return 0.0;
        }
        let p0 = &poly[0];
        let mut acc = [0.0; 3];
        for i in 1..poly.len() - 1 {
            let cr = cross(&sub(&poly[i], p0), &sub(&poly[i + 1], p0));
            for k in 0..3 {
                acc[k] += cr[k];
            }
        }
        0.5 * norm(&acc)
    }

    /// `ρ_{K-K}(θ)` for a unit vector, via widths over candidate normals.
    pub fn difference_radial(&self, theta: &[f64]) -> f64 {
        let mut cands: Vec<Vec<f64>> = self.facets.iter().map(|(a, _, _)| a.clone()).collect();
        if self.dim == 3 {
            for (u1, u2) in &self.edges {
                for (w1, w2) in &self.edges {
                    let c = cross(&sub(u2, u1), &sub(w2, w1));
                    if norm(&c) > 1e-12 {
                        cands.push(c.to_vec());
                    }
                }
            }
        }
        let mut best = f64::INFINITY;
        for u in cands {
            let ut = dot_f64(&u, theta).abs();
            if ut <= 1e-15 * norm(&u) {
                continue;
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in &self.vertices {
                let s = dot_f64(&u, v);
                lo = lo.min(s);
                hi = hi.max(s);
            }
            best = best.min((hi - lo) / ut);
        }
        best
    }

    /// Radii where the combinatorial type of `K ∩ (K + rθ)` can change,
    /// restricted to `(0, rmax)`, sorted, with `0` and `rmax` included.
    pub fn breakpoints(&self, theta: &[f64]) -> Vec<f64> {
        let rmax = self.difference_radial(theta);
        let mut r = vec![0.0, rmax];
        let mut push = |v: f64| {
            if v.is_finite() && v > 0.0 && v < rmax {
                r.push(v);
            }
        };
        for (a, b, na) in &self.facets {
            let d = dot_f64(a, theta);
            if d.abs() <= 1e-15 * na {
                continue;
            }
            for v in &self.vertices {
                let t = (b - dot_f64(a, v)) / d;
                push(t);
                push(-t);
            }
        }
        for v in &self.vertices {
            for w in &self.vertices {
                push(dot_f64(&sub(v, w), theta));
            }
        }
        if self.dim == 3 {
            for (u1, u2) in &self.edges {
                let d1 = sub(u2, u1);
                for (w1, w2) in &self.edges {
                    let d2 = sub(w2, w1);
                    let c = cross(&d1, &d2);
                    let den = dot_f64(&c, theta);
                    if den.abs() <= 1e-15 * norm(&c) {
                        continue;
                    }
                    let t = -dot_f64(&c, &sub(u1, w1)) / den;
                    push(t);
                    push(-t);
                }
            }
        }
        r.sort_by(|a, b| a.total_cmp(b));
        let tol = 1e-12 * rmax.max(1e-300);
        let mut out: Vec<f64> = Vec::with_capacity(r.len());
        for v in r {
            if out.last().is_none_or(|&l| v - l > tol) {
                out.push(v);
            } else if v == rmax {
                *out.last_mut().unwrap() = rmax;
            }
        }
        out
    }
}
