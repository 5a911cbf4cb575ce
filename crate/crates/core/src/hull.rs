//! Exact convex hulls (incremental beneath-beyond) and vertex enumeration
//! of bounded halfspace systems (polar duality).

use crate::error::{Error, Result};
use crate::linalg::{affine_rank, nullspace, rank, rref, solve};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{dot, primitive_scale, qi, Q};
use num::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A halfspace `normal · x <= offset` with a primitive integer normal.
pub type RawHalfspace = (Vec<Q>, Q);

#[derive(Clone, Debug)]
pub struct Hull {
    pub affine_dim: usize,
    /// Extreme points, lexicographically sorted.
    pub vertices: Vec<Vec<Q>>,
    /// Facet halfspaces; for lower-dimensional hulls the affine hull is
    /// appended as pairs of opposite halfspaces.
    pub halfspaces: Vec<RawHalfspace>,
    /// Vertex indices on each facet (facets only, not the equality pairs).
    pub incidence: Vec<Vec<usize>>,
}

pub fn canonical(normal: &[Q], offset: &Q) -> RawHalfspace {
    primitive_scale(normal, offset)
}

fn sorted_unique(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let set: BTreeSet<Vec<Q>> = points.iter().cloned().collect();
    set.into_iter().collect()
}

/// Indices of an affinely independent subset spanning the affine hull.
fn affine_basis(points: &[Vec<Q>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut idx = vec![0];
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let dim = points[0].len();
    for (i, p) in points.iter().enumerate().skip(1) {
        if rows.len() == dim {
            break;
        }
        let d: Vec<Q> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        rows.push(d);
        if rank(&rows) == rows.len() {
            idx.push(i);
        } else {
            rows.pop();
        }
    }
    idx
}

pub fn convex_hull(points: &[Vec<Q>]) -> Hull {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let dim = points[0].len();
    let pts = sorted_unique(points);
    let basis = affine_basis(&pts);
    let d = basis.len() - 1;
    if d == dim {
        return full_hull(&pts, &basis);
    }
    let p0 = pts[0].clone();
    let dirs: Vec<Vec<Q>> = basis[1..].iter().map(|&i| pts[i].iter().zip(&p0).map(|(a, b)| a - b).collect()).collect();
    let mut equalities: Vec<RawHalfspace> = Vec::new();
    for w in nullspace(&dirs, dim) {
        let off = dot(&w, &p0);
        equalities.push(canonical(&w, &off));
        let neg: Vec<Q> = w.iter().map(|v| -v.clone()).collect();
        equalities.push(canonical(&neg, &-off));
    }
    if d == 0 {
        return Hull { affine_dim: 0, vertices: vec![p0], halfspaces: equalities, incidence: Vec::new() };
    }
    let mut m = dirs.clone();
    let pivots = rref(&mut m);
    let proj: Vec<Vec<Q>> = pts.iter().map(|p| pivots.iter().map(|&j| p[j].clone()).collect()).collect();
    let lift = |a: &[Q]| -> Vec<Q> {
        let mut v = vec![Q::zero(); dim];
        for (k, &j) in pivots.iter().enumerate() {
            v[j] = a[k].clone();
        }
        v
    };
    let (sub_vertices, sub_facets, sub_inc): (Vec<usize>, Vec<RawHalfspace>, Vec<Vec<usize>>) = if d == 1 {
        let (mut lo, mut hi) = (0, 0);
        for i in 0..proj.len() {
            if proj[i][0] < proj[lo][0] {
                lo = i;
            }
            if proj[i][0] > proj[hi][0] {
                hi = i;
            }
        }
        let mut vs = vec![lo, hi];
        vs.sort();
        let lo_pos = vs.iter().position(|&v| v == lo).unwrap();
        let hi_pos = 1 - lo_pos;
        let f = vec![canonical(&[-Q::one()], &-proj[lo][0].clone()), canonical(&[Q::one()], &proj[hi][0].clone())];
        (vs, f, vec![vec![lo_pos], vec![hi_pos]])
    } else {
        let sub_basis = affine_basis(&proj);
        let h = full_hull_indexed(&proj, &sub_basis);
        (h.0, h.1, h.2)
    };
    let mut halfspaces: Vec<RawHalfspace> = sub_facets.iter().map(|(a, b)| canonical(&lift(a), b)).collect();
    let incidence = sub_inc;
    halfspaces.extend(equalities);
    let vertices = sub_vertices.iter().map(|&i| pts[i].clone()).collect();
    Hull { affine_dim: d, vertices, halfspaces, incidence }
}

struct Facet {
    normal: Vec<Q>,
    offset: Q,
    inc: Vec<usize>,
}

fn hyperplane(points: &[&Vec<Q>], interior: &[Q]) -> Option<RawHalfspace> {
    let p0 = points[0];
    let rows: Vec<Vec<Q>> = points[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let ns = nullspace(&rows, p0.len());
    if ns.len() != 1 {
        return None;
    }
    let mut a = ns.into_iter().next().unwrap();
    let mut b = dot(&a, p0);
    if dot(&a, interior) > b {
        a = a.into_iter().map(|v| -v).collect();
        b = -b;
    }
    Some(canonical(&a, &b))
}

fn full_hull(pts: &[Vec<Q>], basis: &[usize]) -> Hull {
    let (vs, facets, inc) = full_hull_indexed(pts, basis);
    Hull {
        affine_dim: pts[0].len(),
        vertices: vs.iter().map(|&i| pts[i].clone()).collect(),
        halfspaces: facets,
        incidence: inc,
    }
}

/// Full-dimensional hull; returns (vertex indices into `pts`, facets,
/// incidence as positions in the vertex list).
fn full_hull_indexed(pts: &[Vec<Q>], basis: &[usize]) -> (Vec<usize>, Vec<RawHalfspace>, Vec<Vec<usize>>) {
    let d = pts[0].len();
    let k = Q::from_integer((basis.len() as i64).into());
    let interior: Vec<Q> = (0..d).map(|j| basis.iter().map(|&i| pts[i][j].clone()).sum::<Q>() / &k).collect();
    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..basis.len() {
        let members: Vec<usize> = basis.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, &i)| i).collect();
        let refs: Vec<&Vec<Q>> = members.iter().map(|&i| &pts[i]).collect();
        let (normal, offset) = hyperplane(&refs, &interior).expect("independent simplex facet");
        let mut inc = members.clone();
        inc.sort();
        facets.push(Facet { normal, offset, inc });
    }
    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for pi in 0..pts.len() {
        if in_basis.contains(&pi) {
            continue;
        }
        let p = &pts[pi];
        let side: Vec<Q> = facets.iter().map(|f| dot(&f.normal, p) - &f.offset).collect();
        let visible: Vec<usize> = (0..facets.len()).filter(|&i| side[i].is_positive()).collect();
        if visible.is_empty() {
            for (i, f) in facets.iter_mut().enumerate() {
                if side[i].is_zero() {
                    f.inc.push(pi);
                    f.inc.sort();
                }
            }
            continue;
        }
        let mut new_facets: Vec<Facet> = Vec::new();
        let mut coplanar_hits: BTreeSet<usize> = BTreeSet::new();
        for &fi in &visible {
            for gi in 0..facets.len() {
                if side[gi].is_positive() {
                    continue;
                }
                let common: Vec<usize> =
                    facets[fi].inc.iter().filter(|x| facets[gi].inc.binary_search(x).is_ok()).copied().collect();
                if common.len() + 1 < d {
                    continue;
                }
                let cpts: Vec<&Vec<Q>> = common.iter().map(|&i| &pts[i]).collect();
                if affine_rank(&cpts) != d as isize - 2 {
                    continue;
                }
                if side[gi].is_zero() {
                    coplanar_hits.insert(gi);
                    continue;
                }
                let sub = affine_basis(&cpts.iter().map(|p| (*p).clone()).collect::<Vec<_>>());
                let mut refs: Vec<&Vec<Q>> = sub.iter().map(|&t| cpts[t]).collect();
                refs.push(p);
                let Some((normal, offset)) = hyperplane(&refs, &interior) else {
                    continue;
                };
                let mut inc = common.clone();
                inc.push(pi);
                inc.sort();
                if let Some(existing) = new_facets.iter_mut().find(|f| f.normal == normal && f.offset == offset) {
                    let merged: BTreeSet<usize> = existing.inc.iter().chain(inc.iter()).copied().collect();
                    existing.inc = merged.into_iter().collect();
                } else {
                    new_facets.push(Facet { normal, offset, inc });
                }
            }
        }
        let vis: BTreeSet<usize> = visible.into_iter().collect();
        let mut kept: Vec<Facet> = Vec::new();
        for (i, mut f) in facets.into_iter().enumerate() {
            if vis.contains(&i) {
                continue;
            }
            if coplanar_hits.contains(&i) || side[i].is_zero() {
                if !f.inc.contains(&pi) {
                    f.inc.push(pi);
                    f.inc.sort();
                }
            }
            kept.push(f);
        }
        for nf in new_facets {
            if let Some(existing) = kept.iter_mut().find(|f| f.normal == nf.normal && f.offset == nf.offset) {
                let merged: BTreeSet<usize> = existing.inc.iter().chain(nf.inc.iter()).copied().collect();
                existing.inc = merged.into_iter().collect();
            } else {
                kept.push(nf);
            }
        }
        facets = kept;
    }
    // Extreme points are those whose incident normals span the space.
    let mut on: BTreeSet<usize> = BTreeSet::new();
    for f in &facets {
        on.extend(f.inc.iter().copied());
    }
    let mut vertex_ids: Vec<usize> = Vec::new();
    for &pi in &on {
        let normals: Vec<Vec<Q>> =
            facets.iter().filter(|f| f.inc.binary_search(&pi).is_ok()).map(|f| f.normal.clone()).collect();
        if rank(&normals) == d {
            vertex_ids.push(pi);
        }
    }
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    let pos = |pi: usize| vertex_ids.binary_search(&pi).ok();
    let incidence = facets.iter().map(|f| f.inc.iter().filter_map(|&i| pos(i)).collect()).collect();
    let hs = facets.into_iter().map(|f| (f.normal, f.offset)).collect();
    (vertex_ids, hs, incidence)
}

pub fn dedupe_halfspaces(hs: &[RawHalfspace]) -> Vec<RawHalfspace> {
    let set: BTreeSet<RawHalfspace> =
        hs.iter().filter(|(a, _)| a.iter().any(|v| !v.is_zero())).map(|(a, b)| canonical(a, b)).collect();
    set.into_iter().collect()
}

/// Vertices of the bounded set `{x : a_i · x <= b_i}`; `None` when empty.
pub fn halfspace_vertices(dim: usize, hs: &[RawHalfspace]) -> Result<Option<Vec<Vec<Q>>>> {
    for (a, b) in hs {
        if a.iter().all(|v| v.is_zero()) && b.is_negative() {
            return Ok(None);
        }
    }
    let hs = dedupe_halfspaces(hs);
    if dim == 1 {
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for (a, b) in &hs {
            let t = b / &a[0];
            if a[0].is_positive() {
                hi = Some(match hi {
                    Some(h) if h <= t => h,
                    _ => t,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l >= t => l,
                    _ => t,
                });
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Unbounded);
        };
        return Ok(match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => Some(vec![vec![lo]]),
            std::cmp::Ordering::Less => Some(vec![vec![lo], vec![hi]]),
        });
    }
    let mut lp = LinearProgram::new(dim + 1);
    let mut obj = vec![Q::zero(); dim + 1];
    obj[dim] = Q::one();
    lp = lp.maximize(obj);
    for (a, b) in &hs {
        let mut row = a.clone();
        row.push(Q::one());
        lp.push(row, Relation::Le, b.clone());
    }
    let mut cap = vec![Q::zero(); dim + 1];
    cap[dim] = Q::one();
    lp.push(cap, Relation::Le, Q::one());
    let (x, s) = match lp.solve() {
        LpOutcome::Optimal { x, value } => (x, value),
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => return Err(Error::Unbounded),
    };
    if s.is_negative() {
        return Ok(None);
    }
    let c: Vec<Q> = x[..dim].to_vec();
    if s.is_positive() {
        let polar: Vec<Vec<Q>> = hs
            .iter()
            .map(|(a, b)| {
                let beta = b - dot(a, &c);
                a.iter().map(|v| v / &beta).collect()
            })
            .collect();
        let h = convex_hull(&polar);
        if h.affine_dim != dim || h.halfspaces.iter().any(|(_, eta)| !eta.is_positive()) {
            return Err(Error::Unbounded);
        }
        let mut verts: Vec<Vec<Q>> =
            h.halfspaces.iter().map(|(n, eta)| n.iter().zip(&c).map(|(v, ci)| v / eta + ci).collect()).collect();
        verts.sort();
        verts.dedup();
        return Ok(Some(verts));
    }
    Ok(Some(brute_force_vertices(dim, &hs)))
}

fn brute_force_vertices(dim: usize, hs: &[RawHalfspace]) -> Vec<Vec<Q>> {
    let m = hs.len();
    let mut out: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    if m < dim {
        return Vec::new();
    }
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| hs[i].0.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| hs[i].1.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if hs.iter().all(|(n, o)| dot(n, &x) <= *o) {
                out.insert(x);
            }
        }
        // next combination
        let mut k = dim;
        loop {
            if k == 0 {
                return out.into_iter().collect();
            }
            k -= 1;
            if idx[k] < m - dim + k {
                idx[k] += 1;
                for t in k + 1..dim {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Unit-weight helper used by tests: integer point list.
pub fn int_points(v: &[&[i64]]) -> Vec<Vec<Q>> {
    v.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = int_points(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 1], &[1, 0], &[2, 1]]);
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices, int_points(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]));
        assert_eq!(h.halfspaces.len(), 4);
        assert!(h.incidence.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn cube_hull() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![qi(x), qi(y), qi(z)]);
                }
            }
        }
        pts.push(vec![qr(1, 2), qr(1, 2), qi(1)]);
        let h = convex_hull(&pts);
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.halfspaces.len(), 6);
        assert!(h.incidence.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn lower_dimensional_hull() {
        let pts = int_points(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let h = convex_hull(&pts);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
        // 4 edges + 2 equality halfspaces
        assert_eq!(h.halfspaces.len(), 6);
        let seg = convex_hull(&int_points(&[&[0, 0], &[2, 2], &[1, 1]]));
        assert_eq!(seg.affine_dim, 1);
        assert_eq!(seg.vertices, int_points(&[&[0, 0], &[2, 2]]));
    }

    #[test]
    fn halfspace_vertices_of_triangle_and_degenerate() {
        let hs = vec![(vec![qi(-1), qi(0)], qi(0)), (vec![qi(0), qi(-1)], qi(0)), (vec![qi(1), qi(1)], qi(1))];
        assert_eq!(halfspace_vertices(2, &hs).unwrap().unwrap(), int_points(&[&[0, 0], &[0, 1], &[1, 0]]));
        let flat = vec![
            (vec![qi(-1), qi(0)], qi(0)),
            (vec![qi(1), qi(0)], qi(0)),
            (vec![qi(0), qi(-1)], qi(0)),
            (vec![qi(0), qi(1)], qi(1)),
        ];
        assert_eq!(halfspace_vertices(2, &flat).unwrap().unwrap(), int_points(&[&[0, 0], &[0, 1]]));
        let empty = vec![
            (vec![qi(1), qi(0)], qi(-1)),
            (vec![qi(-1), qi(0)], qi(0)),
            (vec![qi(0), qi(1)], qi(1)),
            (vec![qi(0), qi(-1)], qi(1)),
        ];
        assert!(halfspace_vertices(2, &empty).unwrap().is_none());
    }
}
