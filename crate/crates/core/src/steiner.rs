//! Steiner symmetrization in the direction of the last coordinate.

use crate::error::{Error, Result};
use crate::polytope::{from_halfspaces, Halfspace, Polytope};
use crate::rational::{qi, Q};
use num::{Signed, Zero};

/// `S(K) = {(y, t) : y in P(K), |t| <= vol_1(K ∩ (y + <e_n>)) / 2}`.
///
/// The section length is `min_i u_i(y) - max_j l_j(y)` over upper facets
/// `t <= u_i(y)` and lower facets `t >= l_j(y)`, so `S(K)` is cut out by
/// `±2t <= u_i(y) - l_j(y)` for all pairs plus the vertical facets.
pub fn steiner_symmetrize(p: &Polytope) -> Result<Polytope> {
    let n = p.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    if !p.is_full_dim() {
        return Err(Error::DegenerateBody("symmetrization needs a full-dimensional body".into()));
    }
    let mut upper: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut lower: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut hs: Vec<Halfspace> = Vec::new();
    for h in p.halfspaces() {
        let an = &h.normal[n - 1];
        if an.is_zero() {
            hs.push(h.clone());
            continue;
        }
        // t <= or >= (b - a'y)/a_n, stored as (coefficients of y, constant)
        let coef: Vec<Q> = h.normal[..n - 1].iter().map(|v| -v / an).collect();
        let c = &h.offset / an;
        if an.is_positive() {
            upper.push((coef, c));
        } else {
            lower.push((coef, c));
        }
    }
    for (uc, u0) in &upper {
        for (lc, l0) in &lower {
            // ±2t - (u - l)'y <= u0 - l0
            let diff: Vec<Q> = uc.iter().zip(lc).map(|(a, b)| -(a - b)).collect();
            for s in [2i64, -2] {
                let mut normal = diff.clone();
                normal.push(qi(s));
                hs.push(Halfspace::new(normal, u0 - l0));
            }
        }
    }
    from_halfspaces(n, &hs)?.ok_or_else(|| Error::DegenerateBody("empty symmetral".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, make_polytope, make_polytope_i64, volume};
    use crate::rational::qr;

    #[test]
    fn triangle_symmetral() {
        let t = make_polytope_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let s = steiner_symmetrize(&t).unwrap();
        let expect = make_polytope(&[vec![qi(0), qr(1, 2)], vec![qi(0), qr(-1, 2)], vec![qi(1), qi(0)]], 2).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn square_symmetral() {
        let s = steiner_symmetrize(&cube(2, &qi(0), &qi(1))).unwrap();
        let expect = make_polytope(
            &[vec![qi(0), qr(-1, 2)], vec![qi(0), qr(1, 2)], vec![qi(1), qr(-1, 2)], vec![qi(1), qr(1, 2)]],
            2,
        )
        .unwrap();
        assert_eq!(s, expect);
        assert_eq!(volume(&s), qi(1));
    }

    #[test]
    fn degenerate_input_rejected() {
        let seg = make_polytope_i64(&[&[0, 0], &[1, 1]]).unwrap();
        assert!(matches!(steiner_symmetrize(&seg), Err(Error::DegenerateBody(_))));
    }
}
