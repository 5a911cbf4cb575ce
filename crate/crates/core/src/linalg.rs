//! Exact Gaussian elimination over the rationals.

use crate::rational::Q;
use num::{One, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for v in m[r].iter_mut().skip(c) {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Rank of the differences `p_i - p_0`; -1 for an empty set.
pub fn affine_rank<P: AsRef<[Q]>>(points: &[P]) -> isize {
    if points.is_empty() {
        return -1;
    }
    let p0 = points[0].as_ref();
    let rows: Vec<Vec<Q>> =
        points[1..].iter().map(|p| p.as_ref().iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    rank(&rows) as isize
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of a square system, if the matrix is nonsingular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}
