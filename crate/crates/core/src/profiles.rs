//! Lattice section profiles of the Steiner symmetral, the coefficients
//! `B_m(p)`, the root `m_0(p)` and the crossing point of the profiles.

use crate::error::{Error, Result};
use crate::lattice::{count_lattice, region};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polytope::{project_drop_last, slices_at_heights, vertical_section, Polytope};
use crate::rational::{floor_int, int_to_i64, pow_q, qi, to_f64, Q};
use crate::steiner::steiner_symmetrize;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

fn zero_pow(p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `B_m(p) = sum_{k=0}^{floor m} (p/m) (1 - k/m)^{n-1} (k/m)^{p-1}`, with `0^0 = 1`.
pub fn b_coeff(m: f64, p: f64, n: usize) -> f64 {
    assert!(m > 0.0 && p >= 1.0, "B_m(p) needs m > 0 and p >= 1");
    let top = m.floor() as i64;
    (0..=top)
        .map(|k| {
            let t = k as f64 / m;
            let pw = if k == 0 { zero_pow(p - 1.0) } else { t.powf(p - 1.0) };
            p / m * (1.0 - t).powi(n as i32 - 1) * pw
        })
        .sum()
}

/// Exact `B_m(p)` for rational `m` and integer `p`.
pub fn b_coeff_q(m: &Q, p: u32, n: usize) -> Q {
    assert!(m.is_positive() && p >= 1);
    let top = int_to_i64(&floor_int(m));
    let pq = qi(p as i64);
    (0..=top)
        .map(|k| {
            let t = qi(k) / m;
            &pq / m * pow_q(&(Q::one() - &t), n as u32 - 1) * pow_q(&t, p - 1)
        })
        .sum()
}

/// `h_p(x) = x^p B_x(p) = sum_k p (1 - k/x)^{n-1} k^{p-1}`.
pub fn h_func(x: f64, p: f64, n: usize) -> f64 {
    let top = x.floor() as i64;
    (0..=top)
        .map(|k| {
            let pw = if k == 0 { zero_pow(p - 1.0) } else { (k as f64).powf(p - 1.0) };
            p * (1.0 - k as f64 / x).powi(n as i32 - 1) * pw
        })
        .sum()
}

pub fn h_func_q(x: &Q, p: u32, n: usize) -> Q {
    let top = int_to_i64(&floor_int(x));
    let pq = qi(p as i64);
    (0..=top).map(|k| &pq * pow_q(&(Q::one() - qi(k) / x), n as u32 - 1) * pow_q(&qi(k), p - 1)).sum()
}

/// Integer columns `y` of `P(K)` with the section length above them.
pub fn column_lengths(k: &Polytope) -> Result<Vec<(Vec<i64>, Q)>> {
    let reg = region(k, 0)?;
    let mut out = Vec::new();
    for y in reg.columns() {
        let yq: Vec<Q> = y.iter().map(|&v| qi(v)).collect();
        if let Some(iv) = reg.column(&yq) {
            out.push((y, iv.length()));
        }
    }
    Ok(out)
}

/// Section length above `y` (zero outside the projection).
pub fn section_length(k: &Polytope, y: &[Q]) -> Result<Q> {
    Ok(vertical_section(k, y)?.map(|iv| iv.length()).unwrap_or_else(Q::zero))
}

/// `f(k) = G_{n-1}(S ∩ {x_n = k})` and `f̃(k) = G_{n-1}((S ∩ {x_n = k}) + C_{n-1})`
/// for `k = 0, 1, ...` up to the top of `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionProfiles {
    pub f: Vec<usize>,
    pub f_tilde: Vec<usize>,
    /// Largest `k` with `f(k) > 0`.
    pub m: usize,
    /// `G_{n-1}(P(K))`.
    pub base_count: usize,
}

impl SectionProfiles {
    pub fn f_at(&self, k: usize) -> usize {
        self.f.get(k).copied().unwrap_or(0)
    }

    pub fn f_tilde_at(&self, k: usize) -> usize {
        self.f_tilde.get(k).copied().unwrap_or(0)
    }

    /// `sum_k p k^{p-1} f̃(k)` (or `f`), exact for integer `p`.
    pub fn weighted_sum_q(&self, p: u32, tilde: bool) -> Q {
        let v = if tilde { &self.f_tilde } else { &self.f };
        let pq = qi(p as i64);
        v.iter().enumerate().map(|(k, &c)| &pq * pow_q(&qi(k as i64), p - 1) * qi(c as i64)).sum()
    }

    pub fn weighted_sum(&self, p: f64, tilde: bool) -> f64 {
        let v = if tilde { &self.f_tilde } else { &self.f };
        v.iter()
            .enumerate()
            .map(|(k, &c)| {
                let pw = if k == 0 { zero_pow(p - 1.0) } else { (k as f64).powf(p - 1.0) };
                p * pw * c as f64
            })
            .sum()
    }
}

pub fn section_profiles(k: &Polytope) -> Result<SectionProfiles> {
    let n = k.dim();
    let base_count = count_lattice(&project_drop_last(k)?, 0)?;
    if base_count == 0 {
        return Err(Error::EmptyProjectionLattice);
    }
    let s = steiner_symmetrize(k)?;
    let top = s.bounding_box().1[n - 1].clone();
    let kmax = int_to_i64(&floor_int(&top)).max(0) as usize;
    let mut f = Vec::with_capacity(kmax + 1);
    let mut f_tilde = Vec::with_capacity(kmax + 1);
    let heights: Vec<Q> = (0..=kmax).map(|h| qi(h as i64)).collect();
    for slice in slices_at_heights(&s, &heights)? {
        match slice {
            Some(sl) => {
                f.push(count_lattice(&sl, 0)?);
                f_tilde.push(count_lattice(&sl, n - 1)?);
            }
            None => {
                f.push(0);
                f_tilde.push(0);
            }
        }
    }
    let m = f.iter().rposition(|&c| c > 0).unwrap_or(0);
    Ok(SectionProfiles { f, f_tilde, m, base_count })
}

/// Condition (a): the lattice column count of `S(K)` is largest above the
/// origin; condition (b): `M >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub max_at_origin: bool,
    pub m: usize,
}

impl Hypotheses {
    pub fn satisfied(&self) -> bool {
        self.max_at_origin && self.m >= 1
    }
}

/// `G_1(S ∩ (y + <e_n>)) = 2 floor(len(y)/2) + 1` on the projection.
pub fn hypotheses(k: &Polytope) -> Result<Hypotheses> {
    let n = k.dim();
    let cols = column_lengths(k)?;
    let half = |l: &Q| int_to_i64(&floor_int(&(l / qi(2))));
    let best = cols.iter().map(|(_, l)| half(l)).max();
    let zero = vec![0i64; n - 1];
    let at_origin = cols.iter().find(|(y, _)| *y == zero).map(|(_, l)| half(l));
    let m = best.unwrap_or(0).max(0) as usize;
    Ok(Hypotheses { max_at_origin: at_origin.is_some() && at_origin == best, m })
}

/// `f^⋄(x) = max { len(y)/2 : y in P(K), |y - x|_∞ <= 1 }`, zero when empty.
pub fn diamond_extension(k: &Polytope, x: &[Q]) -> Result<Q> {
    let n = k.dim();
    if x.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, found: x.len() });
    }
    // variables: y (n-1), t1, t2
    let nv = n + 1;
    let mut obj = vec![Q::zero(); nv];
    obj[n - 1] = -Q::one();
    obj[n] = Q::one();
    let mut lp = LinearProgram::new(nv).maximize(obj);
    for h in k.halfspaces() {
        for t in [n - 1, n] {
            let mut row = vec![Q::zero(); nv];
            row[..n - 1].clone_from_slice(&h.normal[..n - 1]);
            row[t] = h.normal[n - 1].clone();
            lp.push(row, Relation::Le, h.offset.clone());
        }
    }
    for (j, xj) in x.iter().enumerate() {
        let mut row = vec![Q::zero(); nv];
        row[j] = Q::one();
        lp.push(row.clone(), Relation::Le, xj + Q::one());
        lp.push(row, Relation::Ge, xj - Q::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value / qi(2)),
        LpOutcome::Infeasible => Ok(Q::zero()),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// The root `m_0(p)`, exact when it is rational and found in closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootValue {
    pub value: f64,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub exact: Option<Q>,
}

const ROOT_TOL: f64 = 1e-13;

/// Smallest `m > 1` with `h_p(m) G_{n-1}(P) = sum_k p k^{p-1} f̃(k)`.
///
/// `h_p` is continuous and nondecreasing, so the root lies in the first
/// unit interval `(J - 1, J]` where `h_p(J)` reaches the target. For
/// `n = 2` and integer `p`, `h_p` is affine in `1/m` there and the root is
/// rational.
pub fn solve_m0(k: &Polytope, p: f64) -> Result<RootValue> {
    let prof = section_profiles(k)?;
    let hyp = hypotheses(k)?;
    if !hyp.satisfied() {
        return Err(Error::HypothesesViolated(format!(
            "column maximum at origin: {}, M = {}",
            hyp.max_at_origin, hyp.m
        )));
    }
    solve_m0_profiles(&prof, k.dim(), p)
}

pub fn solve_m0_profiles(prof: &SectionProfiles, n: usize, p: f64) -> Result<RootValue> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::ExponentOutOfRange(format!("m0 needs p >= 1, got {p}")));
    }
    let g = prof.base_count as f64;
    let integer = p.fract() == 0.0 && p <= 64.0;
    let reached = |j: i64| -> bool {
        if integer {
            let pi = p as u32;
            h_func_q(&qi(j), pi, n) * qi(prof.base_count as i64) >= prof.weighted_sum_q(pi, true)
        } else {
            h_func(j as f64, p, n) * g >= prof.weighted_sum(p, true)
        }
    };
    let mut hi = 2i64;
    while !reached(hi) {
        hi *= 2;
        if hi > 1 << 40 {
            return Err(Error::NoRoot("h_p never reaches the profile sum".into()));
        }
    }
    let mut lo = hi / 2;
    if lo < 1 {
        lo = 1;
    }
    // smallest integer J in (lo, hi] with reached(J)
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if reached(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let j = hi;
    if integer && n == 2 {
        // on (J-1, J]: sum_{k<J} p k^{p-1} (1 - k/m) = A - B/m
        let pi = p as u32;
        let pq = qi(pi as i64);
        let a: Q = (0..j).map(|k| &pq * pow_q(&qi(k), pi - 1)).sum();
        let b: Q = (0..j).map(|k| &pq * pow_q(&qi(k), pi)).sum();
        let target = prof.weighted_sum_q(pi, true) / qi(prof.base_count as i64);
        let denom = &a - &target;
        if denom.is_positive() && b.is_positive() {
            let m = b / denom;
            if m > qi(j - 1) && m <= qi(j) {
                return Ok(RootValue { value: to_f64(&m), exact: Some(m) });
            }
        }
        return Err(Error::NoRoot("closed-form root left its bracket".into()));
    }
    let target = prof.weighted_sum(p, true) / g;
    let (mut a, mut b) = ((j - 1) as f64, j as f64);
    let hf = |m: f64| -> f64 {
        // floor(m) = J - 1 inside the open bracket
        (0..j)
            .map(|k| {
                let pw = if k == 0 { zero_pow(p - 1.0) } else { (k as f64).powf(p - 1.0) };
                p * (1.0 - k as f64 / m).powi(n as i32 - 1) * pw
            })
            .sum()
    };
    while b - a > ROOT_TOL * b {
        let mid = 0.5 * (a + b);
        if hf(mid) >= target {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(RootValue { value: b, exact: None })
}

/// `g_p(k) = (1 - k/m_0)^{n-1} G_{n-1}(P)` on `[0, m_0]`, zero beyond.
pub fn g_profile(m0: &RootValue, n: usize, base_count: usize, k: usize) -> (f64, Option<Q>) {
    match &m0.exact {
        Some(m) => {
            let kq = qi(k as i64);
            let v = if &kq > m { Q::zero() } else { pow_q(&(Q::one() - kq / m), n as u32 - 1) * qi(base_count as i64) };
            (to_f64(&v), Some(v))
        }
        None => {
            let kf = k as f64;
            let v = if kf > m0.value { 0.0 } else { (1.0 - kf / m0.value).powi(n as i32 - 1) * base_count as f64 };
            (v, None)
        }
    }
}

const CROSS_TOL: f64 = 1e-9;

/// Smallest integer `k*` with `f̃(k) >= g_p(k)` for `k < k*` and
/// `g_p(k) >= f(k)` for `k >= k*`.
pub fn crossing_point(prof: &SectionProfiles, n: usize, m0: &RootValue) -> Result<usize> {
    let top = (m0.value.ceil() as usize + 1).max(prof.f.len());
    let ge = |a: usize, g: &(f64, Option<Q>), upper: bool| -> bool {
        match &g.1 {
            Some(q) => {
                if upper {
                    qi(a as i64) >= *q
                } else {
                    *q >= qi(a as i64)
                }
            }
            None => {
                if upper {
                    a as f64 >= g.0 - CROSS_TOL
                } else {
                    g.0 >= a as f64 - CROSS_TOL
                }
            }
        }
    };
    let gs: Vec<(f64, Option<Q>)> = (0..=top).map(|k| g_profile(m0, n, prof.base_count, k)).collect();
    for ks in 0..=top {
        let below = (0..ks).all(|k| ge(prof.f_tilde_at(k), &gs[k], true));
        let above = (ks..=top).all(|k| ge(prof.f_at(k), &gs[k], false));
        if below && above {
            return Ok(ks);
        }
    }
    Err(Error::NoCrossing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, make_polytope_i64, scale};
    use crate::rational::qr;

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(0.5, 1.0, 2), 2.0);
        assert_eq!(b_coeff(0.5, 2.0, 2), 0.0);
        assert!((b_coeff(2.0, 1.0, 2) - 0.75).abs() < 1e-15);
        assert_eq!(b_coeff_q(&qi(2), 1, 2), qr(3, 4));
        assert_eq!(b_coeff_q(&qr(1, 2), 1, 2), qi(2));
        assert_eq!(b_coeff_q(&qi(3), 3, 2), qr(2, 9));
        assert!((h_func(3.0, 1.0, 2) - 2.0).abs() < 1e-15);
        assert_eq!(h_func_q(&qi(3), 1, 2), qi(2));
    }

    #[test]
    fn b_coeff_tends_to_beta_integral() {
        // m B_m(p) / m -> p ∫_0^1 (1-t)^{n-1} t^{p-1} = 1 / C(n-1+p, n-1)
        let v = b_coeff(1000.0, 1.0, 2);
        assert!((v - 0.5005).abs() < 1e-12);
    }

    #[test]
    fn square_profiles() {
        let k = cube(2, &qi(-1), &qi(1));
        let pr = section_profiles(&k).unwrap();
        assert_eq!(pr.f, vec![3, 3]);
        assert_eq!(pr.f_tilde, vec![3, 3]);
        assert_eq!(pr.m, 1);
        assert_eq!(pr.base_count, 3);
        let h = hypotheses(&k).unwrap();
        assert!(h.satisfied());
    }

    #[test]
    fn unit_square_and_triangle_profiles() {
        let pr = section_profiles(&cube(2, &qi(0), &qi(1))).unwrap();
        assert_eq!(pr.m, 0);
        assert_eq!(pr.f[0], 2);
        let t2 = scale(&make_polytope_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap(), &qi(2));
        let pr = section_profiles(&t2).unwrap();
        assert_eq!(pr.f[0], 3);
        assert_eq!(pr.f[1], 1);
        assert_eq!(pr.m, 1);
    }

    #[test]
    fn profiles_match_column_lengths() {
        let k = make_polytope_i64(&[&[0, -2], &[3, 1], &[-1, 3], &[2, -1]]).unwrap();
        let pr = section_profiles(&k).unwrap();
        let cols = column_lengths(&k).unwrap();
        for (h, &c) in pr.f.iter().enumerate() {
            let want = cols.iter().filter(|(_, l)| *l >= qi(2 * h as i64)).count();
            assert_eq!(c, want, "height {h}");
        }
    }

    #[test]
    fn diamond_examples() {
        let sq = cube(2, &qi(-1), &qi(1));
        assert_eq!(diamond_extension(&sq, &[qi(0)]).unwrap(), qi(1));
        let t = make_polytope_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(diamond_extension(&t, &[qi(-1)]).unwrap(), qr(1, 2));
        assert_eq!(diamond_extension(&t, &[qi(2)]).unwrap(), qi(0));
        assert_eq!(diamond_extension(&t, &[qi(5)]).unwrap(), qi(0));
    }

    #[test]
    fn m0_and_crossing_on_square() {
        let k = cube(2, &qi(-1), &qi(1));
        let r = solve_m0(&k, 1.0).unwrap();
        assert_eq!(r.exact, Some(qi(3)));
        let pr = section_profiles(&k).unwrap();
        assert_eq!(crossing_point(&pr, 2, &r).unwrap(), 2);
    }

    #[test]
    fn m0_violations() {
        let k = cube(2, &qi(0), &qi(1));
        assert!(matches!(solve_m0(&k, 1.0), Err(Error::HypothesesViolated(_))));
    }

    #[test]
    fn m0_float_agrees_with_exact() {
        let k = cube(2, &qi(-2), &qi(2));
        let exact = solve_m0(&k, 2.0).unwrap();
        let pr = section_profiles(&k).unwrap();
        let target = pr.weighted_sum(2.0, true) / pr.base_count as f64;
        let v = exact.value;
        assert!((h_func(v, 2.0, 2) - target).abs() < 1e-9);
        // perturb p slightly to force the float path
        let near = solve_m0_profiles(&pr, 2, 2.0 + 1e-9).unwrap();
        assert!((near.value - v).abs() < 1e-6);
    }

    #[test]
    fn m0_in_three_dimensions() {
        let k = cube(3, &qi(-1), &qi(1));
        let r = solve_m0(&k, 1.0).unwrap();
        let pr = section_profiles(&k).unwrap();
        let target = pr.weighted_sum(1.0, true) / pr.base_count as f64;
        assert!((h_func(r.value, 1.0, 3) - target).abs() < 1e-9);
        assert!(r.value >= pr.m as f64);
        crossing_point(&pr, 3, &r).unwrap();
    }
}
