//! Covariogram, ray moments `p ∫_0^∞ r^{p-1} g(rθ) dr` by several
//! independent routes, radial functions of radial mean bodies and Ball
//! bodies, the polar projection body, and volumes of star bodies.

use crate::clip::FloatBody;
use crate::error::{Error, Result};
use crate::lattice::{count_lattice, discrete_ray_moment, ray_decomposition, FloatRays};
use crate::linalg::nullspace;
use crate::polytope::{
    intersect, projection_volume, transform, translate, volume, Direction, MeasureValue, Polytope, ShadowFunction,
};
use crate::quadrature::{self, gauss_legendre};
use crate::rational::{self, dot, pow_q, rational_root, rational_sqrt, to_f64, Q};
use crate::sections::{slab_moment, SectionCells};
use crate::steiner::steiner_symmetrize;
use num::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::sync::Arc;

/// `vol(K ∩ (x + K))`, exact.
pub fn covariogram(p: &Polytope, x: &[Q]) -> MeasureValue {
    assert_eq!(x.len(), p.dim(), "covariogram argument dimension");
    let shifted = translate(p, x);
    match intersect(p, &shifted).expect("same dimension") {
        Some(c) if c.is_full_dim() => MeasureValue::exact(volume(&c)),
        _ => MeasureValue::exact(Q::zero()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentRoute {
    RayQuadrature,
    SymmetralSlab,
    ProjectionPower,
    DiscreteExact,
    DiscreteOpenExact,
}

#[derive(Clone, Debug)]
pub struct MomentRequest {
    pub body: Polytope,
    pub direction: Direction,
    pub exponent: f64,
    pub route: MomentRoute,
}

impl MomentRequest {
    pub fn new(body: Polytope, direction: Direction, exponent: f64, route: MomentRoute) -> Self {
        MomentRequest { body, direction, exponent, route }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "body": crate::polytope::to_json(&self.body),
            "direction": self.direction.raw.iter().map(rational::q_to_json).collect::<Vec<_>>(),
            "exponent": self.exponent,
            "route": self.route,
        })
    }
}

fn is_last_axis(dir: &Direction) -> bool {
    let n = dir.dim();
    dir.raw[..n - 1].iter().all(|v| v.is_zero())
}

/// `p ∫_0^∞ r^{p-1} g(rθ) dr` for the continuous covariogram (first two
/// routes and projection-power) or the discrete ones.
pub fn continuous_ray_moment(req: &MomentRequest) -> Result<MeasureValue> {
    let p = req.exponent;
    let n = req.body.dim();
    if req.direction.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: req.direction.dim() });
    }
    let lower = if req.route == MomentRoute::ProjectionPower { -1.0 } else { 0.0 };
    if !(p > lower) || !p.is_finite() {
        return Err(Error::ExponentOutOfRange(format!("{p} for route {:?}", req.route)));
    }
    match req.route {
        MomentRoute::RayQuadrature => {
            let fb = FloatBody::new(&req.body)?;
            let (v, e) = ray_quadrature(&fb, &req.direction.unit, p);
            Ok(MeasureValue::approx(v, e))
        }
        MomentRoute::SymmetralSlab => {
            if !is_last_axis(&req.direction) {
                return Err(Error::RouteUnsupported("symmetral-slab needs the last coordinate axis".into()));
            }
            slab_moment(&steiner_symmetrize(&req.body)?, p)
        }
        MomentRoute::ProjectionPower => {
            if !is_last_axis(&req.direction) {
                return Err(Error::RouteUnsupported("projection-power needs the last coordinate axis".into()));
            }
            let m = section_power_integral(&req.body, &req.direction, p + 1.0)?;
            let out = m.div(&exponent_value(p + 1.0));
            Ok(if p < 0.0 { out.uncertified() } else { out })
        }
        MomentRoute::DiscreteExact | MomentRoute::DiscreteOpenExact => {
            let open = req.route == MomentRoute::DiscreteOpenExact;
            discrete_ray_moment(&ray_decomposition(&req.body, &req.direction, open)?, p)
        }
    }
}

fn exponent_value(p: f64) -> MeasureValue {
    MeasureValue::exact(rational::from_f64(p))
}

/// Binary64 `p ∫_0^∞ r^{p-1} g(rθ) dr` for a unit vector, with an error
/// estimate. On each segment between breakpoints `g` is a polynomial of
/// degree at most `n` in `r`.
pub fn ray_quadrature(fb: &FloatBody, theta: &[f64], p: f64) -> (f64, f64) {
    let bps = fb.breakpoints(theta);
    let n = fb.dim;
    let m = ((n as f64 + p) / 2.0).ceil() as usize + 2;
    let integer = p.fract() == 0.0;
    let g = |r: f64| {
        let x: Vec<f64> = theta.iter().map(|t| t * r).collect();
        fb.covariogram(&x)
    };
    let f = |r: f64| if r <= 0.0 { 0.0 } else { p * r.powf(p - 1.0) * g(r) };
    let (mut total, mut err, mut mag) = (0.0, 0.0, 0.0);
    for (k, w) in bps.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (q1, q2) = if k == 0 && !integer {
            (first_segment(&g, b, p, n), first_segment(&g, b, p, n + 1))
        } else if integer {
            (quadrature::integrate(m, a, b, f), quadrature::integrate(m + 1, a, b, f))
        } else {
            (quadrature::integrate(m + 2, a, b, f), quadrature::integrate(m + 6, a, b, f))
        };
        total += q2;
        err += (q1 - q2).abs();
        mag += q2.abs();
    }
    (total, err + 1e-13 * mag + 1e-300)
}

/// `∫_0^b p r^{p-1} g(r) dr` with `g` replaced by its interpolant of the
/// given degree at Chebyshev nodes; exact when `g` is such a polynomial.
fn first_segment<G: Fn(f64) -> f64>(g: &G, b: f64, p: f64, degree: usize) -> f64 {
    let k = degree + 1;
    let nodes: Vec<f64> = (0..k).map(|i| 0.5 * (1.0 - (PI * (2 * i + 1) as f64 / (2 * k) as f64).cos())).collect();
    let vals: Vec<f64> = nodes.iter().map(|s| g(s * b)).collect();
    let c = vandermonde_solve(&nodes, &vals);
    b.powf(p) * c.iter().enumerate().map(|(j, cj)| p * cj / (p + j as f64)).sum::<f64>()
}

fn vandermonde_solve(x: &[f64], y: &[f64]) -> Vec<f64> {
    let k = x.len();
    let mut m: Vec<Vec<f64>> = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let mut r: Vec<f64> = (0..k).map(|j| xi.powi(j as i32)).collect();
            r.push(*yi);
            r
        })
        .collect();
    for c in 0..k {
        let piv = (c..k).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, piv);
        for r in 0..k {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..=k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    (0..k).map(|i| m[i][k] / m[i][i]).collect()
}

/// `∫_{θ^⊥} vol_1(K ∩ (y + Rθ))^alpha dy`.
///
/// A rational map sends `θ` to the last axis; the Jacobian of its
/// restriction to `θ^⊥` and the stretch along `θ` are divided out, so the
/// result is exact whenever those factors are rational.
pub fn section_power_integral(p: &Polytope, dir: &Direction, alpha: f64) -> Result<MeasureValue> {
    let n = p.dim();
    if dir.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: dir.dim() });
    }
    let integral = |body: &Polytope| -> Result<MeasureValue> {
        let cells = SectionCells::new(body)?;
        if alpha >= 0.0 && alpha.fract() == 0.0 && alpha <= 64.0 {
            Ok(MeasureValue::exact(cells.power_integral(alpha as u32)))
        } else {
            cells.power_integral_f64(alpha)
        }
    };
    if is_last_axis(dir) {
        return integral(p);
    }
    let mut a = nullspace(std::slice::from_ref(&dir.raw), n);
    let gram: Q = {
        let g: Vec<Vec<Q>> = a.iter().map(|r| a.iter().map(|s| dot(r, s)).collect()).collect();
        crate::linalg::det(&g)
    };
    a.push(dir.raw.clone());
    let image = transform(p, &a, &vec![Q::zero(); n])?;
    let raw = integral(&image)?;
    let nsq: Q = dir.raw.iter().map(|v| v * v).sum();
    if let (Some(v), true) = (&raw.exact, alpha.fract() == 0.0 && alpha >= 0.0) {
        let f2 = &gram * pow_q(&nsq, alpha as u32);
        if let Some(f) = rational_sqrt(&f2) {
            return Ok(MeasureValue::exact(v / f));
        }
    }
    let factor = to_f64(&gram).sqrt() * to_f64(&nsq).powf(alpha / 2.0);
    let v = raw.value / factor;
    Ok(MeasureValue::approx(v, raw.abs_error / factor + 8.0 * f64::EPSILON * (1.0 + alpha.abs()) * v.abs()))
}

/// `x^{1/p}`, exact when `p` is a positive integer and the root is rational.
pub fn root(x: &MeasureValue, p: f64) -> MeasureValue {
    if p > 0.0 && p.fract() == 0.0 && p <= 64.0 {
        if let Some(q) = x.exact.as_ref().and_then(|q| rational_root(q, p as u32)) {
            return MeasureValue::exact(q);
        }
    }
    x.powf(1.0 / p)
}

/// `ρ_{R_p(K)}(θ) = ( ∫_{θ^⊥} len^{p+1} / ((p+1) vol(K)) )^{1/p}`.
pub fn radial_rp(p: &Polytope, dir: &Direction, exponent: f64) -> Result<MeasureValue> {
    if !(exponent > -1.0) || exponent == 0.0 || !exponent.is_finite() {
        return Err(Error::ExponentOutOfRange(format!("{exponent}")));
    }
    let vol = volume(p);
    if vol.is_zero() {
        return Err(Error::DegenerateBody("radial mean body of a degenerate body".into()));
    }
    let m = section_power_integral(p, dir, exponent + 1.0)?;
    let base = m.div(&exponent_value(exponent + 1.0).mul(&MeasureValue::exact(vol)));
    let out = root(&base, exponent);
    Ok(if exponent < 0.0 { out.uncertified() } else { out })
}

/// Covariogram source of a Ball body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallSource {
    /// `g_K`.
    Continuous,
    /// `g̃_K(x) = #(K ∩ (x + K) ∩ Z^n)`.
    DiscreteK,
    /// `g̃_{K+C_n}` normalized by `G_n(K + C_n)`.
    DiscreteKPlusCn,
    /// `g̃_{K+C_n}` normalized by `G_n(K)`.
    TildeScaled,
}

fn origin_in(p: &Polytope) -> bool {
    p.contains(&vec![Q::zero(); p.dim()])
}

/// `ρ_{K_p(g)}(θ) = ( p ∫_0^∞ r^{p-1} g(rθ) dr / g(0) )^{1/p}`.
pub fn radial_ball_body(src: BallSource, p: &Polytope, dir: &Direction, exponent: f64) -> Result<MeasureValue> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(Error::ExponentOutOfRange(format!("{exponent}")));
    }
    let (moment, base) = match src {
        BallSource::Continuous => {
            let vol = volume(p);
            if vol.is_zero() {
                return Err(Error::ZeroBase);
            }
            let req = MomentRequest::new(p.clone(), dir.clone(), exponent, MomentRoute::RayQuadrature);
            (continuous_ray_moment(&req)?, vol)
        }
        _ => {
            if !origin_in(p) {
                return Err(Error::OriginMissing);
            }
            let open = src != BallSource::DiscreteK;
            let base = match src {
                BallSource::DiscreteKPlusCn => count_lattice(p, p.dim())?,
                _ => count_lattice(p, 0)?,
            };
            if base == 0 {
                return Err(Error::ZeroBase);
            }
            let dec = ray_decomposition(p, dir, open)?;
            (discrete_ray_moment(&dec, exponent)?, Q::from_integer((base as i64).into()))
        }
    };
    Ok(root(&moment.div(&MeasureValue::exact(base)), exponent))
}

/// `ρ_{Π*K}(θ) = 1 / vol_{n-1}(K | θ^⊥)`.
pub fn polar_projection_radial(p: &Polytope, dir: &Direction) -> Result<MeasureValue> {
    if !p.is_full_dim() {
        return Err(Error::DegenerateBody("polar projection body of a degenerate body".into()));
    }
    let v = projection_volume(p, dir)?;
    Ok(MeasureValue::exact(Q::one()).div(&v))
}

/// A star body given by its radial function on unit vectors.
#[derive(Clone)]
pub struct StarRadial {
    pub dim: usize,
    /// Angles (`n = 2`) where the radial function may fail to be smooth.
    pub kinks: Vec<f64>,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for StarRadial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarRadial").field("dim", &self.dim).field("kinks", &self.kinks.len()).finish()
    }
}

fn body_kinks(p: &Polytope) -> Vec<f64> {
    if p.dim() != 2 {
        return Vec::new();
    }
    let v = p.vertices_f64();
    let mut out = Vec::new();
    for h in p.halfspaces() {
        let a: Vec<f64> = h.normal.iter().map(to_f64).collect();
        let t = a[1].atan2(a[0]);
        out.extend([t, t + PI, t + PI / 2.0, t - PI / 2.0]);
    }
    for x in &v {
        for y in &v {
            if x != y {
                out.push((x[1] - y[1]).atan2(x[0] - y[0]));
            }
        }
    }
    out.into_iter().map(|t| t.rem_euclid(2.0 * PI)).collect()
}

impl StarRadial {
    pub fn from_fn<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(dim: usize, kinks: Vec<f64>, f: F) -> Self {
        StarRadial { dim, kinks, f: Arc::new(f) }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        StarRadial::from_fn(dim, Vec::new(), move |_| c)
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        (self.f)(theta)
    }

    pub fn ball_body(src: BallSource, p: &Polytope, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) {
            return Err(Error::ExponentOutOfRange(format!("{exponent}")));
        }
        let kinks = body_kinks(p);
        let n = p.dim();
        match src {
            BallSource::Continuous => {
                let vol = to_f64(&volume(p));
                if vol == 0.0 {
                    return Err(Error::ZeroBase);
                }
                let fb = FloatBody::new(p)?;
                Ok(StarRadial::from_fn(n, kinks, move |t| {
                    (ray_quadrature(&fb, t, exponent).0 / vol).powf(1.0 / exponent)
                }))
            }
            _ => {
                if !origin_in(p) {
                    return Err(Error::OriginMissing);
                }
                let open = src != BallSource::DiscreteK;
                let base = match src {
                    BallSource::DiscreteKPlusCn => count_lattice(p, n)?,
                    _ => count_lattice(p, 0)?,
                } as f64;
                if base == 0.0 {
                    return Err(Error::ZeroBase);
                }
                let rays = FloatRays::new(p, open)?;
                Ok(StarRadial::from_fn(n, kinks, move |t| (rays.moment(t, exponent) / base).powf(1.0 / exponent)))
            }
        }
    }

    pub fn polar_projection(p: &Polytope) -> Result<Self> {
        if !p.is_full_dim() {
            return Err(Error::DegenerateBody("polar projection body of a degenerate body".into()));
        }
        let s = ShadowFunction::new(p)?;
        Ok(StarRadial::from_fn(p.dim(), body_kinks(p), move |t| 1.0 / s.eval(t)))
    }

    /// Radial function of `(K ∩ Z^n) - K`.
    pub fn difference_set(p: &Polytope) -> Result<Self> {
        let rays = FloatRays::new(p, false)?;
        if rays.count() == 0 {
            return Err(Error::ZeroBase);
        }
        Ok(StarRadial::from_fn(p.dim(), body_kinks(p), move |t| rays.endpoints(t).into_iter().fold(0.0, f64::max)))
    }
}

/// Quadrature rule on the unit circle or sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereRule {
    /// Composite 3-point Gauss on `n` equal arcs plus the kink angles.
    Circle(usize),
    /// Gauss in `z` times equal azimuth steps.
    Product(usize, usize),
}

impl SphereRule {
    pub fn default_for(dim: usize) -> Self {
        if dim == 2 {
            SphereRule::Circle(2048)
        } else {
            SphereRule::Product(32, 64)
        }
    }
}

/// `vol(L) = (1/n) ∫_{S^{n-1}} ρ_L^n`.
pub fn star_volume(r: &StarRadial, rule: SphereRule) -> Result<MeasureValue> {
    match (r.dim, rule) {
        (2, SphereRule::Circle(m)) => {
            let mut angles: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
            angles.extend(r.kinks.iter().copied());
            angles.push(2.0 * PI);
            angles.sort_by(|a, b| a.total_cmp(b));
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
            let g3 = gauss_legendre(3);
            let g2 = gauss_legendre(2);
            let parts: Vec<(f64, f64)> = angles
                .par_windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    let (h, c) = (0.5 * (b - a), 0.5 * (a + b));
                    let f = |x: f64| {
                        let t = c + h * x;
                        r.eval(&[t.cos(), t.sin()]).powi(2) / 2.0
                    };
                    let q3: f64 = g3.iter().map(|(x, w)| w * f(*x)).sum::<f64>() * h;
                    let q2: f64 = g2.iter().map(|(x, w)| w * f(*x)).sum::<f64>() * h;
                    (q3, (q3 - q2).abs())
                })
                .collect();
            let v: f64 = parts.iter().map(|p| p.0).sum();
            let e: f64 = parts.iter().map(|p| p.1).sum();
            Ok(MeasureValue::approx(v, e + 1e-13 * v.abs()))
        }
        (3, SphereRule::Product(nz, nphi)) => {
            let eval = |nz: usize, nphi: usize| -> f64 {
                let nodes = quadrature::sphere_product_rule(nz, nphi);
                let vals: Vec<f64> = nodes.par_iter().map(|(u, w)| w * r.eval(u).powi(3)).collect();
                vals.iter().sum::<f64>() / 3.0
            };
            let fine = eval(nz, nphi);
            let coarse = eval((nz / 2).max(2), (nphi / 2).max(4));
            Ok(MeasureValue::approx(fine, (fine - coarse).abs() + 1e-13 * fine.abs()))
        }
        (d, rule) => Err(Error::RouteUnsupported(format!("sphere rule {rule:?} in dimension {d}"))),
    }
}

/// Binomial coefficient `C(n + p, n)` for real `p`.
pub fn binom_real(n: usize, p: f64) -> f64 {
    (1..=n).map(|k| (p + k as f64) / k as f64).product()
}

/// Exact `C(n + p, n)` for integer `p`.
pub fn binom_q(n: usize, p: u32) -> Q {
    (1..=n).map(|k| Q::from_integer(((p as usize + k) as i64).into()) / Q::from_integer((k as i64).into())).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, make_polytope_i64, standard_simplex};
    use crate::rational::{qi, qr};

    fn e(n: usize, i: usize) -> Direction {
        Direction::axis(n, i)
    }

    #[test]
    fn covariogram_examples() {
        let sq = cube(2, &qi(0), &qi(1));
        assert_eq!(covariogram(&sq, &[qr(1, 2), qi(0)]).exact, Some(qr(1, 2)));
        assert_eq!(covariogram(&sq, &[qi(0), qi(0)]).exact, Some(qi(1)));
        assert_eq!(covariogram(&sq, &[qi(2), qi(0)]).exact, Some(qi(0)));
    }

    #[test]
    fn square_routes() {
        let sq = cube(2, &qi(0), &qi(1));
        for route in [MomentRoute::SymmetralSlab, MomentRoute::ProjectionPower] {
            let r = continuous_ray_moment(&MomentRequest::new(sq.clone(), e(2, 1), 2.0, route)).unwrap();
            assert_eq!(r.exact, Some(qr(1, 3)), "{route:?}");
            let r = continuous_ray_moment(&MomentRequest::new(sq.clone(), e(2, 1), 1.0, route)).unwrap();
            assert_eq!(r.exact, Some(qr(1, 2)), "{route:?}");
        }
        let r =
            continuous_ray_moment(&MomentRequest::new(sq.clone(), e(2, 1), 2.0, MomentRoute::RayQuadrature)).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-13 && r.abs_error < 1e-10);
    }

    #[test]
    fn route_constraints() {
        let sq = cube(2, &qi(0), &qi(1));
        let d = Direction::from_ints(&[1, 1]).unwrap();
        let r = continuous_ray_moment(&MomentRequest::new(sq.clone(), d, 1.0, MomentRoute::SymmetralSlab));
        assert!(matches!(r, Err(Error::RouteUnsupported(_))));
        let r = continuous_ray_moment(&MomentRequest::new(sq.clone(), e(2, 1), -0.5, MomentRoute::RayQuadrature));
        assert!(matches!(r, Err(Error::ExponentOutOfRange(_))));
        assert!(continuous_ray_moment(&MomentRequest::new(sq, e(2, 1), -0.5, MomentRoute::ProjectionPower)).is_ok());
    }

    #[test]
    fn fractional_ray_quadrature() {
        let t = standard_simplex(3);
        let fb = FloatBody::new(&t).unwrap();
        for p in [0.5, 1.5, 2.5] {
            let (v, err) = ray_quadrature(&fb, &[0.0, 0.0, 1.0], p);
            let want = section_power_integral(&t, &e(3, 2), p + 1.0).unwrap().value / (p + 1.0);
            assert!((v - want).abs() < 1e-11 && err < 1e-8, "p={p}: {v} vs {want} err {err}");
        }
    }

    #[test]
    fn radial_mean_examples() {
        let sq = cube(2, &qi(0), &qi(1));
        assert_eq!(radial_rp(&sq, &e(2, 1), 1.0).unwrap().exact, Some(qr(1, 2)));
        let t = standard_simplex(2);
        assert_eq!(radial_rp(&t, &e(2, 1), 1.0).unwrap().exact, Some(qr(1, 3)));
        let big = radial_rp(&sq, &e(2, 1), 64.0).unwrap().value * binom_real(2, 64.0).powf(1.0 / 64.0);
        assert!(big >= 1.0 && big < 1.06, "{big}");
        let neg = radial_rp(&t, &e(2, 1), -0.5).unwrap();
        assert!(!neg.certified);
        // (∫(1-y)^{1/2} / ((1/2)(1/2)))^{-2} = (8/3)^{-2}
        assert!((neg.value - 9.0 / 64.0).abs() < 1e-12, "{}", neg.value);
        assert!(matches!(radial_rp(&t, &e(2, 1), 0.0), Err(Error::ExponentOutOfRange(_))));
    }

    #[test]
    fn rotated_section_integrals() {
        let sq = cube(2, &qi(0), &qi(1));
        // along (3,4)/5 the exact factors are rational
        let d = Direction::from_ints(&[3, 4]).unwrap();
        let got = radial_rp(&sq, &d, 1.0).unwrap();
        let want = radial_ball_body(BallSource::Continuous, &sq, &d, 1.0).unwrap();
        assert!(got.is_exact());
        assert!((got.value - want.value).abs() < 1e-12);
        let d = Direction::from_ints(&[1, 2, 2]).unwrap();
        let k = make_polytope_i64(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).unwrap();
        for p in [1.0, 2.0, 0.5] {
            let a = radial_rp(&k, &d, p).unwrap();
            let b = radial_ball_body(BallSource::Continuous, &k, &d, p).unwrap();
            assert!((a.value - b.value).abs() < 1e-10, "p={p}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn ball_body_examples() {
        let two = cube(2, &qi(0), &qi(2));
        let one = cube(2, &qi(0), &qi(1));
        let x = e(2, 0);
        assert_eq!(radial_ball_body(BallSource::DiscreteK, &two, &x, 1.0).unwrap().exact, Some(qi(1)));
        assert_eq!(radial_ball_body(BallSource::DiscreteK, &one, &x, 1.0).unwrap().exact, Some(qr(1, 2)));
        assert_eq!(radial_ball_body(BallSource::TildeScaled, &one, &x, 1.0).unwrap().exact, Some(qr(3, 2)));
        let off = cube(2, &qi(1), &qi(2));
        assert_eq!(radial_ball_body(BallSource::DiscreteK, &off, &x, 1.0), Err(Error::OriginMissing));
    }

    #[test]
    fn polar_projection_examples() {
        let one = cube(2, &qi(0), &qi(1));
        let two = cube(2, &qi(0), &qi(2));
        assert_eq!(polar_projection_radial(&one, &e(2, 1)).unwrap().exact, Some(qi(1)));
        assert_eq!(polar_projection_radial(&two, &e(2, 1)).unwrap().exact, Some(qr(1, 2)));
        let t = standard_simplex(2);
        let r = polar_projection_radial(&t, &Direction::from_ints(&[1, 1]).unwrap()).unwrap();
        assert!((r.value - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn star_volumes() {
        let v = star_volume(&StarRadial::constant(2, 1.0), SphereRule::default_for(2)).unwrap();
        assert!((v.value - PI).abs() < 1e-6);
        let v = star_volume(&StarRadial::constant(3, 1.0), SphereRule::default_for(3)).unwrap();
        assert!((v.value - 4.0 * PI / 3.0).abs() < 1e-10);
        let t = standard_simplex(2);
        let v = star_volume(&StarRadial::polar_projection(&t).unwrap(), SphereRule::default_for(2)).unwrap();
        assert!((v.value - 3.0).abs() < 2e-3, "{v:?}");
        let sq = cube(2, &qi(0), &qi(1));
        let v =
            star_volume(&StarRadial::ball_body(BallSource::DiscreteK, &sq, 2.0).unwrap(), SphereRule::default_for(2))
                .unwrap();
        assert!((v.value - 1.0).abs() < 1e-3, "{v:?}");
    }
}
