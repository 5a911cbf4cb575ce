//! Gauss–Legendre rules and direction sets on the circle and sphere.

use gauss_quad::legendre::GaussLegendre;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights on `[-1, 1]` for an `m`-point rule (cached).
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(f64, f64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("quadrature cache").get(&m) {
        return v.clone();
    }
    let rule = if m <= 1 {
        vec![(0.0, 2.0)]
    } else {
        let mut v: Vec<(f64, f64)> = GaussLegendre::new(m).expect("rule order").as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    cache.lock().expect("quadrature cache").insert(m, rule.clone());
    rule
}

/// `∫_a^b f` with an `m`-point rule.
pub fn integrate<F: FnMut(f64) -> f64>(m: usize, a: f64, b: f64, mut f: F) -> f64 {
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    gauss_legendre(m).iter().map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// `n` equally spaced angles in `[0, 2π)` as unit vectors.
pub fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Low-discrepancy (golden spiral) points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Product rule on the sphere: Gauss–Legendre in `z`, equal steps in azimuth.
/// Weights sum to `4π`.
pub fn sphere_product_rule(nz: usize, nphi: usize) -> Vec<(Vec<f64>, f64)> {
    let gl = gauss_legendre(nz);
    let mut out = Vec::with_capacity(nz * nphi);
    let dphi = 2.0 * PI / nphi as f64;
    for (z, wz) in gl {
        let r = (1.0 - z * z).max(0.0).sqrt();
        for k in 0..nphi {
            let phi = (k as f64 + 0.5) * dphi;
            out.push((vec![r * phi.cos(), r * phi.sin(), z], wz * dphi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        for m in 1..8 {
            let deg = 2 * m - 1;
            let got = integrate(m, 0.0, 2.0, |x| x.powi(deg as i32));
            let want = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-12 * want, "m={m}");
        }
    }

    #[test]
    fn sphere_rule_area_and_moments() {
        let rule = sphere_product_rule(16, 32);
        assert!(rule.len() >= 512);
        let area: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((area - 4.0 * PI).abs() < 1e-12);
        let z2: f64 = rule.iter().map(|(u, w)| u[2] * u[2] * w).sum();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
        let x4: f64 = rule.iter().map(|(u, w)| u[0].powi(4) * w).sum();
        assert!((x4 - 4.0 * PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn fibonacci_points_are_unit() {
        for u in fibonacci_sphere(100) {
            let n: f64 = u.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
