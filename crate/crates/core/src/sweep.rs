//! Scaling limits: rescaled lattice quantities of `λK` against their
//! continuous counterparts, and `B_x(p)` as `x` grows.

use crate::error::{Error, Result};
use crate::lattice::{count_lattice, mu_measure, mu_measure_open};
use crate::moments::binom_q;
use crate::polytope::{max_section_anchor, project_drop_last, scale, translate, volume, Polytope};
use crate::profiles::{b_coeff, column_lengths, section_profiles, solve_m0_profiles};
use crate::rational::{pow_q, qi, to_f64, Q};
use crate::sections::{base_volume, section_power, slab_moment};
use crate::steiner::steiner_symmetrize;
use crate::suite::zhang_constant;
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    GnVolume,
    MuVolume,
    DiscreteToContinuousZhang,
    PurelyDiscreteToContinuous,
    BLimit,
}

impl SweepTarget {
    pub const ALL: [SweepTarget; 5] = [
        SweepTarget::GnVolume,
        SweepTarget::MuVolume,
        SweepTarget::DiscreteToContinuousZhang,
        SweepTarget::PurelyDiscreteToContinuous,
        SweepTarget::BLimit,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scale: f64,
    pub label: String,
    pub value: f64,
    pub reference: f64,
    pub rel_error: f64,
}

fn row(scale: &Q, label: &str, value: f64, reference: f64) -> SweepRow {
    SweepRow {
        scale: to_f64(scale),
        label: label.into(),
        value,
        reference,
        rel_error: (value - reference).abs() / reference.abs(),
    }
}

/// Translate so the longest vertical section passes through the origin.
fn anchored(k: &Polytope) -> Result<Polytope> {
    let (y, _) = max_section_anchor(k)?;
    let shift: Vec<Q> = y.iter().map(|v| -v).chain(std::iter::once(Q::zero())).collect();
    Ok(translate(k, &shift))
}

pub fn limit_sweep(k: &Polytope, target: SweepTarget, scales: &[Q]) -> Result<Vec<SweepRow>> {
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sweep scales must increase".into()));
    }
    let n = k.dim();
    let nn = n as u32;
    let vol = volume(k);
    let mut rows = Vec::new();
    match target {
        SweepTarget::GnVolume | SweepTarget::MuVolume => {
            for lam in scales {
                let kl = scale(k, lam);
                let c =
                    if target == SweepTarget::GnVolume { qi(count_lattice(&kl, 0)? as i64) } else { mu_measure(&kl)? };
                let v = c / pow_q(lam, nn);
                rows.push(row(lam, "value", to_f64(&v), to_f64(&vol)));
            }
        }
        SweepTarget::DiscreteToContinuousZhang => {
            let ka = anchored(k)?;
            let c = zhang_constant(n);
            let lhs_ref = &c * section_power(&ka, nn + 1)? / qi(n as i64 + 1);
            let rhs_ref = pow_q(&vol, nn + 1) / pow_q(&base_volume(&ka)?, nn);
            for lam in scales {
                let kl = scale(&ka, lam);
                let norm = pow_q(lam, 2 * nn);
                let sum: Q = column_lengths(&kl)?.iter().map(|(_, l)| pow_q(l, nn + 1)).sum();
                let lhs = &c * sum / qi(n as i64 + 1) / &norm;
                let g = qi(count_lattice(&project_drop_last(&kl)?, 0)? as i64);
                let mu = mu_measure_open(&steiner_symmetrize(&kl)?, n - 1)?;
                let rhs = pow_q(&mu, nn + 1) / pow_q(&g, nn) / &norm;
                rows.push(row(lam, "lhs", to_f64(&lhs), to_f64(&lhs_ref)));
                rows.push(row(lam, "rhs", to_f64(&rhs), to_f64(&rhs_ref)));
            }
        }
        SweepTarget::PurelyDiscreteToContinuous => {
            let ka = anchored(k)?;
            let c = zhang_constant(n);
            let slab = slab_moment(&steiner_symmetrize(&ka)?, n as f64)?;
            let lhs_ref = to_f64(&c) * slab.value;
            let rhs_ref = to_f64(&(pow_q(&vol, nn + 1) / pow_q(&base_volume(&ka)?, nn)));
            for lam in scales {
                let kl = scale(&ka, lam);
                let prof = section_profiles(&kl)?;
                let norm = to_f64(&pow_q(lam, 2 * nn));
                let p = project_drop_last(&kl)?;
                let gs = count_lattice(&steiner_symmetrize(&kl)?, n - 1)?;
                let gp = count_lattice(&p, n - 1)?;
                let rhs = ((gs + gp) as f64).powi(n as i32 + 1) / (prof.base_count as f64).powi(n as i32) / norm;
                let lhs = if prof.m == 0 {
                    0.0
                } else {
                    let m0 = solve_m0_profiles(&prof, n, 1.0)?;
                    let moment: f64 = prof
                        .f
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(h, &cnt)| 2.0 * (h as f64).powi(n as i32) * cnt as f64)
                        .sum();
                    let factor = (n + 1) as f64 * b_coeff(m0.value, 1.0, n).powi(n as i32 + 1)
                        / b_coeff(m0.value, (n + 1) as f64, n);
                    factor * 2f64.powi(n as i32) * moment / norm
                };
                rows.push(row(lam, "lhs", lhs, lhs_ref));
                rows.push(row(lam, "rhs", rhs, rhs_ref));
            }
        }
        SweepTarget::BLimit => {
            for p in [1u32, 2] {
                let reference = 1.0 / to_f64(&binom_q(n - 1, p));
                for x in scales {
                    rows.push(row(x, &format!("p={p}"), b_coeff(to_f64(x), p as f64, n), reference));
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cube;

    #[test]
    fn square_lattice_count_limit() {
        let k = cube(2, &qi(0), &qi(1));
        let rows = limit_sweep(&k, SweepTarget::GnVolume, &[qi(10), qi(64)]).unwrap();
        assert!((rows[0].value - 1.21).abs() < 1e-12);
        assert!((rows[0].rel_error - 0.21).abs() < 1e-12);
        assert!((rows[1].rel_error - ((65.0f64 / 64.0).powi(2) - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn b_limit_rows() {
        let k = cube(2, &qi(0), &qi(1));
        let rows = limit_sweep(&k, SweepTarget::BLimit, &[qi(1000)]).unwrap();
        assert!((rows[0].value - 0.5005).abs() < 1e-12);
        assert_eq!(rows[0].reference, 0.5);
        assert!((rows[1].reference - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn scales_must_increase() {
        let k = cube(2, &qi(0), &qi(1));
        assert!(limit_sweep(&k, SweepTarget::MuVolume, &[qi(3), qi(2)]).is_err());
    }
}
