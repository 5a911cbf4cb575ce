use num::{Signed, Zero};
use proptest::prelude::*;
use std::collections::BTreeSet;
use zforge::lattice::{count_lattice, lattice_points, mu_measure, projection_count};
use zforge::linalg::det;
use zforge::moments::covariogram;
use zforge::polytope::{
    make_polytope, minkowski_sum, project_drop_last, scale, slice_at_height, slices_at_heights, transform, volume,
    Polytope,
};
use zforge::profiles::{h_func_q, section_profiles};
use zforge::rational::{qi, qr, Q};
use zforge::steiner::steiner_symmetrize;
use zforge::suite::{verify, CheckParams, Verdict};

fn body(dim: usize, max_pts: usize) -> impl Strategy<Value = Polytope> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, dim), dim + 1..=max_pts).prop_filter_map(
        "flat",
        move |pts| {
            let q: Vec<Vec<Q>> = pts.iter().map(|p| p.iter().map(|&c| qr(c, 2)).collect()).collect();
            make_polytope(&q, dim).ok().filter(|p| p.is_full_dim())
        },
    )
}

fn planar() -> impl Strategy<Value = Polytope> {
    body(2, 7)
}

fn vertex_set(p: &Polytope) -> BTreeSet<Vec<Q>> {
    p.vertices().iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich(k in planar()) {
        let g = qi(count_lattice(&k, 0).unwrap() as i64);
        let gp = qi(projection_count(&k, 0).unwrap() as i64);
        let mu = mu_measure(&k).unwrap();
        prop_assert!(&g - &gp <= mu && mu <= &g + &gp);
    }

    #[test]
    fn symmetral_preserves_volume_and_mu(k in planar()) {
        let s = steiner_symmetrize(&k).unwrap();
        prop_assert_eq!(volume(&s), volume(&k));
        prop_assert_eq!(mu_measure(&s).unwrap(), mu_measure(&k).unwrap());
    }

    #[test]
    fn symmetral_is_idempotent(k in planar()) {
        let s = steiner_symmetrize(&k).unwrap();
        prop_assert_eq!(vertex_set(&steiner_symmetrize(&s).unwrap()), vertex_set(&s));
    }

    #[test]
    fn symmetral_commutes_with_dilation(k in planar(), num in 1i64..=7, den in 1i64..=3) {
        let lam = qr(num, den);
        let a = steiner_symmetrize(&scale(&k, &lam)).unwrap();
        let b = scale(&steiner_symmetrize(&k).unwrap(), &lam);
        prop_assert_eq!(vertex_set(&a), vertex_set(&b));
    }

    #[test]
    fn symmetral_sections_are_centered(k in planar()) {
        let s = steiner_symmetrize(&k).unwrap();
        for v in s.vertices() {
            let mirrored = vec![v[0].clone(), -v[1].clone()];
            prop_assert!(s.contains(&mirrored));
        }
    }

    #[test]
    fn affine_volume_scaling(k in planar(), m in prop::collection::vec(-3i64..=3, 4), b in prop::collection::vec(-3i64..=3, 2)) {
        let a = vec![vec![qi(m[0]), qi(m[1])], vec![qi(m[2]), qi(m[3])]];
        let d = det(&a);
        prop_assume!(!d.is_zero());
        let t = transform(&k, &a, &[qi(b[0]), qi(b[1])]).unwrap();
        prop_assert_eq!(volume(&t), d.abs() * volume(&k));
    }

    #[test]
    fn covariogram_decreases_along_rays(k in planar(), dx in -3i64..=3, dy in -3i64..=3) {
        prop_assume!(dx != 0 || dy != 0);
        let mut last = f64::INFINITY;
        for r in 0..6 {
            let x = vec![qr(dx * r, 4), qr(dy * r, 4)];
            let g = covariogram(&k, &x).value;
            prop_assert!(g <= last + 1e-12);
            last = g;
        }
    }

    #[test]
    fn projection_commutes_with_minkowski_sum(k in planar(), l in planar()) {
        let a = project_drop_last(&minkowski_sum(&k, &l).unwrap()).unwrap();
        let b = minkowski_sum(&project_drop_last(&k).unwrap(), &project_drop_last(&l).unwrap()).unwrap();
        prop_assert_eq!(vertex_set(&a), vertex_set(&b));
    }

    #[test]
    fn open_sums_contain_more_points(k in planar()) {
        let closed: BTreeSet<Vec<i64>> = lattice_points(&k, 0).unwrap().points.into_iter().collect();
        let open: BTreeSet<Vec<i64>> = lattice_points(&k, 1).unwrap().points.into_iter().collect();
        prop_assert!(closed.is_subset(&open));
    }

    #[test]
    fn profiles_are_ordered(k in planar()) {
        if let Ok(prof) = section_profiles(&k) {
            for (a, b) in prof.f.iter().zip(&prof.f_tilde) {
                prop_assert!(a <= b);
            }
            prop_assert!(prof.f.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn h_is_nondecreasing(a in 1i64..=40, b in 1i64..=40, p in 1u32..=3, n in 2usize..=3) {
        let (x, y) = (qr(a.min(b), 4), qr(a.max(b), 4));
        prop_assert!(h_func_q(&x, p, n) <= h_func_q(&y, p, n));
    }

    #[test]
    fn exact_identities_hold(k in planar()) {
        let params = CheckParams::default();
        for id in ["identity_triple_discrete", "mu_gn_sandwich", "different_inclusion", "discrete_zhang_mu"] {
            let r = verify(id, &k, &params).unwrap();
            prop_assert!(r.skipped || r.verdict == Verdict::Holds, "{} {:?}", id, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn batch_slices_match(k in body(3, 7), hs in prop::collection::vec(-14i64..=14, 1..6)) {
        let rs: Vec<Q> = hs.iter().map(|&h| qr(h, 4)).collect();
        let batch = slices_at_heights(&k, &rs).unwrap();
        for (r, b) in rs.iter().zip(batch) {
            let one = slice_at_height(&k, r).unwrap();
            prop_assert_eq!(one.map(|p| vertex_set(&p)), b.map(|p| vertex_set(&p)));
        }
    }

    #[test]
    fn spatial_symmetral_invariants(k in body(3, 6)) {
        let s = steiner_symmetrize(&k).unwrap();
        prop_assert_eq!(volume(&s), volume(&k));
        prop_assert_eq!(mu_measure(&s).unwrap(), mu_measure(&k).unwrap());
        prop_assert_eq!(vertex_set(&steiner_symmetrize(&s).unwrap()), vertex_set(&s));
        let g = qi(count_lattice(&k, 0).unwrap() as i64);
        let gp = qi(projection_count(&k, 0).unwrap() as i64);
        let mu = mu_measure(&k).unwrap();
        prop_assert!(&g - &gp <= mu && mu <= &g + &gp);
    }
}
