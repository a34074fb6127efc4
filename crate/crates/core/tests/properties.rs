use billiard_core::bounds::{hard_rod_bounds, three_mass_bound, wedge_bound};
use billiard_core::collision::closed_form_angle;
use billiard_core::linalg::{
    orthogonal_complement, principal_angles, subspace_intersection, MassVector, Subspace,
};
use billiard_core::rng;
use billiard_core::sim::reflect;
use billiard_core::suite::random_subspace_pair;
use nalgebra::DVector;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn mass() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn angles_sorted_bounded_symmetric(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 0);
        let (f, g) = random_subspace_pair(&mut r, 12, 6).unwrap();
        let a = principal_angles(&f, &g).unwrap();
        let b = principal_angles(&g, &f).unwrap();
        prop_assert_eq!(a.len(), f.dim().min(g.dim()));
        prop_assert!(a.angles.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(a.angles.iter().all(|x| (0.0..=FRAC_PI_2).contains(x)));
        prop_assert!(a.max_abs_diff(&b.angles) < 1e-10);
    }

    #[test]
    fn intersection_dim_counts_zero_angles(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 1);
        let (f, g) = random_subspace_pair(&mut r, 10, 6).unwrap();
        let zeros = principal_angles(&f, &g).unwrap().zero_count(1e-8);
        prop_assert_eq!(subspace_intersection(&f, &g).unwrap().dim(), zeros);
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 2);
        let (f, _) = random_subspace_pair(&mut r, 10, 10).unwrap();
        let back = orthogonal_complement(&orthogonal_complement(&f));
        prop_assert_eq!(back.dim(), f.dim());
        let a = principal_angles(&f, &back).unwrap();
        prop_assert!(a.angles.iter().all(|x| *x < 1e-8));
    }

    #[test]
    fn hyperplanes_meet_at_the_normal_angle(n in 2usize..9, seed in any::<u64>()) {
        let mut r = rng::stream(seed, 3);
        let a = rng::unit_vector(&mut r, n);
        let b = rng::unit_vector(&mut r, n);
        let hyperplane = |v: &DVector<f64>| orthogonal_complement(&Subspace::span(std::slice::from_ref(v)).unwrap());
        let angles = principal_angles(&hyperplane(&a), &hyperplane(&b)).unwrap().angles;
        let want = a.dot(&b).abs().min(1.0).acos();
        prop_assert_eq!(angles.len(), n - 1);
        prop_assert!(angles[..n - 2].iter().all(|x| *x < 1e-8));
        prop_assert!((angles[n - 2] - want).abs() < 1e-9);
    }

    #[test]
    fn closed_form_is_symmetric_and_scale_free(i in mass(), j in mass(), k in mass(), l in mass()) {
        let base = closed_form_angle(i, j, k).unwrap();
        prop_assert!(base > 0.0 && base < FRAC_PI_2);
        prop_assert!((closed_form_angle(k, j, i).unwrap() - base).abs() < 1e-12);
        prop_assert!((closed_form_angle(l * i, l * j, l * k).unwrap() - base).abs() < 1e-9);
        prop_assert!(three_mass_bound(i, j, k).unwrap() >= 3);
    }

    #[test]
    fn wedge_bound_is_a_ceiling(alpha in 1e-3f64..PI) {
        let b = wedge_bound(alpha).unwrap() as f64;
        prop_assert!(b * alpha >= PI * (1.0 - 1e-9));
        prop_assert!((b - 1.0) * alpha < PI);
    }

    #[test]
    fn arithmetic_condition_implies_geometric(masses in prop::collection::vec(mass(), 2..8)) {
        let n = masses.len();
        let r = hard_rod_bounds(n, &MassVector::new(masses).unwrap()).unwrap();
        if r[2].applicable == Some(true) {
            prop_assert_eq!(r[1].applicable, Some(true));
        }
    }

    #[test]
    fn reflection_is_an_involution(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 4);
        let (wall, _) = random_subspace_pair(&mut r, 8, 7).unwrap();
        let n = wall.ambient_dim();
        prop_assume!(wall.dim() < n);
        let v = rng::gaussian_vector(&mut r, n);
        let m = wall.metric().clone();
        let plus = reflect(&v, &wall).unwrap();
        prop_assert!((m.norm(&plus) - m.norm(&v)).abs() < 1e-10 * m.norm(&v));
        prop_assert!((wall.project(&plus) - wall.project(&v)).norm() < 1e-10 * v.norm());
        prop_assert!((reflect(&plus, &wall).unwrap() - &v).norm() < 1e-10 * v.norm());
    }
}
