use std::f64::consts::PI;

use htype_core::geometry::{cc_distance, distance_between, distance_from_norms, eps_bounds, ratio_sample};
use htype_core::{build_structure, GroupPoint};
use proptest::prelude::*;

proptest! {
    #[test]
    fn distance_is_homogeneous(xn in 1e-3..10.0f64, zn in 1e-3..10.0f64, a in 0.1..5.0f64) {
        let d = distance_from_norms(xn, zn).unwrap().d;
        let da = distance_from_norms(a * xn, a * a * zn).unwrap().d;
        prop_assert!((da - a * d).abs() <= 1e-10 * a * d);
    }

    #[test]
    fn ratio_within_sharp_bounds(lx in -4.0..4.0f64, lz in -4.0..4.0f64) {
        let r = ratio_sample(10f64.powf(lx), 10f64.powf(lz)).unwrap().ratio;
        prop_assert!(r >= PI / 4.0 - 1e-12 && r <= PI + 1e-12);
    }

    #[test]
    fn eps_bounds_hold(xn in 0.0..10.0f64, zn in 0.0..10.0f64, eps in 0.01..0.99f64) {
        prop_assume!(xn + zn > 1e-6);
        let d = distance_from_norms(xn, zn).unwrap().d;
        let b = eps_bounds(eps, xn, zn).unwrap();
        prop_assert!(b.lower <= d * d * (1.0 + 1e-12) && d * d <= b.upper * (1.0 + 1e-12));
    }

    #[test]
    fn left_invariant(v in prop::collection::vec(-2.0..2.0f64, 15)) {
        let s = build_structure(2, 3).unwrap();
        let g = GroupPoint::new(v[0..4].to_vec(), v[4..7].to_vec());
        let h = GroupPoint::new(v[7..11].to_vec(), v[11..14].to_vec());
        let k = GroupPoint::new(vec![v[14], 0.3, -0.7, 1.1], vec![0.2, -0.4, v[14]]);
        let d0 = distance_between(&s, &g, &h).unwrap().d;
        let d1 = distance_between(&s, &s.multiply(&k, &g).unwrap(), &s.multiply(&k, &h).unwrap()).unwrap().d;
        prop_assert!((d0 - d1).abs() <= 1e-9 * (1.0 + d0));
        let back = distance_between(&s, &h, &g).unwrap().d;
        prop_assert!((d0 - back).abs() <= 1e-9 * (1.0 + d0));
    }
}

#[test]
fn axis_values() {
    let s = build_structure(1, 1).unwrap();
    let d = cc_distance(&s, &GroupPoint::new(vec![3.0, 0.0], vec![0.0])).unwrap().d;
    assert!((d - 3.0).abs() < 1e-15);
    let d = cc_distance(&s, &GroupPoint::new(vec![0.0, 0.0], vec![1.0])).unwrap().d;
    assert!((d - (4.0 * PI).sqrt()).abs() < 1e-14);
    assert_eq!(cc_distance(&s, &GroupPoint::identity(1, 1)).unwrap().d, 0.0);
}

#[test]
fn continuous_towards_the_center_axis() {
    let axis = distance_from_norms(0.0, 2.0).unwrap().d;
    let near = distance_from_norms(1e-7, 2.0).unwrap().d;
    assert!((axis - near).abs() < 1e-6);
}
