use std::f64::consts::PI;

use htype_core::kernel::{KernelEvaluator, QuadratureParams};
use htype_core::{build_structure, Complex64, GroupPoint};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_identity(t in 0.2..5.0f64, xn in 0.0..3.0f64, zn in 0.0..3.0f64) {
        let k = KernelEvaluator::new(2, 3).unwrap();
        let lhs = k.eval_real(t, xn * xn, zn).unwrap();
        let rhs = t.powi(-5) * k.eval_real(1.0, xn * xn / t, zn / t).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn positive_for_real_time(t in 0.1..4.0f64, xn in 0.0..6.0f64, zn in 0.0..6.0f64) {
        let k = KernelEvaluator::new(1, 1).unwrap();
        prop_assert!(k.eval_real(t, xn * xn, zn).unwrap() > 0.0);
    }

    #[test]
    fn radial_and_symmetric(v in prop::collection::vec(-2.0..2.0f64, 7)) {
        let s = build_structure(2, 3).unwrap();
        let k = KernelEvaluator::for_structure(&s).unwrap();
        let g = GroupPoint::new(v[..4].to_vec(), v[4..].to_vec());
        let t = Complex64::new(1.0, 0.5);
        let p = k.eval_p(&s, t, &g).unwrap();
        let q = k.eval_p(&s, t, &s.inverse(&g).unwrap()).unwrap();
        let r = k.eval(t, g.x_norm().powi(2), g.z_norm()).unwrap();
        prop_assert!((p - q).norm() <= 1e-14 * p.norm().max(1e-300));
        prop_assert!((p - r).norm() <= 1e-14 * p.norm().max(1e-300));
    }

    #[test]
    fn doubling_quadrature_nodes_is_stable(re in 0.3..2.0f64, im in -2.0..2.0f64, xn in 0.0..2.0f64, zn in 0.0..2.0f64) {
        let base = KernelEvaluator::new(1, 2).unwrap();
        let fine = KernelEvaluator::with_params(
            1, 2, QuadratureParams { nodes_per_panel: 64, ..QuadratureParams::default() },
        ).unwrap();
        let t = Complex64::new(re, im);
        let a = base.eval(t, xn * xn, zn).unwrap();
        let b = fine.eval(t, xn * xn, zn).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * b.norm() + 1e-16);
    }
}

#[test]
fn heisenberg_center_line() {
    // p_t(0, z) = t^{-2} sech²(πz / 2t) / (32π), also for complex t.
    let k = KernelEvaluator::new(1, 1).unwrap();
    for t in [Complex64::new(1.0, 0.0), Complex64::new(0.7, 0.4), Complex64::new(1.0, -2.0)] {
        for z in [0.0, 0.5, 1.5, 10.0, 20.0] {
            let c = (Complex64::new(PI * z / 2.0, 0.0) / t).cosh();
            let want = (t * t * c * c * 32.0 * PI).inv();
            let got = k.eval(t, 0.0, z).unwrap();
            assert!((got - want).norm() <= 1e-10 * want.norm(), "t={t} z={z} rel={:e}", (got - want).norm() / want.norm());
        }
    }
}

#[test]
fn total_mass_by_lattice_sum() {
    // The lattice sum of a smooth, rapidly decaying function is spectrally accurate.
    let k = KernelEvaluator::new(1, 1).unwrap();
    for t in [0.5, 1.0] {
        let spec = htype_core::GridSpec::centered(1, 1, 80, 0.25, 480, 0.1).unwrap();
        let g = k.sample(Complex64::new(t, 0.0), &spec).unwrap();
        let mass: f64 = g.data().iter().map(|v| v.re).sum::<f64>() * spec.cell_volume();
        assert!((mass / k.total_mass() - 1.0).abs() < 1e-9, "t={t} mass {mass}");
    }
}

#[test]
fn refuses_near_imaginary_axis() {
    let k = KernelEvaluator::new(1, 1).unwrap();
    assert!(k.eval(Complex64::new(0.01, 1.0), 0.0, 0.0).is_err());
    assert!(k.eval(Complex64::new(-1.0, 0.0), 0.0, 0.0).is_err());
}
