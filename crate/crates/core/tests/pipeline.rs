use std::sync::Arc;

use htype_core::kernel::KernelEvaluator;
use htype_core::pipeline::{
    check_hypothesis, fit_decay, free_evolve, partial_fourier, radon_reduce, rescale_to_unit_time, FitOptions,
    PotentialSpec,
};
use htype_core::{build_structure, Complex64, GridFunction, GridSpec};
use proptest::prelude::*;

fn gaussian(spec: GridSpec, c: f64) -> GridFunction {
    GridFunction::from_fn(spec, move |x, z| {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let z2: f64 = z.iter().map(|v| v * v).sum();
        Complex64::new((-x2 - c * z2).exp(), 0.0)
    })
}

#[test]
fn free_evolution_reproduces_kernel() {
    let s = build_structure(1, 1).unwrap();
    let k = KernelEvaluator::new(1, 1).unwrap();
    let spec = GridSpec::centered(1, 1, 64, 0.25, 64, 0.25).unwrap();
    let u0 = k.sample(Complex64::new(0.5, 0.0), &spec).unwrap();
    let u = free_evolve(&s, &u0, 0.5, Some(0.5)).unwrap();
    let want = k.sample(Complex64::new(1.0, 0.5), &spec).unwrap();
    let rel = u.max_abs_diff(&want, 1).unwrap() / want.max_abs();
    assert!(rel < 1e-3, "relative error {rel}");
}

#[test]
fn radon_reduction_preserves_mass() {
    let spec = GridSpec::centered(1, 2, 5, 0.5, 81, 0.1).unwrap();
    let u = gaussian(spec.clone(), 1.0);
    let total: f64 = u.data().iter().map(|v| v.re).sum::<f64>() * spec.cell_volume();
    for eta in [[1.0, 0.0], [0.0, -1.0], [0.6, 0.8]] {
        let r = radon_reduce(&u, &eta).unwrap();
        let mass: f64 = r.data().iter().map(|v| v.re).sum::<f64>() * r.spec().cell_volume();
        assert!((mass / total - 1.0).abs() < 1e-3, "eta {eta:?}: {mass} vs {total}");
    }
}

#[test]
fn radon_reduction_rejects_non_unit_direction() {
    let u = gaussian(GridSpec::centered(1, 2, 3, 0.5, 9, 0.5).unwrap(), 1.0);
    assert!(radon_reduce(&u, &[1.0, 1.0]).is_err());
    assert!(radon_reduce(&u, &[1.0]).is_err());
}

#[test]
fn radon_reduction_m1_is_identity_or_reflection() {
    let spec = GridSpec::centered(1, 1, 3, 0.5, 9, 0.5).unwrap();
    let u = GridFunction::from_fn(spec, |x, z| Complex64::new(x[0] + z[0], 0.0));
    assert_eq!(radon_reduce(&u, &[1.0]).unwrap().data(), u.data());
    let r = radon_reduce(&u, &[-1.0]).unwrap();
    let q = r.spec().node_coords(&[0, 0, 0]);
    assert_eq!(r.data()[0].re, q[0] - q[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partial_fourier_of_gaussian(xi in -3.0..3.0f64, c in 1.0..3.0f64) {
        let spec = GridSpec::centered(1, 1, 3, 1.0, 241, 0.05).unwrap();
        let u = GridFunction::from_fn(spec, |_, z| Complex64::new((-c * z[0] * z[0]).exp(), 0.0));
        let f = partial_fourier(&u, xi).unwrap();
        let want = (std::f64::consts::PI / c).sqrt() * (-xi * xi / (4.0 * c)).exp();
        prop_assert!((f.data()[4] - want).norm() < 1e-10);
    }

    #[test]
    fn decay_fit_recovers_rates(r in 0.5..3.0f64, c in 0.2..2.0f64) {
        let spec = GridSpec::centered(1, 1, 9, 0.4, 9, 0.4).unwrap();
        let u = GridFunction::from_fn(spec, |x, z| {
            Complex64::new(2.0 * (-(x[0] * x[0] + x[1] * x[1]) / (r * r) - c * z[0] * z[0]).exp(), 0.0)
        });
        let opts = FitOptions { model: htype_core::pipeline::DecayModel::GaussXGaussZ, ..FitOptions::default() };
        let p = fit_decay(&u, opts).unwrap();
        prop_assert!((p.gauss_rate - r).abs() < 1e-9 && (p.center_rate.unwrap() - c).abs() < 1e-9);
    }
}

#[test]
fn rescaling_moves_decay_rates() {
    let t = 4.0;
    let b = 1.5;
    let spec = GridSpec::centered(1, 1, 17, 0.5, 17, 0.5).unwrap();
    let u0 = GridFunction::from_fn(spec, |x, z| {
        Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / (b * b) - z[0].abs()).exp(), 0.0)
    });
    let v = PotentialSpec::zero(2.0, b, t).unwrap();
    let p = rescale_to_unit_time(&u0, &u0, &v).unwrap();
    let fit = fit_decay(&p.initial, FitOptions::default()).unwrap();
    assert!((fit.gauss_rate * fit.gauss_rate - b * b / t).abs() < 1e-9);
    assert!((fit.center_rate.unwrap() - t).abs() < 1e-9);
    assert!((p.potential.b - b / t.sqrt()).abs() < 1e-15);
    assert!((p.potential.a * p.potential.b - 2.0 * b / t).abs() < 1e-15);
}

#[test]
fn hypothesis_check_on_admissible_potential() {
    let (a, b, t) = (1.0, 2.0, 1.0);
    let v2 = Arc::new(move |x: &[f64], s: f64| {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let den = a * s + b * (t - s);
        Complex64::new((-2.0 * t * t * x2 / (den * den)).exp(), 0.0)
    });
    let v = PotentialSpec::new(Arc::new(|x: &[f64]| 1.0 / (1.0 + x[0] * x[0])), v2, a, b, t).unwrap();
    let pts: Vec<Vec<f64>> = (0..21).map(|i| vec![i as f64 * 0.25, 0.0]).collect();
    let times: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
    let r = check_hypothesis(&v, &pts, &times);
    assert!(r.pass);
    assert!((r.bound_v1 - 1.0).abs() < 1e-15);
    assert!(r.weight_sup <= 1.0 && r.weight_sup_relaxed <= r.weight_sup);
}
