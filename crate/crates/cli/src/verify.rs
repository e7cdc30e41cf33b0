//! Invariant suites behind `carnot-heat verify`.

use std::f64::consts::PI;

use htype_core::clifford::rho;
use htype_core::geometry::{distance_ratio, verify_distance_bounds};
use htype_core::kernel::{check_estimates, KernelEvaluator};
use htype_core::linalg::{norm, Matrix};
use htype_core::pipeline::{fit_decay, magnetic_matrix, sharpness_experiment, FitOptions, SharpnessOptions};
use htype_core::schoenberg::{default_tau_grid, default_u_grid, fit_measure};
use htype_core::{build_structure, Complex64, GridFunction, GridSpec, GroupPoint, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITES: &[&str] = &["algebra", "geometry", "kernel", "schoenberg", "pipeline"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub measured: String,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.name, if self.pass { "PASS" } else { "FAIL" }, self.measured)
    }
}

fn line(name: &str, pass: bool, measured: String) -> CheckLine {
    CheckLine { name: name.into(), pass, measured }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckLine>> {
    match name {
        "algebra" => algebra(seed),
        "geometry" => geometry(seed),
        "kernel" => kernel(seed),
        "schoenberg" => schoenberg(),
        "pipeline" => pipeline(),
        _ => unreachable!("suite names are validated by the caller"),
    }
}

fn algebra(seed: u64) -> Result<Vec<CheckLine>> {
    let mut worst_rel: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (n, m) in [(1, 1), (2, 3), (4, 7), (8, 8)] {
        let s = build_structure(n, m)?;
        let id = Matrix::identity(2 * n);
        for (k, a) in s.generators().iter().enumerate() {
            worst_rel = worst_rel.max(a.transpose().mul(a).max_abs_diff(&id));
            for b in &s.generators()[k..] {
                let anti = a.mul(b).add(&b.mul(a));
                let want = if std::ptr::eq(a, b) { id.scale(-2.0) } else { Matrix::zeros(2 * n, 2 * n) };
                worst_rel = worst_rel.max(anti.max_abs_diff(&want));
            }
        }
        for _ in 0..50 {
            let x: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let z: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
            let jx = s.j_z(&z)?.mul_vec(&x);
            let want = norm(&x) * norm(&z);
            worst_norm = worst_norm.max((norm(&jx) - want).abs() / want.max(1.0));
        }
    }
    let rhos: Vec<usize> = [2, 4, 8, 16].iter().map(|&d| rho(d)).collect::<Result<_>>()?;
    Ok(vec![
        line("clifford_relations", worst_rel <= 1e-14, format!("max_dev={worst_rel:e}")),
        line("jz_isometry", worst_norm <= 1e-12, format!("max_rel_dev={worst_norm:e}")),
        line("radon_hurwitz", rhos == [2, 4, 8, 9], format!("rho(2,4,8,16)={rhos:?}")),
    ])
}

fn geometry(seed: u64) -> Result<Vec<CheckLine>> {
    let r = verify_distance_bounds(10_000, seed)?;
    let pass = r.within_bounds(1e-12) && (r.min - PI / 4.0).abs() <= 1e-10 && (PI - r.max) <= 1e-6;
    let f = [distance_ratio(0.0)?, distance_ratio(PI / 4.0)?, distance_ratio(PI)?];
    let fdev = (f[0] - 1.0).abs().max((f[1] - PI / 4.0).abs()).max((f[2] - PI).abs());
    Ok(vec![
        line("distance_bounds", pass, format!("min={:.16} max={:.16} count={}", r.min, r.max, r.count)),
        line("ratio_endpoints", fdev <= 1e-12, format!("max_dev={fdev:e}")),
    ])
}

fn kernel(seed: u64) -> Result<Vec<CheckLine>> {
    let k = KernelEvaluator::new(1, 1)?;
    let p0 = k.eval_real(1.0, 0.0, 0.0)?;
    let want = 1.0 / (32.0 * PI);
    let rel = (p0 / want - 1.0).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = build_structure(1, 1)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t: f64 = rng.random_range(0.2..5.0);
        let g = GroupPoint::new(vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)], vec![rng.random_range(-2.0..2.0)]);
        let lhs = k.eval_p(&s, Complex64::new(t, 0.0), &g)?.re;
        let h = s.dilate(t.sqrt().recip(), &g)?;
        let rhs = t.powi(-2) * k.eval_p(&s, Complex64::new(1.0, 0.0), &h)?.re;
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    let est = check_estimates(&k, 0.5, Complex64::new(1.0, 2.0), 4.0, 4.0, 9)?;
    Ok(vec![
        line("kernel_origin", rel <= 1e-10, format!("p1={p0:.16e} rel={rel:e}")),
        line("kernel_scaling", worst <= 1e-8, format!("max_rel={worst:e}")),
        line("complex_estimate", est.constant().is_finite(), format!("C={:e}", est.constant())),
    ])
}

fn schoenberg() -> Result<Vec<CheckLine>> {
    let mu = fit_measure(1, 0.0, &default_tau_grid(), &default_u_grid())?;
    let phi0 = htype_core::kernel::ProfileFunction::new(1, 0.0).at_zero();
    Ok(vec![
        line("mixture_residual", mu.fit_residual <= 1e-6 * phi0, format!("residual={:e}", mu.fit_residual)),
        line("mixture_kkt", mu.kkt <= 1e-10, format!("kkt={:e}", mu.kkt)),
    ])
}

fn pipeline() -> Result<Vec<CheckLine>> {
    let mx = magnetic_matrix(1, 1.0)?;
    let ok_mx = mx == Matrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
    let spec = GridSpec::centered(1, 1, 11, 0.3, 11, 0.2)?;
    let u = GridFunction::from_fn(spec, |x, z| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / 2.0 - z[0].abs()).exp(), 0.0));
    let fit = fit_decay(&u, FitOptions::default())?;
    let dev = (fit.gauss_rate - 2f64.sqrt()).abs().max((fit.center_rate.unwrap_or(0.0) - 1.0).abs());
    let row = sharpness_experiment(&[0.25], 1.0, SharpnessOptions::default())?[0];
    Ok(vec![
        line("magnetic_matrix", ok_mx, format!("M={:?}", mx.as_slice())),
        line("decay_fit_exact", dev <= 1e-10, format!("max_dev={dev:e}")),
        line("sharpness_ratio", row.ratio > 1.0, format!("eps=0.25 ratio={:.6}", row.ratio)),
    ])
}
