//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use htype_core::clifford::rho;
use htype_core::geometry::{distance_ratio, verify_distance_bounds};
use htype_core::kernel::{
    check_estimates, check_heat_equation, check_semigroup, radon_identity_check, radon_projection_check, KernelEvaluator,
    ProfileFunction,
};
use htype_core::linalg::{norm, Matrix};
use htype_core::pipeline::{
    magnetic_residual, partial_fourier, radon_reduce, sharpness_experiment, SharpnessOptions,
};
use htype_core::schoenberg::{
    build_counterexample, check_dominance_under_heat_flow, counterexample_grid, default_tau_grid, default_u_grid,
    fit_measure, CutoffSide,
};
use htype_core::{build_structure, Complex64, GridFunction, GridSpec, GroupPoint, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let r = verify_distance_bounds(10_000, 1)?;
    let secs = start.elapsed().as_secs_f64();
    let pass = r.within_bounds(1e-12)
        && (r.min - PI / 4.0).abs() <= 1e-10
        && (PI - r.max).abs() <= 1e-6
        && (r.argmin.theta - PI / 4.0).abs() <= 1e-6
        && secs < 1.0;
    outcome(
        pass,
        format!(
            "min={:.15} (argmin theta={:.6}) max={:.15} samples={} time={secs:.3}s",
            r.min, r.argmin.theta, r.max, r.count
        ),
    )
}

fn criterion_2() -> Result<Outcome> {
    let d = [
        (distance_ratio(0.0)? - 1.0).abs(),
        (distance_ratio(PI / 4.0)? - PI / 4.0).abs(),
        (distance_ratio(PI)? - PI).abs(),
    ];
    outcome(d.iter().all(|v| *v <= 1e-12), format!("dev F(0)={:e} F(pi/4)={:e} F(pi)={:e}", d[0], d[1], d[2]))
}

/// `∫_0^∞ x / sinh x dx` by the trapezoid rule after `x = e^s`.
fn x_over_sinh_integral() -> f64 {
    let h = 1.0 / 64.0;
    let sum: f64 = (0..=(45 * 64))
        .map(|k| {
            let x = (-40.0 + k as f64 * h).exp();
            x * x / x.sinh()
        })
        .sum();
    sum * h
}

fn criterion_3() -> Result<Outcome> {
    let start = Instant::now();
    let k = KernelEvaluator::new(1, 1)?;
    let p = k.eval_real(1.0, 0.0, 0.0)?;
    let secs = start.elapsed().as_secs_f64();
    // p_1(0, 0) = (1 / 16π³) ∫_R x / sinh x dx.
    let oracle = 2.0 * x_over_sinh_integral() / (16.0 * PI.powi(3));
    let rel = (p / oracle - 1.0).abs();
    outcome(rel <= 1e-10 && secs < 0.1, format!("p1(0,0)={p:.16e} oracle={oracle:.16e} rel={rel:e} time={secs:.4}s"))
}

fn criterion_4() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for (n, m) in [(1, 1), (2, 1), (2, 3), (4, 5)] {
        let s = build_structure(n, m)?;
        let k = KernelEvaluator::for_structure(&s)?;
        for _ in 0..25 {
            let t: f64 = 10f64.powf(rng.random_range(-1.0..1.0));
            let g = GroupPoint::new(
                (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect(),
                (0..m).map(|_| rng.random_range(-2.0..2.0)).collect(),
            );
            let lhs = k.eval_p(&s, Complex64::new(t, 0.0), &g)?.re;
            let h = s.dilate(t.sqrt().recip(), &g)?;
            let rhs = t.powi(-((n + m) as i32)) * k.eval_p(&s, Complex64::new(1.0, 0.0), &h)?.re;
            worst = worst.max((lhs / rhs - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-8 && secs < 10.0, format!("points=100 max_rel={worst:e} time={secs:.2}s"))
}

fn criterion_5() -> Result<Outcome> {
    let s = build_structure(1, 1)?;
    let fine = check_semigroup(&s, 0.5, 0.5, &GridSpec::centered(1, 1, 64, 14.0 / 64.0, 64, 12.0 / 64.0)?)?;
    let coarse = check_semigroup(&s, 0.5, 0.5, &GridSpec::centered(1, 1, 32, 14.0 / 32.0, 32, 12.0 / 32.0)?)?;
    let gain = coarse.relative() / fine.relative();
    outcome(
        fine.relative() <= 1e-3 && gain >= 4.0,
        format!("64^3 rel={:e} 32^3 rel={:e} gain={gain:.1}", fine.relative(), coarse.relative()),
    )
}

fn criterion_6() -> Result<Outcome> {
    let s = build_structure(1, 1)?;
    let fine = check_heat_equation(&s, 1.0, 1e-4, &GridSpec::centered(1, 1, 81, 0.1, 81, 0.1)?)?;
    let coarse = check_heat_equation(&s, 1.0, 1e-4, &GridSpec::centered(1, 1, 41, 0.2, 41, 0.2)?)?;
    let order = (coarse / fine).log2();
    outcome(fine <= 1e-3 && order >= 1.8, format!("h=0.1 residual={fine:e} h=0.2 residual={coarse:e} order={order:.2}"))
}

fn criterion_7() -> Result<Outcome> {
    let r = radon_identity_check(2, 3, 0.5, &[0.5, 1.0, 1.5, 2.0, 3.0], 128)?;
    let projection = radon_projection_check(2, 3, 0.5, &[0.0, 0.5, 1.0, 2.0, 3.0], 64)?;
    outcome(
        r.max_relative_deviation <= 1e-6,
        format!(
            "constants={:?} max_rel_dev={:e} (projection identity max_rel={projection:e})",
            r.constants.iter().map(|c| format!("{c:.6e}")).collect::<Vec<_>>(),
            r.max_relative_deviation
        ),
    )
}

fn criterion_8() -> Result<Outcome> {
    let k = KernelEvaluator::new(1, 1)?;
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [Complex64::new(1.0, 0.0), Complex64::new(1.0, 2.0)] {
        let small = check_estimates(&k, 0.5, t, 4.0, 4.0, 17)?.constant();
        let big = check_estimates(&k, 0.5, t, 8.0, 8.0, 33)?.constant();
        let drift = (big / small - 1.0).abs();
        pass &= small.is_finite() && big.is_finite() && drift < 0.1;
        parts.push(format!("t={t} C={small:.6e} C(doubled)={big:.6e} drift={drift:.3e}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_9() -> Result<Outcome> {
    let (tau, u) = (default_tau_grid(), default_u_grid());
    let restricted: Vec<f64> = tau.iter().copied().filter(|t| *t >= 0.2).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [0.0, 1.0] {
        let phi0 = ProfileFunction::new(1, x).at_zero();
        let mu = fit_measure(1, x, &tau, &u)?;
        let far = fit_measure(1, x, &restricted, &u);
        let ratio = match &far {
            Ok(f) => f.fit_residual / mu.fit_residual,
            Err(_) => f64::INFINITY,
        };
        pass &= mu.fit_residual <= 1e-6 * phi0 && mu.kkt <= 1e-10 && ratio >= 10.0;
        parts.push(format!("x={x} residual={:e} kkt={:e} restricted/unrestricted={ratio:.3}", mu.fit_residual, mu.kkt));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_10() -> Result<Outcome> {
    let (tau, u) = (default_tau_grid(), default_u_grid());
    let k = KernelEvaluator::new(1, 1)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [0.0, 1.0] {
        let mu = fit_measure(1, x, &tau, &u)?;
        let c = build_counterexample(&mu, 1.0, 1, CutoffSide::Below)?;
        let mut ratios = Vec::new();
        for z in [0.0, 2.0, 4.0, 6.0, 8.0] {
            let p = k.eval_real(1.0, x * x, z)?;
            let f = c.eval(z);
            pass &= f > 0.0 && f <= p;
            ratios.push(f / p);
        }
        pass &= ratios[1..].windows(2).all(|w| w[1] < w[0]);
        parts.push(format!("x={x} f/p1 at z=0,2,4,6,8: {:?}", ratios.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()));
    }
    let spec = GridSpec::centered(1, 1, 32, 0.5, 64, 0.25)?;
    let f = counterexample_grid(&spec, 1.0, CutoffSide::Below, &tau, &u)?;
    let p1 = k.sample(Complex64::new(1.0, 0.0), &spec)?;
    let dominated = f.data().iter().zip(p1.data()).all(|(a, b)| a.re >= 0.0 && a.re <= b.re * (1.0 + 1e-12));
    let s = build_structure(1, 1)?;
    let report = check_dominance_under_heat_flow(&s, &f, &[0.5, 1.0, 2.0], 1e-3)?;
    pass &= dominated && report.holds();
    parts.push(format!(
        "grid f<=p1: {dominated}; max (f*q_s)/p_(1+s): {:?}",
        report.entries.iter().map(|e| format!("s={} {:.6}", e.s, e.max_ratio)).collect::<Vec<_>>()
    ));
    outcome(pass, parts.join("; "))
}

fn criterion_11() -> Result<Outcome> {
    let rows = sharpness_experiment(&[0.15, 0.25, 0.4], 1.0, SharpnessOptions::default())?;
    let mut pass = true;
    let mut parts = Vec::new();
    for r in &rows {
        let hi = 1.15 * r.envelope();
        pass &= r.product >= 16.0 && r.product <= hi && r.ratio > 1.0;
        parts.push(format!("eps={} a2b2={:.4} upper={hi:.4} ratio={:.4}", r.eps, r.product, r.ratio));
    }
    outcome(pass, parts.join("; "))
}

/// Kernel slices `p_{1+it}` at `t = t0 + j dt` on `|x_j| ≤ 2`.
fn kernel_series(k: &KernelEvaluator, h: f64, dt: f64) -> Result<Vec<GridFunction>> {
    let nx = (4.0 / h).round() as usize + 1;
    let spec = GridSpec::centered(1, 1, nx, h, 481, 0.05)?;
    (0..5).map(|j| k.sample(Complex64::new(1.0, MAGNETIC_T0 + j as f64 * dt), &spec)).collect()
}

const MAGNETIC_T0: f64 = 0.5;

/// Magnetic residual of `f_ξ(x, t) = ∫ p_{1+it}(x, z) e^{iξz} dz`.
fn magnetic_case(series: &[GridFunction], xi: f64, dt: f64) -> Result<f64> {
    let slices = series.iter().map(|u| partial_fourier(u, xi)).collect::<Result<Vec<_>>>()?;
    magnetic_residual(&slices, MAGNETIC_T0, dt, xi, None)
}

fn criterion_12() -> Result<Outcome> {
    let k = KernelEvaluator::new(1, 1)?;
    let mut pass = true;
    let mut parts = Vec::new();
    let (coarse_series, fine_series) = (kernel_series(&k, 0.2, 0.02)?, kernel_series(&k, 0.1, 0.01)?);
    for xi in [0.1, 0.25, 0.5, 1.0] {
        let coarse = magnetic_case(&coarse_series, xi, 0.02)?;
        let fine = magnetic_case(&fine_series, xi, 0.01)?;
        let order = (coarse / fine).log2();
        pass &= fine <= 1e-2 && order >= 1.8;
        parts.push(format!("xi={xi} residual={fine:.3e} order={order:.2}"));
    }
    // u = e^{−|x|²} e^{−c|z|} on R² × R²; the hyperplane integrals obey
    // U(x, s) ≤ (2√2 / c) e^{−c|s|/√2} e^{−|x|²}.
    let c = 1.5;
    let spec = GridSpec::centered(1, 2, 5, 0.5, 121, 0.2)?;
    let u = GridFunction::from_fn(spec, |x, z| {
        Complex64::new((-(x[0] * x[0] + x[1] * x[1]) - c * (z[0] * z[0] + z[1] * z[1]).sqrt()).exp(), 0.0)
    });
    let mut worst: f64 = 0.0;
    for eta in [[1.0, 0.0], [0.6, 0.8]] {
        let r = radon_reduce(&u, &eta)?;
        let sp = r.spec();
        for (i, v) in r.data().iter().enumerate() {
            let q = sp.node_coords(&sp.unravel(i));
            let bound = 2.0 * 2f64.sqrt() / c * (-c * q[2].abs() / 2f64.sqrt() - q[0] * q[0] - q[1] * q[1]).exp();
            worst = worst.max(v.re / bound);
        }
    }
    pass &= worst <= 1.0;
    parts.push(format!("radon transport max U/bound={worst:.4}"));
    outcome(pass, parts.join("; "))
}

fn criterion_13() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut worst, mut worst_norm): (f64, f64) = (0.0, 0.0);
    for (n, m) in [(1, 1), (2, 3), (4, 7), (8, 8)] {
        let s = build_structure(n, m)?;
        let id = Matrix::identity(2 * n);
        let gens = s.generators();
        for i in 0..m {
            worst = worst.max(gens[i].transpose().mul(&gens[i]).max_abs_diff(&id));
            worst = worst.max(gens[i].transpose().max_abs_diff(&gens[i].scale(-1.0)));
            for j in 0..m {
                let anti = gens[i].mul(&gens[j]).add(&gens[j].mul(&gens[i]));
                let want = if i == j { id.scale(-2.0) } else { Matrix::zeros(2 * n, 2 * n) };
                worst = worst.max(anti.max_abs_diff(&want));
            }
        }
        for _ in 0..100 {
            let x: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let z: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
            let lhs = norm(&s.j_z(&z)?.mul_vec(&x));
            worst_norm = worst_norm.max((lhs / (norm(&x) * norm(&z)) - 1.0).abs());
        }
    }
    let rhos: Vec<usize> = [2, 4, 8, 16].iter().map(|&d| rho(d)).collect::<Result<_>>()?;
    outcome(
        worst <= 1e-14 && worst_norm <= 1e-12 && rhos == [2, 4, 8, 9],
        format!("clifford max_dev={worst:e} |Jz x|/(|x||z|) max_dev={worst_norm:e} rho(2,4,8,16)={rhos:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 13] = [
        ("distance_sharp_constants", criterion_1),
        ("ratio_endpoint_values", criterion_2),
        ("kernel_closed_form_point", criterion_3),
        ("kernel_scaling_identity", criterion_4),
        ("kernel_semigroup", criterion_5),
        ("heat_equation_residual", criterion_6),
        ("radon_sphere_average", criterion_7),
        ("two_sided_estimate_constant", criterion_8),
        ("gaussian_mixture_fit", criterion_9),
        ("counterexample_dominance", criterion_10),
        ("sharpness_table", criterion_11),
        ("reduction_pipeline", criterion_12),
        ("algebra_invariants", criterion_13),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = f().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {name:<28} {} [{:.1}s] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
