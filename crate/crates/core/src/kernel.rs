//! Heat kernel of the sub-Laplacian for real and complex time.
//!
//! With `w = 2π e^{iα} r` and `α = arg t`,
//! `p_t(x, z) = t^{−n−m} e^{iαm} ∫_{R^m} Φ(|ρ|) e^{2πi⟨ρ, z⟩/|t|} dρ`,
//! `Φ(r) = exp(−|x|² w coth w / (4t)) · (w / (8π² sinh w))ⁿ`.
//! For real `t` this is the usual Fourier integral over `λ`; for complex `t`
//! it is the same integral along the ray `λ = e^{iα} ρ`, on which the
//! integrand keeps decaying however large `|z|` is.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{GroupPoint, HTypeStructure};
use crate::error::{Error, Result};
use crate::geometry::{distance_from_norms, eps_bounds};
use crate::grid::{GridFunction, GridSpec};
use crate::operators::{group_convolve, sublaplacian};
use crate::quadrature::RadialRule;
use crate::special::{gamma_half, gauss_legendre, sphere_area};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureParams {
    /// Gauss–Legendre nodes per panel.
    pub nodes_per_panel: usize,
    /// Panels per unit of the local oscillation rate; larger is finer.
    pub refinement: f64,
    /// Relative size of the integrand at which the radial integral is cut.
    pub tail_tol: f64,
    /// Evaluations needing more panels are refused.
    pub max_panels: usize,
    /// Smallest admissible `Re t / |t|`.
    pub min_cos_arg: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self { nodes_per_panel: 32, refinement: 1.0, tail_tol: 1e-18, max_panels: 20_000, min_cos_arg: 0.04 }
    }
}

/// `u ↦ φ_x(u) = e^{−(π/2) u coth(2πu) |x|²} (u / (4π sinh 2πu))ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileFunction {
    pub n: usize,
    pub x_norm: f64,
}

impl ProfileFunction {
    pub fn new(n: usize, x_norm: f64) -> Self {
        Self { n, x_norm }
    }

    pub fn eval(&self, u: f64) -> f64 {
        profile(self.n, self.x_norm * self.x_norm, Complex64::new(1.0, 0.0), u.abs()).re
    }

    pub fn at_zero(&self) -> f64 {
        (-self.x_norm * self.x_norm / 4.0).exp() / (8.0 * PI * PI).powi(self.n as i32)
    }
}

/// `(w coth w, w / sinh w)` without overflow for `Re w ≥ 0`.
fn hyperbolic_pair(w: Complex64) -> (Complex64, Complex64) {
    if w.norm() < 1e-3 {
        let w2 = w * w;
        let one = Complex64::new(1.0, 0.0);
        (one + w2 * (1.0 / 3.0 - w2 / 45.0), one - w2 * (1.0 / 6.0 - w2 * 7.0 / 360.0))
    } else {
        let e = (-2.0 * w).exp();
        let denom = Complex64::new(1.0, 0.0) - e;
        (w * (Complex64::new(1.0, 0.0) + e) / denom, 2.0 * w * (-w).exp() / denom)
    }
}

/// Rotated profile `Φ(r)` for `|x|² = x2` and time `t`.
fn profile(n: usize, x2: f64, t: Complex64, r: f64) -> Complex64 {
    let dir = t / t.norm();
    let w = dir * (2.0 * PI * r);
    let (wc, ws) = hyperbolic_pair(w);
    (-(wc * x2) / (t * 4.0)).exp() * (ws / (8.0 * PI * PI)).powi(n as i32)
}

/// `Φ` continued to a complex radius; even in `r`, so the branch with
/// `Re w ≥ 0` is taken.
fn profile_complex(n: usize, x2: f64, t: Complex64, r: Complex64) -> Complex64 {
    let mut w = t / t.norm() * r * (2.0 * PI);
    if w.re < 0.0 {
        w = -w;
    }
    let (wc, ws) = hyperbolic_pair(w);
    (-(wc * x2) / (t * 4.0)).exp() * (ws / (8.0 * PI * PI)).powi(n as i32)
}

/// Breakpoints `0 = b_0 < … = hi` with widths `min(base, max(fine, b/2))`.
fn graded_breaks(hi: f64, base: f64, fine: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    let mut last = 0.0;
    while last < hi {
        last = (last + base.min(fine.max(0.5 * last))).min(hi);
        b.push(last);
    }
    b
}

/// Gauss–Legendre nodes and weights on the panels between `breaks`.
fn panel_rule(breaks: &[f64], per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(per_panel);
    let mut nodes = Vec::with_capacity(breaks.len() * per_panel);
    let mut weights = Vec::with_capacity(breaks.len() * per_panel);
    for p in breaks.windows(2) {
        let (mid, half) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    (nodes, weights)
}

/// Smallest `r` past which `mag` stays below `floor`, by doubling then bisection.
fn decay_cutoff(mag: impl Fn(f64) -> f64, floor: f64) -> Result<f64> {
    let mut hi = 0.125;
    while mag(hi) > floor {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::Quadrature("radial integrand does not decay".into()));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if mag(mid) > floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Heat kernel evaluator for the dimensions `(n, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEvaluator {
    n: usize,
    m: usize,
    params: QuadratureParams,
}

impl KernelEvaluator {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Self::with_params(n, m, QuadratureParams::default())
    }

    pub fn with_params(n: usize, m: usize, params: QuadratureParams) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDimension(alloc::format!("n={n}, m={m} must be positive")));
        }
        if params.nodes_per_panel < 8 || !(params.refinement > 0.0) || !(params.tail_tol > 0.0) {
            return Err(Error::InvalidParameter("quadrature parameters out of range".into()));
        }
        Ok(Self { n, m, params })
    }

    pub fn for_structure(s: &HTypeStructure) -> Result<Self> {
        Self::new(s.n(), s.m())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn params(&self) -> &QuadratureParams {
        &self.params
    }

    /// `∫ p_t` for real `t`; equals `(2π)^{−n}` under the conventions above.
    pub fn total_mass(&self) -> f64 {
        (2.0 * PI).powi(-(self.n as i32))
    }

    fn check_time(&self, t: Complex64) -> Result<()> {
        if !(t.re > 0.0) || !t.im.is_finite() {
            return Err(Error::Domain(alloc::format!("kernel time {t} needs Re t > 0")));
        }
        if t.re / t.norm() < self.params.min_cos_arg {
            return Err(Error::Quadrature(alloc::format!(
                "time {t} is too close to the imaginary axis for the radial quadrature"
            )));
        }
        Ok(())
    }

    /// Radial rule adequate for `|x|² = x2` and all `|z| ≤ z_max`.
    fn rule(&self, t: Complex64, x2: f64, z_max: f64) -> Result<RadialRule> {
        let tn = t.norm();
        let cos_a = t.re / tn;
        let mag = |r: f64| profile(self.n, x2, t, r).norm() * r.max(1.0).powi(self.m as i32 - 1);
        let floor = self.params.tail_tol * profile(self.n, x2, t, 0.0).norm();
        let cutoff = decay_cutoff(mag, floor)?;
        let rate = 2.0 * PI * (x2 / (4.0 * tn) + z_max / tn + self.n as f64);
        let width = (0.5 * cos_a.min(1.0)).min(4.0 / (rate * self.params.refinement));
        if (cutoff / width).ceil() as usize > self.params.max_panels {
            return Err(Error::Quadrature(alloc::format!(
                "time {t}, |x|² = {x2}, |z| ≤ {z_max} needs more than {} panels",
                self.params.max_panels
            )));
        }
        RadialRule::new(cutoff, width, self.params.nodes_per_panel)
    }

    fn prefactor(&self, t: Complex64) -> Complex64 {
        let dir = t / t.norm();
        t.powf(-((self.n + self.m) as f64)) * dir.powi(self.m as i32)
    }

    /// `p_t` as a function of `|x|²` and `|z|`.
    pub fn eval(&self, t: Complex64, x_norm_sq: f64, z_norm: f64) -> Result<Complex64> {
        self.eval_with(t, x_norm_sq, z_norm, true)
    }

    /// `p_t` from the real-line rule alone: the error is about 1e-16 of the
    /// integral of `|p_t|` rather than of the value. Enough inside integrals.
    pub fn eval_direct(&self, t: Complex64, x_norm_sq: f64, z_norm: f64) -> Result<Complex64> {
        self.eval_with(t, x_norm_sq, z_norm, false)
    }

    fn eval_with(&self, t: Complex64, x_norm_sq: f64, z_norm: f64, far_field: bool) -> Result<Complex64> {
        self.check_time(t)?;
        if !(x_norm_sq >= 0.0 && z_norm >= 0.0) {
            return Err(Error::Domain("norms must be nonnegative".into()));
        }
        let rule = self.rule(t, x_norm_sq, z_norm)?;
        let vals: Vec<Complex64> = rule.nodes.iter().map(|&r| profile(self.n, x_norm_sq, t, r)).collect();
        let s = z_norm / t.norm();
        let mut v = rule.transform(&vals, self.m, s);
        if far_field && s > 0.0 {
            // The real-line sum cancels to about 1e-16 of its absolute size.
            let mags: Vec<Complex64> = vals.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
            let size = rule.transform(&mags, self.m, 0.0).re;
            if v.norm() < 1e-6 * size {
                if let Some((shifted, shifted_size)) = self.shifted_transform(t, x_norm_sq, s)? {
                    if shifted_size < size {
                        v = shifted;
                    }
                }
            }
        }
        let v = v * self.prefactor(t);
        Ok(if t.im == 0.0 { Complex64::new(v.re, 0.0) } else { v })
    }

    /// Radial transform at frequency `s` with the first coordinate of the
    /// frequency variable moved to `r + iσ`, below the nearest singularity of
    /// `Φ` at `r = (sin α + i cos α) / 2`, `α = arg t`. The remaining `m − 1`
    /// coordinates are integrated radially. Returns the value and the integral
    /// of the integrand's modulus, or `None` when no admissible shift exists.
    fn shifted_transform(&self, t: Complex64, x2: f64, s: f64) -> Result<Option<(Complex64, f64)>> {
        let (n, m) = (self.n, self.m);
        let tn = t.norm();
        let (cos_a, sin_a) = (t.re / tn, t.im / tn);
        let sigma_max = 0.5 * cos_a;
        let center = 0.5 * sin_a;
        let inner = |rc: Complex64, rho: f64| profile_complex(n, x2, t, (rc * rc + rho * rho).sqrt());
        // A 32-node panel resolves a few periods of e^{2πisr}.
        let base = (0.5 * cos_a).min(3.0 / ((x2 / (4.0 * tn) + s + n as f64) * self.params.refinement));
        let around = |reach: f64, fine: f64| -> Vec<f64> {
            let right = graded_breaks(reach - center, base, fine);
            let left = graded_breaks(reach + center, base, fine);
            left.iter().rev().map(|b| center - b).chain(right.iter().skip(1).map(|b| center + b)).collect()
        };
        // Pick σ by the size of e^{−2πsσ} |Φ(r + iσ)| on a probe grid.
        let probe = around(8.0, 1e-3);
        let mut best: Option<(f64, f64)> = None;
        for f in [0.2, 0.4, 0.6, 0.75, 0.85, 0.92, 0.96, 0.98, 0.99, 0.995] {
            let sigma = f * sigma_max;
            let peak = probe.iter().fold(0.0f64, |a, &r| a.max(inner(Complex64::new(r, sigma), 0.0).norm()));
            let est = (-2.0 * PI * s * sigma).exp() * peak;
            if est.is_finite() && best.is_none_or(|(_, e)| est < e) {
                best = Some((sigma, est));
            }
        }
        let Some((sigma, _)) = best else { return Ok(None) };
        let fine = 0.5 * (sigma_max - sigma);
        let floor = self.params.tail_tol * profile(n, x2, t, 0.0).norm();
        let mag = |r: f64| {
            inner(Complex64::new(center + r, sigma), 0.0).norm().max(inner(Complex64::new(center - r, sigma), 0.0).norm())
                * r.max(1.0).powi(m as i32 - 1)
        };
        let reach = decay_cutoff(mag, floor)? + center.abs();
        // For real t, A(−r + iσ) is the conjugate of A(r + iσ) and one half-line suffices.
        let real_time = t.im == 0.0;
        let breaks = if real_time { graded_breaks(reach, base, fine) } else { around(reach, fine) };
        if breaks.len() > self.params.max_panels {
            return Ok(None);
        }
        let (nodes, weights) = panel_rule(&breaks, self.params.nodes_per_panel);
        let inner_rule = if m > 1 {
            let base_rho = (0.5 * cos_a).min(4.0 / (2.0 * PI * (x2 / (4.0 * tn) + n as f64)));
            let rb = graded_breaks(reach, base_rho, fine);
            Some(panel_rule(&rb, (self.params.nodes_per_panel / 2).max(8)))
        } else {
            None
        };
        let area = if m > 1 { sphere_area(m - 1) } else { 1.0 };
        let a_of = |rc: Complex64| -> Complex64 {
            match &inner_rule {
                None => inner(rc, 0.0),
                Some((rn, rw)) => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (rho, w) in rn.iter().zip(rw) {
                        acc += inner(rc, *rho) * (w * rho.powi(m as i32 - 2));
                    }
                    acc * area
                }
            }
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut size = 0.0;
        for (r, w) in nodes.iter().zip(&weights) {
            let a = a_of(Complex64::new(*r, sigma));
            acc += a * Complex64::from_polar(*w, 2.0 * PI * s * r);
            size += w * a.norm();
            if real_time {
                acc += a.conj() * Complex64::from_polar(*w, -2.0 * PI * s * r);
                size += w * a.norm();
            }
        }
        let damp = (-2.0 * PI * s * sigma).exp();
        Ok(Some((acc * damp, size * damp)))
    }

    pub fn eval_real(&self, t: f64, x_norm_sq: f64, z_norm: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(t, 0.0), x_norm_sq, z_norm)?.re)
    }

    pub fn eval_p(&self, s: &HTypeStructure, t: Complex64, g: &GroupPoint) -> Result<Complex64> {
        if s.n() != self.n || s.m() != self.m {
            return Err(Error::InvalidDimension("structure does not match evaluator".into()));
        }
        s.check_point(g)?;
        let x2: f64 = g.x.iter().map(|v| v * v).sum();
        self.eval(t, x2, g.z_norm())
    }

    /// `p_t` at every node. Values are shared between nodes with identical
    /// `(|x|², |z|)`. Grids with `m = 0` are read as the slice `z = 0`.
    pub fn sample(&self, t: Complex64, spec: &GridSpec) -> Result<GridFunction> {
        self.check_time(t)?;
        if spec.n() != self.n || (spec.m() != self.m && spec.m() != 0) {
            return Err(Error::GridMismatch("grid dimensions do not match evaluator".into()));
        }
        let d = 2 * self.n;
        let xspec = spec.horizontal();
        let nz = spec.z_len();
        let zn: Vec<f64> = if spec.m() == 0 {
            vec![0.0]
        } else {
            let zs = GridSpec::new(
                1,
                spec.m(),
                [&[3, 3][..], &spec.counts()[d..]].concat(),
                [&[1.0, 1.0][..], &spec.spacings()[d..]].concat(),
                [&[0.0, 0.0][..], &spec.origins()[d..]].concat(),
            )?;
            (0..nz).map(|k| zs.node_coords(&zs.unravel(k))[2..].iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
        };
        let z_max = zn.iter().cloned().fold(0.0, f64::max);
        let pre = self.prefactor(t);
        let tn = t.norm();
        let mut by_x2: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        let mut data = Vec::with_capacity(spec.len());
        for xk in 0..xspec.len() {
            let x2: f64 = xspec.node_coords(&xspec.unravel(xk)).iter().map(|v| v * v).sum();
            if !by_x2.contains_key(&x2.to_bits()) {
                let rule = self.rule(t, x2, z_max)?;
                let vals: Vec<Complex64> = rule.nodes.iter().map(|&r| profile(self.n, x2, t, r)).collect();
                let mut by_z: BTreeMap<u64, Complex64> = BTreeMap::new();
                let mut row = Vec::with_capacity(nz);
                for &z in &zn {
                    let v = *by_z.entry(z.to_bits()).or_insert_with(|| rule.transform(&vals, self.m, z / tn) * pre);
                    row.push(if t.im == 0.0 { Complex64::new(v.re, 0.0) } else { v });
                }
                by_x2.insert(x2.to_bits(), row);
            }
            data.extend_from_slice(&by_x2[&x2.to_bits()]);
        }
        let mut out = GridFunction::new(spec.clone(), data)?;
        out.meta.time = Some(t);
        out.meta.note = alloc::format!(
            "heat kernel n={} m={} nodes_per_panel={} refinement={}",
            self.n,
            self.m,
            self.params.nodes_per_panel,
            self.params.refinement
        );
        Ok(out)
    }

    /// Samples of the unit-mass propagator `p_t / (2π)^{−n}`.
    pub fn sample_propagator(&self, t: Complex64, spec: &GridSpec) -> Result<GridFunction> {
        let inv = 1.0 / self.total_mass();
        let mut g = self.sample(t, spec)?;
        g.data_mut().iter_mut().for_each(|v| *v *= inv);
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupReport {
    pub max_error: f64,
    pub peak: f64,
    /// Boundary magnitude of the inputs relative to their peaks.
    pub boundary_ratio: f64,
}

impl SemigroupReport {
    pub fn relative(&self) -> f64 {
        self.max_error / self.peak
    }
}

/// Compares `p_{t1} ∗ p_{t2}` with `(2π)^{−n} p_{t1+t2}` over nodes off the
/// outer ring; the factor is the total mass of `p_{t2}`.
pub fn check_semigroup(s: &HTypeStructure, t1: f64, t2: f64, spec: &GridSpec) -> Result<SemigroupReport> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Domain("semigroup times must be positive".into()));
    }
    let k = KernelEvaluator::for_structure(s)?;
    let a = k.sample(Complex64::new(t1, 0.0), spec)?;
    let b = k.sample(Complex64::new(t2, 0.0), spec)?;
    let boundary_ratio = (a.boundary_max() / a.max_abs()).max(b.boundary_max() / b.max_abs());
    if boundary_ratio > 1e-6 {
        return Err(Error::Truncation { boundary: boundary_ratio, limit: 1e-6 });
    }
    let conv = group_convolve(s, &a, &b)?;
    let target = k.sample(Complex64::new(t1 + t2, 0.0), spec)?.map(|v| v * k.total_mass());
    let max_error = conv.max_abs_diff(&target, 1)?;
    Ok(SemigroupReport { max_error, peak: target.max_abs(), boundary_ratio })
}

/// `max |∂_t p_t − L p_t| / max |p_t|` over nodes two away from the faces,
/// with a central difference of step `delta` in time.
pub fn check_heat_equation(s: &HTypeStructure, t: f64, delta: f64, spec: &GridSpec) -> Result<f64> {
    if !(t > delta && delta > 0.0) {
        return Err(Error::Domain("need t > delta > 0".into()));
    }
    let k = KernelEvaluator::for_structure(s)?;
    let p = k.sample(Complex64::new(t, 0.0), spec)?;
    let plus = k.sample(Complex64::new(t + delta, 0.0), spec)?;
    let minus = k.sample(Complex64::new(t - delta, 0.0), spec)?;
    let lp = sublaplacian(s, &p)?;
    let mut worst: f64 = 0.0;
    for i in 0..spec.len() {
        if !spec.is_interior(&spec.unravel(i), 2) {
            continue;
        }
        let dt = (plus.data()[i] - minus.data()[i]) / (2.0 * delta);
        worst = worst.max((dt - lp.data()[i]).norm());
    }
    Ok(worst / p.max_abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadonReport {
    /// Ratio `P_{n,m} / avg` at `z = 0`.
    pub reference: f64,
    /// Ratio at each test point.
    pub constants: Vec<f64>,
    pub max_relative_deviation: f64,
}

/// Sphere average over `S^{m−1}` of `P_{n,1}(x, ⟨z, θ⟩)` for `|z| = z_norm`.
fn sphere_average(k1: &KernelEvaluator, x2: f64, z_norm: f64, m: usize, nodes: usize) -> Result<f64> {
    // ⟨z, θ⟩ = |z| cos φ with density ∝ sin^{m−2} φ on [0, π].
    let c = gamma_half(m) / (PI.sqrt() * gamma_half(m - 1));
    let (gx, gw) = gauss_legendre(nodes);
    let mut acc = 0.0;
    for (x, w) in gx.iter().zip(&gw) {
        let phi = 0.5 * PI * (x + 1.0);
        let s = z_norm * phi.cos();
        acc += 0.5 * PI * w * k1.eval_real(1.0, x2, s.abs())? * phi.sin().powi(m as i32 - 2);
    }
    Ok(c * acc)
}

/// Tests `P_{n,m}(x, z) = c_{n,m} · avg_{θ ∈ S^{m−1}} P_{n,1}(x, ⟨z, θ⟩)` at
/// `t = 1`, fitting `c` at `z = 0`.
pub fn radon_identity_check(n: usize, m: usize, x_norm: f64, z_norms: &[f64], sphere_nodes: usize) -> Result<RadonReport> {
    if m < 2 || sphere_nodes < 64 {
        return Err(Error::InvalidParameter("need m ≥ 2 and at least 64 sphere nodes".into()));
    }
    let km = KernelEvaluator::new(n, m)?;
    let k1 = KernelEvaluator::new(n, 1)?;
    let x2 = x_norm * x_norm;
    let ratio = |z: f64| -> Result<f64> { Ok(km.eval_real(1.0, x2, z)? / sphere_average(&k1, x2, z, m, sphere_nodes)?) };
    let reference = ratio(0.0)?;
    let mut constants = Vec::with_capacity(z_norms.len());
    let mut worst: f64 = 0.0;
    for &z in z_norms {
        let c = ratio(z)?;
        worst = worst.max((c / reference - 1.0).abs());
        constants.push(c);
    }
    Ok(RadonReport { reference, constants, max_relative_deviation: worst })
}

/// Largest relative error of the projection identity
/// `∫_{θ⊥} P_{n,m}(x, sθ + w) dw = P_{n,1}(x, s)` at `t = 1`.
pub fn radon_projection_check(n: usize, m: usize, x_norm: f64, s_values: &[f64], nodes: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter("need m ≥ 2".into()));
    }
    let km = KernelEvaluator::new(n, m)?;
    let k1 = KernelEvaluator::new(n, 1)?;
    let x2 = x_norm * x_norm;
    let rule = RadialRule::new(16.0, 0.5, nodes)?;
    let area = sphere_area(m - 1);
    let mut worst: f64 = 0.0;
    for &s in s_values {
        let mut acc = 0.0;
        for (rho, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * km.eval_direct(Complex64::new(1.0, 0.0), x2, (s * s + rho * rho).sqrt())?.re * rho.powi(m as i32 - 2);
        }
        let lhs = area * acc;
        let rhs = k1.eval_real(1.0, x2, s.abs())?;
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    /// Smallest C for the upper (or complex-time) bound.
    pub c_upper: f64,
    /// Smallest C for the lower bound; real time only.
    pub c_lower: Option<f64>,
    /// Extremes of `p_t` over the sharp two-sided Gaussian profile; real time only.
    pub eldridge_band: Option<(f64, f64)>,
}

impl EstimateReport {
    pub fn constant(&self) -> f64 {
        self.c_upper.max(self.c_lower.unwrap_or(0.0))
    }
}

/// Calibrates the constant of the Gaussian two-sided bounds on the box
/// `|x| ≤ x_max`, `|z| ≤ z_max` with `samples` norms per axis.
pub fn check_estimates(
    k: &KernelEvaluator,
    eps: f64,
    t: Complex64,
    x_max: f64,
    z_max: f64,
    samples: usize,
) -> Result<EstimateReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain("eps must lie in (0, 1)".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples per axis".into()));
    }
    let nm = (k.n() + k.m()) as f64;
    let real = t.im == 0.0;
    let inv4t = (Complex64::new(1.0, 0.0) / (t * 4.0)).re;
    let mut c_upper: f64 = 0.0;
    let mut c_lower: f64 = 0.0;
    let mut band = (f64::INFINITY, 0.0f64);
    for i in 0..samples {
        let xn = x_max * i as f64 / (samples - 1) as f64;
        for j in 0..samples {
            let zn = z_max * j as f64 / (samples - 1) as f64;
            let p = k.eval(t, xn * xn, zn)?;
            let b = eps_bounds(eps, xn, zn)?;
            let log_up = p.norm().ln() + nm * t.re.ln() + inv4t * b.lower;
            c_upper = c_upper.max(log_up.exp());
            if real {
                let tr = t.re;
                if p.re <= 0.0 {
                    return Err(Error::Domain(alloc::format!("kernel not positive at |x|={xn}, |z|={zn}")));
                }
                let log_low = -b.upper / (4.0 * tr) - nm * tr.ln() - p.re.ln();
                c_lower = c_lower.max(log_low.exp());
                let d = distance_from_norms(xn, zn)?.d;
                let (n, m) = (k.n() as i32, k.m() as i32);
                let sharp = tr.powf(-nm) * (1.0 + tr.sqrt() * d).powi(2 * n + m - 1)
                    / (1.0 + (tr * xn * d).powf(n as f64 - 0.5))
                    * (-d * d / (4.0 * tr)).exp();
                let q = p.re / sharp;
                band = (band.0.min(q), band.1.max(q));
            }
        }
    }
    if !c_upper.is_finite() || (real && !c_lower.is_finite()) {
        return Err(Error::Domain("calibrated constant is not finite".into()));
    }
    Ok(EstimateReport {
        c_upper,
        c_lower: real.then_some(c_lower),
        eldridge_band: real.then_some(band),
    })
}
