//! Gaussian-mixture representation of the kernel profile and the
//! counterexample built from part of the mixing measure.
//!
//! For fixed `x`, `φ_x(u) = ∫ e^{−πτ²u²} dν_x(τ)` with `ν_x ≥ 0`, hence
//! `p_1(x, z) = ∫ τ^{−m} e^{−π|z|²/τ²} dν_x(τ)`. The measure is approximated by
//! nonnegative weights on a fixed grid of scales.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::HTypeStructure;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::kernel::{KernelEvaluator, ProfileFunction};
use crate::linalg::Matrix;
use crate::nnls::{kkt_violation, nnls};
use crate::operators::group_convolve;

/// `count` log-spaced scales on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

/// 128 scales on `[1e-3, 1e2]`.
pub fn default_tau_grid() -> Vec<f64> {
    log_grid(1e-3, 1e2, 128)
}

/// 241 points on `[0, 6]`.
pub fn default_u_grid() -> Vec<f64> {
    (0..241).map(|k| 6.0 * k as f64 / 240.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub tau: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureFit {
    /// One atom per dictionary scale, zero weights included.
    pub atoms: Vec<Atom>,
    /// Largest absolute deviation on the sample points.
    pub residual: f64,
    /// KKT violation of the normalized problem.
    pub kkt: f64,
}

/// Nonnegative fit of `target(u_i) ≈ Σ_k w_k e^{−π τ_k² u_i²}`.
///
/// The problem is solved for `target / target[0]` and rescaled.
pub fn fit_mixture(target: &[f64], tau_grid: &[f64], u_grid: &[f64]) -> Result<MixtureFit> {
    if tau_grid.len() < 2 || tau_grid.windows(2).any(|w| !(w[1] > w[0])) || tau_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("tau grid must be positive and strictly increasing".into()));
    }
    if target.len() != u_grid.len() {
        return Err(Error::LengthMismatch { expected: u_grid.len(), got: target.len() });
    }
    let scale = target.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::InvalidParameter("target vanishes on the sample points".into()));
    }
    let a = Matrix::from_fn(u_grid.len(), tau_grid.len(), |i, k| (-PI * (tau_grid[k] * u_grid[i]).powi(2)).exp());
    let b: Vec<f64> = target.iter().map(|v| v / scale).collect();
    let sol = nnls(&a, &b)?;
    let fitted = a.mul_vec(&sol.x);
    let residual = fitted.iter().zip(&b).fold(0.0f64, |m, (f, t)| m.max((f - t).abs())) * scale;
    let kkt = kkt_violation(&a, &b, &sol.x);
    let atoms = tau_grid.iter().zip(&sol.x).map(|(&tau, &w)| Atom { tau, weight: w * scale }).collect();
    Ok(MixtureFit { atoms, residual, kkt })
}

/// Discrete mixing measure for the profile at one `|x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoenbergMeasure {
    pub atoms: Vec<Atom>,
    pub x_norm: f64,
    pub n: usize,
    pub fit_residual: f64,
    pub kkt: f64,
}

impl SchoenbergMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `Σ w_k / τ_k`.
    pub fn inverse_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight / a.tau).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().filter(|a| a.weight > 0.0)
    }

    /// Mixture value at `u`.
    pub fn profile(&self, u: f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * (-PI * (a.tau * u).powi(2)).exp()).sum()
    }
}

/// Fits `φ_x` for `|x| = x_norm`; fails when the largest deviation exceeds
/// `1e-6 φ_x(0)`.
pub fn fit_measure(n: usize, x_norm: f64, tau_grid: &[f64], u_grid: &[f64]) -> Result<SchoenbergMeasure> {
    if tau_grid.len() < 16 {
        return Err(Error::InvalidParameter("tau grid needs at least 16 scales".into()));
    }
    let phi = ProfileFunction::new(n, x_norm);
    let target: Vec<f64> = u_grid.iter().map(|&u| phi.eval(u)).collect();
    let fit = fit_mixture(&target, tau_grid, u_grid)?;
    let threshold = 1e-6 * phi.at_zero();
    if fit.residual > threshold {
        return Err(Error::FitFailure {
            residual: fit.residual,
            threshold,
            hint: "refine the tau grid or extend it toward small scales".into(),
        });
    }
    Ok(SchoenbergMeasure { atoms: fit.atoms, x_norm, n, fit_residual: fit.residual, kkt: fit.kkt })
}

/// `Σ_k w_k τ_k^{−m} e^{−π|z|²/τ_k²}`.
pub fn reconstruct_kernel_slice(mu: &SchoenbergMeasure, m: usize, z_norm: f64) -> f64 {
    mixture_slice(mu.atoms.iter(), m, z_norm)
}

fn mixture_slice<'a>(atoms: impl Iterator<Item = &'a Atom>, m: usize, z_norm: f64) -> f64 {
    atoms
        .filter(|a| a.weight > 0.0)
        .map(|a| a.weight * a.tau.powi(-(m as i32)) * (-PI * (z_norm / a.tau).powi(2)).exp())
        .sum()
}

/// Which part of the measure the counterexample keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffSide {
    /// Atoms with `τ ≥ cutoff`.
    Above,
    /// Atoms with `τ < cutoff`; the resulting slice is at most `τ^{−m}`-weighted
    /// Gaussians of width below the cutoff.
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleWarning {
    /// No atoms on the kept side: the function vanishes.
    Zero,
    /// Every atom is kept: the function is the kernel slice itself.
    FullKernel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub atoms: Vec<Atom>,
    pub cutoff: f64,
    pub side: CutoffSide,
    pub m: usize,
    pub warning: Option<CounterexampleWarning>,
}

impl Counterexample {
    pub fn eval(&self, z_norm: f64) -> f64 {
        mixture_slice(self.atoms.iter(), self.m, z_norm)
    }
}

/// Keeps the part of `mu` on one side of `cutoff`.
pub fn build_counterexample(mu: &SchoenbergMeasure, cutoff: f64, m: usize, side: CutoffSide) -> Result<Counterexample> {
    if !(cutoff >= 0.0) || m == 0 {
        return Err(Error::InvalidParameter("cutoff must be nonnegative and m positive".into()));
    }
    let keep = |a: &Atom| match side {
        CutoffSide::Above => a.tau >= cutoff,
        CutoffSide::Below => a.tau < cutoff,
    };
    let support: Vec<Atom> = mu.support().cloned().collect();
    let atoms: Vec<Atom> = support.iter().filter(|a| keep(a)).cloned().collect();
    let warning = if atoms.is_empty() {
        Some(CounterexampleWarning::Zero)
    } else if atoms.len() == support.len() {
        Some(CounterexampleWarning::FullKernel)
    } else {
        None
    };
    Ok(Counterexample { atoms, cutoff, side, m, warning })
}

/// Samples the counterexample on a grid, fitting one measure per distinct `|x|`.
pub fn counterexample_grid(
    spec: &GridSpec,
    cutoff: f64,
    side: CutoffSide,
    tau_grid: &[f64],
    u_grid: &[f64],
) -> Result<GridFunction> {
    let n = spec.n();
    let m = spec.m();
    let d = 2 * n;
    let mut cache: BTreeMap<u64, Counterexample> = BTreeMap::new();
    let mut out = GridFunction::zeros(spec.clone());
    for k in 0..spec.len() {
        let c = spec.node_coords(&spec.unravel(k));
        let x2: f64 = c[..d].iter().map(|v| v * v).sum();
        let zn = c[d..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !cache.contains_key(&x2.to_bits()) {
            let mu = fit_measure(n, x2.sqrt(), tau_grid, u_grid)?;
            cache.insert(x2.to_bits(), build_counterexample(&mu, cutoff, m, side)?);
        }
        out.data_mut()[k] = Complex64::new(cache[&x2.to_bits()].eval(zn), 0.0);
    }
    out.meta.note = alloc::format!("counterexample cutoff={cutoff} side={side:?}");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceEntry {
    pub s: f64,
    /// Largest `(f ∗ q_s) / p_{1+s}` over the checked nodes, with `q_s` the unit-mass propagator.
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub entries: Vec<DominanceEntry>,
    pub tolerance: f64,
}

impl DominanceReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.max_ratio <= 1.0 + self.tolerance)
    }
}

/// For each `s`, `max (f ∗ q_s) / p_{1+s}` over nodes off the outer ring where
/// `p_{1+s}` exceeds `1e-4` of its peak.
pub fn check_dominance_under_heat_flow(
    s: &HTypeStructure,
    f: &GridFunction,
    s_list: &[f64],
    tolerance: f64,
) -> Result<DominanceReport> {
    let k = KernelEvaluator::for_structure(s)?;
    let spec = f.spec();
    let mut entries = Vec::with_capacity(s_list.len());
    for &sv in s_list {
        if !(sv > 0.0) {
            return Err(Error::Domain("heat-flow times must be positive".into()));
        }
        let q = k.sample_propagator(Complex64::new(sv, 0.0), spec)?;
        let conv = group_convolve(s, f, &q)?;
        let target = k.sample(Complex64::new(1.0 + sv, 0.0), spec)?;
        let floor = 1e-4 * target.max_abs();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..spec.len() {
            let p = target.data()[i].re;
            if p < floor || !spec.is_interior(&spec.unravel(i), 1) {
                continue;
            }
            worst = worst.max(conv.data()[i].re / p);
        }
        entries.push(DominanceEntry { s: sv, max_ratio: worst });
    }
    Ok(DominanceReport { entries, tolerance })
}
