//! Radial Fourier transforms on R^m by panelled Gauss–Legendre quadrature.
//!
//! For a radial profile `Φ(|λ|)`,
//! `∫ Φ(|λ|) e^{2πi⟨λ,w⟩} dλ = 2π|w|^{1−m/2} ∫₀^∞ Φ(r) J_{m/2−1}(2πr|w|) r^{m/2} dr`,
//! which is `2∫₀^∞ Φ(r) cos(2πr|w|) dr` when `m = 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special::{bessel_j, gauss_legendre, sphere_area};

/// Composite Gauss–Legendre rule on `[0, Λ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub cutoff: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    /// Equal panels no wider than `max_width`, `per_panel` nodes each.
    pub fn new(cutoff: f64, max_width: f64, per_panel: usize) -> Result<Self> {
        if !(cutoff > 0.0 && max_width > 0.0) || per_panel == 0 {
            return Err(Error::InvalidParameter("radial rule needs positive cutoff, width and nodes".into()));
        }
        let panels = (cutoff / max_width).ceil().max(1.0) as usize;
        let (gx, gw) = gauss_legendre(per_panel);
        let width = cutoff / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self { cutoff, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Transform of the profile whose values at `self.nodes` are `values`.
    pub fn transform(&self, values: &[Complex64], m: usize, w: f64) -> Complex64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let mut acc = Complex64::new(0.0, 0.0);
        if w == 0.0 {
            for ((r, wt), v) in self.nodes.iter().zip(&self.weights).zip(values) {
                acc += v * (wt * r.powi(m as i32 - 1));
            }
            return acc * sphere_area(m);
        }
        let k = 2.0 * PI * w;
        match m {
            1 => {
                for ((r, wt), v) in self.nodes.iter().zip(&self.weights).zip(values) {
                    acc += v * (wt * (k * r).cos());
                }
                acc * 2.0
            }
            3 => {
                // J_{1/2}(y) y^{...}: the kernel reduces to 2 r sin(k r) / w.
                for ((r, wt), v) in self.nodes.iter().zip(&self.weights).zip(values) {
                    acc += v * (wt * r * (k * r).sin());
                }
                acc * (2.0 / w)
            }
            _ => {
                let two_nu = m as i32 - 2;
                let half = m as f64 / 2.0;
                for ((r, wt), v) in self.nodes.iter().zip(&self.weights).zip(values) {
                    acc += v * (wt * bessel_j(two_nu, k * r) * r.powf(half));
                }
                acc * (2.0 * PI * w.powf(1.0 - half))
            }
        }
    }
}

/// `∫_{R^m} profile(|λ|) e^{2πi⟨λ,w⟩} dλ` for a profile negligible beyond `cutoff`.
///
/// Fails when `|profile(cutoff)|·cutoff^{m−1}` exceeds `1e-14` times the
/// largest sampled magnitude.
pub fn radial_fourier(
    profile: impl Fn(f64) -> Complex64,
    m: usize,
    w: f64,
    cutoff: f64,
    per_panel: usize,
) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::InvalidDimension("m must be positive".into()));
    }
    let width = if w > 0.0 { (0.5 / w).min(0.5) } else { 0.5 };
    let rule = RadialRule::new(cutoff, width, per_panel)?;
    let values: Vec<Complex64> = rule.nodes.iter().map(|&r| profile(r)).collect();
    let peak = values.iter().fold(profile(0.0).norm(), |a, v| a.max(v.norm()));
    let tail = profile(cutoff).norm() * cutoff.max(1.0).powi(m as i32 - 1);
    if tail > 1e-14 * peak {
        return Err(Error::Quadrature(alloc::format!("tail {tail:e} at cutoff {cutoff} is not negligible")));
    }
    Ok(rule.transform(&values, m, w))
}
