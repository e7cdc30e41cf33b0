//! Carnot–Carathéodory distance on H-type groups.
//!
//! The distance depends only on `|x|` and `|z|`. Away from the axes it is
//! `|x| θ / sin θ` where `θ ∈ (0, π)` solves `ν(θ) = 4|z| / |x|²`.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GroupPoint, HTypeStructure};
use crate::error::{Error, Result};

const SERIES_CUT: f64 = 1e-4;

/// `ν(θ) = (θ − sin θ cos θ) / sin² θ` on `[0, π)`.
pub fn nu(theta: f64) -> Result<f64> {
    check_open(theta)?;
    let d = PI - theta;
    Ok(if theta < SERIES_CUT {
        let t2 = theta * theta;
        theta * (2.0 / 3.0 + t2 * (4.0 / 45.0 + t2 * 4.0 / 315.0))
    } else if d < SERIES_CUT {
        PI / (d * d) + PI / 3.0 - 2.0 / 3.0 * d + PI * d * d / 15.0
    } else {
        let (s, c) = theta.sin_cos();
        (theta - s * c) / (s * s)
    })
}

/// `ν'(θ)`.
pub fn nu_derivative(theta: f64) -> Result<f64> {
    check_open(theta)?;
    let d = PI - theta;
    Ok(if theta < SERIES_CUT {
        2.0 / 3.0 + 4.0 / 15.0 * theta * theta
    } else if d < SERIES_CUT {
        2.0 * PI / (d * d * d) + 2.0 / 3.0 - 2.0 * PI * d / 15.0
    } else {
        let (s, c) = theta.sin_cos();
        2.0 * (1.0 - nu(theta)? * c / s)
    })
}

fn check_open(theta: f64) -> Result<()> {
    if !(0.0..PI).contains(&theta) {
        return Err(Error::Domain(alloc::format!("theta = {theta} outside [0, pi)")));
    }
    Ok(())
}

/// Inverts `ν` on `[0, π)`: bisection to a bracket of width `1e-3`, then
/// safeguarded Newton.
pub fn solve_theta(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(alloc::format!("cannot invert nu at {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-12 * (1.0 + r);
    let (mut lo, mut hi) = (0.0f64, PI);
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if nu(mid)? < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = if hi == PI && r > 1e4 {
        PI - (PI / (r - PI / 3.0)).sqrt()
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let f = nu(theta)? - r;
        if f.abs() <= tol {
            break;
        }
        if f < 0.0 {
            lo = lo.max(theta);
        } else {
            hi = hi.min(theta);
        }
        let mut next = theta - f / nu_derivative(theta)?;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == theta {
            break;
        }
        theta = next;
    }
    Ok(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceBranch {
    Generic,
    ZZero,
    XZero,
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    pub d: f64,
    /// Geodesic parameter; `0` on the `z = 0` branch and `π` on `x = 0`.
    pub theta: f64,
    pub branch: DistanceBranch,
}

/// Distance from the identity to `g`.
pub fn cc_distance(s: &HTypeStructure, g: &GroupPoint) -> Result<DistanceResult> {
    s.check_point(g)?;
    let x_zero = g.x.iter().all(|&v| v == 0.0);
    let z_zero = g.z.iter().all(|&v| v == 0.0);
    let (xn, zn) = (g.x_norm(), g.z_norm());
    Ok(match (x_zero, z_zero) {
        (true, true) => DistanceResult { d: 0.0, theta: 0.0, branch: DistanceBranch::Origin },
        (false, true) => DistanceResult { d: xn, theta: 0.0, branch: DistanceBranch::ZZero },
        (true, false) => DistanceResult { d: (4.0 * PI * zn).sqrt(), theta: PI, branch: DistanceBranch::XZero },
        (false, false) => generic_distance(xn, zn)?,
    })
}

/// `d(g, h) = d(g⁻¹ h)`.
pub fn distance_between(s: &HTypeStructure, g: &GroupPoint, h: &GroupPoint) -> Result<DistanceResult> {
    let rel = s.multiply(&s.inverse(g)?, h)?;
    cc_distance(s, &rel)
}

/// Distance as a function of `(|x|, |z|)`.
pub fn distance_from_norms(x_norm: f64, z_norm: f64) -> Result<DistanceResult> {
    if !(x_norm >= 0.0 && z_norm >= 0.0) {
        return Err(Error::Domain("norms must be nonnegative".into()));
    }
    Ok(match (x_norm == 0.0, z_norm == 0.0) {
        (true, true) => DistanceResult { d: 0.0, theta: 0.0, branch: DistanceBranch::Origin },
        (false, true) => DistanceResult { d: x_norm, theta: 0.0, branch: DistanceBranch::ZZero },
        (true, false) => DistanceResult { d: (4.0 * PI * z_norm).sqrt(), theta: PI, branch: DistanceBranch::XZero },
        (false, false) => generic_distance(x_norm, z_norm)?,
    })
}

fn generic_distance(xn: f64, zn: f64) -> Result<DistanceResult> {
    let theta = solve_theta(4.0 * zn / (xn * xn))?;
    let ratio = if theta < SERIES_CUT { 1.0 + theta * theta / 6.0 } else { theta / theta.sin() };
    Ok(DistanceResult { d: xn * ratio, theta, branch: DistanceBranch::Generic })
}

/// `F(θ) = θ² / (sin²θ + θ − sinθ cosθ)`, which equals `d² / (|x|² + 4|z|)`
/// along the geodesic family with parameter `θ`.
pub fn distance_ratio(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(alloc::format!("theta = {theta} outside [0, pi]")));
    }
    let d = PI - theta;
    Ok(if theta < SERIES_CUT {
        1.0 - theta * (2.0 / 3.0 - theta * (7.0 / 9.0 - theta * 82.0 / 135.0))
    } else if d < SERIES_CUT {
        (PI - d).powi(2) / (PI + d * d - 2.0 / 3.0 * d * d * d)
    } else {
        let (s, c) = theta.sin_cos();
        theta * theta / (s * s + theta - s * c)
    })
}

/// One sample of the ratio `d² / (|x|² + 4|z|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSample {
    pub x_norm: f64,
    pub z_norm: f64,
    pub theta: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub min: f64,
    pub max: f64,
    pub argmin: RatioSample,
    pub argmax: RatioSample,
    pub count: usize,
}

impl BoundsReport {
    /// Whether every sample satisfies `π/4 ≤ ratio ≤ π` up to `slack`.
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.min >= PI / 4.0 - slack && self.max <= PI + slack
    }
}

pub fn ratio_sample(x_norm: f64, z_norm: f64) -> Result<RatioSample> {
    let r = distance_from_norms(x_norm, z_norm)?;
    let denom = x_norm * x_norm + 4.0 * z_norm;
    if denom == 0.0 {
        return Err(Error::Domain("ratio undefined at the origin".into()));
    }
    Ok(RatioSample { x_norm, z_norm, theta: r.theta, ratio: r.d * r.d / denom })
}

/// Extremes of the ratio over the given `(|x|, |z|)` pairs.
pub fn distance_bound_ratios(points: &[(f64, f64)]) -> Result<BoundsReport> {
    let mut report: Option<BoundsReport> = None;
    for &(xn, zn) in points {
        let s = ratio_sample(xn, zn)?;
        report = Some(match report {
            None => BoundsReport { min: s.ratio, max: s.ratio, argmin: s, argmax: s, count: 1 },
            Some(mut r) => {
                if s.ratio < r.min {
                    r.min = s.ratio;
                    r.argmin = s;
                }
                if s.ratio > r.max {
                    r.max = s.ratio;
                    r.argmax = s;
                }
                r.count += 1;
                r
            }
        });
    }
    report.ok_or_else(|| Error::InvalidParameter("no samples".into()))
}

/// Ratio extremes over a `θ`-sweep of `samples` points (three quarters uniform
/// on `[0, π)`, one quarter approaching `π` geometrically, plus `θ = π/4`)
/// and `samples` random points with log-uniform norms.
pub fn verify_distance_bounds(samples: usize, seed: u64) -> Result<BoundsReport> {
    if samples < 4 {
        return Err(Error::InvalidParameter("need at least 4 samples".into()));
    }
    let mut pts = alloc::vec::Vec::with_capacity(2 * samples + 1);
    let tail = samples / 4;
    let uniform = samples - tail;
    let mut push_theta = |theta: f64| -> Result<()> {
        // |x| = 1 and 4|z| = ν(θ).
        pts.push((1.0, nu(theta)? / 4.0));
        Ok(())
    };
    for k in 0..uniform {
        push_theta(PI * k as f64 / uniform as f64)?;
    }
    // δ from 1e-1 down to 2e-7: beyond that θ = π − δ is too coarse in f64.
    let (l0, l1) = (-1.0f64, (2e-7f64).log10());
    for k in 0..tail {
        let e = l0 + (l1 - l0) * k as f64 / (tail.max(2) - 1) as f64;
        push_theta(PI - 10f64.powf(e))?;
    }
    push_theta(PI / 4.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let xn = 10f64.powf(rng.random_range(-3.0..3.0));
        let zn = 10f64.powf(rng.random_range(-3.0..3.0));
        pts.push((xn, zn));
    }
    distance_bound_ratios(&pts)
}

/// Bounds `(1−ε)|x|² + πε|z| ≤ d² ≤ (1+ε)|x|² + (20π/ε)|z|` for `0 < ε < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn eps_bounds(eps: f64, x_norm: f64, z_norm: f64) -> Result<EpsBounds> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(alloc::format!("eps = {eps} outside (0, 1)")));
    }
    let x2 = x_norm * x_norm;
    Ok(EpsBounds {
        lower: (1.0 - eps) * x2 + PI * eps * z_norm,
        upper: (1.0 + eps) * x2 + 20.0 * PI / eps * z_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_series_match_closed_form_at_switches() {
        let direct = |t: f64| {
            let (s, c) = t.sin_cos();
            (t - s * c) / (s * s)
        };
        // Just inside the series regions, where the closed form is still accurate.
        let t = 0.999 * SERIES_CUT;
        assert!((nu(t).unwrap() - direct(t)).abs() <= 1e-9 * direct(t));
        let t = PI - 0.999 * SERIES_CUT;
        assert!((nu(t).unwrap() - direct(t)).abs() <= 1e-9 * direct(t));
        assert!(nu(PI).is_err());
        assert!(nu(-0.1).is_err());
    }

    #[test]
    fn solve_theta_roundtrip() {
        for &t in &[1e-7, 1e-3, 0.5, 1.0, 2.0, 3.0, 3.14, PI - 1e-5] {
            let r = nu(t).unwrap();
            let back = solve_theta(r).unwrap();
            assert!((nu(back).unwrap() - r).abs() <= 1e-12 * (1.0 + r), "theta {t}");
        }
    }

    #[test]
    fn ratio_endpoints() {
        assert!((distance_ratio(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((distance_ratio(PI / 4.0).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!((distance_ratio(PI).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn branches() {
        assert_eq!(distance_from_norms(0.0, 0.0).unwrap().branch, DistanceBranch::Origin);
        let r = distance_from_norms(2.0, 0.0).unwrap();
        assert_eq!((r.d, r.branch), (2.0, DistanceBranch::ZZero));
        let r = distance_from_norms(0.0, 1.0).unwrap();
        assert!((r.d - (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_horizontal_sample_has_unit_ratio() {
        let r = distance_bound_ratios(&[(1.5, 0.0)]).unwrap();
        assert_eq!((r.min, r.max), (1.0, 1.0));
    }
}
