//! Free Schrödinger evolution on H-type groups and its reduction to a
//! magnetic Schrödinger equation on R^{2n}.
//!
//! Conventions: solutions satisfy `i ∂_t u + L u + V u = 0`; the free
//! propagator at time `t` is convolution with the unit-mass kernel at complex
//! time `ε + i t`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{build_structure, HTypeStructure};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::kernel::KernelEvaluator;
use crate::linalg::{lstsq, Matrix};
use crate::operators::group_convolve;

pub type RealPotential = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type TimePotential = Arc<dyn Fn(&[f64], f64) -> Complex64 + Send + Sync>;

/// `V(x, t) = V1(x) + V2(x, t)` with the decay weight parameters `a, b, T`.
#[derive(Clone)]
pub struct PotentialSpec {
    pub v1: RealPotential,
    pub v2: TimePotential,
    pub a: f64,
    pub b: f64,
    pub t_final: f64,
}

impl core::fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PotentialSpec").field("a", &self.a).field("b", &self.b).field("T", &self.t_final).finish()
    }
}

impl PotentialSpec {
    pub fn new(v1: RealPotential, v2: TimePotential, a: f64, b: f64, t_final: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && t_final > 0.0) {
            return Err(Error::InvalidParameter("a, b and T must be positive".into()));
        }
        Ok(Self { v1, v2, a, b, t_final })
    }

    pub fn zero(a: f64, b: f64, t_final: f64) -> Result<Self> {
        Self::new(Arc::new(|_| 0.0), Arc::new(|_, _| Complex64::new(0.0, 0.0)), a, b, t_final)
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Complex64 {
        (self.v2)(x, t) + (self.v1)(x)
    }

    /// `T² |x|² / (a t + b (T − t))²`, the log of the decay weight.
    pub fn log_weight(&self, x: &[f64], t: f64, a: f64, b: f64) -> f64 {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        let den = a * t + b * (self.t_final - t);
        self.t_final * self.t_final * x2 / (den * den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisReport {
    pub bound_v1: f64,
    pub weight_sup: f64,
    /// Weighted supremum re-measured with `(2a, 2b)`.
    pub weight_sup_relaxed: f64,
    pub pass: bool,
}

/// Measures `sup |V1|` and `sup_t sup_x e^{T²|x|²/(at+b(T−t))²} |V2(x, t)|`
/// over the sample points and time nodes.
pub fn check_hypothesis(p: &PotentialSpec, points: &[Vec<f64>], t_nodes: &[f64]) -> HypothesisReport {
    let mut bound_v1: f64 = 0.0;
    let (mut sup, mut sup2): (f64, f64) = (0.0, 0.0);
    for x in points {
        bound_v1 = bound_v1.max((p.v1)(x).abs());
        for &t in t_nodes {
            let v = (p.v2)(x, t).norm();
            if v == 0.0 {
                continue;
            }
            let lv = v.ln();
            sup = sup.max((lv + p.log_weight(x, t, p.a, p.b)).exp());
            sup2 = sup2.max((lv + p.log_weight(x, t, 2.0 * p.a, 2.0 * p.b)).exp());
        }
    }
    let pass = bound_v1.is_finite() && sup.is_finite() && sup2 <= sup * (1.0 + 1e-12);
    HypothesisReport { bound_v1, weight_sup: sup, weight_sup_relaxed: sup2, pass }
}

/// Problem rescaled to unit final time.
#[derive(Debug, Clone)]
pub struct RescaledProblem {
    pub initial: GridFunction,
    pub terminal: GridFunction,
    pub potential: PotentialSpec,
}

/// `U(x, z, t) = u(√T x, T z, T t)` and `V_T(x, t) = T V(√T x, T t)`.
///
/// The samples are unchanged; only the grid coordinates shrink. The weight
/// parameters become `a/√T` and `b/√T`, so `ab < 4T` turns into `ãb̃ < 4`.
pub fn rescale_to_unit_time(u0: &GridFunction, u_t: &GridFunction, v: &PotentialSpec) -> Result<RescaledProblem> {
    let t = v.t_final;
    let rt = t.sqrt();
    let rescale = |g: &GridFunction| -> Result<GridFunction> {
        let sp = g.spec();
        let d = 2 * sp.n();
        let f = |a: usize| if a < d { rt } else { t };
        let spacings = (0..sp.dims()).map(|a| sp.spacings()[a] / f(a)).collect();
        let origins = (0..sp.dims()).map(|a| sp.origins()[a] / f(a)).collect();
        let spec = GridSpec::new(sp.n(), sp.m(), sp.counts().to_vec(), spacings, origins)?;
        let mut out = GridFunction::new(spec, g.data().to_vec())?;
        out.meta = g.meta.clone();
        Ok(out)
    };
    let (v1, v2) = (v.v1.clone(), v.v2.clone());
    let potential = PotentialSpec::new(
        Arc::new(move |x: &[f64]| {
            let y: Vec<f64> = x.iter().map(|c| c * rt).collect();
            t * v1(&y)
        }),
        Arc::new(move |x: &[f64], s: f64| {
            let y: Vec<f64> = x.iter().map(|c| c * rt).collect();
            v2(&y, t * s) * t
        }),
        v.a / rt,
        v.b / rt,
        1.0,
    )?;
    Ok(RescaledProblem { initial: rescale(u0)?, terminal: rescale(u_t)?, potential })
}

/// `u0 ∗ q_{ε + i t}` with `q` the unit-mass kernel; `ε` defaults to `0.05 t`.
pub fn free_evolve(s: &HTypeStructure, u0: &GridFunction, t: f64, eps: Option<f64>) -> Result<GridFunction> {
    let eps = eps.unwrap_or(0.05 * t);
    if !(eps >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("evolution needs eps ≥ 0 and finite t".into()));
    }
    let k = KernelEvaluator::for_structure(s)?;
    let q = k.sample_propagator(Complex64::new(eps, t), u0.spec())?;
    group_convolve(s, u0, &q)
}

/// `η` followed by an orthonormal basis of `η⊥`, completed from the
/// coordinate axes in index order.
pub fn orthonormal_completion(eta: &[f64]) -> Vec<Vec<f64>> {
    let m = eta.len();
    let mut basis: Vec<Vec<f64>> = vec![eta.to_vec()];
    for j in 0..m {
        if basis.len() == m {
            break;
        }
        let mut v = vec![0.0; m];
        v[j] = 1.0;
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(p, q)| p * q).sum();
            v.iter_mut().zip(b).for_each(|(p, q)| *p -= c * q);
        }
        let nv = v.iter().map(|p| p * p).sum::<f64>().sqrt();
        if nv > 1e-8 {
            basis.push(v.iter().map(|p| p / nv).collect());
        }
    }
    basis
}

/// `U_η(x, s) = ∫_{η⊥} u(x, sη + w) dw` on a grid over `R^{2n} × R`.
///
/// The plane integral is a Riemann sum with the smallest z spacing, the
/// integrand read off `u` by multilinear interpolation. For `m = 1` the result
/// is `u` itself, reflected when `η = −1`.
pub fn radon_reduce(u: &GridFunction, eta: &[f64]) -> Result<GridFunction> {
    let sp = u.spec();
    let (n, m) = (sp.n(), sp.m());
    if m == 0 || eta.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: eta.len() });
    }
    let norm = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(alloc::format!("eta has norm {norm}, expected 1")));
    }
    let d = 2 * n;
    let mut out = if m == 1 {
        if eta[0] > 0.0 {
            u.clone()
        } else {
            let (c, h, o) = (sp.counts()[d], sp.spacings()[d], sp.origins()[d]);
            let mut origins = sp.origins().to_vec();
            origins[d] = -(o + (c - 1) as f64 * h);
            let spec = GridSpec::new(n, 1, sp.counts().to_vec(), sp.spacings().to_vec(), origins)?;
            let mut data = u.data().to_vec();
            for row in data.chunks_mut(c) {
                row.reverse();
            }
            GridFunction::new(spec, data)?
        }
    } else {
        let h = sp.spacings()[d..].iter().cloned().fold(f64::INFINITY, f64::min);
        let radius = (0..m)
            .map(|k| {
                let lo = sp.origins()[d + k];
                let hi = lo + (sp.counts()[d + k] - 1) as f64 * sp.spacings()[d + k];
                lo.abs().max(hi.abs()).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        let half = (radius / h).ceil() as usize;
        let count = 2 * half + 1;
        let basis = orthonormal_completion(eta);
        let xspec = sp.horizontal();
        let mut counts = xspec.counts().to_vec();
        counts.push(count);
        let mut spacings = xspec.spacings().to_vec();
        spacings.push(h);
        let mut origins = xspec.origins().to_vec();
        origins.push(-(half as f64) * h);
        let spec = GridSpec::new(n, 1, counts, spacings, origins)?;
        // Offsets w = Σ c_j b_j over the (m−1)-cube of coefficients, kept inside the ball.
        let mut offsets: Vec<Vec<f64>> = Vec::new();
        let total = count.pow((m - 1) as u32);
        for flat in 0..total {
            let mut rem = flat;
            let mut w = vec![0.0; m];
            let mut r2 = 0.0;
            for b in basis.iter().skip(1) {
                let c = ((rem % count) as f64 - half as f64) * h;
                rem /= count;
                r2 += c * c;
                w.iter_mut().zip(b).for_each(|(p, q)| *p += c * q);
            }
            if r2 <= (radius + h) * (radius + h) {
                offsets.push(w);
            }
        }
        let cell = h.powi((m - 1) as i32);
        let mut data = Vec::with_capacity(spec.len());
        let mut point = vec![0.0; d + m];
        for xk in 0..xspec.len() {
            let xc = xspec.node_coords(&xspec.unravel(xk));
            point[..d].copy_from_slice(&xc);
            for si in 0..count {
                let s = (si as f64 - half as f64) * h;
                let mut acc = Complex64::new(0.0, 0.0);
                for w in &offsets {
                    for k in 0..m {
                        point[d + k] = s * eta[k] + w[k];
                    }
                    acc += u.interpolate(&point);
                }
                data.push(acc * cell);
            }
        }
        GridFunction::new(spec, data)?
    };
    let edge = u.z_boundary_max();
    if edge > 1e-10 * u.max_abs() {
        out.meta.truncation = Some(edge);
    }
    Ok(out)
}

/// `f_ξ(x) = ∫ U(x, z) e^{iξz} dz` by the trapezoid rule, for `m = 1`.
pub fn partial_fourier(u: &GridFunction, xi: f64) -> Result<GridFunction> {
    let sp = u.spec();
    if sp.m() != 1 {
        return Err(Error::InvalidDimension("partial Fourier transform needs m = 1".into()));
    }
    let d = 2 * sp.n();
    let (c, h) = (sp.counts()[d], sp.spacings()[d]);
    let phases: Vec<Complex64> = (0..c)
        .map(|j| {
            let w = if j == 0 || j + 1 == c { 0.5 * h } else { h };
            Complex64::from_polar(w, xi * sp.coord(d, j))
        })
        .collect();
    let data = u.data().chunks(c).map(|row| row.iter().zip(&phases).map(|(a, b)| a * b).sum()).collect();
    let mut out = GridFunction::new(sp.horizontal(), data)?;
    let edge = u.z_boundary_max();
    if edge > 1e-10 * u.max_abs() {
        out.meta.truncation = Some(edge);
    }
    Ok(out)
}

/// `M_ξ = ξ J`, with `J = [[0, −I], [I, 0]]` on `R^{2n}`.
pub fn magnetic_matrix(n: usize, xi: f64) -> Result<Matrix> {
    Ok(build_structure(n, 1)?.generator(0).scale(xi))
}

/// `max |i ∂_t f + Δ_C f + V f| / max |f|` over interior nodes and interior
/// times, with `C = M_ξ x / 2` and `Δ_C = Δ − 2i C·∇ − |C|²` (`∇·C = 0`).
/// Slices are at `t0 + k dt`.
pub fn magnetic_residual(series: &[GridFunction], t0: f64, dt: f64, xi: f64, v: Option<&PotentialSpec>) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 time slices".into()));
    }
    let sp = series[0].spec().clone();
    if sp.m() != 0 {
        return Err(Error::InvalidDimension("magnetic residual acts on functions of x only".into()));
    }
    if series.iter().any(|f| !f.spec().same_shape(&sp)) {
        return Err(Error::GridMismatch("time slices on different grids".into()));
    }
    let n = sp.n();
    let d = 2 * n;
    let mx = magnetic_matrix(n, xi)?;
    let st = sp.strides();
    let h = sp.spacings();
    let peak = series.iter().map(|f| f.max_abs()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let i = Complex64::new(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for k in 1..series.len() - 1 {
        let f = series[k].data();
        let t = t0 + k as f64 * dt;
        for node in 0..sp.len() {
            let idx = sp.unravel(node);
            if !sp.is_interior(&idx, 1) {
                continue;
            }
            let x = sp.node_coords(&idx);
            let c = mx.mul_vec(&x).iter().map(|v| 0.5 * v).collect::<Vec<f64>>();
            let mut lap = Complex64::new(0.0, 0.0);
            let mut drift = Complex64::new(0.0, 0.0);
            for a in 0..d {
                let (p, q) = (f[node + st[a]], f[node - st[a]]);
                lap += (p - f[node] * 2.0 + q) / (h[a] * h[a]);
                drift += (p - q) / (2.0 * h[a]) * c[a];
            }
            let c2: f64 = c.iter().map(|v| v * v).sum();
            let dtf = (series[k + 1].data()[node] - series[k - 1].data()[node]) / (2.0 * dt);
            let mut r = i * dtf + lap - i * 2.0 * drift - f[node] * c2;
            if let Some(v) = v {
                r += v.eval(&x, t) * f[node];
            }
            worst = worst.max(r.norm());
        }
    }
    Ok(worst / peak)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// `log|u| ≈ c0 − |x|²/r² − c|z|`.
    GaussXExpZ,
    /// `log|u| ≈ c0 − |x|²/r² − c|z|²`.
    GaussXGaussZ,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub model: DecayModel,
    /// Adds a `log|x|` column absorbing a power-law prefactor.
    pub log_prefactor: bool,
    /// Nodes with `|x|` outside this window are ignored.
    pub x_window: (f64, f64),
    /// Nodes with `|z|` outside this window are ignored.
    pub z_window: (f64, f64),
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            model: DecayModel::GaussXExpZ,
            log_prefactor: false,
            x_window: (0.0, f64::INFINITY),
            z_window: (0.0, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile {
    /// `r` in `e^{−|x|²/r²}`.
    pub gauss_rate: f64,
    /// `c` in `e^{−c|z|}` or `e^{−c|z|²}`; absent for fields on `R^{2n}`.
    pub center_rate: Option<f64>,
    /// Exponent `k` of the `|x|^k` prefactor when fitted.
    pub prefactor_power: Option<f64>,
    pub fit_rms: f64,
    pub samples: usize,
}

/// Least-squares fit of `log|u|` to the chosen decay model.
pub fn fit_decay(u: &GridFunction, opts: FitOptions) -> Result<DecayProfile> {
    let sp = u.spec();
    let d = 2 * sp.n();
    let has_z = sp.m() > 0;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (k, v) in u.data().iter().enumerate() {
        let c = sp.node_coords(&sp.unravel(k));
        let x2: f64 = c[..d].iter().map(|p| p * p).sum();
        let xn = x2.sqrt();
        let zn = c[d..].iter().map(|p| p * p).sum::<f64>().sqrt();
        if xn < opts.x_window.0 || xn > opts.x_window.1 || zn < opts.z_window.0 || zn > opts.z_window.1 {
            continue;
        }
        let a = v.norm();
        if !(a > 1e-300) {
            return Err(Error::Domain("fit region contains samples at or below the floor".into()));
        }
        if opts.log_prefactor && xn == 0.0 {
            continue;
        }
        let mut row = vec![1.0, x2];
        if has_z {
            row.push(match opts.model {
                DecayModel::GaussXExpZ => zn,
                DecayModel::GaussXGaussZ => zn * zn,
            });
        }
        if opts.log_prefactor {
            row.push(xn.ln());
        }
        rows.push(row);
        rhs.push(a.ln());
    }
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.len() <= cols {
        return Err(Error::Degenerate("too few samples in the fit region".into()));
    }
    let a = Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let coef = lstsq(&a, &rhs)?;
    let pred = a.mul_vec(&coef);
    let rms = (pred.iter().zip(&rhs).map(|(p, q)| (p - q) * (p - q)).sum::<f64>() / rhs.len() as f64).sqrt();
    if !(coef[1] < 0.0) {
        return Err(Error::Degenerate(alloc::format!("no Gaussian decay in x (coefficient {})", coef[1])));
    }
    let center_rate = if has_z {
        if !(coef[2] < 0.0) {
            return Err(Error::Degenerate(alloc::format!("no decay in z (coefficient {})", coef[2])));
        }
        Some(-coef[2])
    } else {
        None
    };
    Ok(DecayProfile {
        gauss_rate: (-1.0 / coef[1]).sqrt(),
        center_rate,
        prefactor_power: opts.log_prefactor.then(|| coef[cols - 1]),
        fit_rms: rms,
        samples: rhs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessRow {
    pub eps: f64,
    pub t_final: f64,
    pub a2: f64,
    pub b2: f64,
    pub product: f64,
    /// `a²b² / (16 T²)`.
    pub ratio: f64,
    pub fit_rms: f64,
}

impl SharpnessRow {
    /// `16 T² (1 + ε²) / (1 − ε)²`.
    pub fn envelope(&self) -> f64 {
        16.0 * self.t_final * self.t_final * (1.0 + self.eps * self.eps) / (1.0 - self.eps).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessOptions {
    /// Fit window in units of the Gaussian length scale.
    pub window: (f64, f64),
    /// Nodes per axis of the horizontal sampling grid.
    pub nodes: usize,
}

impl Default for SharpnessOptions {
    fn default() -> Self {
        Self { window: (3.0, 6.0), nodes: 41 }
    }
}

/// Decay constants of the free solution with `u(0) = p_{εT}` and
/// `u(T) = p_{(ε+i)T}` on the Heisenberg group, from the `z = 0` slices.
///
/// `u(T)` is read from the kernel directly; [`free_evolve`] reproduces it on
/// grids where the convolution is resolvable.
pub fn sharpness_experiment(eps_list: &[f64], t_final: f64, opts: SharpnessOptions) -> Result<Vec<SharpnessRow>> {
    if !(t_final > 0.0) {
        return Err(Error::InvalidParameter("T must be positive".into()));
    }
    let k = KernelEvaluator::new(1, 1)?;
    let rate = |t: Complex64, scale: f64| -> Result<(f64, f64)> {
        let hi = opts.window.1 * scale;
        let h = 2.0 * hi / (opts.nodes - 1) as f64;
        let spec = GridSpec::new(1, 0, vec![opts.nodes; 2], vec![h; 2], vec![-hi; 2])?;
        let g = k.sample(t, &spec)?;
        let fit = fit_decay(
            &g,
            FitOptions { log_prefactor: true, x_window: (opts.window.0 * scale, hi), ..FitOptions::default() },
        )?;
        Ok((fit.gauss_rate * fit.gauss_rate, fit.fit_rms))
    };
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(alloc::format!("eps = {eps} outside (0, 1)")));
        }
        let (b2, rms0) = rate(Complex64::new(eps * t_final, 0.0), (eps * t_final).sqrt())?;
        let (a2, rms1) = rate(Complex64::new(eps * t_final, t_final), (t_final * (1.0 + eps * eps) / eps).sqrt())?;
        let product = a2 * b2;
        rows.push(SharpnessRow {
            eps,
            t_final,
            a2,
            b2,
            product,
            ratio: product / (16.0 * t_final * t_final),
            fit_rms: rms0.max(rms1),
        });
    }
    Ok(rows)
}
