//! Left-invariant vector fields, the sub-Laplacian and group convolution on grids.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{GroupPoint, HTypeStructure};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_structure(s: &HTypeStructure, spec: &GridSpec) -> Result<()> {
    if spec.n() != s.n() || spec.m() != s.m() {
        return Err(Error::GridMismatch(alloc::format!(
            "grid is for (n, m) = ({}, {}), structure is ({}, {})",
            spec.n(),
            spec.m(),
            s.n(),
            s.m()
        )));
    }
    Ok(())
}

/// `(J_k x)_i` for every `k`, at the given x.
fn jx_component(s: &HTypeStructure, x: &[f64], i: usize) -> Vec<f64> {
    s.generators().iter().map(|j| (0..x.len()).map(|c| j.get(i, c) * x[c]).sum()).collect()
}

/// Central first difference along `axis` at flat index `k`.
#[inline]
fn d1(data: &[Complex64], k: usize, stride: usize, h: f64) -> Complex64 {
    (data[k + stride] - data[k - stride]) / (2.0 * h)
}

/// Applies `X_i` (`1 ≤ i ≤ 2n`) or `Z_{i−2n}` (`2n < i ≤ 2n+m`) at the node
/// nearest to `g`.
pub fn apply_vector_field(s: &HTypeStructure, index: usize, f: &GridFunction, g: &GroupPoint) -> Result<Complex64> {
    let spec = f.spec();
    check_structure(s, spec)?;
    s.check_point(g)?;
    let d = 2 * s.n();
    if index == 0 || index > d + s.m() {
        return Err(Error::InvalidParameter(alloc::format!("vector field index {index} out of range")));
    }
    let mut point = g.x.clone();
    point.extend_from_slice(&g.z);
    let idx = spec.nearest_node(&point)?;
    let axis = index - 1;
    let needs_interior = |a: usize| idx[a] >= 1 && idx[a] + 1 < spec.counts()[a];
    let axes_ok = needs_interior(axis) && (axis >= d || (d..d + s.m()).all(needs_interior));
    if !axes_ok {
        return Err(Error::OutOfStencil(idx));
    }
    let k = spec.flat(&idx);
    Ok(field_at(s, spec, f.data(), &spec.strides(), k, &idx, axis))
}

fn field_at(
    s: &HTypeStructure,
    spec: &GridSpec,
    data: &[Complex64],
    strides: &[usize],
    k: usize,
    idx: &[usize],
    axis: usize,
) -> Complex64 {
    let d = 2 * s.n();
    let h = spec.spacings();
    let mut v = d1(data, k, strides[axis], h[axis]);
    if axis < d {
        let x: Vec<f64> = (0..d).map(|a| spec.coord(a, idx[a])).collect();
        let a = jx_component(s, &x, axis);
        for (j, aj) in a.iter().enumerate() {
            if *aj != 0.0 {
                v += d1(data, k, strides[d + j], h[d + j]) * (0.5 * aj);
            }
        }
    }
    v
}

/// `X_i f` (or `Z_j f`) on the whole grid; nodes on the outer ring are zero
/// and the result's invalid margin grows by one.
pub fn vector_field_grid(s: &HTypeStructure, index: usize, f: &GridFunction) -> Result<GridFunction> {
    let spec = f.spec();
    check_structure(s, spec)?;
    if index == 0 || index > spec.dims() {
        return Err(Error::InvalidParameter(alloc::format!("vector field index {index} out of range")));
    }
    let strides = spec.strides();
    let mut out = GridFunction::zeros(spec.clone());
    for k in 0..spec.len() {
        let idx = spec.unravel(k);
        if spec.is_interior(&idx, 1) {
            out.data_mut()[k] = field_at(s, spec, f.data(), &strides, k, &idx, index - 1);
        }
    }
    out.meta = f.meta.clone();
    out.meta.invalid_margin = f.meta.invalid_margin + 1;
    Ok(out)
}

/// `L f = Σ_i X_i² f`, composing central differences. The two outer rings
/// are invalid.
pub fn sublaplacian(s: &HTypeStructure, f: &GridFunction) -> Result<GridFunction> {
    check_structure(s, f.spec())?;
    if f.spec().counts().iter().any(|&c| c < 5) {
        return Err(Error::InvalidGrid("the sub-Laplacian needs at least 5 points per axis".into()));
    }
    let mut acc = GridFunction::zeros(f.spec().clone());
    for i in 1..=2 * s.n() {
        let xi = vector_field_grid(s, i, f)?;
        let xxi = vector_field_grid(s, i, &xi)?;
        for (a, b) in acc.data_mut().iter_mut().zip(xxi.data()) {
            *a += *b;
        }
    }
    acc.meta = f.meta.clone();
    acc.meta.invalid_margin = f.meta.invalid_margin + 2;
    zero_margin(&mut acc);
    Ok(acc)
}

/// `L f` from the expanded second-order form
/// `Δ_x + ¼ Σ_i (Σ_k (J_k x)_i ∂_{z_k})² + Σ_i Σ_k (J_k x)_i ∂_i ∂_{z_k}`
/// with compact three-point stencils. One outer ring is invalid.
pub fn sublaplacian_expanded(s: &HTypeStructure, f: &GridFunction) -> Result<GridFunction> {
    let spec = f.spec();
    check_structure(s, spec)?;
    let d = 2 * s.n();
    let m = s.m();
    let st = spec.strides();
    let h = spec.spacings();
    let data = f.data();
    let second = |k: usize, a: usize| (data[k + st[a]] - data[k] * 2.0 + data[k - st[a]]) / (h[a] * h[a]);
    let mixed = |k: usize, a: usize, b: usize| {
        (data[k + st[a] + st[b]] - data[k + st[a] - st[b]] - data[k - st[a] + st[b]] + data[k - st[a] - st[b]])
            / (4.0 * h[a] * h[b])
    };
    let mut out = GridFunction::zeros(spec.clone());
    for k in 0..spec.len() {
        let idx = spec.unravel(k);
        if !spec.is_interior(&idx, 1) {
            continue;
        }
        let x: Vec<f64> = (0..d).map(|a| spec.coord(a, idx[a])).collect();
        let mut v = ZERO;
        for i in 0..d {
            v += second(k, i);
            let a = jx_component(s, &x, i);
            for kk in 0..m {
                if a[kk] == 0.0 {
                    continue;
                }
                v += mixed(k, i, d + kk) * a[kk];
                for ll in 0..m {
                    if a[ll] == 0.0 {
                        continue;
                    }
                    let dzz = if kk == ll { second(k, d + kk) } else { mixed(k, d + kk, d + ll) };
                    v += dzz * (0.25 * a[kk] * a[ll]);
                }
            }
        }
        out.data_mut()[k] = v;
    }
    out.meta = f.meta.clone();
    out.meta.invalid_margin = f.meta.invalid_margin + 1;
    zero_margin(&mut out);
    Ok(out)
}

fn zero_margin(f: &mut GridFunction) {
    let margin = f.meta.invalid_margin;
    let spec = f.spec().clone();
    for (k, v) in f.data_mut().iter_mut().enumerate() {
        if !spec.is_interior(&spec.unravel(k), margin) {
            *v = ZERO;
        }
    }
}

/// Tuning for [`group_convolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolveOptions {
    /// Boundary magnitude above which the result carries a truncation warning.
    pub truncation_tol: f64,
    /// Pairs `(u, x − u)` whose z-slices satisfy
    /// `max|f(u,·)| · max|g(x−u,·)| < pair_cutoff · max|f| · max|g|` are skipped.
    pub pair_cutoff: f64,
}

impl Default for ConvolveOptions {
    fn default() -> Self {
        Self { truncation_tol: 1e-10, pair_cutoff: 1e-16 }
    }
}

/// `(f ∗ g)(x, z) = ∫ f(u, v) g(x − u, z − v + ½[x, u]) du dv` on a common
/// lattice-aligned grid.
///
/// The x integral is a Riemann sum over lattice nodes. In z the product is
/// evaluated in Fourier space: each z-slice is zero-padded and the half-bracket
/// shift becomes a phase, which is exact trigonometric interpolation of `g`.
pub fn group_convolve(s: &HTypeStructure, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    group_convolve_with(s, f, g, ConvolveOptions::default())
}

pub fn group_convolve_with(
    s: &HTypeStructure,
    f: &GridFunction,
    g: &GridFunction,
    opts: ConvolveOptions,
) -> Result<GridFunction> {
    let spec = f.spec();
    check_structure(s, spec)?;
    if !spec.same_shape(g.spec()) {
        return Err(Error::GridMismatch("convolution operands live on different grids".into()));
    }
    if !spec.is_lattice_aligned() {
        return Err(Error::InvalidGrid("convolution needs a node at the origin on every axis".into()));
    }
    let d = 2 * s.n();
    let m = s.m();
    let nx = spec.x_len();
    let nz = spec.z_len();
    let zc: Vec<usize> = spec.counts()[d..].to_vec();
    let zh: Vec<f64> = spec.spacings()[d..].to_vec();
    let xspec = spec.horizontal();

    let slice_max = |h: &GridFunction| -> Vec<f64> {
        (0..nx).map(|u| h.data()[u * nz..(u + 1) * nz].iter().fold(0.0f64, |a, v| a.max(v.norm()))).collect()
    };
    let fa = slice_max(f);
    let gb = slice_max(g);
    let fmax = fa.iter().cloned().fold(0.0, f64::max);
    let gmax = gb.iter().cloned().fold(0.0, f64::max);
    let floor = opts.pair_cutoff * fmax * gmax;

    let xcoords: Vec<Vec<f64>> = (0..nx).map(|u| xspec.node_coords(&xspec.unravel(u))).collect();
    let xcenter: Vec<usize> = (0..d).map(|a| spec.zero_index(a)).collect();
    let xidx: Vec<Vec<usize>> = (0..nx).map(|u| xspec.unravel(u)).collect();
    // Lattice index of x − u, if inside the grid.
    let diff_index = |x: usize, u: usize| -> Option<usize> {
        let mut flat = 0usize;
        for a in 0..d {
            let v = xidx[x][a] as isize - xidx[u][a] as isize + xcenter[a] as isize;
            if v < 0 || v >= spec.counts()[a] as isize {
                return None;
            }
            flat = flat * spec.counts()[a] + v as usize;
        }
        Some(flat)
    };

    // Relevant pairs and the largest z-shift among them, in index units per axis.
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nx];
    let mut max_shift = vec![0.0f64; m];
    for x in 0..nx {
        for u in 0..nx {
            if fa[u] == 0.0 {
                continue;
            }
            if let Some(v) = diff_index(x, u) {
                if fa[u] * gb[v] < floor || gb[v] == 0.0 {
                    continue;
                }
                let br = s.bracket_unchecked(&xcoords[x], &xcoords[u]);
                for k in 0..m {
                    max_shift[k] = max_shift[k].max((0.5 * br[k] / zh[k]).abs());
                }
                pairs[x].push((u, v));
            }
        }
    }
    let padded: Vec<usize> = (0..m)
        .map(|k| {
            let p = 3 * zc[k] + 2 * (max_shift[k].ceil() as usize) + 1;
            if p % 2 == 0 {
                p + 1
            } else {
                p
            }
        })
        .collect();
    let nq: usize = padded.iter().product();

    let fhat: Vec<Vec<Complex64>> =
        (0..nx).map(|u| if fa[u] == 0.0 { Vec::new() } else { forward(&f.data()[u * nz..(u + 1) * nz], &zc, &padded) }).collect();
    let ghat: Vec<Vec<Complex64>> =
        (0..nx).map(|u| if gb[u] == 0.0 { Vec::new() } else { forward(&g.data()[u * nz..(u + 1) * nz], &zc, &padded) }).collect();

    let zcenter: Vec<usize> = (0..m).map(|k| spec.zero_index(d + k)).collect();
    let scale = spec.cell_volume() / nq as f64;
    let mut out = GridFunction::zeros(spec.clone());
    let mut acc = vec![ZERO; nq];
    let mut phase_tables: Vec<Vec<Complex64>> = padded.iter().map(|&p| vec![ZERO; p]).collect();
    for x in 0..nx {
        if pairs[x].is_empty() {
            continue;
        }
        acc.iter_mut().for_each(|a| *a = ZERO);
        for &(u, v) in &pairs[x] {
            let br = s.bracket_unchecked(&xcoords[x], &xcoords[u]);
            for k in 0..m {
                shift_table(&mut phase_tables[k], 0.5 * br[k] / zh[k]);
            }
            let (fu, gv) = (&fhat[u], &ghat[v]);
            if m == 1 {
                let ph = &phase_tables[0];
                for q in 0..nq {
                    acc[q] += fu[q] * gv[q] * ph[q];
                }
            } else {
                for q in 0..nq {
                    let mut rem = q;
                    let mut ph = Complex64::new(1.0, 0.0);
                    for k in (0..m).rev() {
                        ph *= phase_tables[k][rem % padded[k]];
                        rem /= padded[k];
                    }
                    acc[q] += fu[q] * gv[q] * ph;
                }
            }
        }
        let vals = inverse(&acc, &padded, &zc, &zcenter);
        for (o, v) in out.data_mut()[x * nz..(x + 1) * nz].iter_mut().zip(vals) {
            *o = v * scale;
        }
    }
    let boundary = f.boundary_max().max(g.boundary_max());
    if boundary > opts.truncation_tol {
        out.meta.truncation = Some(boundary);
    }
    Ok(out)
}

/// Frequency of DFT bin `b` in the symmetric range `[-(P-1)/2, (P-1)/2]`.
#[inline]
fn freq(b: usize, p: usize) -> isize {
    if b <= (p - 1) / 2 {
        b as isize
    } else {
        b as isize - p as isize
    }
}

/// `table[b] = exp(2πi·freq(b)·σ/P)`, by repeated multiplication.
fn shift_table(table: &mut [Complex64], sigma: f64) {
    let p = table.len();
    let w = Complex64::from_polar(1.0, 2.0 * PI * sigma / p as f64);
    let half = (p - 1) / 2;
    let mut cur = Complex64::new(1.0, 0.0);
    table[0] = cur;
    for q in 1..=half {
        cur *= w;
        table[q] = cur;
        table[p - q] = cur.conj();
    }
}

/// Separable DFT of an `N_1 × … × N_m` block, zero-padded to `P_1 × … × P_m`:
/// `F(q) = Σ_j f_j exp(−2πi Σ q_k j_k / P_k)`.
fn forward(data: &[Complex64], counts: &[usize], padded: &[usize]) -> Vec<Complex64> {
    let m = counts.len();
    let mut cur = data.to_vec();
    let mut dims = counts.to_vec();
    for axis in 0..m {
        let (n_in, p) = (counts[axis], padded[axis]);
        let tw: Vec<Complex64> = (0..p).map(|r| Complex64::from_polar(1.0, -2.0 * PI * r as f64 / p as f64)).collect();
        let outer: usize = dims[..axis].iter().product();
        let inner: usize = dims[axis + 1..].iter().product();
        let mut next = vec![ZERO; outer * p * inner];
        for o in 0..outer {
            for q in 0..p {
                for j in 0..n_in {
                    let w = tw[(q * j) % p];
                    let src = (o * n_in + j) * inner;
                    let dst = (o * p + q) * inner;
                    for i in 0..inner {
                        next[dst + i] += cur[src + i] * w;
                    }
                }
            }
        }
        dims[axis] = p;
        cur = next;
    }
    cur
}

/// `out(i) = Σ_q H(q) exp(2πi Σ freq(q_k)(i_k + c_k) / P_k)` for output indices
/// `0 ≤ i_k < N_k`.
fn inverse(h: &[Complex64], padded: &[usize], counts: &[usize], center: &[usize]) -> Vec<Complex64> {
    let m = counts.len();
    let mut cur = h.to_vec();
    let mut dims = padded.to_vec();
    for axis in 0..m {
        let (p, n_out, c) = (padded[axis], counts[axis], center[axis]);
        let outer: usize = dims[..axis].iter().product();
        let inner: usize = dims[axis + 1..].iter().product();
        let mut next = vec![ZERO; outer * n_out * inner];
        for i in 0..n_out {
            let mut tw = vec![ZERO; p];
            shift_table(&mut tw, (i + c) as f64);
            for o in 0..outer {
                for q in 0..p {
                    let w = tw[q];
                    let src = (o * p + q) * inner;
                    let dst = (o * n_out + i) * inner;
                    for t in 0..inner {
                        next[dst + t] += cur[src + t] * w;
                    }
                }
            }
        }
        dims[axis] = n_out;
        cur = next;
    }
    cur
}

/// Trigonometric interpolant of one zero-padded z-slice, evaluated at the
/// fractional index `pos` (per axis). Exposed for independent checks.
pub fn trig_interpolate_slice(slice: &[Complex64], counts: &[usize], padded: &[usize], pos: &[f64]) -> Complex64 {
    let hat = forward(slice, counts, padded);
    let nq: usize = padded.iter().product();
    let mut acc = ZERO;
    for (b, v) in hat.iter().enumerate() {
        let mut rem = b;
        let mut arg = 0.0;
        for k in (0..counts.len()).rev() {
            let q = freq(rem % padded[k], padded[k]);
            rem /= padded[k];
            arg += 2.0 * PI * q as f64 * pos[k] / padded[k] as f64;
        }
        acc += v * Complex64::from_polar(1.0, arg);
    }
    acc / nq as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_structure;

    #[test]
    fn trig_interpolation_reproduces_samples() {
        let counts = [6];
        let slice: Vec<Complex64> = (0..6).map(|j| Complex64::new(j as f64, -(j as f64).sin())).collect();
        for j in 0..6 {
            let v = trig_interpolate_slice(&slice, &counts, &[19], &[j as f64]);
            assert!((v - slice[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn vector_field_on_linear_function() {
        let s = build_structure(1, 1).unwrap();
        let spec = GridSpec::centered(1, 1, 9, 0.25, 9, 0.25).unwrap();
        let f = GridFunction::from_fn(spec, |_, z| Complex64::new(z[0], 0.0));
        let g = GroupPoint::new(vec![0.5, -0.25], vec![0.0]);
        let v = apply_vector_field(&s, 1, &f, &g).unwrap();
        // X_1 z = ½ (J x)_1 = −½ x_2.
        assert!((v.re - 0.125).abs() < 1e-14);
        let edge = GroupPoint::new(vec![1.0, 0.0], vec![0.0]);
        assert!(matches!(apply_vector_field(&s, 1, &f, &edge), Err(Error::OutOfStencil(_))));
    }

    #[test]
    fn sublaplacian_of_x_squared() {
        let s = build_structure(2, 3).unwrap();
        let spec = GridSpec::centered(2, 3, 5, 0.5, 5, 0.5).unwrap();
        let f = GridFunction::from_fn(spec, |x, _| Complex64::new(x.iter().map(|v| v * v).sum(), 0.0));
        let l = sublaplacian(&s, &f).unwrap();
        let center = l.spec().flat(&[2; 7]);
        assert!((l.data()[center].re - 8.0).abs() < 1e-12);
        assert_eq!(l.meta.invalid_margin, 2);
    }
}
