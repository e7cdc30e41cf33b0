//! Uniform tensor grids over R^{2n} x R^m and complex samples on them.
//!
//! Axes are ordered x_1..x_{2n}, z_1..z_m and stored row-major (last axis
//! fastest). `m = 0` describes a field on the horizontal space alone.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    n: usize,
    m: usize,
    counts: Vec<usize>,
    spacings: Vec<f64>,
    origins: Vec<f64>,
}

impl GridSpec {
    pub fn new(n: usize, m: usize, counts: Vec<usize>, spacings: Vec<f64>, origins: Vec<f64>) -> Result<Self> {
        let d = 2 * n + m;
        if n == 0 {
            return Err(Error::InvalidGrid("n must be positive".into()));
        }
        for (what, len) in [("counts", counts.len()), ("spacings", spacings.len()), ("origins", origins.len())] {
            if len != d {
                return Err(Error::InvalidGrid(alloc::format!("{what} has {len} entries, expected {d}")));
            }
        }
        if counts.iter().any(|&c| c < 3) {
            return Err(Error::InvalidGrid("every axis needs at least 3 samples".into()));
        }
        if spacings.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidGrid("spacings must be positive and finite".into()));
        }
        if origins.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid("origins must be finite".into()));
        }
        Ok(Self { n, m, counts, spacings, origins })
    }

    /// Grid symmetric about the origin with a node at zero on every axis:
    /// `count_x` nodes of spacing `hx` on each x axis, likewise for z.
    pub fn centered(n: usize, m: usize, count_x: usize, hx: f64, count_z: usize, hz: f64) -> Result<Self> {
        let mut counts = vec![count_x; 2 * n];
        counts.extend(core::iter::repeat(count_z).take(m));
        let mut spacings = vec![hx; 2 * n];
        spacings.extend(core::iter::repeat(hz).take(m));
        let origins = counts.iter().zip(&spacings).map(|(&c, &h)| -((c / 2) as f64) * h).collect();
        Self::new(n, m, counts, spacings, origins)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> usize {
        2 * self.n + self.m
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn origins(&self) -> &[f64] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_len(&self) -> usize {
        self.counts[..2 * self.n].iter().product()
    }

    pub fn z_len(&self) -> usize {
        self.counts[2 * self.n..].iter().product()
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origins[axis] + i as f64 * self.spacings[axis]
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims()];
        for a in (0..self.dims().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.counts[a + 1];
        }
        s
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (&i, &c)| acc * c + i)
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims()];
        for a in (0..self.dims()).rev() {
            idx[a] = flat % self.counts[a];
            flat /= self.counts[a];
        }
        idx
    }

    /// Coordinates of a node, x block then z block.
    pub fn node_coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().enumerate().map(|(a, &i)| self.coord(a, i)).collect()
    }

    /// Index of the node nearest to `point`, clamped to the grid.
    pub fn nearest_node(&self, point: &[f64]) -> Result<Vec<usize>> {
        if point.len() != self.dims() {
            return Err(Error::LengthMismatch { expected: self.dims(), got: point.len() });
        }
        Ok(point
            .iter()
            .enumerate()
            .map(|(a, &p)| {
                let r = ((p - self.origins[a]) / self.spacings[a]).round();
                r.max(0.0).min((self.counts[a] - 1) as f64) as usize
            })
            .collect())
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacings.iter().product()
    }

    /// True when every axis has a node at the coordinate origin.
    pub fn is_lattice_aligned(&self) -> bool {
        self.origins.iter().zip(&self.spacings).zip(&self.counts).all(|((&o, &h), &c)| {
            let k = -o / h;
            (k - k.round()).abs() < 1e-9 && k.round() >= 0.0 && (k.round() as usize) < c
        })
    }

    /// Index of the node at coordinate zero on `axis` (valid when aligned).
    pub fn zero_index(&self, axis: usize) -> usize {
        (-self.origins[axis] / self.spacings[axis]).round() as usize
    }

    /// Same grid with the z axes removed.
    pub fn horizontal(&self) -> GridSpec {
        let d = 2 * self.n;
        GridSpec {
            n: self.n,
            m: 0,
            counts: self.counts[..d].to_vec(),
            spacings: self.spacings[..d].to_vec(),
            origins: self.origins[..d].to_vec(),
        }
    }

    /// True when `idx` is at least `margin` nodes away from every face.
    pub fn is_interior(&self, idx: &[usize], margin: usize) -> bool {
        idx.iter().zip(&self.counts).all(|(&i, &c)| i >= margin && i + margin < c)
    }

    pub fn same_shape(&self, other: &GridSpec) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.counts == other.counts
            && self.spacings.iter().zip(&other.spacings).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs())
            && self
                .origins
                .iter()
                .zip(&other.origins)
                .zip(&self.spacings)
                .all(|((a, b), h)| (a - b).abs() <= 1e-9 * h)
    }
}

/// Provenance carried alongside samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridMeta {
    /// Nodes closer than this to a face hold no valid data.
    pub invalid_margin: usize,
    /// Largest boundary magnitude seen by a truncating operation, when above tolerance.
    pub truncation: Option<f64>,
    /// Kernel time for sampled heat kernels.
    pub time: Option<Complex64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    data: Vec<Complex64>,
    pub meta: GridMeta,
}

impl GridFunction {
    pub fn new(spec: GridSpec, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::LengthMismatch { expected: spec.len(), got: data.len() });
        }
        Ok(Self { spec, data, meta: GridMeta::default() })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        let len = spec.len();
        Self { spec, data: vec![Complex64::new(0.0, 0.0); len], meta: GridMeta::default() }
    }

    /// Samples `f(x, z)` at every node.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&[f64], &[f64]) -> Complex64) -> Self {
        let d = 2 * spec.n();
        let data = (0..spec.len())
            .map(|k| {
                let c = spec.node_coords(&spec.unravel(k));
                f(&c[..d], &c[d..])
            })
            .collect();
        Self { spec, data, meta: GridMeta::default() }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.data[self.spec.flat(idx)]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest magnitude on the outermost layer of nodes.
    pub fn boundary_max(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (k, v) in self.data.iter().enumerate() {
            let idx = self.spec.unravel(k);
            if !self.spec.is_interior(&idx, 1) {
                m = m.max(v.norm());
            }
        }
        m
    }

    /// Largest magnitude on the outermost layer of z nodes only.
    pub fn z_boundary_max(&self) -> f64 {
        let d = 2 * self.spec.n();
        let mut m: f64 = 0.0;
        for (k, v) in self.data.iter().enumerate() {
            let idx = self.spec.unravel(k);
            if idx[d..].iter().zip(&self.spec.counts()[d..]).any(|(&i, &c)| i == 0 || i + 1 == c) {
                m = m.max(v.norm());
            }
        }
        m
    }

    /// Multilinear interpolation; zero outside the grid box.
    pub fn interpolate(&self, point: &[f64]) -> Complex64 {
        let d = self.spec.dims();
        debug_assert_eq!(point.len(), d);
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for a in 0..d {
            let u = (point[a] - self.spec.origins[a]) / self.spec.spacings[a];
            let last = (self.spec.counts[a] - 1) as f64;
            if !(u >= -1e-12 && u <= last + 1e-12) {
                return Complex64::new(0.0, 0.0);
            }
            let u = u.max(0.0).min(last);
            let i = (u.floor() as usize).min(self.spec.counts[a] - 2);
            base[a] = i;
            frac[a] = u - i as f64;
        }
        let strides = self.spec.strides();
        let b = self.spec.flat(&base);
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut off = 0;
            for a in 0..d {
                if corner >> a & 1 == 1 {
                    w *= frac[a];
                    off += strides[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            if w != 0.0 {
                acc += self.data[b + off] * w;
            }
        }
        acc
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction { spec: self.spec.clone(), data: self.data.iter().map(|v| f(*v)).collect(), meta: self.meta.clone() }
    }

    /// Largest |self - other| over nodes at least `margin` from every face.
    pub fn max_abs_diff(&self, other: &GridFunction, margin: usize) -> Result<f64> {
        if !self.spec.same_shape(&other.spec) {
            return Err(Error::GridMismatch("max_abs_diff".into()));
        }
        let mut m: f64 = 0.0;
        for k in 0..self.data.len() {
            if margin == 0 || self.spec.is_interior(&self.spec.unravel(k), margin) {
                m = m.max((self.data[k] - other.data[k]).norm());
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_row_major_x_first() {
        let spec = GridSpec::centered(1, 1, 3, 1.0, 5, 0.5).unwrap();
        assert_eq!(spec.strides(), [15, 5, 1]);
        let idx = [2, 1, 4];
        assert_eq!(spec.unravel(spec.flat(&idx)), idx);
        assert_eq!(spec.node_coords(&idx), [1.0, 0.0, 1.0]);
        assert!(spec.is_lattice_aligned());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(1, 1, vec![2, 3, 3], vec![1.0; 3], vec![0.0; 3]).is_err());
        assert!(GridSpec::new(1, 1, vec![3, 3, 3], vec![1.0, 0.0, 1.0], vec![0.0; 3]).is_err());
        assert!(GridSpec::new(1, 1, vec![3, 3], vec![1.0; 2], vec![0.0; 2]).is_err());
    }

    #[test]
    fn interpolation_is_exact_for_multilinear_functions() {
        let spec = GridSpec::centered(1, 1, 5, 0.5, 5, 0.25).unwrap();
        let f = |x: &[f64], z: &[f64]| Complex64::new(1.0 + 2.0 * x[0] - x[1] + 3.0 * z[0] + x[0] * z[0], x[1]);
        let g = GridFunction::from_fn(spec, f);
        let p = [0.3, -0.7, 0.11];
        let got = g.interpolate(&p);
        let want = f(&p[..2], &p[2..]);
        assert!((got - want).norm() < 1e-13);
        assert_eq!(g.interpolate(&[5.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
    }
}
