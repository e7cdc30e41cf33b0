//! H-type structures on R^{2n} x R^m and the group law.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::clifford;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Point `(x, z)` of the group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
}

impl GroupPoint {
    pub fn new(x: Vec<f64>, z: Vec<f64>) -> Self {
        Self { x, z }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self { x: alloc::vec![0.0; 2 * n], z: alloc::vec![0.0; m] }
    }

    pub fn x_norm(&self) -> f64 {
        dot(&self.x, &self.x).sqrt()
    }

    pub fn z_norm(&self) -> f64 {
        dot(&self.z, &self.z).sqrt()
    }
}

/// Skew-symmetric orthogonal matrices `J_1..J_m` on `R^{2n}` with
/// `J_i J_j + J_j J_i = -2 δ_ij I`.
#[derive(Debug, Clone, PartialEq)]
pub struct HTypeStructure {
    n: usize,
    m: usize,
    generators: Vec<Matrix>,
}

/// Builds the canonical structure for `(n, m)`; requires `m < rho(2n)`.
pub fn build_structure(n: usize, m: usize) -> Result<HTypeStructure> {
    HTypeStructure::new(n, m)
}

impl HTypeStructure {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDimension(alloc::format!("n={n}, m={m} must be positive")));
        }
        let r = clifford::rho(2 * n)?;
        if m >= r {
            return Err(Error::InadmissibleDimensions { n, m, rho: r });
        }
        // The minimal module is repeated along a trailing identity factor, so
        // (n, 1) yields the block form [[0, -I], [I, 0]].
        let copies = 2 * n / clifford::module_dimension(m);
        let id = Matrix::identity(copies);
        let generators = clifford::generators(m).iter().map(|a| a.kron(&id)).collect();
        Ok(Self { n, m, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generator(&self, k: usize) -> &Matrix {
        &self.generators[k]
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// `J_z = Σ z_k J_k`.
    pub fn j_z(&self, z: &[f64]) -> Result<Matrix> {
        self.check_z(z)?;
        let d = 2 * self.n;
        let mut out = Matrix::zeros(d, d);
        for (k, zk) in z.iter().enumerate() {
            out = out.add(&self.generators[k].scale(*zk));
        }
        Ok(out)
    }

    /// `[x, y]_k = <J_k x, y>`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_x(x)?;
        self.check_x(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = 2 * self.n;
        self.generators
            .iter()
            .map(|j| {
                let mut s = 0.0;
                for r in 0..d {
                    let yr = y[r];
                    if yr == 0.0 {
                        continue;
                    }
                    for c in 0..d {
                        s += j.get(r, c) * x[c] * yr;
                    }
                }
                s
            })
            .collect()
    }

    /// `(x, z)·(y, z') = (x + y, z + z' + ½[x, y])`.
    pub fn multiply(&self, g: &GroupPoint, h: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g)?;
        self.check_point(h)?;
        let br = self.bracket_unchecked(&g.x, &h.x);
        Ok(GroupPoint {
            x: g.x.iter().zip(&h.x).map(|(a, b)| a + b).collect(),
            z: (0..self.m).map(|k| g.z[k] + h.z[k] + 0.5 * br[k]).collect(),
        })
    }

    pub fn inverse(&self, g: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g)?;
        Ok(GroupPoint { x: g.x.iter().map(|v| -v).collect(), z: g.z.iter().map(|v| -v).collect() })
    }

    /// `δ_a(x, z) = (a x, a² z)`.
    pub fn dilate(&self, a: f64, g: &GroupPoint) -> Result<GroupPoint> {
        if a == 0.0 {
            return Err(Error::ZeroDilation);
        }
        self.check_point(g)?;
        Ok(GroupPoint { x: g.x.iter().map(|v| a * v).collect(), z: g.z.iter().map(|v| a * a * v).collect() })
    }

    pub(crate) fn check_x(&self, x: &[f64]) -> Result<()> {
        if x.len() != 2 * self.n {
            return Err(Error::LengthMismatch { expected: 2 * self.n, got: x.len() });
        }
        Ok(())
    }

    pub(crate) fn check_z(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: z.len() });
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, g: &GroupPoint) -> Result<()> {
        self.check_x(&g.x)?;
        self.check_z(&g.z)
    }
}
