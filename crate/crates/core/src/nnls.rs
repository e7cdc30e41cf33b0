//! Nonnegative least squares (Lawson–Hanson active set).

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// Euclidean norm of `A x − b`.
    pub residual: f64,
    pub iterations: usize,
}

/// `min ‖A x − b‖` subject to `x ≥ 0`. Ties in the entering column are broken
/// toward the lowest index.
pub fn nnls(a: &Matrix, b: &[f64]) -> Result<NnlsSolution> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: b.len() });
    }
    let at = a.transpose();
    let scale = (0..n).map(|j| crate::linalg::norm(&a.column(j))).fold(0.0, f64::max) * crate::linalg::norm(b);
    let tol = 1e-17 * scale.max(f64::MIN_POSITIVE);
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut blocked = vec![false; n];
    let max_iter = 30 * n.max(1);
    let mut iterations = 0;

    let gradient = |x: &[f64]| -> Vec<f64> {
        let ax = a.mul_vec(x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        at.mul_vec(&r)
    };

    let solve_passive = |passive: &[bool]| -> Result<Vec<f64>> {
        let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = Matrix::from_fn(m, cols.len(), |i, k| a.get(i, cols[k]));
        let sol = lstsq(&sub, b)?;
        let mut z = vec![0.0; n];
        for (k, &j) in cols.iter().enumerate() {
            z[j] = sol[k];
        }
        Ok(z)
    };

    loop {
        let w = gradient(&x);
        let mut enter = None;
        let mut best = tol;
        for j in 0..n {
            if !passive[j] && !blocked[j] && w[j] > best {
                best = w[j];
                enter = Some(j);
            }
        }
        let Some(j) = enter else { break };
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::Degenerate("active-set iteration limit reached".into()));
        }
        passive[j] = true;
        let mut z = match solve_passive(&passive) {
            Ok(z) => z,
            Err(_) => {
                // Numerically dependent column: keep it out.
                passive[j] = false;
                blocked[j] = true;
                continue;
            }
        };
        if z[j] <= 0.0 {
            passive[j] = false;
            blocked[j] = true;
            continue;
        }
        loop {
            if (0..n).filter(|&k| passive[k]).all(|k| z[k] > 0.0) {
                break;
            }
            let mut alpha = f64::INFINITY;
            for k in 0..n {
                if passive[k] && z[k] <= 0.0 {
                    alpha = alpha.min(x[k] / (x[k] - z[k]));
                }
            }
            for k in 0..n {
                if !passive[k] {
                    continue;
                }
                let hits_zero = z[k] <= 0.0 && x[k] / (x[k] - z[k]) <= alpha;
                x[k] += alpha * (z[k] - x[k]);
                if hits_zero || x[k] <= 0.0 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
            if !passive.iter().any(|&p| p) {
                z = vec![0.0; n];
                break;
            }
            z = solve_passive(&passive)?;
        }
        x = z;
        // A column that entered may unblock others.
        blocked.iter_mut().for_each(|b| *b = false);
    }
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    Ok(NnlsSolution { x, residual, iterations })
}

/// KKT violation of a candidate solution: the largest of `max(−x_k)`,
/// `max_k (A^T(b − A x))_k` and `max_{x_k > 0} |(A^T(b − A x))_k|`, each
/// divided by `‖A‖_max · ‖b‖`.
pub fn kkt_violation(a: &Matrix, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let w = a.transpose().mul_vec(&r);
    let scale = (0..a.cols()).map(|j| crate::linalg::norm(&a.column(j))).fold(0.0, f64::max)
        * crate::linalg::norm(b).max(f64::MIN_POSITIVE);
    let mut v: f64 = 0.0;
    for (k, &xk) in x.iter().enumerate() {
        v = v.max(-xk);
        v = v.max(w[k] / scale);
        if xk > 0.0 {
            v = v.max(w[k].abs() / scale);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_combination() {
        let a = Matrix::from_fn(20, 5, |i, j| (-((i as f64) * 0.1) * (j as f64 + 1.0)).exp());
        let x0 = [0.0, 2.0, 0.0, 0.5, 1.0];
        let b = a.mul_vec(&x0);
        let sol = nnls(&a, &b).unwrap();
        assert!(sol.residual < 1e-10);
        assert!(kkt_violation(&a, &b, &sol.x) < 1e-10);
    }

    #[test]
    fn clamps_negative_unconstrained_solution() {
        // Unconstrained optimum is (1, -1); constrained optimum is (1/2, 0) on b=(1,0).
        let a = Matrix::from_rows(&[&[1.0, 1.0], &[1.0, 2.0]]);
        let b = [1.0, 0.0];
        let sol = nnls(&a, &b).unwrap();
        assert!(sol.x[1] == 0.0);
        assert!((sol.x[0] - 0.5).abs() < 1e-14);
        assert!(kkt_violation(&a, &b, &sol.x) < 1e-12);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let a = Matrix::identity(3);
        let sol = nnls(&a, &[0.0; 3]).unwrap();
        assert_eq!(sol.x, [0.0; 3]);
    }
}
