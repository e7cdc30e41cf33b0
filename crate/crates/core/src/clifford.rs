//! Clifford module generators and the Radon–Hurwitz number.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Radon–Hurwitz number: for `two_n = a·2^(4p+q)` with `a` odd and `0 ≤ q ≤ 3`,
/// returns `8p + 2^q`.
pub fn rho(two_n: usize) -> Result<usize> {
    if two_n == 0 || two_n % 2 == 1 {
        return Err(Error::Domain(alloc::format!("rho needs a positive even argument, got {two_n}")));
    }
    let e = two_n.trailing_zeros() as usize;
    Ok(8 * (e / 4) + (1 << (e % 4)))
}

/// Smallest dimension of a real module carrying `m` anticommuting skew generators.
pub fn module_dimension(m: usize) -> usize {
    match m {
        0 => 1,
        1 => 2,
        2 | 3 => 4,
        4..=7 => 8,
        8 => 16,
        _ => 16 * module_dimension(m - 8),
    }
}

/// `m` skew-symmetric orthogonal matrices of size `module_dimension(m)` with
/// `A_i A_j + A_j A_i = -2 δ_ij I`.
pub fn generators(m: usize) -> Vec<Matrix> {
    match m {
        0 => Vec::new(),
        1 => alloc::vec![Matrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]])],
        2 | 3 => (1..=m).map(quaternion_left).collect(),
        4..=7 => (1..=m).map(octonion_left).collect(),
        8 => {
            let sigma = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
            let eps = Matrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
            let mut out: Vec<Matrix> = (1..=7).map(|i| octonion_left(i).kron(&sigma)).collect();
            out.push(Matrix::identity(8).kron(&eps));
            out
        }
        _ => {
            let top = generators(8);
            let omega = top.iter().skip(1).fold(top[0].clone(), |acc, a| acc.mul(a));
            let rest = generators(m - 8);
            let d = module_dimension(m - 8);
            let mut out: Vec<Matrix> = top.iter().map(|a| a.kron(&Matrix::identity(d))).collect();
            out.extend(rest.iter().map(|e| omega.kron(e)));
            out
        }
    }
}

fn quaternion_left(unit: usize) -> Matrix {
    // Basis (1, i, j, k); column c is the image of basis element c.
    let table: [[(f64, usize); 4]; 3] = [
        [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
        [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
        [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
    ];
    let mut a = Matrix::zeros(4, 4);
    for (c, &(s, r)) in table[unit - 1].iter().enumerate() {
        a.set(r, c, s);
    }
    a
}

const FANO: [[usize; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

/// Product of octonion basis units `e_i e_j` as `(sign, index)`.
fn octonion_product(i: usize, j: usize) -> (f64, usize) {
    if i == 0 {
        return (1.0, j);
    }
    if j == 0 {
        return (1.0, i);
    }
    if i == j {
        return (-1.0, 0);
    }
    for t in FANO.iter() {
        for r in 0..3 {
            let (a, b, c) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
            if a == i && b == j {
                return (1.0, c);
            }
            if a == j && b == i {
                return (-1.0, c);
            }
        }
    }
    unreachable!("every pair of imaginary units lies on one line")
}

fn octonion_left(unit: usize) -> Matrix {
    let mut a = Matrix::zeros(8, 8);
    for c in 0..8 {
        let (s, r) = octonion_product(unit, c);
        a.set(r, c, s);
    }
    a
}
