//! Bessel functions of integer and half-integer order, Gauss–Legendre rules.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Argument above which integer orders use the Hankel expansion.
const ASYMPTOTIC_SWITCH: f64 = 12.0;

/// `J_ν(x)` for `ν = two_nu / 2 ≥ -1/2` and `x ≥ 0`.
pub fn bessel_j(two_nu: i32, x: f64) -> f64 {
    assert!(two_nu >= -1, "order below -1/2 is not supported");
    assert!(x >= 0.0, "negative argument");
    let nu = two_nu as f64 / 2.0;
    if two_nu % 2 != 0 {
        let k = (two_nu - 1) / 2; // ν = k + 1/2
        if x < 1.0 || x < 2.0 * k as f64 {
            series(nu, x)
        } else {
            (2.0 * x / PI).sqrt() * spherical_j(k, x)
        }
    } else if x < ASYMPTOTIC_SWITCH {
        series(nu, x)
    } else {
        hankel_asymptotic(nu, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let h = x / 2.0;
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else if nu < 0.0 { f64::INFINITY } else { 0.0 };
    }
    let mut term = h.powf(nu) / libm_gamma(nu + 1.0);
    let mut sum = term;
    let h2 = h * h;
    let mut j = 0.0;
    loop {
        j += 1.0;
        term *= -h2 / (j * (j + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && j > h {
            break;
        }
        if j > 500.0 {
            break;
        }
    }
    sum
}

fn libm_gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Spherical Bessel `j_k(x)` for `k ≥ -1`, by upward recurrence from the trig forms.
fn spherical_j(k: i32, x: f64) -> f64 {
    let (s, c) = (x.sin(), x.cos());
    let mut prev = c / x; // j_{-1}
    if k == -1 {
        return prev;
    }
    let mut cur = s / x; // j_0
    for l in 0..k {
        let next = (2 * l + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (nu / 2.0 + 0.25) * PI;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0; // a_k / x^k
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if a.abs() > last && k > 2 {
            break;
        }
        last = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a == 0.0 || a.abs() < 1e-17 {
            break;
        }
        let kk = (k + 1) as f64;
        a *= (mu - (2.0 * kk - 1.0).powi(2)) / (kk * 8.0 * x);
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// `Γ(m/2)` for positive integers `m`.
pub fn gamma_half(m: usize) -> f64 {
    libm_gamma(m as f64 / 2.0)
}

/// Surface area of the unit sphere in `R^m`.
pub fn sphere_area(m: usize) -> f64 {
    2.0 * PI.powf(m as f64 / 2.0) / gamma_half(m)
}
