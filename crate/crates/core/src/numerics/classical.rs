//! Classical orthogonal polynomials: values by forward recurrence and
//! power-basis coefficients for polynomial assembly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classical {
    Gegenbauer { u: f64 },
    /// `(1 - x^2)^{m/2} d^m P_n / dx^m`, no Condon-Shortley phase.
    AssocLegendre { m: usize },
    Jacobi { alpha: f64, beta: f64 },
    Chebyshev2,
}

pub fn eval_classical(kind: Classical, n: usize, x: f64) -> Result<f64> {
    match kind {
        Classical::Gegenbauer { u } => {
            if !(u > -0.5) {
                return Err(Error::InvalidProblem(format!("Gegenbauer parameter {u} <= -1/2")));
            }
            Ok(three_term(n, x, 1.0, 2.0 * u * x, |k, x, p1, p2| {
                let k = k as f64;
                (2.0 * x * (k + u - 1.0) * p1 - (k + 2.0 * u - 2.0) * p2) / k
            }))
        }
        Classical::Chebyshev2 => Ok(three_term(n, x, 1.0, 2.0 * x, |_, x, p1, p2| 2.0 * x * p1 - p2)),
        Classical::Jacobi { alpha, beta } => {
            if !(alpha > -1.0 && beta > -1.0) {
                return Err(Error::InvalidProblem("Jacobi parameters must exceed -1".into()));
            }
            let p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
            Ok(three_term(n, x, 1.0, p1, |k, x, p1, p2| {
                let (a, b, k) = (alpha, beta, k as f64);
                let s = 2.0 * k + a + b;
                let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
                let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
                let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
                (c1 * p1 - c2 * p2) / c0
            }))
        }
        Classical::AssocLegendre { m } => {
            if x.abs() > 1.0 {
                return Err(Error::InvalidProblem(format!("|x| = {} > 1", x.abs())));
            }
            if n < m {
                return Ok(0.0);
            }
            let s = (1.0 - x * x).sqrt();
            let mut pmm = 1.0;
            for k in 0..m {
                pmm *= (2 * k + 1) as f64 * s;
            }
            if n == m {
                return Ok(pmm);
            }
            let mut p2 = pmm;
            let mut p1 = x * (2 * m + 1) as f64 * pmm;
            for l in (m + 2)..=n {
                let p = (x * (2 * l - 1) as f64 * p1 - (l + m - 1) as f64 * p2) / (l - m) as f64;
                p2 = p1;
                p1 = p;
            }
            Ok(p1)
        }
    }
}

fn three_term(n: usize, x: f64, p0: f64, p1: f64, step: impl Fn(usize, f64, f64, f64) -> f64) -> f64 {
    if n == 0 {
        return p0;
    }
    let (mut a, mut b) = (p0, p1);
    for k in 2..=n {
        let c = step(k, x, b, a);
        a = b;
        b = c;
    }
    b
}

/// Power-basis coefficients (constant term first) of C_n^{(u)}.
pub fn gegenbauer_coeffs(n: usize, u: f64) -> Vec<f64> {
    coeff_recurrence(n, vec![1.0], vec![0.0, 2.0 * u], |k| {
        let k = k as f64;
        (0.0, 2.0 * (k + u - 1.0) / k, -(k + 2.0 * u - 2.0) / k)
    })
}

/// Power-basis coefficients of P_n^{(alpha, beta)}.
pub fn jacobi_coeffs(n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let p1 = vec![0.5 * (alpha - beta), 0.5 * (alpha + beta + 2.0)];
    coeff_recurrence(n, vec![1.0], p1, |k| {
        let (a, b, k) = (alpha, beta, k as f64);
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        ((s - 1.0) * (a * a - b * b) / c0, (s - 1.0) * s * (s - 2.0) / c0, -2.0 * (k + a - 1.0) * (k + b - 1.0) * s / c0)
    })
}

/// Power-basis coefficients of the Legendre polynomial P_n.
pub fn legendre_coeffs(n: usize) -> Vec<f64> {
    jacobi_coeffs(n, 0.0, 0.0)
}

/// Power-basis coefficients of d^m P_n / dx^m.
pub fn legendre_derivative_coeffs(n: usize, m: usize) -> Vec<f64> {
    let mut c = legendre_coeffs(n);
    for _ in 0..m {
        c = derivative(&c);
    }
    c
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

/// Horner evaluation of a power-basis polynomial.
pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Builds P_n from P_{n-1}, P_{n-2} via P_k = (c0 + c1 x) P_{k-1} + c2 P_{k-2}.
fn coeff_recurrence(n: usize, p0: Vec<f64>, p1: Vec<f64>, coef: impl Fn(usize) -> (f64, f64, f64)) -> Vec<f64> {
    if n == 0 {
        return p0;
    }
    let (mut a, mut b) = (p0, p1);
    for k in 2..=n {
        let (c0, c1, c2) = coef(k);
        let mut c = vec![0.0; k + 1];
        for (i, v) in b.iter().enumerate() {
            c[i] += c0 * v;
            c[i + 1] += c1 * v;
        }
        for (i, v) in a.iter().enumerate() {
            c[i] += c2 * v;
        }
        a = b;
        b = c;
    }
    b
}
