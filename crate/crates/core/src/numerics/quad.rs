//! Double-exponential quadrature with exact endpoint distances.
//!
//! Integrands receive an [`Abscissa`] so that factors like `1/sqrt(s - e)`
//! can be evaluated from the distance to the endpoint instead of the rounded
//! difference `s - e`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_LEVEL: usize = 12;
const MAX_SPLIT_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandKind {
    /// Square-root type behaviour at both ends.
    SqrtEndpointBoth,
    /// Square-root type behaviour at the lower end only.
    SqrtEndpointLeft,
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub kind: IntegrandKind,
    pub rel_tol: f64,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: f64, kind: IntegrandKind, rel_tol: f64) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidProblem(format!("bad interval [{lower}, {upper}]")));
        }
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(Error::InvalidProblem(format!("rel_tol {rel_tol} outside (0, 1e-3]")));
        }
        Ok(Self { lower, upper, kind, rel_tol })
    }
}

/// A quadrature node with its distances to both interval ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_lower: f64,
    pub to_upper: f64,
}

/// Integrates a plain function of `x`.
pub fn integrate(spec: &QuadratureSpec, f: impl Fn(f64) -> f64) -> Result<f64> {
    integrate_abscissa(spec, |p| f(p.x))
}

/// Integrates a function that may use the exact endpoint distances.
pub fn integrate_abscissa(spec: &QuadratureSpec, f: impl Fn(Abscissa) -> f64) -> Result<f64> {
    let (a, b) = (spec.lower, spec.upper);
    match spec.kind {
        IntegrandKind::SqrtEndpointBoth => {
            // s = mid + h sin(theta), theta in (-pi/2, pi/2)
            let h = 0.5 * (b - a);
            let g = |t: Abscissa| {
                let dl = t.from_lower;
                let du = t.to_upper;
                let from_lower = 2.0 * h * (0.5 * dl).sin().powi(2);
                let to_upper = 2.0 * h * (0.5 * du).sin().powi(2);
                let x = if from_lower < to_upper { a + from_lower } else { b - to_upper };
                let jac = h * dl.min(du).sin();
                f(Abscissa { x, from_lower, to_upper }) * jac
            };
            adaptive(-FRAC_PI_2, FRAC_PI_2, &g, spec.rel_tol, 0)
        }
        _ => adaptive(a, b, &f, spec.rel_tol, 0),
    }
}

fn adaptive(a: f64, b: f64, f: &dyn Fn(Abscissa) -> f64, tol: f64, depth: usize) -> Result<f64> {
    if let Some(v) = tanh_sinh(a, b, f, tol) {
        return Ok(v);
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::NoConvergence { lower: a, upper: b });
    }
    let m = 0.5 * (a + b);
    // shift the callers' endpoint distances onto the halves
    let left = |p: Abscissa| f(Abscissa { x: p.x, from_lower: p.from_lower, to_upper: p.to_upper + (b - m) });
    let right = |p: Abscissa| f(Abscissa { x: p.x, from_lower: p.from_lower + (m - a), to_upper: p.to_upper });
    Ok(adaptive(a, m, &left, tol, depth + 1)? + adaptive(m, b, &right, tol, depth + 1)?)
}

/// Level-doubling tanh-sinh rule; `None` when the level estimates disagree.
fn tanh_sinh(a: f64, b: f64, f: &dyn Fn(Abscissa) -> f64, tol: f64) -> Option<f64> {
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> Option<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        // 1 - tanh(u) and 1 + tanh(u) without cancellation
        let to_upper = 2.0 * half / (1.0 + (2.0 * u).exp());
        let from_lower = 2.0 * half / (1.0 + (-2.0 * u).exp());
        if !(from_lower > 0.0 && to_upper > 0.0) || w == 0.0 {
            return Some(0.0);
        }
        let x = if from_lower < to_upper { a + from_lower } else { b - to_upper };
        let v = f(Abscissa { x, from_lower, to_upper });
        if !v.is_finite() {
            return None;
        }
        Some(v * w * half)
    };
    let tmax = 4.0;
    let mut h = 1.0;
    let mut sum = eval(0.0)?;
    let mut abs_sum = sum.abs();
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        let (p, m) = (eval(t)?, eval(-t)?);
        sum += p + m;
        abs_sum += p.abs() + m.abs();
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            let (p, m) = (eval(t)?, eval(-t)?);
            sum += p + m;
            abs_sum += p.abs() + m.abs();
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        if err <= tol * cur.abs() || err <= 64.0 * f64::EPSILON * abs_sum * h {
            return Some(cur);
        }
        prev = cur;
    }
    None
}
