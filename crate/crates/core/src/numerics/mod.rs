//! Shared numerical kernels: electrostatic root systems, real spectra of
//! tridiagonal recurrence matrices, endpoint-robust quadrature and the
//! classical orthogonal polynomials.

pub mod classical;
pub mod eigen;
pub mod quad;
pub mod roots;

pub use classical::{eval_classical, Classical};
pub use eigen::{eigen_real, Tridiag};
pub use quad::{integrate, Abscissa, IntegrandKind, QuadratureSpec};
pub use roots::{solve_root_system, RootSystemProblem};

/// Residual tolerance for root systems.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Largest admissible imaginary part when a spectrum is declared real.
pub const REALNESS_TOL: f64 = 1e-9;
/// Default relative tolerance for comparisons.
pub const COMPARE_TOL: f64 = 1e-8;
/// Largest supported polynomial degree d in the recurrences.
pub const MAX_DEGREE: usize = 64;

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Real roots of `a z^2 + b z + c`, ascending, computed without cancellation.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a == 0.0 {
        if b == 0.0 {
            return None;
        }
        let r = -c / b;
        return Some((r, r));
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // tolerate rounding on double roots
        if disc > -1e-12 * (b * b).max(1e-300) {
            let r = -b / (2.0 * a);
            return Some((r, r));
        }
        return None;
    }
    let sq = disc.sqrt();
    let t = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if t == 0.0 {
        (0.0, 0.0)
    } else {
        (t / a, c / t)
    };
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}
