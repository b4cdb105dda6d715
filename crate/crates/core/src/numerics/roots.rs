//! Stieltjes electrostatic equilibria: the zeros of polynomial solutions of a
//! Fuchsian equation with real poles `e_j` and exponents `γ_j` solve
//!
//! Σ_j (γ_j/2)/(z_k − e_j) + Σ_{l≠k} 1/(z_k − z_l) = 0.
//!
//! The left-hand side is the gradient of a strictly concave log-energy inside
//! each occupancy chamber, so damped Newton from any interior start reaches
//! the unique equilibrium.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_RESTARTS: usize = 50;
const MAX_NEWTON: usize = 200;
const JITTER: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystemProblem {
    pub poles: Vec<f64>,
    pub exponents: Vec<f64>,
    /// Number of roots in each open interval (e_j, e_{j+1}).
    pub occupancy: Vec<usize>,
}

impl RootSystemProblem {
    pub fn new(poles: Vec<f64>, exponents: Vec<f64>, occupancy: Vec<usize>) -> Self {
        Self { poles, exponents, occupancy }
    }

    pub fn degree(&self) -> usize {
        self.occupancy.iter().sum()
    }

    fn validate(&self) -> Result<()> {
        let p = self.poles.len();
        if p < 2 {
            return Err(Error::InvalidProblem("need at least two poles".into()));
        }
        if self.exponents.len() != p {
            return Err(Error::InvalidProblem("one exponent per pole".into()));
        }
        if self.occupancy.len() != p - 1 {
            return Err(Error::InvalidProblem("occupancy length must be poles - 1".into()));
        }
        if self.poles.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProblem("poles must be strictly increasing".into()));
        }
        if self.exponents.iter().any(|g| !(*g > 0.0)) {
            return Err(Error::InvalidProblem("exponents must be positive".into()));
        }
        Ok(())
    }

    /// Interval index of every root, in ascending root order.
    fn slots(&self) -> Vec<usize> {
        self.occupancy
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat_n(j, n))
            .collect()
    }

    /// Left-hand sides of the equilibrium equations.
    pub fn residuals(&self, z: &[f64]) -> Vec<f64> {
        (0..z.len())
            .map(|k| {
                let mut f = 0.0;
                for (e, g) in self.poles.iter().zip(&self.exponents) {
                    f += 0.5 * g / (z[k] - e);
                }
                for (l, zl) in z.iter().enumerate() {
                    if l != k {
                        f += 1.0 / (z[k] - zl);
                    }
                }
                f
            })
            .collect()
    }

    /// Rounding floor of each equation: every term c/(z_k − w) carries a
    /// relative error of about ε(|z_k| + |w|)/|z_k − w| from the subtraction.
    fn noise(&self, z: &[f64]) -> Vec<f64> {
        let term = |c: f64, zk: f64, w: f64| (c / (zk - w)).abs() * (zk.abs() + w.abs()) / (zk - w).abs();
        (0..z.len())
            .map(|k| {
                let mut s = 0.0;
                for (e, g) in self.poles.iter().zip(&self.exponents) {
                    s += term(0.5 * g, z[k], *e);
                }
                for (l, zl) in z.iter().enumerate() {
                    if l != k {
                        s += term(1.0, z[k], *zl);
                    }
                }
                f64::EPSILON * s
            })
            .collect()
    }

    /// Largest residual in units of its rounding floor.
    fn noise_ratio(&self, z: &[f64]) -> f64 {
        let f = self.residuals(z);
        let n = self.noise(z);
        f.iter().zip(&n).map(|(fk, nk)| fk.abs() / nk).fold(0.0, f64::max)
    }

    /// Accessory parameters q_j = γ_j Σ_k 1/(z_k − e_j).
    pub fn accessory(&self, z: &[f64]) -> Vec<f64> {
        self.poles
            .iter()
            .zip(&self.exponents)
            .map(|(e, g)| g * z.iter().map(|zk| 1.0 / (zk - e)).sum::<f64>())
            .collect()
    }

    fn seed_roots(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.degree());
        for (j, &n) in self.occupancy.iter().enumerate() {
            let (lo, hi) = (self.poles[j], self.poles[j + 1]);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for k in 0..n {
                let node = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
                let jitter = rng.gen_range(-0.5..0.5) * JITTER * (hi - lo);
                let x = (mid - half * node + jitter).clamp(lo + 1e-3 * half, hi - 1e-3 * half);
                z.push(x);
            }
        }
        z.sort_by(|a, b| a.partial_cmp(b).unwrap());
        z
    }

    fn newton(&self, mut z: Vec<f64>) -> Option<Vec<f64>> {
        let d = z.len();
        let slots = self.slots();
        let mut settled = 0;
        for _ in 0..MAX_NEWTON {
            let rel = self.noise_ratio(&z);
            if !rel.is_finite() {
                return None;
            }
            let f = self.residuals(&z);
            if rel < 4.0 {
                settled += 1;
                if settled > 2 {
                    return Some(z);
                }
            }
            // -J is symmetric positive definite
            let mut h = DMatrix::<f64>::zeros(d, d);
            for k in 0..d {
                let mut diag = 0.0;
                for (e, g) in self.poles.iter().zip(&self.exponents) {
                    diag += 0.5 * g / (z[k] - e).powi(2);
                }
                for l in 0..d {
                    if l != k {
                        let w = 1.0 / (z[k] - z[l]).powi(2);
                        diag += w;
                        h[(k, l)] = -w;
                    }
                }
                h[(k, k)] = diag;
            }
            let rhs = DVector::from_vec(f);
            let step = {
                let ch = h.cholesky()?;
                ch.solve(&rhs)
            };
            let mut t: f64 = 1.0;
            for k in 0..d {
                let dk = step[k];
                if dk == 0.0 {
                    continue;
                }
                let barrier = if dk > 0.0 {
                    let wall = self.poles[slots[k] + 1];
                    if k + 1 < d { wall.min(z[k + 1]) } else { wall }
                } else {
                    let wall = self.poles[slots[k]];
                    if k > 0 { wall.max(z[k - 1]) } else { wall }
                };
                t = t.min(0.45 * (barrier - z[k]).abs() / dk.abs());
            }
            for k in 0..d {
                z[k] += t * step[k];
            }
        }
        (self.noise_ratio(&z) < 64.0).then_some(z)
    }

    fn occupancy_of(&self, z: &[f64]) -> Vec<usize> {
        let mut occ = vec![0; self.occupancy.len()];
        for zk in z {
            if let Some(j) = self.poles.windows(2).position(|w| *zk > w[0] && *zk < w[1]) {
                occ[j] += 1;
            }
        }
        occ
    }
}

/// Solves the equilibrium problem, returning roots in ascending order.
pub fn solve_root_system(problem: &RootSystemProblem, seed: u64) -> Result<Vec<f64>> {
    problem.validate()?;
    if problem.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESTARTS {
        let z0 = problem.seed_roots(&mut rng);
        if let Some(z) = problem.newton(z0) {
            if problem.occupancy_of(&z) == problem.occupancy {
                return Ok(z);
            }
        }
    }
    Err(Error::NonConvergence { occupancy: problem.occupancy.clone(), attempts: MAX_RESTARTS })
}
