//! Cartesian eigenfunctions: every state is a harmonic homogeneous
//! polynomial of degree D. Products over roots are expanded one quadratic
//! factor at a time.

use crate::closedform::phase_parity;
use crate::error::{Error, Result};
use crate::geometry::SystemKind;
use crate::numerics::classical::{gegenbauer_coeffs, jacobi_coeffs, legendre_derivative_coeffs};
use crate::numerics::{solve_root_system, RootSystemProblem};
use crate::poly::{complex_power, homogenize, HomogPoly};
use crate::state::{HeunData, Quanta, QuantumState};

const ROOT_SEED: u64 = 0x5eed;

/// Parities about every Cartesian axis that the eigenfunction must have.
pub fn parity_bits(state: &QuantumState) -> Vec<u8> {
    let c = &state.class;
    match (state.system, state.quanta) {
        (SystemKind::Prolate, Quanta::Heun { m, .. }) => {
            let (p2, p3) = phase_parity(m);
            vec![c[0], p2, p3, c[1]]
        }
        (SystemKind::Oblate, Quanta::Heun { m, .. }) => {
            let (p3, p4) = phase_parity(m);
            vec![c[0], c[1], p3, p4]
        }
        _ => c.clone(),
    }
}

/// Roots of the Heun polynomial of `data`, mapped to the original variable.
///
/// All d+1 occupancies of (0,1), (1,a) are solved electrostatically and the
/// one whose accessory parameter q = −aγ Σ 1/t_k matches is kept.
pub fn heun_roots(data: &HeunData) -> Result<Vec<f64>> {
    let p = data.params;
    let d = p.truncation_degree().ok_or(Error::TruncationViolated { alpha: p.alpha })?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for n0 in 0..=d {
        let problem = RootSystemProblem::new(vec![0.0, 1.0, p.a], vec![p.gamma, p.delta, p.epsilon], vec![n0, d - n0]);
        let t = solve_root_system(&problem, ROOT_SEED)?;
        let q = -p.a * p.gamma * t.iter().map(|tk| 1.0 / tk).sum::<f64>();
        let gap = (q - data.q).abs();
        if best.as_ref().is_none_or(|(g, _)| gap < *g) {
            best = Some((gap, t));
        }
    }
    let (_, t) = best.ok_or(Error::MissingRoots)?;
    Ok(t.iter().map(|tk| data.origin + data.scale * tk).collect())
}

/// Σ_i c_i x_i² over the listed variables.
fn quadric(nvars: usize, coeffs: &[(usize, f64)]) -> HomogPoly {
    let mut p = HomogPoly::zero(nvars);
    for &(i, c) in coeffs {
        let mut e = vec![0; nvars];
        e[i] = 2;
        p = p.add(&HomogPoly::monomial(e, c));
    }
    p
}

fn product(nvars: usize, factors: impl IntoIterator<Item = HomogPoly>) -> HomogPoly {
    factors.into_iter().fold(HomogPoly::constant(nvars, 1.0), |acc, f| acc.mul(&f))
}

fn prefactor(nvars: usize, vars: &[usize], bits: &[u8]) -> HomogPoly {
    let mut e = vec![0; nvars];
    for (&v, &b) in vars.iter().zip(bits) {
        e[v] += b as u32;
    }
    HomogPoly::monomial(e, 1.0)
}

fn phase(nvars: usize, a: usize, b: usize, m: i64) -> HomogPoly {
    let (re, im) = complex_power(nvars, a, b, m.unsigned_abs() as u32);
    if m >= 0 {
        re
    } else {
        im
    }
}

/// Σ_i x_{v_i}² / (z − e_i): one root factor of a confocal product.
fn confocal_factor(nvars: usize, vars: &[usize], e: &[f64], z: f64) -> HomogPoly {
    let c: Vec<(usize, f64)> = vars.iter().zip(e).map(|(&v, ei)| (v, 1.0 / (z - ei))).collect();
    quadric(nvars, &c)
}

fn heun_data(state: &QuantumState) -> Result<&HeunData> {
    state.heun.as_ref().ok_or(Error::MissingRoots)
}

/// Eigenfunction of `state` as a homogeneous polynomial, scaled so that the
/// lexicographically largest term has coefficient 1.
pub fn reconstruct(state: &QuantumState, poles: &[f64]) -> Result<HomogPoly> {
    let p = match (state.system, state.quanta) {
        (SystemKind::Ellipsoidal, Quanta::Ellipsoidal { occupancy }) => {
            let d: usize = occupancy.iter().sum();
            if state.roots.len() != d {
                return Err(Error::MissingRoots);
            }
            let vars = [0, 1, 2, 3];
            let f = state.roots.iter().map(|&z| confocal_factor(4, &vars, poles, z));
            prefactor(4, &vars, &state.class).mul(&product(4, f))
        }
        (SystemKind::S2Ellipsoidal, Quanta::S2Ellipsoidal { .. }) => {
            let roots = heun_roots(heun_data(state)?)?;
            let vars = [0, 1, 2];
            let f = roots.iter().map(|&z| confocal_factor(3, &vars, poles, z));
            prefactor(3, &vars, &state.class).mul(&product(3, f))
        }
        (SystemKind::Prolate, Quanta::Heun { m, .. }) => {
            let a = poles[3];
            let roots = heun_roots(heun_data(state)?)?;
            let r2 = HomogPoly::sum_of_squares(4, &[0, 1, 2, 3]);
            let f = roots.iter().map(|&z| r2.add(&quadric(4, &[(0, -1.0 / z), (3, (a - 1.0) / (z - a))])));
            prefactor(4, &[0, 3], &state.class).mul(&phase(4, 1, 2, m)).mul(&product(4, f))
        }
        (SystemKind::Oblate, Quanta::Heun { m, .. }) => {
            let a = poles[3];
            let roots = heun_roots(heun_data(state)?)?;
            let r2 = HomogPoly::sum_of_squares(4, &[0, 1, 2, 3]);
            let f = roots.iter().map(|&z| r2.add(&quadric(4, &[(0, -a / z), (1, -(a - 1.0) / (z - 1.0))])));
            prefactor(4, &[0, 1], &state.class).mul(&phase(4, 2, 3, m)).mul(&product(4, f))
        }
        (SystemKind::Lame, Quanta::Lame { n, ell, .. }) => {
            let roots = heun_roots(heun_data(state)?)?;
            let vars = [1, 2, 3];
            let f = roots.iter().map(|&z| confocal_factor(4, &vars, poles, z));
            let inner = prefactor(4, &vars, &state.class[1..]).mul(&product(4, f));
            gegenbauer_part(n, ell).mul(&inner)
        }
        (SystemKind::Spherical23, Quanta::Spherical { n, ell, m }) => {
            let k = m.unsigned_abs() as usize;
            let rt2 = HomogPoly::sum_of_squares(4, &[1, 2, 3]);
            let leg = homogenize(&legendre_derivative_coeffs(ell, k), &HomogPoly::var(4, 1), &rt2, (ell - k) as u32);
            phase(4, 2, 3, m).mul(&leg).mul(&gegenbauer_part(n, ell))
        }
        (SystemKind::Cylindrical, Quanta::Cylindrical { d, m1, m2 }) => {
            let c = jacobi_coeffs(d, m1.unsigned_abs() as f64, m2.unsigned_abs() as f64);
            let u = quadric(4, &[(0, -1.0), (1, -1.0), (2, 1.0), (3, 1.0)]);
            let r2 = HomogPoly::sum_of_squares(4, &[0, 1, 2, 3]);
            let mut jac = HomogPoly::zero(4);
            for (j, cj) in c.iter().enumerate() {
                jac = jac.add(&u.pow(j as u32).mul(&r2.pow((d - j) as u32)).scale(*cj));
            }
            phase(4, 0, 1, m1).mul(&phase(4, 2, 3, m2)).mul(&jac)
        }
        (SystemKind::S2Spherical, Quanta::S2Spherical { ell, m }) => {
            let k = m.unsigned_abs() as usize;
            let r2 = HomogPoly::sum_of_squares(3, &[0, 1, 2]);
            let leg = homogenize(&legendre_derivative_coeffs(ell, k), &HomogPoly::var(3, 0), &r2, (ell - k) as u32);
            phase(3, 1, 2, m).mul(&leg)
        }
        _ => return Err(Error::InvalidProblem("state quanta do not match its system".into())),
    };
    Ok(p.normalized())
}

/// r^n C_n^{(ℓ+1)}(x₁/r) in four variables.
fn gegenbauer_part(n: usize, ell: usize) -> HomogPoly {
    let r2 = HomogPoly::sum_of_squares(4, &[0, 1, 2, 3]);
    homogenize(&gegenbauer_coeffs(n, ell as f64 + 1.0), &HomogPoly::var(4, 0), &r2, n as u32)
}

/// Summary of the structural checks on a reconstructed eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub degree: Option<u32>,
    /// ‖Δp‖ / ‖p‖ on coefficient vectors.
    pub harmonic_residual: f64,
    pub parity: Result<Vec<u8>>,
}

pub fn verify(p: &HomogPoly) -> Verification {
    let norm = p.coeff_norm();
    let lap = p.laplacian().coeff_norm();
    Verification {
        degree: p.degree(),
        harmonic_residual: if norm > 0.0 { lap / norm } else { 0.0 },
        parity: p.classify_symmetry(),
    }
}
