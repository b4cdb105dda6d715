//! Ellipsoidal joint spectrum from Heine–Stieltjes polynomials of the
//! generalised Lamé equation with poles e₁ < e₂ < e₃ < e₄.

use crate::error::{Error, Result};
use crate::geometry::{SystemKind, SystemSpec, MIN_POLE_GAP};
use crate::numerics::{solve_root_system, RootSystemProblem};
use crate::state::{hbar_for, JointSpectrum, Quanta, QuantumState};

pub type Class4 = [u8; 4];

/// Exponents and spectral shifts of one symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct GenLameParams {
    pub e: [f64; 4],
    /// γ̃_m = 3/2 when μ_m = 1, else 1/2.
    pub gamma: [f64; 4],
    pub u: [f64; 3],
}

/// Indices other than `i` and `j`.
fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != i && k != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

pub fn gen_lame_params(e: [f64; 4], mu: Class4) -> GenLameParams {
    let gamma = mu.map(|m| if m == 1 { 1.5 } else { 0.5 });
    let mut u = [0.0; 3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (mi, mj) = (mu[i] as f64, mu[j] as f64);
            let w = 2.0 * mi * mj + mi + mj;
            let (k, m) = complement(i, j);
            u[0] += w;
            u[1] -= w * (e[k] + e[m]);
            u[2] += w * e[k] * e[m];
        }
    }
    GenLameParams { e, gamma, u }
}

/// The eight classes allowed at degree `degree`: Σμ ≡ D (mod 2), Σμ ≤ D.
pub fn admissible_classes(degree: usize) -> Vec<Class4> {
    (0..16u8)
        .map(|b| [b >> 3 & 1, b >> 2 & 1, b >> 1 & 1, b & 1])
        .filter(|mu| {
            let s: usize = mu.iter().map(|&m| m as usize).sum();
            s <= degree && (degree - s).is_multiple_of(2)
        })
        .collect()
}

/// All occupancy vectors (n₁,n₂,n₃) with n₁+n₂+n₃ = d.
pub fn occupancies(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for n1 in 0..=d {
        for n2 in 0..=(d - n1) {
            out.push([n1, n2, d - n1 - n2]);
        }
    }
    out
}

/// Spectral parameters (λ₁, λ₂) from the accessory parameters q_j.
pub fn spectral_parameters(p: &GenLameParams, q: &[f64]) -> [f64; 2] {
    let e = p.e;
    let mut l1 = -p.u[1];
    let mut l2 = p.u[2];
    for j in 0..4 {
        let rest: Vec<f64> = (0..4).filter(|&k| k != j).map(|k| e[k]).collect();
        let s2 = rest[0] * rest[1] + rest[0] * rest[2] + rest[1] * rest[2];
        let s3 = rest[0] * rest[1] * rest[2];
        l1 += 4.0 * q[j] * s2;
        l2 += 4.0 * q[j] * s3;
    }
    [l1, l2]
}

fn check_spec(spec: &SystemSpec) -> Result<[f64; 4]> {
    if spec.kind != SystemKind::Ellipsoidal {
        return Err(Error::InvalidProblem(format!("expected an ellipsoidal system, got {}", spec.kind)));
    }
    let e = [spec.params[0], spec.params[1], spec.params[2], spec.params[3]];
    if e.windows(2).any(|w| w[1] - w[0] <= MIN_POLE_GAP) {
        return Err(Error::InvalidProblem("semi-axes closer than the pole-gap guard".into()));
    }
    Ok(e)
}

fn mix_seed(seed: u64, mu: Class4, occ: [usize; 3]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in mu.iter().map(|&m| m as u64).chain(occ.iter().map(|&n| n as u64)) {
        h = (h ^ v).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
    }
    h
}

/// Every state of class `mu` at degree `degree`.
pub fn solve_class(spec: &SystemSpec, degree: usize, mu: Class4, seed: u64) -> Result<Vec<QuantumState>> {
    let e = check_spec(spec)?;
    let k: usize = mu.iter().map(|&m| m as usize).sum();
    if k > degree || !(degree - k).is_multiple_of(2) {
        return Err(Error::InvalidProblem(format!("class {mu:?} impossible at D = {degree}")));
    }
    let d = (degree - k) / 2;
    let params = gen_lame_params(e, mu);
    let hbar = hbar_for(degree);
    let mut out = Vec::new();
    for occ in occupancies(d) {
        let problem = RootSystemProblem::new(e.to_vec(), params.gamma.to_vec(), occ.to_vec());
        let z = solve_root_system(&problem, mix_seed(seed, mu, occ))?;
        let q = problem.accessory(&z);
        let raw = spectral_parameters(&params, &q);
        out.push(QuantumState {
            system: SystemKind::Ellipsoidal,
            degree,
            class: mu.to_vec(),
            quanta: Quanta::Ellipsoidal { occupancy: occ },
            raw,
            scaled: [raw[0] * hbar * hbar, raw[1] * hbar * hbar],
            roots: z,
            heun: None,
        });
    }
    Ok(out)
}

/// Union over the eight admissible classes; (D+1)² states.
pub fn full_spectrum(spec: &SystemSpec, degree: usize, seed: u64) -> Result<JointSpectrum> {
    check_spec(spec)?;
    let mut states = Vec::new();
    for mu in admissible_classes(degree) {
        states.extend(solve_class(spec, degree, mu, seed)?);
    }
    Ok(JointSpectrum::new(spec.clone(), degree, hbar_for(degree), states))
}

/// Maps ellipsoidal pairs (λ₁, λ₂) with e = (0, 1, e₃, e₄) to the oracle
/// pairs (m², λ) of the prolate (e₃ → 1) or oblate (e₄ → e₃) limit.
pub fn limit_pairs(spectrum: &JointSpectrum, target: SystemKind) -> Result<Vec<[f64; 2]>> {
    let e = check_spec(&spectrum.system)?;
    if e[0] != 0.0 || e[1] != 1.0 {
        return Err(Error::InvalidProblem("limit maps need e₁ = 0 and e₂ = 1".into()));
    }
    spectrum
        .states
        .iter()
        .map(|s| {
            let energy = s.energy();
            let [l1, l2] = s.raw;
            match target {
                SystemKind::Prolate => {
                    let a = e[3];
                    Ok([(l1 - l2 - energy) / (a - 1.0), l2])
                }
                SystemKind::Oblate => {
                    let a = e[2];
                    let lambda = l2 / a;
                    Ok([(lambda + a * energy - l1) / (a - 1.0), lambda])
                }
                other => Err(Error::UnreachableTarget(other.to_string())),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let p = gen_lame_params([0.0, 1.0, 2.0, 3.0], [1, 0, 0, 0]);
        assert_eq!(p.u, [3.0, -12.0, 11.0]);
        assert_eq!(gen_lame_params([1.0, 2.0, 5.0, 8.0], [0; 4]).u, [0.0; 3]);
    }

    #[test]
    fn ground_state() {
        let spec = SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap();
        let s = solve_class(&spec, 0, [0; 4], 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].raw, [0.0, 0.0]);
    }
}
