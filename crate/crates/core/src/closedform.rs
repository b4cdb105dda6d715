//! Spectra known in closed form: spherical and cylindrical on S³ and the
//! spherical system on S². Pure enumeration, no numerics.

use crate::geometry::{SystemKind, SystemSpec};
use crate::state::{hbar_for, JointSpectrum, Quanta, QuantumState};

/// Parities about (x_a, x_b) of Re (m ≥ 0) or Im (m < 0) of (x_a + i x_b)^|m|.
pub fn phase_parity(m: i64) -> (u8, u8) {
    let k = m.unsigned_abs();
    if m >= 0 {
        ((k % 2) as u8, 0)
    } else {
        (((k + 1) % 2) as u8, 1)
    }
}

/// Spherical joint spectrum (m, λ) with λ = D(D+2) − ℓ(ℓ+1); class bits are
/// the parities about x₁..x₄.
pub fn spherical_spectrum(degree: usize) -> JointSpectrum {
    let hbar = hbar_for(degree);
    let energy = (degree * (degree + 2)) as f64;
    let mut states = Vec::new();
    for ell in 0..=degree {
        let n = degree - ell;
        let lambda = energy - (ell * (ell + 1)) as f64;
        for m in -(ell as i64)..=(ell as i64) {
            let (p3, p4) = phase_parity(m);
            let p2 = ((ell - m.unsigned_abs() as usize) % 2) as u8;
            states.push(QuantumState {
                system: SystemKind::Spherical23,
                degree,
                class: vec![(n % 2) as u8, p2, p3, p4],
                quanta: Quanta::Spherical { n, ell, m },
                raw: [m as f64, lambda],
                scaled: [m as f64 * hbar, lambda * hbar * hbar],
                roots: Vec::new(),
                heun: None,
            });
        }
    }
    JointSpectrum::new(SystemSpec::plain(SystemKind::Spherical23).unwrap(), degree, hbar, states)
}

/// Cylindrical joint spectrum (m₁, m₂) with 2d + |m₁| + |m₂| = D.
pub fn cylindrical_spectrum(degree: usize) -> JointSpectrum {
    let hbar = hbar_for(degree);
    let dd = degree as i64;
    let mut states = Vec::new();
    for m1 in -dd..=dd {
        for m2 in -dd..=dd {
            let used = (m1.abs() + m2.abs()) as usize;
            if used > degree || !(degree - used).is_multiple_of(2) {
                continue;
            }
            let (p1, p2) = phase_parity(m1);
            let (p3, p4) = phase_parity(m2);
            states.push(QuantumState {
                system: SystemKind::Cylindrical,
                degree,
                class: vec![p1, p2, p3, p4],
                quanta: Quanta::Cylindrical { d: (degree - used) / 2, m1, m2 },
                raw: [m1 as f64, m2 as f64],
                scaled: [m1 as f64 * hbar, m2 as f64 * hbar],
                roots: Vec::new(),
                heun: None,
            });
        }
    }
    JointSpectrum::new(SystemSpec::plain(SystemKind::Cylindrical).unwrap(), degree, hbar, states)
}

/// The 2ℓ+1 states (m, E) of one S² spherical level; ħ = 1/(ℓ+1).
pub fn s2_spherical_level(ell: usize) -> JointSpectrum {
    let hbar = hbar_for(ell);
    let energy = (ell * (ell + 1)) as f64;
    let states = (-(ell as i64)..=(ell as i64))
        .map(|m| {
            let (p2, p3) = phase_parity(m);
            let p1 = ((ell - m.unsigned_abs() as usize) % 2) as u8;
            QuantumState {
                system: SystemKind::S2Spherical,
                degree: ell,
                class: vec![p1, p2, p3],
                quanta: Quanta::S2Spherical { ell, m },
                raw: [m as f64, energy],
                scaled: [m as f64 * hbar, energy * hbar * hbar],
                roots: Vec::new(),
                heun: None,
            }
        })
        .collect();
    JointSpectrum::new(SystemSpec::plain(SystemKind::S2Spherical).unwrap(), ell, hbar, states)
}

/// All S² spherical states with ℓ ≤ `lmax`, as (ℓ, m) pairs.
pub fn s2_spherical_spectrum(lmax: usize) -> Vec<(usize, i64)> {
    (0..=lmax).flat_map(|l| (-(l as i64)..=(l as i64)).map(move |m| (l, m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(spherical_spectrum(0).states[0].raw, [0.0, 0.0]);
        let c = cylindrical_spectrum(1);
        assert_eq!(c.len(), 4);
        assert!(c.states.iter().all(|s| matches!(s.quanta, Quanta::Cylindrical { d: 0, .. })));
        assert_eq!(s2_spherical_level(2).len(), 5);
        assert_eq!(s2_spherical_spectrum(0), vec![(0, 0)]);
    }
}
