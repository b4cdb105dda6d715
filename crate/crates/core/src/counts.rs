//! State counts per symmetry class from the quantum-number bookkeeping
//! alone, without solving any eigenproblem.

use std::collections::BTreeMap;

use crate::closedform;
use crate::ellipsoidal::admissible_classes;
use crate::geometry::{SystemKind, SystemSpec};

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Ellipsoidal count for class μ at degree D: C(d+2, 2), d = (D − Σμ)/2.
pub fn ellipsoidal_class_count(mu: [u8; 4], degree: usize) -> usize {
    let k: usize = mu.iter().map(|&m| m as usize).sum();
    if k > degree || !(degree - k).is_multiple_of(2) {
        return 0;
    }
    choose2((degree - k) / 2 + 2)
}

/// Prolate or oblate count for class bits (μ, μ') at degree D, summed over m.
pub fn rotational_class_count(bits: [u8; 2], degree: usize) -> usize {
    let k = (bits[0] + bits[1]) as usize;
    let dd = degree as i64;
    (-dd..=dd)
        .filter_map(|m| {
            let used = m.unsigned_abs() as usize + k;
            (used <= degree && (degree - used).is_multiple_of(2)).then(|| (degree - used) / 2 + 1)
        })
        .sum()
}

/// Lamé count for class bits (n mod 2, μ₂, μ₃, μ₄).
pub fn lame_class_count(bits: [u8; 4], degree: usize) -> usize {
    let k = (bits[1] + bits[2] + bits[3]) as usize;
    (0..=degree)
        .filter(|ell| (degree - ell) % 2 == bits[0] as usize)
        .filter(|&ell| ell >= k && (ell - k).is_multiple_of(2)).map(|ell| (ell - k) / 2 + 1)
        .sum()
}

fn s2_class_count(bits: [u8; 3], ell: usize) -> usize {
    let k = (bits[0] + bits[1] + bits[2]) as usize;
    if ell >= k && (ell - k).is_multiple_of(2) {
        (ell - k) / 2 + 1
    } else {
        0
    }
}

fn patterns<const N: usize>() -> Vec<[u8; N]> {
    (0..(1u32 << N))
        .map(|v| {
            let mut b = [0u8; N];
            for (k, slot) in b.iter_mut().enumerate() {
                *slot = ((v >> (N - 1 - k)) & 1) as u8;
            }
            b
        })
        .collect()
}

/// Per-class counts (only nonzero classes), ordered by class bits.
pub fn class_counts(spec: &SystemSpec, degree: usize) -> Vec<(Vec<u8>, usize)> {
    let mut map: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    match spec.kind {
        SystemKind::Ellipsoidal => {
            for mu in admissible_classes(degree) {
                map.insert(mu.to_vec(), ellipsoidal_class_count(mu, degree));
            }
        }
        SystemKind::Prolate | SystemKind::Oblate => {
            for b in patterns::<2>() {
                map.insert(b.to_vec(), rotational_class_count(b, degree));
            }
        }
        SystemKind::Lame => {
            for b in patterns::<4>() {
                map.insert(b.to_vec(), lame_class_count(b, degree));
            }
        }
        SystemKind::S2Ellipsoidal => {
            for b in patterns::<3>() {
                map.insert(b.to_vec(), s2_class_count(b, degree));
            }
        }
        SystemKind::Spherical23 => return closedform::spherical_spectrum(degree).class_counts(),
        SystemKind::Cylindrical => return closedform::cylindrical_spectrum(degree).class_counts(),
        SystemKind::S2Spherical => return closedform::s2_spherical_level(degree).class_counts(),
    }
    map.into_iter().filter(|(_, n)| *n > 0).collect()
}

pub fn total_count(spec: &SystemSpec, degree: usize) -> usize {
    class_counts(spec, degree).iter().map(|(_, n)| n).sum()
}
