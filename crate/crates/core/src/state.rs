//! Quantum states and joint spectra shared by all systems.

use serde::{Deserialize, Serialize};

use crate::geometry::{SystemKind, SystemSpec};
use crate::heun::HeunParams;

/// Discrete quantum numbers; together with the class bits they key a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Quanta {
    /// Root counts per pole gap of the Heine–Stieltjes polynomial.
    Ellipsoidal { occupancy: [usize; 3] },
    /// Prolate and oblate: signed m, polynomial degree d and the rank of the
    /// eigenvalue among the d+1 of its recurrence matrix.
    Heun { m: i64, d: usize, index: usize },
    /// Gegenbauer degree n, inner angular momentum ℓ = D − n.
    Lame { n: usize, ell: usize, d: usize, index: usize },
    Spherical { n: usize, ell: usize, m: i64 },
    Cylindrical { d: usize, m1: i64, m2: i64 },
    S2Ellipsoidal { d: usize, index: usize },
    S2Spherical { ell: usize, m: i64 },
}

/// Heun data kept for eigenfunction reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunData {
    /// Parameters after the class flips.
    pub params: HeunParams,
    /// Eigenvalue of the truncated recurrence matrix.
    pub q: f64,
    /// Affine change z = origin + scale·t from the Heun variable t.
    pub origin: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    pub system: SystemKind,
    /// Polynomial degree D (ℓ for the S² systems).
    pub degree: usize,
    /// Reflection parities; width and meaning depend on the system.
    pub class: Vec<u8>,
    pub quanta: Quanta,
    /// Separation eigenvalue pair at ħ = 1.
    pub raw: [f64; 2],
    /// Eigenvalue pair scaled by the presentation ħ.
    pub scaled: [f64; 2],
    /// Heine–Stieltjes roots, when the solver produced them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<f64>,
    #[serde(skip)]
    pub heun: Option<HeunData>,
}

impl QuantumState {
    /// Laplace–Beltrami eigenvalue: D(D+2) on S³, ℓ(ℓ+1) on S².
    pub fn energy(&self) -> f64 {
        let d = self.degree as f64;
        match self.system.nvars() {
            3 => d * (d + 1.0),
            _ => d * (d + 2.0),
        }
    }

    /// The eigenvalue pair in the form produced by the Cartesian operators
    /// of [`crate::oracle`]; signed angular momenta enter squared.
    pub fn oracle_pair(&self) -> [f64; 2] {
        let [x, y] = self.raw;
        match self.system {
            SystemKind::Prolate | SystemKind::Oblate | SystemKind::Spherical23 => [x * x, y],
            SystemKind::Cylindrical => [x * x, y * y],
            SystemKind::S2Spherical => [y, x * x],
            _ => self.raw,
        }
    }

    pub fn class_label(&self) -> String {
        self.class.iter().map(|b| char::from(b'0' + b)).collect()
    }

    pub fn key(&self) -> (SystemKind, usize, Vec<u8>, Quanta) {
        (self.system, self.degree, self.class.clone(), self.quanta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpectrum {
    pub system: SystemSpec,
    pub degree: usize,
    pub hbar: f64,
    pub states: Vec<QuantumState>,
}

impl JointSpectrum {
    pub fn new(system: SystemSpec, degree: usize, hbar: f64, mut states: Vec<QuantumState>) -> Self {
        states.sort_by_key(|a| a.key());
        Self { system, degree, hbar, states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn scaled_points(&self) -> Vec<[f64; 2]> {
        self.states.iter().map(|s| s.scaled).collect()
    }

    /// States whose class bits equal `class`.
    pub fn filter_class(&self, class: &[u8]) -> JointSpectrum {
        let states = self.states.iter().filter(|s| s.class == class).cloned().collect();
        JointSpectrum { system: self.system.clone(), degree: self.degree, hbar: self.hbar, states }
    }

    /// Number of states per class, ordered by class bits.
    pub fn class_counts(&self) -> Vec<(Vec<u8>, usize)> {
        let mut map = std::collections::BTreeMap::new();
        for s in &self.states {
            *map.entry(s.class.clone()).or_insert(0) += 1;
        }
        map.into_iter().collect()
    }
}

/// ħ = 1/(D+1), so that 1/ħ² counts the states of a level.
pub fn hbar_for(degree: usize) -> f64 {
    1.0 / (degree as f64 + 1.0)
}
