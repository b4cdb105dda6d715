//! Joint spectra, polynomial eigenfunctions, action maps and quantum
//! monodromy for the separable quantum integrable systems on S³ and S².
//!
//! Every spectrum is computed twice in the test suite: once by separation of
//! variables (root systems, Heun recurrences, closed forms) and once by the
//! brute-force operator matrices in [`oracle`].

pub mod actions;
pub mod closedform;
pub mod counts;
pub mod eigenfunctions;
pub mod ellipsoidal;
pub mod error;
pub mod geometry;
pub mod heun;
pub mod monodromy;
pub mod numerics;
pub mod oracle;
pub mod poly;
pub mod state;

pub use error::{Error, Result};
pub use geometry::{SystemKind, SystemSpec};
pub use state::{JointSpectrum, Quanta, QuantumState};

/// Solves the joint spectrum of any system at degree `degree`.
///
/// For the S² systems `degree` is the angular momentum ℓ.
pub fn spectrum(spec: &SystemSpec, degree: usize, seed: u64) -> Result<JointSpectrum> {
    match spec.kind {
        SystemKind::Ellipsoidal => ellipsoidal::full_spectrum(spec, degree, seed),
        SystemKind::Prolate => heun::prolate_spectrum(spec.a()?, degree),
        SystemKind::Oblate => heun::oblate_spectrum(spec.a()?, degree),
        SystemKind::Lame => heun::lame_spectrum(&spec.params, degree),
        SystemKind::Spherical23 => Ok(closedform::spherical_spectrum(degree)),
        SystemKind::Cylindrical => Ok(closedform::cylindrical_spectrum(degree)),
        SystemKind::S2Ellipsoidal => heun::s2_ellipsoidal_spectrum(&spec.params, degree),
        SystemKind::S2Spherical => Ok(closedform::s2_spherical_level(degree)),
    }
}
