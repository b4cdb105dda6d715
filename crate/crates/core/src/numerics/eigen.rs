//! Real spectra of non-symmetric tridiagonal matrices.

use nalgebra::DMatrix;

use super::REALNESS_TOL;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidProblem("empty tridiagonal matrix".into()));
        }
        if sub.len() != n - 1 || sup.len() != n - 1 {
            return Err(Error::InvalidProblem("off-diagonal lengths must be n - 1".into()));
        }
        if sub.iter().chain(&diag).chain(&sup).any(|x| !x.is_finite()) {
            return Err(Error::InvalidProblem("non-finite matrix entry".into()));
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.sup[i];
                m[(i + 1, i)] = self.sub[i];
            }
        }
        m
    }

    /// Diagonal similarity equalising the magnitudes of paired off-diagonals.
    /// Pairs with a zero entry are left alone.
    pub fn balanced(&self) -> Tridiag {
        let n = self.len();
        let mut sub = self.sub.clone();
        let mut sup = self.sup.clone();
        for i in 0..n.saturating_sub(1) {
            let (l, u) = (sub[i], sup[i]);
            if l != 0.0 && u != 0.0 {
                let g = (l.abs() * u.abs()).sqrt();
                sub[i] = g * l.signum();
                sup[i] = g * u.signum();
            }
        }
        Tridiag { sub, diag: self.diag.clone(), sup }
    }
}

/// Eigenvalues of `t`, ascending. Fails when any eigenvalue has an imaginary
/// part above the realness tolerance, measured relative to the spectral scale.
pub fn eigen_real(t: &Tridiag) -> Result<Vec<f64>> {
    let n = t.len();
    if n == 0 {
        return Err(Error::InvalidProblem("empty tridiagonal matrix".into()));
    }
    if n == 1 {
        return Ok(vec![t.diag[0]]);
    }
    let b = t.balanced();
    let ev = b.to_dense().complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let max_imag = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > REALNESS_TOL * scale {
        return Err(Error::ComplexSpectrum { max_imag });
    }
    let mut out: Vec<f64> = ev.iter().map(|z| z.re).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}
