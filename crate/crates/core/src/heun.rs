//! Heun polynomial spectra: prolate, oblate and Lamé on S³, and the
//! ellipsoidal system on S².
//!
//! Each system is a base parameter set plus reflection classes; a class
//! multiplies the solution by a power of one of the factors s, s − 1, s − a,
//! which maps Heun to Heun with shifted exponents and accessory parameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SystemKind, SystemSpec};
use crate::numerics::{eigen_real, Tridiag, MAX_DEGREE};
use crate::state::{hbar_for, HeunData, JointSpectrum, Quanta, QuantumState};

/// Heun equation
/// y'' + (γ/t + δ/(t−1) + ε/(t−a)) y' + (αβ t − q)/(t(t−1)(t−a)) y = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub a: f64,
    /// Accessory parameter; in a class-flipped set this is the offset
    /// accumulated by the flips.
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
}

/// Singular point at which a class flip acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    Zero,
    One,
    A,
}

impl HeunParams {
    pub fn fuchs_defect(&self) -> f64 {
        self.alpha + self.beta + 1.0 - self.gamma - self.delta - self.epsilon
    }

    /// Parameters of t^{1−γ} y, (t−1)^{1−δ} y or (t−a)^{1−ε} y.
    pub fn flip(&self, at: Pole) -> HeunParams {
        let p = *self;
        match at {
            Pole::Zero => HeunParams {
                alpha: p.alpha + 1.0 - p.gamma,
                beta: p.beta + 1.0 - p.gamma,
                gamma: 2.0 - p.gamma,
                q: p.q + (1.0 - p.gamma) * (p.a * p.delta + p.epsilon),
                ..p
            },
            Pole::One => HeunParams {
                alpha: p.alpha + 1.0 - p.delta,
                beta: p.beta + 1.0 - p.delta,
                delta: 2.0 - p.delta,
                q: p.q + p.a * p.gamma * (1.0 - p.delta),
                ..p
            },
            Pole::A => HeunParams {
                alpha: p.alpha + 1.0 - p.epsilon,
                beta: p.beta + 1.0 - p.epsilon,
                epsilon: 2.0 - p.epsilon,
                q: p.q + p.gamma * (1.0 - p.epsilon),
                ..p
            },
        }
    }

    /// Polynomial degree d = −α when α is a non-positive integer.
    pub fn truncation_degree(&self) -> Option<usize> {
        let d = -self.alpha;
        let r = d.round();
        ((d - r).abs() < 1e-9 && r >= 0.0).then_some(r as usize)
    }
}

/// Truncated recurrence matrix whose eigenvalues are the admissible q.
///
/// Row i reads C_i c_{i−1} − B_i c_i + A_i c_{i+1} = q c_i with
/// A_i = a(i+1)(i+γ), B_i = i[(i−1+γ)(a+1) + aδ + ε], C_i = (i−1+α)(i−1+β).
pub fn heun_matrix(p: &HeunParams, d: usize) -> Result<Tridiag> {
    if p.truncation_degree() != Some(d) {
        return Err(Error::TruncationViolated { alpha: p.alpha });
    }
    if d > MAX_DEGREE {
        return Err(Error::DimensionGuard { degree: d, max: MAX_DEGREE });
    }
    let n = d + 1;
    let diag = (0..n)
        .map(|i| {
            let i = i as f64;
            -i * ((i - 1.0 + p.gamma) * (p.a + 1.0) + p.a * p.delta + p.epsilon)
        })
        .collect();
    let sup = (0..d).map(|i| p.a * (i as f64 + 1.0) * (i as f64 + p.gamma)).collect();
    let sub = (1..n)
        .map(|i| {
            let i = i as f64;
            (i - 1.0 + p.alpha) * (i - 1.0 + p.beta)
        })
        .collect();
    Tridiag::new(sub, diag, sup)
}

/// Coefficients c_i of the Heun polynomial with accessory parameter `q`,
/// normalised to c₀ = 1, from the first d rows of the recurrence.
pub fn heun_coefficients(p: &HeunParams, q: f64) -> Result<Vec<f64>> {
    let d = p.truncation_degree().ok_or(Error::TruncationViolated { alpha: p.alpha })?;
    let mut c = vec![1.0];
    for i in 0..d {
        let fi = i as f64;
        let a_i = p.a * (fi + 1.0) * (fi + p.gamma);
        let b_i = fi * ((fi - 1.0 + p.gamma) * (p.a + 1.0) + p.a * p.delta + p.epsilon);
        let c_i = if i == 0 { 0.0 } else { (fi - 1.0 + p.alpha) * (fi - 1.0 + p.beta) };
        let prev = if i == 0 { 0.0 } else { c[i - 1] };
        c.push(((q + b_i) * c[i] - c_i * prev) / a_i);
    }
    Ok(c)
}

/// Applies the flips selected by `bits` to `base`.
fn flipped(base: HeunParams, poles: &[Pole], bits: &[u8]) -> HeunParams {
    poles.iter().zip(bits).fold(base, |p, (&pole, &b)| if b == 1 { p.flip(pole) } else { p })
}

fn bit_patterns(width: usize) -> Vec<Vec<u8>> {
    (0..(1u32 << width))
        .map(|v| (0..width).rev().map(|k| ((v >> k) & 1) as u8).collect())
        .collect()
}

/// Prolate or oblate base parameters for angular momentum m at degree D.
fn rotational_base(a: f64, m: i64, degree: usize, prolate: bool) -> HeunParams {
    let am = m.unsigned_abs() as f64;
    let big = degree as f64 + 1.0;
    let (delta, epsilon) = if prolate { (1.0 + am, 0.5) } else { (0.5, 1.0 + am) };
    HeunParams { a, q: 0.0, alpha: 0.5 * (1.0 - big + am), beta: 0.5 * (1.0 + big + am), gamma: 0.5, delta, epsilon }
}

fn rotational_spectrum(kind: SystemKind, a: f64, degree: usize) -> Result<JointSpectrum> {
    if !(a > 1.0) {
        return Err(Error::InvalidProblem(format!("a = {a} must exceed 1")));
    }
    let prolate = kind == SystemKind::Prolate;
    let poles: [Pole; 2] = if prolate { [Pole::Zero, Pole::A] } else { [Pole::Zero, Pole::One] };
    let hbar = hbar_for(degree);
    let mut states = Vec::new();
    let dd = degree as i64;
    for m in -dd..=dd {
        let am = m.unsigned_abs() as f64;
        let base = rotational_base(a, m, degree, prolate);
        for bits in bit_patterns(2) {
            let p = flipped(base, &poles, &bits);
            let Some(d) = p.truncation_degree() else { continue };
            let qs = eigen_real(&heun_matrix(&p, d)?)?;
            for (index, qt) in qs.iter().enumerate() {
                let q = qt - p.q;
                let lambda = if prolate { a * am - 4.0 * q } else { am - 4.0 * q };
                states.push(QuantumState {
                    system: kind,
                    degree,
                    class: bits.clone(),
                    quanta: Quanta::Heun { m, d, index },
                    raw: [m as f64, lambda],
                    scaled: [m as f64 * hbar, lambda * hbar * hbar],
                    roots: Vec::new(),
                    heun: Some(HeunData { params: p, q: *qt, origin: 0.0, scale: 1.0 }),
                });
            }
        }
    }
    let spec = SystemSpec::new(kind, vec![a])?;
    Ok(JointSpectrum::new(spec, degree, hbar, states))
}

/// Prolate joint spectrum (m, λ); class bits (μ₁, μ₄).
pub fn prolate_spectrum(a: f64, degree: usize) -> Result<JointSpectrum> {
    rotational_spectrum(SystemKind::Prolate, a, degree)
}

/// Oblate joint spectrum (m, λ); class bits (μ₁, μ₂).
pub fn oblate_spectrum(a: f64, degree: usize) -> Result<JointSpectrum> {
    rotational_spectrum(SystemKind::Oblate, a, degree)
}

/// Lamé-type states on the S² factor with axes `f` and angular momentum ℓ.
///
/// Returns (class bits, quanta d and index, g, Heun data) where g is the
/// eigenvalue of f₁ℓ₃₄² + f₂ℓ₂₄² + f₃ℓ₂₃² restricted to that level.
fn sphere_level(f: &[f64], ell: usize) -> Result<Vec<(Vec<u8>, usize, usize, f64, HeunData)>> {
    if f.len() != 3 || f.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidProblem("axes must be three increasing values".into()));
    }
    let h = f[1] - f[0];
    let a = (f[2] - f[0]) / h;
    let l = ell as f64;
    let base = HeunParams { a, q: 0.0, alpha: -0.5 * l, beta: 0.5 * (l + 1.0), gamma: 0.5, delta: 0.5, epsilon: 0.5 };
    let mut out = Vec::new();
    for bits in bit_patterns(3) {
        let p = flipped(base, &[Pole::Zero, Pole::One, Pole::A], &bits);
        let Some(d) = p.truncation_degree() else { continue };
        let qs = eigen_real(&heun_matrix(&p, d)?)?;
        for (index, qt) in qs.iter().enumerate() {
            let g_norm = -4.0 * (qt - p.q);
            let g = h * g_norm + f[0] * l * (l + 1.0);
            out.push((bits.clone(), d, index, g, HeunData { params: p, q: *qt, origin: f[0], scale: h }));
        }
    }
    Ok(out)
}

/// Lamé joint spectrum (f, g); class bits (n mod 2, μ₂, μ₃, μ₄).
pub fn lame_spectrum(f: &[f64], degree: usize) -> Result<JointSpectrum> {
    let spec = SystemSpec::new(SystemKind::Lame, f.to_vec())?;
    let hbar = hbar_for(degree);
    let energy = (degree * (degree + 2)) as f64;
    let mut states = Vec::new();
    for ell in 0..=degree {
        let n = degree - ell;
        let fval = energy - (ell * (ell + 1)) as f64;
        for (bits, d, index, g, data) in sphere_level(f, ell)? {
            let mut class = vec![(n % 2) as u8];
            class.extend(bits);
            states.push(QuantumState {
                system: SystemKind::Lame,
                degree,
                class,
                quanta: Quanta::Lame { n, ell, d, index },
                raw: [fval, g],
                scaled: [fval * hbar * hbar, g * hbar * hbar],
                roots: Vec::new(),
                heun: Some(data),
            });
        }
    }
    Ok(JointSpectrum::new(spec, degree, hbar, states))
}

/// S² ellipsoidal spectrum (E, λ) at angular momentum ℓ; ħ = 1/(ℓ+1).
pub fn s2_ellipsoidal_spectrum(e: &[f64], ell: usize) -> Result<JointSpectrum> {
    let spec = SystemSpec::new(SystemKind::S2Ellipsoidal, e.to_vec())?;
    let hbar = hbar_for(ell);
    let energy = (ell * (ell + 1)) as f64;
    let states = sphere_level(e, ell)?
        .into_iter()
        .map(|(class, d, index, lambda, data)| QuantumState {
            system: SystemKind::S2Ellipsoidal,
            degree: ell,
            class,
            quanta: Quanta::S2Ellipsoidal { d, index },
            raw: [energy, lambda],
            scaled: [energy * hbar * hbar, lambda * hbar * hbar],
            roots: Vec::new(),
            heun: Some(data),
        })
        .collect();
    Ok(JointSpectrum::new(spec, ell, hbar, states))
}

/// Name of the Lamé function in Jacobi form for class μ = (μ₁, μ₂, μ₃).
pub fn lame_function_label(d: usize, m: usize, mu: [u8; 3]) -> String {
    let (family, deg, ord) = match mu {
        [0, 0, 0] => ("Ec", 2 * d, 2 * m),
        [1, 0, 0] => ("Ec", 2 * d + 1, 2 * m + 1),
        [0, 1, 0] => ("Es", 2 * d + 1, 2 * m + 1),
        [0, 0, 1] => ("Ec", 2 * d + 1, 2 * m),
        [1, 1, 0] => ("Es", 2 * d + 1, 2 * m + 2),
        [1, 0, 1] => ("Ec", 2 * d + 2, 2 * m + 1),
        [0, 1, 1] => ("Es", 2 * d + 2, 2 * m + 1),
        _ => ("Es", 2 * d + 3, 2 * m + 2),
    };
    format!("{family}_{{{deg}}}^{{{ord}}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_matrix() {
        let p = rotational_base(2.4, 2, 2, true);
        let t = heun_matrix(&p, 0).unwrap();
        assert_eq!(eigen_real(&t).unwrap(), vec![0.0]);
    }

    #[test]
    fn truncation_is_checked() {
        let p = rotational_base(2.4, 1, 2, true);
        assert!(matches!(heun_matrix(&p, 0), Err(Error::TruncationViolated { .. })));
    }

    #[test]
    fn labels() {
        assert_eq!(lame_function_label(3, 1, [0, 0, 0]), "Ec_{6}^{2}");
        assert_eq!(lame_function_label(0, 0, [1, 1, 1]), "Es_{3}^{2}");
    }
}
