//! Classical action variables evaluated on (scaled) quantum eigenvalues.
//!
//! Every nontrivial action is (2/π)∫ p ds over a window between turning
//! points and poles, with p² a rational function whose numerator is at most
//! quadratic. Window ends always carry square-root behaviour, so the
//! sin substitution of [`IntegrandKind::SqrtEndpointBoth`] is used
//! throughout.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::SystemKind;
use crate::numerics::quad::integrate_abscissa;
use crate::numerics::{quadratic_roots, Abscissa, IntegrandKind, QuadratureSpec};
use crate::state::{hbar_for, JointSpectrum, Quanta, QuantumState};

/// Windows shorter than this integrate to zero.
pub const MIN_WINDOW: f64 = 1e-12;
const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionTriple {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl ActionTriple {
    pub fn sum(&self) -> f64 {
        self.j1 + self.j2 + self.j3
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.j1, self.j2, self.j3]
    }
}

/// Which value of the scaled energy Ẽ = ħ²E enters the formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtildeMode {
    /// Ẽ = 1, the plotting convention.
    #[default]
    Unit,
    /// Ẽ = ħ²E, e.g. 1 − ħ² on S³.
    Exact,
}

/// p² = lead·Π(s − z_k) / (4 Π(s − e_i)^{k_i}).
struct Radicand {
    lead: f64,
    zeros: Vec<f64>,
    poles: Vec<(f64, i32)>,
}

impl Radicand {
    fn value(&self, s: Abscissa, lo: f64, hi: f64) -> f64 {
        // exact distances when a factor vanishes at a window end
        let diff = |c: f64| {
            if c == lo {
                s.from_lower
            } else if c == hi {
                -s.to_upper
            } else {
                s.x - c
            }
        };
        let num = self.zeros.iter().fold(self.lead, |acc, &z| acc * diff(z));
        let den = self.poles.iter().fold(4.0, |acc, &(e, k)| acc * diff(e).powi(k));
        num / den
    }

    /// (2/π)∫_lo^hi p ds; zero for windows shorter than [`MIN_WINDOW`].
    fn action(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(hi - lo > MIN_WINDOW) {
            return Ok(0.0);
        }
        let mid = 0.5 * (lo + hi);
        let probe = self.value(Abscissa { x: mid, from_lower: mid - lo, to_upper: hi - mid }, lo, hi);
        if probe < 0.0 {
            return Err(Error::OutsideImage);
        }
        let spec = QuadratureSpec::new(lo, hi, IntegrandKind::SqrtEndpointBoth, QUAD_TOL)?;
        let v = integrate_abscissa(&spec, |s| self.value(s, lo, hi).max(0.0).sqrt())?;
        Ok(FRAC_2_PI * v)
    }
}

/// Real roots of A s² + B s + C with A ≤ 0, ascending; a vanishing numerator
/// has no roots and a linear one a single root.
fn turning_points(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    if a == 0.0 && b == 0.0 {
        return Ok(Vec::new());
    }
    if a == 0.0 {
        return Ok(vec![-c / b]);
    }
    let (r1, r2) = quadratic_roots(a, b, c).ok_or(Error::OutsideImage)?;
    Ok(vec![r1, r2])
}

fn check_etilde(etilde: f64) -> Result<()> {
    if !(etilde >= 0.0) || !etilde.is_finite() {
        return Err(Error::InvalidProblem(format!("scaled energy {etilde} must be nonnegative")));
    }
    Ok(())
}

fn lead_for(roots: &[f64], a: f64, b: f64) -> f64 {
    if roots.len() == 2 {
        a
    } else {
        b
    }
}

/// Ellipsoidal actions; R₁ ≤ R₂ are the roots of −Ẽz² + λ₁z − λ₂.
pub fn actions_ellipsoidal(e: [f64; 4], etilde: f64, lambda1: f64, lambda2: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let zeros = turning_points(-etilde, lambda1, -lambda2)?;
    let rad = Radicand {
        lead: lead_for(&zeros, -etilde, lambda1),
        zeros: zeros.clone(),
        poles: e.iter().map(|&x| (x, 1)).collect(),
    };
    if zeros.is_empty() && lambda2 == 0.0 {
        return Ok(ActionTriple { j1: 0.0, j2: 0.0, j3: 0.0 });
    }
    let (r1, r2) = match zeros.as_slice() {
        [r] => (*r, f64::INFINITY),
        [r1, r2] => (*r1, *r2),
        _ => return Err(Error::OutsideImage),
    };
    Ok(ActionTriple {
        j1: rad.action(e[0], r1.min(e[1]))?,
        j2: rad.action(r1.max(e[1]), r2.min(e[2]))?,
        j3: rad.action(r2.max(e[2]), e[3])?,
    })
}

/// Prolate actions; J₂ = |m| and the windows are split by the double pole
/// at s = 1.
pub fn actions_prolate(a: f64, etilde: f64, m: f64, lambda: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let m2 = m * m;
    let b = lambda + etilde + (a - 1.0) * m2;
    let zeros = turning_points(-etilde, b, -lambda)?;
    let (r1, r2) = match zeros.as_slice() {
        [] => (f64::INFINITY, f64::INFINITY),
        [r] => (*r, f64::INFINITY),
        [r1, r2] => (*r1, *r2),
        _ => unreachable!(),
    };
    if m == 0.0 && etilde > 0.0 {
        // numerator = −(s − 1)(Ẽs − λ): cancel one power of the pole at 1
        let r = lambda / etilde;
        let rad = Radicand { lead: -etilde, zeros: vec![r], poles: vec![(0.0, 1), (1.0, 1), (a, 1)] };
        return Ok(ActionTriple { j1: rad.action(0.0, r.min(1.0))?, j2: 0.0, j3: rad.action(r.max(1.0), a)? });
    }
    let rad = Radicand { lead: lead_for(&zeros, -etilde, b), zeros, poles: vec![(0.0, 1), (1.0, 2), (a, 1)] };
    Ok(ActionTriple { j1: rad.action(0.0, r1.min(1.0))?, j2: m.abs(), j3: rad.action(r2.max(1.0), a)? })
}

/// Oblate actions; J₃ = |m|. The oblate spectral parameter λ plays the role
/// of g in the momentum map.
pub fn actions_oblate(a: f64, etilde: f64, m: f64, g: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let m2 = m * m;
    let b = etilde * a + g - (a - 1.0) * m2;
    let zeros = turning_points(-etilde, b, -a * g)?;
    let (r1, r2) = match zeros.as_slice() {
        [] => (f64::INFINITY, f64::INFINITY),
        [r] => (*r, f64::INFINITY),
        [r1, r2] => (*r1, *r2),
        _ => unreachable!(),
    };
    if m == 0.0 && etilde > 0.0 {
        // numerator = −(s − a)(Ẽs − g)
        let r = g / etilde;
        let rad = Radicand { lead: -etilde, zeros: vec![r], poles: vec![(0.0, 1), (1.0, 1), (a, 1)] };
        return Ok(ActionTriple { j1: rad.action(0.0, r.min(1.0))?, j2: rad.action(r.max(1.0), a)?, j3: 0.0 });
    }
    let rad = Radicand { lead: lead_for(&zeros, -etilde, b), zeros, poles: vec![(0.0, 1), (1.0, 1), (a, 2)] };
    Ok(ActionTriple { j1: rad.action(0.0, r1.min(1.0))?, j2: rad.action(r1.max(1.0), r2.min(a))?, j3: m.abs() })
}

/// Lamé actions: J₁ in closed form, J₂ and J₃ split at r₂ = g/(Ẽ − f).
pub fn actions_lame(fp: [f64; 3], etilde: f64, f: f64, g: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let rest = etilde - f;
    if rest < -1e-12 * etilde.max(1.0) {
        return Err(Error::OutsideImage);
    }
    let rest = rest.max(0.0);
    let j1 = etilde.sqrt() - rest.sqrt();
    if rest == 0.0 && g == 0.0 {
        return Ok(ActionTriple { j1, j2: 0.0, j3: 0.0 });
    }
    let r2 = if rest == 0.0 { f64::INFINITY } else { g / rest };
    let rad = if rest == 0.0 {
        Radicand { lead: g, zeros: Vec::new(), poles: fp.iter().map(|&x| (x, 1)).collect() }
    } else {
        Radicand { lead: -rest, zeros: vec![r2], poles: fp.iter().map(|&x| (x, 1)).collect() }
    };
    Ok(ActionTriple { j1, j2: rad.action(fp[0], r2.min(fp[1]))?, j3: rad.action(fp[1].max(r2), fp[2])? })
}

/// Spherical actions in closed form; f is the eigenvalue of ℓ₁₂²+ℓ₁₃²+ℓ₁₄².
pub fn actions_spherical(etilde: f64, f: f64, m: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let rest = (etilde - f).max(0.0).sqrt();
    if rest < m.abs() - 1e-12 {
        return Err(Error::OutsideImage);
    }
    Ok(ActionTriple { j1: etilde.sqrt() - rest, j2: rest - m.abs(), j3: m.abs() })
}

/// Cylindrical actions; J₂ follows from the sum rule.
pub fn actions_cylindrical(etilde: f64, m1: f64, m2: f64) -> Result<ActionTriple> {
    check_etilde(etilde)?;
    let j2 = etilde.sqrt() - m1.abs() - m2.abs();
    if j2 < -1e-12 {
        return Err(Error::OutsideImage);
    }
    Ok(ActionTriple { j1: m1.abs(), j2: j2.max(0.0), j3: m2.abs() })
}

/// S² ellipsoidal actions, split at r = λ/Ẽ.
pub fn actions_s2_ellipsoidal(e: [f64; 3], etilde: f64, lambda: f64) -> Result<[f64; 2]> {
    check_etilde(etilde)?;
    if etilde == 0.0 {
        return Ok([0.0, 0.0]);
    }
    let r = lambda / etilde;
    let rad = Radicand { lead: -etilde, zeros: vec![r], poles: e.iter().map(|&x| (x, 1)).collect() };
    Ok([rad.action(e[0], r.min(e[1]))?, rad.action(r.max(e[1]), e[2])?])
}

/// S² spherical actions (√Ẽ − |m|, |m|).
pub fn actions_s2_spherical(etilde: f64, m: f64) -> Result<[f64; 2]> {
    check_etilde(etilde)?;
    let j1 = etilde.sqrt() - m.abs();
    if j1 < -1e-12 {
        return Err(Error::OutsideImage);
    }
    Ok([j1.max(0.0), m.abs()])
}

/// Ẽ for a state under `mode`.
pub fn etilde_for(state: &QuantumState, mode: EtildeMode) -> f64 {
    match mode {
        EtildeMode::Unit => 1.0,
        EtildeMode::Exact => {
            let h = hbar_for(state.degree);
            state.energy() * h * h
        }
    }
}

/// Actions of one state from its scaled eigenvalues; three values on S³,
/// two on S².
pub fn state_actions(state: &QuantumState, params: &[f64], mode: EtildeMode) -> Result<Vec<f64>> {
    let et = etilde_for(state, mode);
    let [x, y] = state.scaled;
    let p = |i: usize| params.get(i).copied().ok_or_else(|| Error::InvalidProblem("missing parameters".into()));
    let triple = match state.system {
        SystemKind::Ellipsoidal => actions_ellipsoidal([p(0)?, p(1)?, p(2)?, p(3)?], et, x, y)?,
        SystemKind::Prolate => actions_prolate(p(0)?, et, x, y)?,
        SystemKind::Oblate => actions_oblate(p(0)?, et, x, y)?,
        SystemKind::Lame => actions_lame([p(0)?, p(1)?, p(2)?], et, x, y)?,
        SystemKind::Spherical23 => actions_spherical(et, y, x)?,
        SystemKind::Cylindrical => actions_cylindrical(et, x, y)?,
        SystemKind::S2Ellipsoidal => return Ok(actions_s2_ellipsoidal([p(0)?, p(1)?, p(2)?], et, y)?.to_vec()),
        SystemKind::S2Spherical => return Ok(actions_s2_spherical(et, x)?.to_vec()),
    };
    Ok(triple.to_array().to_vec())
}

/// Actions of every state of a spectrum, in state order.
pub fn spectrum_actions(spectrum: &JointSpectrum, mode: EtildeMode) -> Vec<Result<Vec<f64>>> {
    spectrum.states.iter().map(|s| state_actions(s, &spectrum.system.params, mode)).collect()
}

/// Signed m of a prolate, oblate or spherical state.
pub fn signed_m(state: &QuantumState) -> Option<i64> {
    match state.quanta {
        Quanta::Heun { m, .. } | Quanta::Spherical { m, .. } | Quanta::S2Spherical { m, .. } => Some(m),
        _ => None,
    }
}

/// Image of the prolate focus-focus value (m, λ) = (0, Ẽ) at Ẽ = 1.
pub fn focus_focus_image(a: f64) -> ActionTriple {
    let t = (1.0 / a.sqrt()).asin();
    ActionTriple { j1: FRAC_2_PI * t, j2: 0.0, j3: FRAC_2_PI * (std::f64::consts::FRAC_PI_2 - t) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let s = actions_spherical(1.0, 0.0, 0.0).unwrap();
        assert_eq!(s.to_array(), [0.0, 1.0, 0.0]);
        let c = actions_cylindrical(1.0, 0.0, 0.0).unwrap();
        assert_eq!(c.to_array(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn prolate_focus_focus() {
        let a = 2.4;
        let j = actions_prolate(a, 1.0, 0.0, 1.0).unwrap();
        let want = focus_focus_image(a);
        assert!((j.j1 - want.j1).abs() < 1e-10);
        assert!((j.j3 - want.j3).abs() < 1e-10);
    }

    #[test]
    fn ellipsoidal_level_two() {
        let spec = crate::SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap();
        let sp = crate::spectrum(&spec, 2, 1).unwrap();
        let et = 1.0 - sp.hbar * sp.hbar;
        for a in spectrum_actions(&sp, EtildeMode::Exact) {
            assert!((a.unwrap().iter().sum::<f64>() - et.sqrt()).abs() < 1e-10);
        }
    }
}
