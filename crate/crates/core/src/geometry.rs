//! Coordinate systems on S³ and S², forward and inverse transforms, and the
//! degenerations that connect the ellipsoidal system to the others.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadratic_roots;

const BOX_TOL: f64 = 1e-12;
const STRATUM_TOL: f64 = 1e-14;
/// Smallest admissible gap between neighbouring semi-axes.
pub const MIN_POLE_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Ellipsoidal,
    Prolate,
    Oblate,
    Lame,
    Spherical23,
    Cylindrical,
    S2Ellipsoidal,
    S2Spherical,
}

impl SystemKind {
    pub const ALL: [SystemKind; 8] = [
        SystemKind::Ellipsoidal,
        SystemKind::Prolate,
        SystemKind::Oblate,
        SystemKind::Lame,
        SystemKind::Spherical23,
        SystemKind::Cylindrical,
        SystemKind::S2Ellipsoidal,
        SystemKind::S2Spherical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Ellipsoidal => "ellipsoidal",
            SystemKind::Prolate => "prolate",
            SystemKind::Oblate => "oblate",
            SystemKind::Lame => "lame",
            SystemKind::Spherical23 => "spherical23",
            SystemKind::Cylindrical => "cylindrical",
            SystemKind::S2Ellipsoidal => "s2-ellipsoidal",
            SystemKind::S2Spherical => "s2-spherical",
        }
    }

    /// Number of Cartesian variables of the ambient space.
    pub fn nvars(self) -> usize {
        match self {
            SystemKind::S2Ellipsoidal | SystemKind::S2Spherical => 3,
            _ => 4,
        }
    }

    /// Number of separated coordinates.
    pub fn dim(self) -> usize {
        self.nvars() - 1
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        SystemKind::ALL
            .into_iter()
            .find(|k| k.name() == key || (key == "spherical" && *k == SystemKind::Spherical23))
            .ok_or_else(|| Error::InvalidProblem(format!("unknown system kind {s:?}")))
    }
}

/// A coordinate system together with its shape parameters.
///
/// `params` holds e = (e₁..e₄) for ellipsoidal, `[a]` for prolate and oblate,
/// f = (f₁,f₂,f₃) for Lamé, e = (e₁,e₂,e₃) for the S² ellipsoidal system and
/// nothing otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub params: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: SystemKind,
    #[serde(default)]
    params: Vec<f64>,
}

impl TryFrom<RawSpec> for SystemSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        SystemSpec::new(r.kind, r.params)
    }
}

impl From<SystemSpec> for RawSpec {
    fn from(s: SystemSpec) -> Self {
        RawSpec { kind: s.kind, params: s.params }
    }
}

impl SystemSpec {
    pub fn new(kind: SystemKind, params: Vec<f64>) -> Result<Self> {
        let need = match kind {
            SystemKind::Ellipsoidal => 4,
            SystemKind::Prolate | SystemKind::Oblate => 1,
            SystemKind::Lame | SystemKind::S2Ellipsoidal => 3,
            _ => 0,
        };
        if params.len() != need {
            return Err(Error::InvalidProblem(format!("{kind} takes {need} parameters, got {}", params.len())));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidProblem("non-finite parameter".into()));
        }
        match kind {
            SystemKind::Prolate | SystemKind::Oblate if !(params[0] > 1.0) => {
                return Err(Error::InvalidProblem(format!("a = {} must exceed 1", params[0])));
            }
            SystemKind::Ellipsoidal | SystemKind::Lame | SystemKind::S2Ellipsoidal
                if params.windows(2).any(|w| !(w[1] > w[0])) => {
                    return Err(Error::InvalidProblem("semi-axes must be strictly increasing".into()));
                }
            _ => {}
        }
        Ok(Self { kind, params })
    }

    pub fn ellipsoidal(e: [f64; 4]) -> Result<Self> {
        Self::new(SystemKind::Ellipsoidal, e.to_vec())
    }

    pub fn prolate(a: f64) -> Result<Self> {
        Self::new(SystemKind::Prolate, vec![a])
    }

    pub fn oblate(a: f64) -> Result<Self> {
        Self::new(SystemKind::Oblate, vec![a])
    }

    pub fn lame(f: [f64; 3]) -> Result<Self> {
        Self::new(SystemKind::Lame, f.to_vec())
    }

    pub fn s2_ellipsoidal(e: [f64; 3]) -> Result<Self> {
        Self::new(SystemKind::S2Ellipsoidal, e.to_vec())
    }

    pub fn plain(kind: SystemKind) -> Result<Self> {
        Self::new(kind, Vec::new())
    }

    /// The shape parameter `a` of the prolate and oblate systems.
    pub fn a(&self) -> Result<f64> {
        match self.kind {
            SystemKind::Prolate | SystemKind::Oblate => Ok(self.params[0]),
            k => Err(Error::InvalidProblem(format!("{k} has no parameter a"))),
        }
    }

    /// Poles of the underlying separated equation, ascending.
    pub fn poles(&self) -> Vec<f64> {
        match self.kind {
            SystemKind::Ellipsoidal | SystemKind::Lame | SystemKind::S2Ellipsoidal => self.params.clone(),
            SystemKind::Prolate => vec![0.0, 1.0, 1.0, self.params[0]],
            SystemKind::Oblate => vec![0.0, 1.0, self.params[0], self.params[0]],
            _ => Vec::new(),
        }
    }

    /// Admissible interval of each separated coordinate.
    pub fn coordinate_box(&self) -> Vec<(f64, f64)> {
        let p = &self.params;
        match self.kind {
            SystemKind::Ellipsoidal | SystemKind::S2Ellipsoidal => p.windows(2).map(|w| (w[0], w[1])).collect(),
            SystemKind::Prolate => vec![(0.0, 1.0), (0.0, 1.0), (1.0, p[0])],
            SystemKind::Oblate => vec![(0.0, 1.0), (1.0, p[0]), (0.0, 1.0)],
            SystemKind::Lame => vec![(0.0, 1.0), (p[0], p[1]), (p[1], p[2])],
            SystemKind::Spherical23 | SystemKind::Cylindrical => vec![(0.0, 1.0); 3],
            SystemKind::S2Spherical => vec![(0.0, 1.0); 2],
        }
    }
}

/// x_i² = Π_j (s_j − e_i) / Π_{k≠i} (e_k − e_i), the confocal quadric formula.
fn confocal_squares(e: &[f64], s: &[f64]) -> Vec<f64> {
    (0..e.len())
        .map(|i| {
            let num: f64 = s.iter().map(|sj| sj - e[i]).product();
            let den: f64 = (0..e.len()).filter(|&k| k != i).map(|k| e[k] - e[i]).product();
            num / den
        })
        .collect()
}

/// Roots of Σ x_i²/(s − e_i) = 0, one per gap of `e`.
fn confocal_roots(e: &[f64], x2: &[f64]) -> Vec<f64> {
    let n = e.len();
    // numerator Σ_i x_i² Π_{k≠i} (s − e_k), coefficients constant term first
    let mut num = vec![0.0; n];
    for i in 0..n {
        let mut c = vec![1.0];
        for (k, ek) in e.iter().enumerate() {
            if k == i {
                continue;
            }
            let mut nc = vec![0.0; c.len() + 1];
            for (j, v) in c.iter().enumerate() {
                nc[j + 1] += v;
                nc[j] -= ek * v;
            }
            c = nc;
        }
        for (j, v) in c.iter().enumerate() {
            num[j] += x2[i] * v;
        }
    }
    let deg = n - 1;
    let lead = num[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -num[deg - 1 - j] / lead;
        if j + 1 < deg {
            comp[(j + 1, j)] = 1.0;
        }
    }
    let mut roots: Vec<f64> = comp.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // polish against the rational function, which is monotone on each gap
    let f = |s: f64| -> f64 { x2.iter().zip(e).map(|(x, ei)| x / (s - ei)).sum() };
    roots
        .iter()
        .enumerate()
        .map(|(j, &r0)| {
            let (lo, hi) = (e[j], e[j + 1]);
            let mut r = r0.clamp(lo, hi);
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let v = f(r);
                if v == 0.0 || !v.is_finite() {
                    break;
                }
                // f decreases from +inf to -inf on each gap
                if v > 0.0 { a = r } else { b = r }
                let d: f64 = x2.iter().zip(e).map(|(x, ei)| -x / (r - ei).powi(2)).sum();
                let nr = r - v / d;
                r = if nr > a && nr < b { nr } else { 0.5 * (a + b) };
                if (b - a).abs() < 4.0 * f64::EPSILON * r.abs().max(1.0) {
                    break;
                }
            }
            r
        })
        .collect()
}

fn check_box(spec: &SystemSpec, s: &[f64]) -> Result<()> {
    let bx = spec.coordinate_box();
    if s.len() != bx.len() {
        return Err(Error::OutOfBox(format!("expected {} coordinates, got {}", bx.len(), s.len())));
    }
    for (k, (sk, (lo, hi))) in s.iter().zip(&bx).enumerate() {
        let tol = BOX_TOL * lo.abs().max(hi.abs()).max(1.0);
        if !(*sk >= lo - tol && *sk <= hi + tol) {
            return Err(Error::OutOfBox(format!("s{} = {sk} outside [{lo}, {hi}]", k + 1)));
        }
    }
    Ok(())
}

/// Squares x_i² of the Cartesian point with separated coordinates `s`.
pub fn cartesian_squares(spec: &SystemSpec, s: &[f64]) -> Result<Vec<f64>> {
    check_box(spec, s)?;
    let sq = match spec.kind {
        SystemKind::Ellipsoidal | SystemKind::S2Ellipsoidal => confocal_squares(&spec.params, s),
        SystemKind::Prolate => {
            let a = spec.params[0];
            let (s1, s2, s3) = (s[0], s[1], s[2]);
            let rho = (1.0 - s1) * (s3 - 1.0) / (a - 1.0);
            vec![s1 * s3 / a, rho * s2, rho * (1.0 - s2), (a - s1) * (a - s3) / (a * (a - 1.0))]
        }
        SystemKind::Oblate => {
            let a = spec.params[0];
            let (s1, s2, s3) = (s[0], s[1], s[2]);
            let rho = (a - s1) * (a - s2) / (a * (a - 1.0));
            vec![s1 * s2 / a, (1.0 - s1) * (s2 - 1.0) / (a - 1.0), rho * s3, rho * (1.0 - s3)]
        }
        SystemKind::Lame => {
            let rest = confocal_squares(&spec.params, &s[1..]);
            let mut v = vec![s[0]];
            v.extend(rest.iter().map(|r| r * (1.0 - s[0])));
            v
        }
        SystemKind::Spherical23 => {
            let (s1, s2, s3) = (s[0], s[1], s[2]);
            vec![s1, (1.0 - s1) * s2, (1.0 - s1) * (1.0 - s2) * s3, (1.0 - s1) * (1.0 - s2) * (1.0 - s3)]
        }
        SystemKind::Cylindrical => {
            let (s1, s2, s3) = (s[0], s[1], s[2]);
            vec![s1 * s2, (1.0 - s1) * s2, s3 * (1.0 - s2), (1.0 - s3) * (1.0 - s2)]
        }
        SystemKind::S2Spherical => {
            let (s1, s2) = (s[0], s[1]);
            vec![s1, (1.0 - s1) * s2, (1.0 - s1) * (1.0 - s2)]
        }
    };
    Ok(sq.into_iter().map(|v| v.max(0.0)).collect())
}

/// Point on the sphere with separated coordinates `s` in the orthant `signs`.
pub fn to_cartesian(spec: &SystemSpec, s: &[f64], signs: &[f64]) -> Result<Vec<f64>> {
    if signs.len() != spec.kind.nvars() || signs.iter().any(|v| v.abs() != 1.0) {
        return Err(Error::InvalidProblem("signs must be one ±1 per Cartesian axis".into()));
    }
    let sq = cartesian_squares(spec, s)?;
    Ok(sq.iter().zip(signs).map(|(v, sg)| sg * v.sqrt()).collect())
}

/// Separated coordinates of a sphere point off the coordinate-singular strata.
pub fn from_cartesian(spec: &SystemSpec, p: &[f64]) -> Result<Vec<f64>> {
    let n = spec.kind.nvars();
    if p.len() != n {
        return Err(Error::InvalidProblem(format!("expected {n} coordinates")));
    }
    let norm: f64 = p.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProblem(format!("point not on the unit sphere (|x|^2 = {norm})")));
    }
    if p.iter().any(|x| x.abs() < STRATUM_TOL) {
        return Err(Error::SingularStratum);
    }
    let x2: Vec<f64> = p.iter().map(|x| x * x).collect();
    let s = match spec.kind {
        SystemKind::Ellipsoidal | SystemKind::S2Ellipsoidal => confocal_roots(&spec.params, &x2),
        SystemKind::Prolate => {
            let a = spec.params[0];
            let sum = a + x2[0] - (a - 1.0) * x2[3];
            let (s1, s3) = quadratic_roots(1.0, -sum, a * x2[0]).ok_or(Error::SingularStratum)?;
            let rho = x2[1] + x2[2];
            vec![s1, x2[1] / rho, s3]
        }
        SystemKind::Oblate => {
            let a = spec.params[0];
            let sum = 1.0 + a * x2[0] + (a - 1.0) * x2[1];
            let (s1, s2) = quadratic_roots(1.0, -sum, a * x2[0]).ok_or(Error::SingularStratum)?;
            let rho = x2[2] + x2[3];
            vec![s1, s2, x2[2] / rho]
        }
        SystemKind::Lame => {
            let rest = 1.0 - x2[0];
            let inner: Vec<f64> = x2[1..].iter().map(|v| v / rest).collect();
            let mut v = vec![x2[0]];
            v.extend(confocal_roots(&spec.params, &inner));
            v
        }
        SystemKind::Spherical23 => {
            let s1 = x2[0];
            let s2 = x2[1] / (x2[1] + x2[2] + x2[3]);
            let s3 = x2[2] / (x2[2] + x2[3]);
            vec![s1, s2, s3]
        }
        SystemKind::Cylindrical => {
            let s2 = x2[0] + x2[1];
            vec![x2[0] / s2, s2, x2[2] / (x2[2] + x2[3])]
        }
        SystemKind::S2Spherical => vec![x2[0], x2[1] / (x2[1] + x2[2])],
    };
    let bx = spec.coordinate_box();
    Ok(s.iter().zip(&bx).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect())
}

/// Ellipsoidal system whose spectrum tends to that of `target` as ε → 0.
///
/// `base` is either an ellipsoidal spec, whose semi-axes are reused, or a spec
/// of the target kind itself.
pub fn degenerate(base: &SystemSpec, target: SystemKind, eps: f64) -> Result<SystemSpec> {
    if !(eps > 0.0) {
        return Err(Error::InvalidProblem("ε must be positive".into()));
    }
    let e: [f64; 4] = match (base.kind, target) {
        (SystemKind::Ellipsoidal, SystemKind::Prolate) => {
            let e = &base.params;
            [e[0], e[1], e[1] + eps, e[3]]
        }
        (SystemKind::Ellipsoidal, SystemKind::Oblate) => {
            let e = &base.params;
            [e[0], e[1], e[2], e[2] + eps]
        }
        (SystemKind::Ellipsoidal, SystemKind::Lame) => {
            let e = &base.params;
            [-1.0 / eps, e[1], e[2], e[3]]
        }
        (SystemKind::Prolate, SystemKind::Prolate) => [0.0, 1.0, 1.0 + eps, base.params[0]],
        (SystemKind::Oblate, SystemKind::Oblate) => [0.0, 1.0, base.params[0], base.params[0] + eps],
        (SystemKind::Lame, SystemKind::Lame) => {
            let f = &base.params;
            [-1.0 / eps, f[0], f[1], f[2]]
        }
        _ => return Err(Error::UnreachableTarget(target.to_string())),
    };
    if e.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::UnreachableTarget(format!("{target} with ε = {eps}")));
    }
    SystemSpec::ellipsoidal(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylindrical_midpoint() {
        let spec = SystemSpec::plain(SystemKind::Cylindrical).unwrap();
        let x = cartesian_squares(&spec, &[0.5, 0.5, 0.5]).unwrap();
        for v in x {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn ellipsoidal_corner() {
        let spec = SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap();
        let x = cartesian_squares(&spec, &[1.0, 2.0, 5.0]).unwrap();
        assert_eq!(x.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count(), 1);
    }

    #[test]
    fn spec_json_shape() {
        let s: SystemSpec = serde_json::from_str(r#"{"kind":"prolate","params":[2.4]}"#).unwrap();
        assert_eq!(s, SystemSpec::prolate(2.4).unwrap());
        assert!(serde_json::from_str::<SystemSpec>(r#"{"kind":"prolate","params":[0.5]}"#).is_err());
    }
}
