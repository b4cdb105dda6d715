//! Brute-force check of the separated spectra: the commuting operators act
//! as matrices on degree-D polynomials, are restricted to the harmonic
//! subspace and diagonalised jointly.
//!
//! Coefficients are scaled by √(α!) (the Fischer inner product), in which
//! every ℓ_ij is skew-symmetric, so the restricted operators are symmetric.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{SystemKind, SystemSpec};
use crate::poly::{monomials, Exponent};

/// Largest degree accepted by the operator builders.
pub const ORACLE_MAX_DEGREE: usize = 12;
const NULL_TOL: f64 = 1e-9;
const JOINT_TOL: f64 = 1e-8;
const MAX_T_DRAWS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub degree: usize,
    pub basis: Vec<Exponent>,
    /// Action on raw (unscaled) coefficient vectors.
    pub entries: DMatrix<f64>,
}

fn index_of(basis: &[Exponent]) -> std::collections::HashMap<Exponent, usize> {
    basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect()
}

/// x_i ∂_j − x_j ∂_i on the degree-D monomials.
pub fn rotation_generator(nvars: usize, degree: usize, i: usize, j: usize) -> DMatrix<f64> {
    let basis = monomials(nvars, degree as u32);
    let idx = index_of(&basis);
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (col, e) in basis.iter().enumerate() {
        if e[j] > 0 {
            let mut t = e.clone();
            t[j] -= 1;
            t[i] += 1;
            m[(idx[&t], col)] += e[j] as f64;
        }
        if e[i] > 0 {
            let mut t = e.clone();
            t[i] -= 1;
            t[j] += 1;
            m[(idx[&t], col)] -= e[i] as f64;
        }
    }
    m
}

/// ℓ̂_ij² = −(x_i ∂_j − x_j ∂_i)², nonnegative on harmonics.
pub fn ang_mom_squared(nvars: usize, degree: usize, i: usize, j: usize) -> DMatrix<f64> {
    let l = rotation_generator(nvars, degree, i, j);
    -(&l * &l)
}

/// Weighted sums Σ w ℓ̂_ij² of the two integrals, as (i, j, weight) lists.
fn integral_terms(spec: &SystemSpec, which: Which) -> Vec<(usize, usize, f64)> {
    let p = &spec.params;
    let first = which == Which::First;
    match spec.kind {
        SystemKind::Ellipsoidal => {
            let mut out = Vec::new();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let mut rest = (0..4).filter(|&k| k != i && k != j);
                    let (k, m) = (rest.next().unwrap(), rest.next().unwrap());
                    let w = if first { p[k] + p[m] } else { p[k] * p[m] };
                    out.push((i, j, w));
                }
            }
            out
        }
        SystemKind::Prolate => {
            if first {
                vec![(1, 2, 1.0)]
            } else {
                vec![(0, 1, p[0]), (0, 2, p[0]), (0, 3, 1.0)]
            }
        }
        SystemKind::Oblate => {
            if first {
                vec![(2, 3, 1.0)]
            } else {
                vec![(0, 1, p[0]), (0, 2, 1.0), (0, 3, 1.0)]
            }
        }
        SystemKind::Lame => {
            if first {
                vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]
            } else {
                vec![(2, 3, p[0]), (1, 3, p[1]), (1, 2, p[2])]
            }
        }
        SystemKind::Spherical23 => {
            if first {
                vec![(2, 3, 1.0)]
            } else {
                vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]
            }
        }
        SystemKind::Cylindrical => {
            if first {
                vec![(0, 1, 1.0)]
            } else {
                vec![(2, 3, 1.0)]
            }
        }
        SystemKind::S2Ellipsoidal => {
            if first {
                vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
            } else {
                vec![(0, 1, p[2]), (0, 2, p[1]), (1, 2, p[0])]
            }
        }
        SystemKind::S2Spherical => {
            if first {
                vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
            } else {
                vec![(1, 2, 1.0)]
            }
        }
    }
}

pub fn build_operator(spec: &SystemSpec, which: Which, degree: usize) -> Result<OperatorMatrix> {
    if degree > ORACLE_MAX_DEGREE {
        return Err(Error::DimensionGuard { degree, max: ORACLE_MAX_DEGREE });
    }
    let nvars = spec.kind.nvars();
    let basis = monomials(nvars, degree as u32);
    let n = basis.len();
    let mut entries = DMatrix::zeros(n, n);
    for (i, j, w) in integral_terms(spec, which) {
        entries += ang_mom_squared(nvars, degree, i, j) * w;
    }
    Ok(OperatorMatrix { degree, basis, entries })
}

/// √(α!) for every basis exponent.
fn fischer_scale(basis: &[Exponent]) -> Vec<f64> {
    basis
        .iter()
        .map(|e| e.iter().map(|&k| (1..=k).map(|v| v as f64).product::<f64>()).product::<f64>().sqrt())
        .collect()
}

/// Euclidean Laplacian from degree D to degree D−2 on raw coefficients.
fn laplacian_map(nvars: usize, degree: usize) -> DMatrix<f64> {
    let basis = monomials(nvars, degree as u32);
    if degree < 2 {
        return DMatrix::zeros(0, basis.len());
    }
    let lower = monomials(nvars, degree as u32 - 2);
    let idx = index_of(&lower);
    let mut m = DMatrix::zeros(lower.len(), basis.len());
    for (col, e) in basis.iter().enumerate() {
        for i in 0..nvars {
            if e[i] >= 2 {
                let mut t = e.clone();
                t[i] -= 2;
                m[(idx[&t], col)] += (e[i] * (e[i] - 1)) as f64;
            }
        }
    }
    m
}

/// Orthonormal basis (in Fischer coordinates) of the degree-D harmonics.
pub fn harmonic_subspace(nvars: usize, degree: usize) -> DMatrix<f64> {
    let basis = monomials(nvars, degree as u32);
    let n = basis.len();
    if degree < 2 {
        return DMatrix::identity(n, n);
    }
    let s = fischer_scale(&basis);
    let mut k = laplacian_map(nvars, degree);
    for (c, sc) in s.iter().enumerate() {
        k.column_mut(c).scale_mut(1.0 / sc);
    }
    let gram = k.transpose() * &k;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let cols: Vec<DVector<f64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() < NULL_TOL * top)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}

/// Qᵀ S A S⁻¹ Q, symmetrised.
fn restrict(op: &OperatorMatrix, q: &DMatrix<f64>) -> DMatrix<f64> {
    let s = fischer_scale(&op.basis);
    let mut a = op.entries.clone();
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            a[(r, c)] *= s[r] / s[c];
        }
    }
    let m = q.transpose() * a * q;
    (&m + m.transpose()) * 0.5
}

/// Restricted first and second integrals on the harmonic subspace.
pub fn restricted_pair(spec: &SystemSpec, degree: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let q = harmonic_subspace(spec.kind.nvars(), degree);
    let a = build_operator(spec, Which::First, degree)?;
    let b = build_operator(spec, Which::Second, degree)?;
    Ok((restrict(&a, &q), restrict(&b, &q)))
}

/// Joint eigenvalue pairs of the two integrals at degree D, sorted.
pub fn joint_spectrum_oracle(spec: &SystemSpec, degree: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    let (a, b) = restricted_pair(spec, degree)?;
    let n = a.nrows();
    let scale = a.norm().max(b.norm()).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_T_DRAWS {
        let t: f64 = rng.gen_range(0.5..2.0);
        let eig = SymmetricEigen::new(&a + &b * t);
        let mut pairs = Vec::with_capacity(n);
        let mut ok = true;
        for k in 0..n {
            let v = eig.eigenvectors.column(k);
            let av = &a * v;
            let bv = &b * v;
            let ra = v.dot(&av);
            let rb = v.dot(&bv);
            let res = (av - v * ra).norm().max((bv - v * rb).norm());
            if res > JOINT_TOL * scale {
                ok = false;
                break;
            }
            pairs.push([ra, rb]);
        }
        if ok {
            pairs.sort_by(|p, q| p.partial_cmp(q).unwrap());
            return Ok(pairs);
        }
    }
    Err(Error::DegenerateT)
}

/// Affine map p ↦ M p + o on eigenvalue pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub matrix: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { matrix: [[1.0, 0.0], [0.0, 1.0]], offset: [0.0, 0.0] };

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let m = self.matrix;
        [m[0][0] * p[0] + m[0][1] * p[1] + self.offset[0], m[1][0] * p[0] + m[1][1] * p[1] + self.offset[1]]
    }

    pub fn distance_from_identity(&self) -> f64 {
        let m = self.matrix;
        ((m[0][0] - 1.0).powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + (m[1][1] - 1.0).powi(2)).sqrt()
            + self.offset[0].hypot(self.offset[1])
    }

    /// Exact map sending the three `src` points to `dst`.
    fn through(src: [[f64; 2]; 3], dst: [[f64; 2]; 3]) -> Option<AffineMap> {
        let mut a = DMatrix::zeros(3, 3);
        for r in 0..3 {
            a[(r, 0)] = src[r][0];
            a[(r, 1)] = src[r][1];
            a[(r, 2)] = 1.0;
        }
        let lu = a.lu();
        let mut rows = [[0.0; 3]; 2];
        for (c, row) in rows.iter_mut().enumerate() {
            let rhs = DVector::from_vec(dst.iter().map(|p| p[c]).collect());
            let x = lu.solve(&rhs)?;
            *row = [x[0], x[1], x[2]];
        }
        Some(AffineMap { matrix: [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]], offset: [rows[0][2], rows[1][2]] })
    }

    /// Least-squares map over matched pairs.
    fn fit(src: &[[f64; 2]], dst: &[[f64; 2]]) -> Option<AffineMap> {
        let n = src.len();
        let mut a = DMatrix::zeros(n, 3);
        for (r, p) in src.iter().enumerate() {
            a[(r, 0)] = p[0];
            a[(r, 1)] = p[1];
            a[(r, 2)] = 1.0;
        }
        let svd = a.svd(true, true);
        let mut rows = [[0.0; 3]; 2];
        for (c, row) in rows.iter_mut().enumerate() {
            let rhs = DVector::from_vec(dst.iter().map(|p| p[c]).collect());
            let x = svd.solve(&rhs, 1e-12).ok()?;
            *row = [x[0], x[1], x[2]];
        }
        Some(AffineMap { matrix: [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]], offset: [rows[0][2], rows[1][2]] })
    }
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Scale used for relative errors: max(1, largest oracle norm).
pub fn spectrum_scale(points: &[[f64; 2]]) -> f64 {
    points.iter().fold(1.0f64, |m, p| m.max(p[0].hypot(p[1])))
}

/// Globally greedy one-to-one matching; returns the assignment
/// `src index -> dst index` and the largest matched distance.
pub fn match_multisets(src: &[[f64; 2]], dst: &[[f64; 2]]) -> Option<(Vec<usize>, f64)> {
    if src.len() != dst.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(src.len() * dst.len());
    for (i, p) in src.iter().enumerate() {
        for (j, q) in dst.iter().enumerate() {
            pairs.push((dist(*p, *q), i, j));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut assign = vec![usize::MAX; src.len()];
    let mut used = vec![false; dst.len()];
    let mut left = src.len();
    let mut worst = 0.0f64;
    for (d, i, j) in pairs {
        if assign[i] == usize::MAX && !used[j] {
            assign[i] = j;
            used[j] = true;
            worst = worst.max(d);
            left -= 1;
            if left == 0 {
                break;
            }
        }
    }
    Some((assign, worst))
}

/// Largest relative deviation between `map(src)` and `dst` as multisets.
pub fn max_relative_error(map: &AffineMap, src: &[[f64; 2]], dst: &[[f64; 2]]) -> f64 {
    let mapped: Vec<[f64; 2]> = src.iter().map(|p| map.apply(*p)).collect();
    match match_multisets(&mapped, dst) {
        Some((_, worst)) => worst / spectrum_scale(dst),
        None => f64::INFINITY,
    }
}

fn dedup(points: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for p in points {
        if out.iter().all(|q| dist(*p, *q) > tol) {
            out.push(*p);
        }
    }
    out
}

fn area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
}

/// Affine map from separation pairs onto oracle pairs with unknown
/// correspondence. Among exact fits the one nearest the identity wins; the
/// winner is refined by least squares over the induced matching.
pub fn fit_calibration(sep: &[[f64; 2]], oracle: &[[f64; 2]]) -> Result<(AffineMap, f64)> {
    let scale = spectrum_scale(oracle);
    let tol = 1e-9 * scale;
    let su = dedup(sep, tol);
    let ou = dedup(oracle, tol);
    let mut best_tri = None;
    let mut best_area = 0.0;
    for i in 0..su.len() {
        for j in (i + 1)..su.len() {
            for k in (j + 1)..su.len() {
                let ar = area(su[i], su[j], su[k]);
                if ar > best_area {
                    best_area = ar;
                    best_tri = Some([su[i], su[j], su[k]]);
                }
            }
        }
    }
    let tri = best_tri.ok_or(Error::NoConsistentMap { residual: f64::INFINITY })?;
    let mut best: Option<(f64, f64, AffineMap)> = None;
    for i in 0..ou.len() {
        for j in 0..ou.len() {
            for k in 0..ou.len() {
                if i == j || j == k || i == k {
                    continue;
                }
                let Some(map) = AffineMap::through(tri, [ou[i], ou[j], ou[k]]) else { continue };
                let err = max_relative_error(&map, sep, oracle);
                let key = (err > 1e-6, map.distance_from_identity());
                let better = match &best {
                    None => true,
                    Some((e, d, _)) => {
                        let cur = (*e > 1e-6, *d);
                        !key.0 & cur.0 || (key.0 == cur.0 && if key.0 { err < *e } else { key.1 < cur.1 })
                    }
                };
                if better {
                    best = Some((err, map.distance_from_identity(), map));
                }
            }
        }
    }
    let (_, _, rough) = best.ok_or(Error::NoConsistentMap { residual: f64::INFINITY })?;
    let mapped: Vec<[f64; 2]> = sep.iter().map(|p| rough.apply(*p)).collect();
    let (assign, _) = match_multisets(&mapped, oracle).ok_or(Error::NoConsistentMap { residual: f64::INFINITY })?;
    let dst: Vec<[f64; 2]> = assign.iter().map(|&j| oracle[j]).collect();
    let refined = AffineMap::fit(sep, &dst).unwrap_or(rough);
    let residual = max_relative_error(&refined, sep, oracle);
    Ok((refined, residual))
}

/// Separation-of-variables pairs in oracle form at `degree`, pooled over
/// ℓ ≤ degree for the S² systems.
pub fn separation_pairs(spec: &SystemSpec, degree: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    let levels: Vec<usize> = if spec.kind.nvars() == 3 { (0..=degree).collect() } else { vec![degree] };
    let mut out = Vec::new();
    for l in levels {
        out.extend(crate::spectrum(spec, l, seed)?.states.iter().map(|s| s.oracle_pair()));
    }
    Ok(out)
}

/// Oracle pairs matching [`separation_pairs`].
pub fn oracle_pairs(spec: &SystemSpec, degree: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    let levels: Vec<usize> = if spec.kind.nvars() == 3 { (0..=degree).collect() } else { vec![degree] };
    let mut out = Vec::new();
    for l in levels {
        out.extend(joint_spectrum_oracle(spec, l, seed)?);
    }
    Ok(out)
}

/// Calibration map fitted at `degree` (normally 2).
pub fn calibrate(spec: &SystemSpec, degree: usize, seed: u64) -> Result<(AffineMap, f64)> {
    let sep = separation_pairs(spec, degree, seed)?;
    let orc = oracle_pairs(spec, degree, seed)?;
    let (map, residual) = fit_calibration(&sep, &orc)?;
    if residual > 1e-8 {
        return Err(Error::NoConsistentMap { residual });
    }
    Ok((map, residual))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub system: SystemSpec,
    pub calibration: AffineMap,
    pub calibration_residual: f64,
    /// (degree, max relative error) for every checked degree.
    pub deviations: Vec<(usize, f64)>,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().fold(self.calibration_residual, |m, (_, e)| m.max(*e))
    }
}

/// Calibrates at D = 2 and transports the map to every degree in `degrees`.
pub fn oracle_check(spec: &SystemSpec, degrees: &[usize], seed: u64) -> Result<OracleReport> {
    let (map, residual) = calibrate(spec, 2, seed)?;
    let mut deviations = Vec::new();
    for &d in degrees {
        let sep = separation_pairs(spec, d, seed)?;
        let orc = oracle_pairs(spec, d, seed)?;
        deviations.push((d, max_relative_error(&map, &sep, &orc)));
    }
    Ok(OracleReport { system: spec.clone(), calibration: map, calibration_residual: residual, deviations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_dimensions() {
        assert_eq!(harmonic_subspace(4, 0).ncols(), 1);
        assert_eq!(harmonic_subspace(4, 5).ncols(), 36);
        assert_eq!(harmonic_subspace(3, 3).ncols(), 7);
    }

    #[test]
    fn l12_on_linear_functions() {
        let m = ang_mom_squared(4, 1, 0, 1);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [0.0, 0.0, 1.0, 1.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
