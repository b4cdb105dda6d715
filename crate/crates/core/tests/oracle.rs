use nalgebra::DMatrix;
use sphsep::oracle::{
    ang_mom_squared, build_operator, calibrate, harmonic_subspace, joint_spectrum_oracle, match_multisets, oracle_check,
    restricted_pair, rotation_generator, AffineMap, Which, ORACLE_MAX_DEGREE,
};
use sphsep::poly::{monomials, HomogPoly};
use sphsep::{Error, SystemKind, SystemSpec};

const SEED: u64 = 42;

fn systems() -> Vec<SystemSpec> {
    SystemKind::ALL
        .iter()
        .map(|&k| {
            let params = match k {
                SystemKind::Ellipsoidal => vec![1.0, 2.0, 5.0, 8.0],
                SystemKind::Prolate | SystemKind::Oblate => vec![2.4],
                SystemKind::Lame | SystemKind::S2Ellipsoidal => vec![0.0, 1.0, 2.4],
                _ => vec![],
            };
            SystemSpec::new(k, params).unwrap()
        })
        .collect()
}

fn fischer(nvars: usize, degree: usize) -> Vec<f64> {
    monomials(nvars, degree as u32)
        .iter()
        .map(|e| e.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product::<f64>().sqrt())
        .collect()
}

#[test]
fn harmonic_dimensions() {
    for d in 0..=ORACLE_MAX_DEGREE {
        assert_eq!(harmonic_subspace(4, d).ncols(), (d + 1) * (d + 1));
        assert_eq!(harmonic_subspace(3, d).ncols(), 2 * d + 1);
    }
}

#[test]
fn harmonic_basis_is_annihilated_by_laplacian() {
    for (nvars, d) in [(4, 5), (3, 6)] {
        let q = harmonic_subspace(nvars, d);
        let basis = monomials(nvars, d as u32);
        let s = fischer(nvars, d);
        for c in 0..q.ncols() {
            let raw: Vec<f64> = (0..basis.len()).map(|r| q[(r, c)] / s[r]).collect();
            let p = HomogPoly::from_vector(&basis, &raw);
            assert!(p.laplacian().coeff_norm() < 1e-10 * p.coeff_norm());
        }
    }
}

#[test]
fn generators_are_skew_in_fischer_coordinates() {
    let d = 4;
    let s = fischer(4, d);
    for (i, j) in [(0, 1), (1, 3), (2, 3)] {
        let mut g = rotation_generator(4, d, i, j);
        for r in 0..g.nrows() {
            for c in 0..g.ncols() {
                g[(r, c)] *= s[r] / s[c];
            }
        }
        assert!((&g + g.transpose()).norm() < 1e-12);
    }
    // −ℓ₁₂² on x₁ + i x₂ has eigenvalue 1
    let l = ang_mom_squared(4, 1, 0, 1);
    let v = nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
    let lv = &l * &v;
    assert!((lv[0] - 1.0).abs() < 1e-14 && lv.iter().skip(1).all(|x| x.abs() < 1e-14));
}

#[test]
fn operators_preserve_harmonics() {
    for spec in systems() {
        let nvars = spec.kind.nvars();
        for d in [2, 5] {
            let q = harmonic_subspace(nvars, d);
            let s = fischer(nvars, d);
            let proj = &q * q.transpose();
            for which in [Which::First, Which::Second] {
                let op = build_operator(&spec, which, d).unwrap();
                let mut a: DMatrix<f64> = op.entries.clone();
                for r in 0..a.nrows() {
                    for c in 0..a.ncols() {
                        a[(r, c)] *= s[r] / s[c];
                    }
                }
                let aq = &a * &q;
                let leak = (&aq - &proj * &aq).norm();
                assert!(leak <= 1e-10 * a.norm().max(1.0), "{} D = {d}: {leak}", spec.kind);
            }
        }
    }
}

#[test]
fn integrals_commute_on_harmonics() {
    for spec in systems() {
        for d in 0..=8 {
            let (a, b) = restricted_pair(&spec, d).unwrap();
            let c = &a * &b - &b * &a;
            let scale = (a.norm() * b.norm()).max(1.0);
            assert!(c.norm() <= 1e-10 * scale, "{} D = {d}: {}", spec.kind, c.norm() / scale);
        }
    }
}

#[test]
fn dimension_guard() {
    let spec = SystemSpec::prolate(2.4).unwrap();
    assert!(matches!(
        build_operator(&spec, Which::First, ORACLE_MAX_DEGREE + 1),
        Err(Error::DimensionGuard { .. })
    ));
}

#[test]
fn cylindrical_pairs_are_square_integers() {
    let spec = SystemSpec::plain(SystemKind::Cylindrical).unwrap();
    let pairs = joint_spectrum_oracle(&spec, 2, SEED).unwrap();
    let mut want = Vec::new();
    for m1 in -2i64..=2 {
        for m2 in -2i64..=2 {
            let used = m1.abs() + m2.abs();
            if used <= 2 && used % 2 == 0 {
                want.push([(m1 * m1) as f64, (m2 * m2) as f64]);
            }
        }
    }
    let (_, worst) = match_multisets(&pairs, &want).unwrap();
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn calibration_is_identity_for_every_system() {
    for spec in systems() {
        let (map, residual) = calibrate(&spec, 2, SEED).unwrap();
        assert!(residual < 1e-8, "{}", spec.kind);
        assert!(map.distance_from_identity() < 1e-8, "{}: {map:?}", spec.kind);
    }
}

#[test]
fn calibration_transports_to_higher_degrees() {
    for spec in systems() {
        let report = oracle_check(&spec, &[3, 4], SEED).unwrap();
        assert!(report.max_deviation() < 1e-7, "{}: {:?}", spec.kind, report.deviations);
    }
}

#[test]
fn identity_map_is_neutral() {
    let p = [3.5, -2.0];
    assert_eq!(AffineMap::IDENTITY.apply(p), p);
}
