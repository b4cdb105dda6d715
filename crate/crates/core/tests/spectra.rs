use std::collections::BTreeMap;

use proptest::prelude::*;
use sphsep::counts::{class_counts, total_count};
use sphsep::ellipsoidal::{admissible_classes, gen_lame_params, limit_pairs, spectral_parameters};
use sphsep::geometry::degenerate;
use sphsep::heun::{lame_function_label, prolate_spectrum, HeunParams, Pole};
use sphsep::oracle::{max_relative_error, AffineMap};
use sphsep::{spectrum, Quanta, SystemKind, SystemSpec};

const SEED: u64 = 42;

#[test]
fn level_sizes_from_solvers() {
    let systems = [
        SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap(),
        SystemSpec::prolate(2.4).unwrap(),
        SystemSpec::oblate(2.4).unwrap(),
        SystemSpec::lame([0.0, 1.0, 2.4]).unwrap(),
        SystemSpec::plain(SystemKind::Spherical23).unwrap(),
        SystemSpec::plain(SystemKind::Cylindrical).unwrap(),
    ];
    for spec in &systems {
        for d in 0..=7 {
            let sp = spectrum(spec, d, SEED).unwrap();
            assert_eq!(sp.len(), (d + 1) * (d + 1), "{} D = {d}", spec.kind);
            let solved: Vec<(Vec<u8>, usize)> = sp.class_counts();
            assert_eq!(solved, class_counts(spec, d), "{} D = {d}", spec.kind);
        }
    }
    for spec in [SystemSpec::s2_ellipsoidal([0.0, 1.0, 2.4]).unwrap(), SystemSpec::plain(SystemKind::S2Spherical).unwrap()] {
        for l in 0..=9 {
            assert_eq!(spectrum(&spec, l, SEED).unwrap().len(), 2 * l + 1);
            assert_eq!(total_count(&spec, l), 2 * l + 1);
        }
    }
}

#[test]
fn degree_zero_is_one_state() {
    for kind in SystemKind::ALL {
        let params = match kind {
            SystemKind::Ellipsoidal => vec![1.0, 2.0, 5.0, 8.0],
            SystemKind::Prolate | SystemKind::Oblate => vec![2.4],
            SystemKind::Lame | SystemKind::S2Ellipsoidal => vec![0.0, 1.0, 2.4],
            _ => vec![],
        };
        let sp = spectrum(&SystemSpec::new(kind, params).unwrap(), 0, SEED).unwrap();
        assert_eq!(sp.len(), 1, "{kind}");
        assert_eq!(sp.hbar, 1.0);
    }
}

#[test]
fn ellipsoidal_class_bookkeeping() {
    let classes = admissible_classes(5);
    assert_eq!(classes.len(), 8);
    assert!(classes.iter().all(|c| c.iter().map(|&b| b as usize).sum::<usize>() % 2 == 1));
    let e = [1.0, 2.0, 5.0, 8.0];
    assert_eq!(gen_lame_params(e, [0; 4]).u, [0.0; 3]);
    let p = gen_lame_params(e, [1, 1, 1, 1]);
    assert_eq!(p.gamma, [1.5; 4]);
    // no roots: λ depends only on the class shifts
    let l = spectral_parameters(&gen_lame_params(e, [0; 4]), &[0.0; 4]);
    assert_eq!(l, [0.0, 0.0]);
}

#[test]
fn lame_polynomial_names() {
    assert_eq!(lame_function_label(0, 0, [0, 0, 0]), "Ec_{0}^{0}");
    assert_eq!(lame_function_label(1, 1, [1, 1, 1]), "Es_{5}^{4}");
    assert_eq!(lame_function_label(2, 0, [0, 1, 0]), "Es_{5}^{1}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fuchs_relation_survives_flips(
        a in 1.01f64..10.0,
        m in 0i64..12,
        extra in 0usize..12,
        bits in prop::array::uniform3(any::<bool>()),
    ) {
        let am = m as f64;
        let big = (m as usize + extra) as f64 + 1.0;
        let base = HeunParams { a, q: 0.0, alpha: 0.5 * (1.0 - big + am), beta: 0.5 * (1.0 + big + am), gamma: 0.5, delta: 1.0 + am, epsilon: 0.5 };
        prop_assert!(base.fuchs_defect().abs() < 1e-12);
        let mut p = base;
        for (pole, on) in [Pole::Zero, Pole::One, Pole::A].into_iter().zip(bits) {
            if on {
                p = p.flip(pole);
            }
        }
        prop_assert!(p.fuchs_defect().abs() < 1e-12);
        prop_assert_eq!(p.flip(Pole::Zero).flip(Pole::Zero).gamma, p.gamma);
    }

    #[test]
    fn rotational_levels_are_complete(a in 1.05f64..8.0, d in 0usize..16) {
        for spec in [SystemSpec::prolate(a).unwrap(), SystemSpec::oblate(a).unwrap()] {
            let sp = spectrum(&spec, d, SEED).unwrap();
            prop_assert_eq!(sp.len(), (d + 1) * (d + 1));
            prop_assert!(sp.states.iter().all(|s| s.raw[1].is_finite()));
        }
    }
}

#[test]
fn rotational_quantum_number_law() {
    for spec in [SystemSpec::prolate(2.4).unwrap(), SystemSpec::oblate(2.4).unwrap()] {
        for dd in 0..=12 {
            let sp = spectrum(&spec, dd, SEED).unwrap();
            let mut per_m: BTreeMap<(i64, Vec<u8>), usize> = BTreeMap::new();
            for s in &sp.states {
                let Quanta::Heun { m, d, .. } = s.quanta else { panic!() };
                let k = (s.class[0] + s.class[1]) as usize;
                assert_eq!(2 * d + m.unsigned_abs() as usize + k, dd);
                *per_m.entry((m, s.class.clone())).or_insert(0) += 1;
            }
            for ((m, class), n) in per_m {
                let k = (class[0] + class[1]) as usize;
                assert_eq!(n, (dd - m.unsigned_abs() as usize - k) / 2 + 1);
            }
        }
    }
}

#[test]
fn prolate_parity_law() {
    for dd in [10, 11, 20] {
        let sp = prolate_spectrum(2.4, dd).unwrap();
        for s in &sp.states {
            let Quanta::Heun { m, .. } = s.quanta else { panic!() };
            let same = s.class[0] == s.class[1];
            // equal bits pair with m of the parity of D, unequal bits with the other
            assert_eq!(same, (m.rem_euclid(2) as usize) == dd % 2, "D = {dd}, class {}, m = {m}", s.class_label());
        }
    }
}

#[test]
fn rotational_special_states() {
    let a = 2.4;
    for dd in 0..=10usize {
        let p = spectrum(&SystemSpec::prolate(a).unwrap(), dd, SEED).unwrap();
        let o = spectrum(&SystemSpec::oblate(a).unwrap(), dd, SEED).unwrap();
        for (sp, factor) in [(&p, a), (&o, 1.0)] {
            for s in &sp.states {
                if let Quanta::Heun { m, d: 0, .. } = s.quanta {
                    if s.class == [0, 0] {
                        assert_eq!(m.unsigned_abs() as usize, dd);
                        assert_eq!(s.raw[1], factor * m.abs() as f64, "{}", sp.system.kind);
                    }
                }
            }
        }
    }
}

#[test]
fn closed_form_levels() {
    let sp = spectrum(&SystemSpec::plain(SystemKind::Spherical23).unwrap(), 4, SEED).unwrap();
    for s in &sp.states {
        let Quanta::Spherical { n, ell, m } = s.quanta else { panic!() };
        assert_eq!(n + ell, 4);
        assert!(m.unsigned_abs() as usize <= ell);
        assert_eq!(s.raw[1], (24 - ell * (ell + 1)) as f64);
    }
    let ground = sp.states.iter().find(|s| matches!(s.quanta, Quanta::Spherical { ell: 0, .. })).unwrap();
    assert_eq!(ground.scaled[0], 0.0);
    assert!((ground.scaled[1] - 24.0 / 25.0).abs() < 1e-15);
    let cyl = spectrum(&SystemSpec::plain(SystemKind::Cylindrical).unwrap(), 2, SEED).unwrap();
    let mut sq: Vec<[i64; 2]> = cyl.states.iter().map(|s| [s.raw[0] as i64, s.raw[1] as i64]).collect();
    sq.sort();
    assert_eq!(sq, expected_cylindrical());
}

fn expected_cylindrical() -> Vec<[i64; 2]> {
    let mut v = Vec::new();
    for m1 in -2i64..=2 {
        for m2 in -2i64..=2 {
            let used = m1.abs() + m2.abs();
            if used <= 2 && (2 - used) % 2 == 0 {
                v.push([m1, m2]);
            }
        }
    }
    v.sort();
    v
}

#[test]
fn lame_ground_state() {
    for dd in [1usize, 4, 20] {
        let sp = spectrum(&SystemSpec::lame([0.0, 1.0, 2.4]).unwrap(), dd, SEED).unwrap();
        let s = sp.states.iter().find(|s| matches!(s.quanta, Quanta::Lame { ell: 0, .. })).unwrap();
        let h = sp.hbar;
        assert_eq!(s.scaled, [(dd * (dd + 2)) as f64 * h * h, 0.0]);
        assert!((s.scaled[0] - (1.0 - h * h)).abs() < 1e-15);
    }
}

/// Max relative deviation between two pair multisets.
fn deviation(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    max_relative_error(&AffineMap::IDENTITY, a, b)
}

#[test]
fn ellipsoidal_limits_converge() {
    let dd = 6;
    let a = 2.4;
    let base = SystemSpec::ellipsoidal([0.0, 1.0, 1.5, a]).unwrap();
    let pro: Vec<[f64; 2]> = spectrum(&SystemSpec::prolate(a).unwrap(), dd, SEED).unwrap().states.iter().map(|s| s.oracle_pair()).collect();
    let base_o = SystemSpec::ellipsoidal([0.0, 1.0, a, a + 1.0]).unwrap();
    let obl: Vec<[f64; 2]> = spectrum(&SystemSpec::oblate(a).unwrap(), dd, SEED).unwrap().states.iter().map(|s| s.oracle_pair()).collect();
    let mut last = [f64::INFINITY; 2];
    for eps in [1e-2, 1e-3, 1e-4] {
        let ep = spectrum(&degenerate(&base, SystemKind::Prolate, eps).unwrap(), dd, SEED).unwrap();
        let eo = spectrum(&degenerate(&base_o, SystemKind::Oblate, eps).unwrap(), dd, SEED).unwrap();
        let dp = deviation(&limit_pairs(&ep, SystemKind::Prolate).unwrap(), &pro);
        let dob = deviation(&limit_pairs(&eo, SystemKind::Oblate).unwrap(), &obl);
        assert!(dp < last[0] && dob < last[1], "ε = {eps}: {dp} {dob}");
        assert!(dp < 10.0 * eps && dob < 10.0 * eps);
        last = [dp, dob];
    }
}

#[test]
fn prolate_tends_to_spherical() {
    let dd = 6;
    let sph: Vec<[f64; 2]> = spectrum(&SystemSpec::plain(SystemKind::Spherical23).unwrap(), dd, SEED)
        .unwrap()
        .states
        .iter()
        .map(|s| s.oracle_pair())
        .collect();
    let mut last = f64::INFINITY;
    for eps in [1e-2, 1e-3, 1e-4] {
        let p = spectrum(&SystemSpec::prolate(1.0 + eps).unwrap(), dd, SEED).unwrap();
        let d = deviation(&p.states.iter().map(|s| s.oracle_pair()).collect::<Vec<_>>(), &sph);
        assert!(d < last && d < 10.0 * eps, "ε = {eps}: {d}");
        last = d;
    }
}

#[test]
fn s2_ellipsoidal_is_a_lame_slice() {
    let f = [0.0, 1.0, 2.4];
    let dd = 9;
    let lame = spectrum(&SystemSpec::lame(f).unwrap(), dd, SEED).unwrap();
    let e3 = (dd * (dd + 2)) as f64;
    for ell in 0..=dd {
        let slice: Vec<[f64; 2]> = lame
            .states
            .iter()
            .filter(|s| matches!(s.quanta, Quanta::Lame { ell: l, .. } if l == ell))
            .map(|s| [e3 - s.raw[0], s.raw[1]])
            .collect();
        let s2: Vec<[f64; 2]> = spectrum(&SystemSpec::s2_ellipsoidal(f).unwrap(), ell, SEED).unwrap().states.iter().map(|s| s.raw).collect();
        assert!(deviation(&slice, &s2) < 1e-8, "ℓ = {ell}");
    }
}
