use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphsep::geometry::{cartesian_squares, degenerate, from_cartesian, to_cartesian};
use sphsep::{Error, SystemKind, SystemSpec};

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

fn random_sphere_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 0.1 && r < 1.0 && v.iter().all(|x| x.abs() > 1e-3 * r) {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

#[test]
fn round_trips_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in systems() {
        let n = spec.kind.nvars();
        for _ in 0..100 {
            let p = random_sphere_point(&mut rng, n);
            let s = from_cartesian(&spec, &p).unwrap();
            let signs: Vec<f64> = p.iter().map(|x| x.signum()).collect();
            let q = to_cartesian(&spec, &s, &signs).unwrap();
            for (a, b) in p.iter().zip(&q) {
                assert!((a - b).abs() < 1e-10, "{}: {p:?} -> {s:?} -> {q:?}", spec.kind);
            }
        }
    }
}

#[test]
fn ellipsoidal_roots_of_the_confocal_quadric() {
    let spec = SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap();
    let p = [0.5; 4];
    let s = from_cartesian(&spec, &p).unwrap();
    assert_eq!(s.len(), 3);
    for (j, sj) in s.iter().enumerate() {
        assert!(*sj > spec.params[j] && *sj < spec.params[j + 1]);
        let t: f64 = p.iter().zip(&spec.params).map(|(x, e)| x * x / (sj - e)).sum();
        assert!(t.abs() < 1e-10, "{t}");
    }
}

#[test]
fn boundary_and_singular_points() {
    let e = SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap();
    let sq = cartesian_squares(&e, &[1.0, 2.0, 5.0]).unwrap();
    assert_eq!(sq.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count(), 1);
    let sph = SystemSpec::plain(SystemKind::Spherical23).unwrap();
    let x = to_cartesian(&sph, &[1.0, 0.3, 0.7], &[1.0; 4]).unwrap();
    assert!((x[0] - 1.0).abs() < 1e-15 && x[1..].iter().all(|v| v.abs() < 1e-15));
    let s2 = SystemSpec::plain(SystemKind::S2Spherical).unwrap();
    assert_eq!(from_cartesian(&s2, &[1.0, 0.0, 0.0]), Err(Error::SingularStratum));
    assert!(matches!(cartesian_squares(&e, &[0.5, 3.0, 6.0]), Err(Error::OutOfBox(_))));
}

#[test]
fn degeneration_targets() {
    let p = SystemSpec::prolate(2.4).unwrap();
    assert_eq!(degenerate(&p, SystemKind::Prolate, 1e-3).unwrap().params, vec![0.0, 1.0, 1.0 + 1e-3, 2.4]);
    let o = SystemSpec::oblate(2.4).unwrap();
    assert_eq!(degenerate(&o, SystemKind::Oblate, 1e-3).unwrap().params, vec![0.0, 1.0, 2.4, 2.4 + 1e-3]);
    let l = SystemSpec::lame([0.0, 1.0, 2.4]).unwrap();
    assert_eq!(degenerate(&l, SystemKind::Lame, 1e-3).unwrap().params, vec![-1000.0, 0.0, 1.0, 2.4]);
    assert!(matches!(degenerate(&p, SystemKind::Cylindrical, 1e-3), Err(Error::UnreachableTarget(_))));
}

#[test]
fn spec_validation_and_json() {
    assert!(SystemSpec::prolate(1.0).is_err());
    assert!(SystemSpec::ellipsoidal([1.0, 2.0, 2.0, 3.0]).is_err());
    let s: SystemSpec = serde_json::from_str(r#"{"kind": "prolate", "params": [2.4]}"#).unwrap();
    assert_eq!(s, SystemSpec::prolate(2.4).unwrap());
    assert!(serde_json::from_str::<SystemSpec>(r#"{"kind": "oblate", "params": [0.5]}"#).is_err());
    let back: SystemSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interior_points_land_on_the_sphere(k in 0usize..8, u in prop::array::uniform3(0.01f64..0.99)) {
        let spec = &systems()[k];
        let s: Vec<f64> = spec.coordinate_box().iter().zip(u).map(|((lo, hi), t)| lo + t * (hi - lo)).collect();
        let signs = vec![1.0; spec.kind.nvars()];
        let x = to_cartesian(spec, &s, &signs).unwrap();
        let r: f64 = x.iter().map(|v| v * v).sum();
        prop_assert!((r - 1.0).abs() < 1e-12, "{}: {}", spec.kind, r);
    }
}
