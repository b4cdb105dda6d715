use proptest::prelude::*;
use sphsep::numerics::quad::integrate_abscissa;
use sphsep::numerics::{
    eigen_real, eval_classical, integrate, solve_root_system, Classical, IntegrandKind, QuadratureSpec, RootSystemProblem,
    Tridiag,
};

const E: [f64; 4] = [1.0, 2.0, 5.0, 8.0];

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn empty_occupancy_gives_no_roots() {
    let p = RootSystemProblem::new(E.to_vec(), vec![0.5; 4], vec![0, 0, 0]);
    assert!(solve_root_system(&p, 1).unwrap().is_empty());
}

#[test]
fn single_root_matches_bisection() {
    let p = RootSystemProblem::new(E.to_vec(), vec![0.5; 4], vec![1, 0, 0]);
    let z = solve_root_system(&p, 7).unwrap();
    let f = |x: f64| E.iter().map(|e| 0.25 / (x - e)).sum::<f64>();
    let want = bisect(f, 1.0 + 1e-12, 2.0 - 1e-12);
    assert_eq!(z.len(), 1);
    assert!((z[0] - want).abs() < 1e-12, "{} vs {want}", z[0]);
}

#[test]
fn one_root_per_interval() {
    let p = RootSystemProblem::new(E.to_vec(), vec![0.5; 4], vec![1, 1, 1]);
    let z = solve_root_system(&p, 3).unwrap();
    for (k, zk) in z.iter().enumerate() {
        assert!(*zk > E[k] && *zk < E[k + 1]);
    }
    assert!(p.residuals(&z).iter().all(|r| r.abs() < 1e-12));
}

#[test]
fn invalid_root_problems() {
    let bad = RootSystemProblem::new(vec![1.0, 1.0, 2.0], vec![0.5; 3], vec![1, 0]);
    assert!(matches!(solve_root_system(&bad, 0), Err(sphsep::Error::InvalidProblem(_))));
    let bad = RootSystemProblem::new(E.to_vec(), vec![0.5, 0.5, -0.5, 0.5], vec![1, 0, 0]);
    assert!(matches!(solve_root_system(&bad, 0), Err(sphsep::Error::InvalidProblem(_))));
    let bad = RootSystemProblem::new(E.to_vec(), vec![0.5; 4], vec![1, 0]);
    assert!(matches!(solve_root_system(&bad, 0), Err(sphsep::Error::InvalidProblem(_))));
}

#[test]
fn solutions_are_distinct_per_degree() {
    for d in 0..=5 {
        let mut found = Vec::new();
        for n1 in 0..=d {
            for n2 in 0..=(d - n1) {
                let p = RootSystemProblem::new(E.to_vec(), vec![0.5, 1.5, 0.5, 1.5], vec![n1, n2, d - n1 - n2]);
                found.push(p.accessory(&solve_root_system(&p, 11).unwrap()));
            }
        }
        assert_eq!(found.len(), (d + 2) * (d + 1) / 2);
        for i in 0..found.len() {
            for j in 0..i {
                let gap: f64 = found[i].iter().zip(&found[j]).map(|(a, b)| (a - b).abs()).sum();
                assert!(gap > 1e-6, "d = {d}: solutions {i} and {j} coincide");
            }
        }
    }
}

#[test]
fn deterministic_for_fixed_seed() {
    let p = RootSystemProblem::new(E.to_vec(), vec![0.5; 4], vec![2, 3, 1]);
    assert_eq!(solve_root_system(&p, 99).unwrap(), solve_root_system(&p, 99).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn root_system_sum_rules(
        gaps in prop::array::uniform3(0.3f64..4.0),
        start in -3.0f64..3.0,
        flips in prop::array::uniform4(any::<bool>()),
        occ in prop::array::uniform3(0usize..4),
        seed in any::<u64>(),
    ) {
        let e = [start, start + gaps[0], start + gaps[0] + gaps[1], start + gaps[0] + gaps[1] + gaps[2]];
        let g: Vec<f64> = flips.iter().map(|&b| if b { 1.5 } else { 0.5 }).collect();
        let p = RootSystemProblem::new(e.to_vec(), g.clone(), occ.to_vec());
        let z = solve_root_system(&p, seed).unwrap();
        let d = p.degree() as f64;
        prop_assert_eq!(z.len(), p.degree());
        prop_assert!(z.windows(2).all(|w| w[0] <= w[1]));
        let q = p.accessory(&z);
        let scale = 1.0 + q.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(q.iter().sum::<f64>().abs() < 1e-9 * scale);
        let weighted: f64 = q.iter().zip(&e).map(|(qj, ej)| qj * ej).sum();
        let want = -d * (d - 1.0 + g.iter().sum::<f64>());
        prop_assert!((weighted - want).abs() < 1e-9 * scale.max(want.abs()), "{} vs {}", weighted, want);
    }

    #[test]
    fn eigen_real_similarity_invariant(
        diag in prop::collection::vec(-5.0f64..5.0, 5),
        off in prop::collection::vec(0.1f64..3.0, 4),
        scale in prop::collection::vec(0.2f64..5.0, 5),
    ) {
        let t = Tridiag::new(off.clone(), diag.clone(), off.clone()).unwrap();
        let base = eigen_real(&t).unwrap();
        // D T D⁻¹ with D = diag(scale)
        let sub: Vec<f64> = (0..4).map(|i| off[i] * scale[i + 1] / scale[i]).collect();
        let sup: Vec<f64> = (0..4).map(|i| off[i] * scale[i] / scale[i + 1]).collect();
        let sim = eigen_real(&Tridiag::new(sub, diag, sup).unwrap()).unwrap();
        for (a, b) in base.iter().zip(&sim) {
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn small_tridiagonal_spectra() {
    assert_eq!(eigen_real(&Tridiag::new(vec![], vec![5.0], vec![]).unwrap()).unwrap(), vec![5.0]);
    let ev = eigen_real(&Tridiag::new(vec![1.0], vec![0.0, 0.0], vec![1.0]).unwrap()).unwrap();
    assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    let rotation = Tridiag::new(vec![-1.0], vec![0.0, 0.0], vec![1.0]).unwrap();
    assert!(matches!(eigen_real(&rotation), Err(sphsep::Error::ComplexSpectrum { .. })));
}

#[test]
fn prolate_two_by_two() {
    // d = 1, m = 0, a = 2.4 at D = 2: γ = ½, δ = 1, ε = ½, α = −1, β = 2
    let (a, g, dl, ep, al, be) = (2.4, 0.5, 1.0, 0.5, -1.0, 2.0);
    let p = sphsep::heun::HeunParams { a, q: 0.0, alpha: al, beta: be, gamma: g, delta: dl, epsilon: ep };
    let ev = eigen_real(&sphsep::heun::heun_matrix(&p, 1).unwrap()).unwrap();
    // characteristic polynomial of [[0, aγ], [αβ, −(γ(a+1) + aδ + ε)]]
    let tr = -(g * (a + 1.0) + a * dl + ep);
    let det = -a * g * al * be;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let want = [0.5 * (tr - disc), 0.5 * (tr + disc)];
    for (x, y) in ev.iter().zip(want) {
        assert!((x - y).abs() < 1e-12, "{x} vs {y}");
    }
}

#[test]
fn quadrature_closed_forms() {
    let pi = std::f64::consts::PI;
    let one = integrate(&QuadratureSpec::new(0.0, 1.0, IntegrandKind::Smooth, 1e-12).unwrap(), |_| 1.0).unwrap();
    assert!((one - 1.0).abs() < 1e-12);
    let arcsine = QuadratureSpec::new(0.0, 1.0, IntegrandKind::SqrtEndpointBoth, 1e-12).unwrap();
    let v = integrate_abscissa(&arcsine, |p| 1.0 / (p.from_lower * p.to_upper).sqrt()).unwrap();
    assert!((v - pi).abs() < 1e-10, "{v}");
    let semi = integrate(&arcsine, |x| (x * (1.0 - x)).sqrt()).unwrap();
    assert!((semi - pi / 8.0).abs() < 1e-12);
    let left = QuadratureSpec::new(0.0, 1.0, IntegrandKind::SqrtEndpointLeft, 1e-12).unwrap();
    let v = integrate_abscissa(&left, |p| 1.0 / p.from_lower.sqrt()).unwrap();
    assert!((v - 2.0).abs() < 1e-10);
    let smooth = QuadratureSpec::new(0.0, pi, IntegrandKind::Smooth, 1e-12).unwrap();
    assert!((integrate(&smooth, f64::sin).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn classical_polynomial_identities() {
    assert_eq!(eval_classical(Classical::Gegenbauer { u: 1.0 }, 0, 0.3).unwrap(), 1.0);
    for k in 0..8 {
        for i in 0..20 {
            let x = -1.0 + 2.0 * (i as f64 + 0.5) / 20.0;
            let u = eval_classical(Classical::Chebyshev2, k, x).unwrap();
            let c = eval_classical(Classical::Gegenbauer { u: 1.0 }, k, x).unwrap();
            assert!((u - c).abs() < 1e-12);
            let u_trig = ((k as f64 + 1.0) * x.acos()).sin() / x.acos().sin();
            assert!((u - u_trig).abs() < 1e-10);
            let j = eval_classical(Classical::Jacobi { alpha: 0.0, beta: 0.0 }, k, x).unwrap();
            let p = eval_classical(Classical::AssocLegendre { m: 0 }, k, x).unwrap();
            assert!((j - p).abs() < 1e-12);
        }
    }
}
