use sphsep::monodromy::{
    circle_loop, initial_cell, polygon_projection, transport, transport_circle, ProjectionAxis,
};
use sphsep::{spectrum, Error, SystemKind, SystemSpec};

const SEED: u64 = 42;

fn prolate_points(d: usize) -> Vec<[f64; 2]> {
    spectrum(&SystemSpec::prolate(2.4).unwrap(), d, SEED).unwrap().scaled_points()
}

#[test]
fn combined_lattice_refinement_independent() {
    let pts = prolate_points(20);
    let coarse = transport_circle(&pts, [0.0, 1.0], 0.35, 64).unwrap();
    let fine = transport_circle(&pts, [0.0, 1.0], 0.35, 128).unwrap();
    assert_eq!(coarse.matrix, fine.matrix);
    assert_eq!(coarse.det(), 1);
}

#[test]
fn loop_then_reverse_is_identity() {
    let pts = prolate_points(20);
    let mut wp = circle_loop([0.0, 1.0], 0.35, 64);
    let mut back = wp.clone();
    back.reverse();
    wp.extend(back.into_iter().skip(1));
    let cell = initial_cell(&pts, wp[0]).unwrap();
    let r = transport(&pts, &wp, cell).unwrap();
    assert!(r.is_identity(), "{:?}", r.matrix);
}

#[test]
fn contractible_loops_are_trivial() {
    let pts = prolate_points(20);
    for (c, r) in [([0.3, 0.8], 0.15), ([-0.3, 1.0], 0.1), ([0.0, 0.5], 0.15)] {
        let t = transport_circle(&pts, c, r, 64).unwrap();
        assert!(t.is_identity(), "{c:?}: {:?}", t.matrix);
    }
}

#[test]
fn oblate_has_no_monodromy() {
    let pts = spectrum(&SystemSpec::oblate(2.4).unwrap(), 20, SEED).unwrap().scaled_points();
    let t = transport_circle(&pts, [0.0, 0.5], 0.2, 64).unwrap();
    assert!(t.is_identity(), "{:?}", t.matrix);
}

#[test]
fn open_loops_are_rejected() {
    let pts = prolate_points(10);
    let cell = initial_cell(&pts, [0.0, 1.0]).unwrap();
    let r = transport(&pts, &[[0.0, 1.0], [0.1, 1.0]], cell);
    assert!(matches!(r, Err(Error::InvalidProblem(_))));
}

#[test]
fn far_loops_leave_the_lattice() {
    let pts = prolate_points(20);
    assert!(matches!(transport_circle(&pts, [3.0, 3.0], 0.2, 32), Err(Error::LeftLattice { .. })));
}

#[test]
fn polygon_projections() {
    let sp = spectrum(&SystemSpec::prolate(2.4).unwrap(), 20, SEED).unwrap();
    let j1 = polygon_projection(&sp, ProjectionAxis::J1).unwrap();
    let j3 = polygon_projection(&sp, ProjectionAxis::J3).unwrap();
    assert_eq!(j1.len(), sp.len());
    assert_eq!(j3.len(), sp.len());
    // J₁ + J₃ = 1 − |m| on the prolate system
    for (p, q) in j1.iter().zip(&j3) {
        assert!((p[1] + q[1] + p[0].abs() - 1.0).abs() < 1e-6);
    }
    let cyl = spectrum(&SystemSpec::plain(SystemKind::Cylindrical).unwrap(), 8, SEED).unwrap();
    let pts = polygon_projection(&cyl, ProjectionAxis::J3).unwrap();
    let h = cyl.hbar;
    for p in &pts {
        assert!(((p[0] / h).round() - p[0] / h).abs() < 1e-12);
        assert!(((p[1] / h).round() - p[1] / h).abs() < 1e-9);
    }
    let ell = spectrum(&SystemSpec::ellipsoidal([1.0, 2.0, 5.0, 8.0]).unwrap(), 4, SEED).unwrap();
    assert!(polygon_projection(&ell, ProjectionAxis::J1).is_err());
}
