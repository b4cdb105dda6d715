//! Quantum monodromy: a lattice cell carried around a loop in the joint
//! spectrum, and the polygon projections of the action map.

use serde::Serialize;

use crate::actions::{state_actions, EtildeMode};
use crate::error::{Error, Result};
use crate::state::{JointSpectrum, Quanta};

/// Two candidates closer than this ratio make a match ambiguous.
pub const AMBIGUITY_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeCell {
    pub base: [f64; 2],
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

impl LatticeCell {
    pub fn det(&self) -> f64 {
        self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportResult {
    /// Final basis in terms of the initial one (rows are vectors), rounded.
    pub matrix: [[i64; 2]; 2],
    /// The same before rounding.
    pub raw: [[f64; 2]; 2],
    /// Cells visited, one per waypoint.
    pub cells: Vec<LatticeCell>,
}

impl TransportResult {
    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == [[1, 0], [0, 1]]
    }

    /// Monodromy index ω of [[1, 0], [ω, 1]].
    pub fn omega(&self) -> i64 {
        self.matrix[1][0]
    }
}

fn sub(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [p[0] - q[0], p[1] - q[1]]
}

fn norm2(p: [f64; 2]) -> f64 {
    p[0] * p[0] + p[1] * p[1]
}

fn nearest(points: &[[f64; 2]], x: [f64; 2]) -> Option<usize> {
    (0..points.len()).min_by(|&i, &j| norm2(sub(points[i], x)).total_cmp(&norm2(sub(points[j], x))))
}

/// Closed circle of `n` steps (n+1 waypoints, first = last).
pub fn circle_loop(center: [f64; 2], radius: f64, n: usize) -> Vec<[f64; 2]> {
    (0..=n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k % n.max(1)) as f64 / n.max(1) as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect()
}

/// Cell at the point nearest `x`: v₁ is the shortest vertical step, v₂ the
/// step to the adjacent column with the smallest vertical offset.
pub fn initial_cell(points: &[[f64; 2]], x: [f64; 2]) -> Result<LatticeCell> {
    let b = nearest(points, x).ok_or(Error::LeftLattice { waypoint: 0 })?;
    let base = points[b];
    let col_tol = 1e-9;
    let v1 = points
        .iter()
        .map(|p| sub(*p, base))
        .filter(|d| d[0].abs() < col_tol && d[1] > col_tol)
        .min_by(|a, b| a[1].total_cmp(&b[1]))
        .ok_or(Error::LeftLattice { waypoint: 0 })?;
    let step = points
        .iter()
        .map(|p| p[0] - base[0])
        .filter(|dx| *dx > col_tol)
        .min_by(|a, b| a.total_cmp(b))
        .ok_or(Error::LeftLattice { waypoint: 0 })?;
    let v2 = points
        .iter()
        .map(|p| sub(*p, base))
        .filter(|d| (d[0] - step).abs() < col_tol)
        .min_by(|a, b| a[1].abs().total_cmp(&b[1].abs()))
        .ok_or(Error::LeftLattice { waypoint: 0 })?;
    Ok(LatticeCell { base, v1, v2 })
}

/// Lattice vector from `base` continuing `prev`; errors when the two best
/// candidates are within [`AMBIGUITY_RATIO`] of each other.
fn continue_vector(points: &[[f64; 2]], base: [f64; 2], prev: [f64; 2], waypoint: usize) -> Result<[f64; 2]> {
    let target = [base[0] + prev[0], base[1] + prev[1]];
    let mut best = (f64::INFINITY, [0.0; 2]);
    let mut second = f64::INFINITY;
    for p in points {
        let d = norm2(sub(*p, target)).sqrt();
        if d < best.0 {
            second = best.0;
            best = (d, sub(*p, base));
        } else if d < second {
            second = d;
        }
    }
    let len = norm2(prev).sqrt();
    if best.0 > 0.5 * len {
        return Err(Error::LeftLattice { waypoint });
    }
    if second - best.0 < AMBIGUITY_RATIO * second && best.0 > AMBIGUITY_RATIO * len {
        return Err(Error::AmbiguousMatch { waypoint });
    }
    Ok(best.1)
}

/// Largest number of bisections of one loop segment after an ambiguous match.
pub const MAX_REFINE: usize = 6;

fn step(points: &[[f64; 2]], cur: LatticeCell, x: [f64; 2], k: usize) -> Result<LatticeCell> {
    let b = nearest(points, x).ok_or(Error::LeftLattice { waypoint: k })?;
    let base = points[b];
    let v1 = continue_vector(points, base, cur.v1, k)?;
    let v2 = continue_vector(points, base, cur.v2, k)?;
    let next = LatticeCell { base, v1, v2 };
    if next.det().abs() < 0.1 * norm2(v1).sqrt() * norm2(v2).sqrt() {
        return Err(Error::LeftLattice { waypoint: k });
    }
    Ok(next)
}

/// One loop segment; ambiguous matches shrink the step by bisection.
fn walk(points: &[[f64; 2]], cur: LatticeCell, from: [f64; 2], to: [f64; 2], k: usize, depth: usize) -> Result<LatticeCell> {
    match step(points, cur, to, k) {
        Err(Error::AmbiguousMatch { .. }) if depth < MAX_REFINE => {
            let mid = [0.5 * (from[0] + to[0]), 0.5 * (from[1] + to[1])];
            let half = walk(points, cur, from, mid, k, depth + 1)?;
            walk(points, half, mid, to, k, depth + 1)
        }
        r => r,
    }
}

/// Carries `cell` along `waypoints`, re-anchoring at the nearest point and
/// matching each basis vector to the lattice vector closest to its previous
/// value.
pub fn transport(points: &[[f64; 2]], waypoints: &[[f64; 2]], cell: LatticeCell) -> Result<TransportResult> {
    if waypoints.len() < 2 {
        return Err(Error::InvalidProblem("a loop needs at least two waypoints".into()));
    }
    let (first, last) = (waypoints[0], waypoints[waypoints.len() - 1]);
    if norm2(sub(first, last)).sqrt() > 1e-12 {
        return Err(Error::InvalidProblem("loop is not closed".into()));
    }
    let det0 = cell.det();
    if det0.abs() < 1e-14 {
        return Err(Error::InvalidProblem("degenerate initial cell".into()));
    }
    let mut cur = cell;
    let mut cells = vec![cell];
    for k in 1..waypoints.len() {
        cur = walk(points, cur, waypoints[k - 1], waypoints[k], k, 0)?;
        cells.push(cur);
    }
    // rows: new = M · old
    let (a, b) = (cell.v1, cell.v2);
    let inv = |v: [f64; 2]| [(v[0] * b[1] - v[1] * b[0]) / det0, (a[0] * v[1] - a[1] * v[0]) / det0];
    let raw = [inv(cur.v1), inv(cur.v2)];
    let matrix = raw.map(|r| r.map(|x| x.round() as i64));
    Ok(TransportResult { matrix, raw, cells })
}

/// Transport around a circle, starting from the cell at its first waypoint.
pub fn transport_circle(points: &[[f64; 2]], center: [f64; 2], radius: f64, steps: usize) -> Result<TransportResult> {
    let wp = circle_loop(center, radius, steps);
    let cell = initial_cell(points, wp[0])?;
    transport(points, &wp, cell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionAxis {
    J1,
    J3,
}

/// Signed ħ-scaled angular momentum of a state: m for the rotational and
/// spherical systems, m₁ for the cylindrical one.
fn signed_coordinate(q: &Quanta, hbar: f64) -> Option<f64> {
    match *q {
        Quanta::Heun { m, .. } | Quanta::Spherical { m, .. } | Quanta::S2Spherical { m, .. } => Some(m as f64 * hbar),
        Quanta::Cylindrical { m1, .. } => Some(m1 as f64 * hbar),
        _ => None,
    }
}

/// Points (m, J_axis) at Ẽ = 1; states outside the momentum-map image are
/// skipped.
pub fn polygon_projection(spectrum: &JointSpectrum, axis: ProjectionAxis) -> Result<Vec<[f64; 2]>> {
    let mut out = Vec::with_capacity(spectrum.len());
    for s in &spectrum.states {
        let m = signed_coordinate(&s.quanta, spectrum.hbar)
            .ok_or_else(|| Error::InvalidProblem(format!("{} has no signed angular momentum", s.system)))?;
        let Ok(j) = state_actions(s, &spectrum.system.params, EtildeMode::Unit) else { continue };
        if j.len() < 3 {
            return Err(Error::InvalidProblem("projection needs three actions".into()));
        }
        out.push([m, if axis == ProjectionAxis::J1 { j[0] } else { j[2] }]);
    }
    Ok(out)
}
