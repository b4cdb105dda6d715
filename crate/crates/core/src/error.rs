use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("root system did not converge for occupancy {occupancy:?} after {attempts} attempts")]
    NonConvergence { occupancy: Vec<usize>, attempts: usize },
    #[error("spectrum is not real: imaginary part {max_imag:e} exceeds tolerance")]
    ComplexSpectrum { max_imag: f64 },
    #[error("quadrature did not converge on [{lower}, {upper}]")]
    NoConvergence { lower: f64, upper: f64 },
    #[error("separable coordinates outside their admissible box: {0}")]
    OutOfBox(String),
    #[error("point lies on a coordinate-singular stratum")]
    SingularStratum,
    #[error("degeneration target {0} is not reachable from this system")]
    UnreachableTarget(String),
    #[error("truncation condition violated: alpha = {alpha}")]
    TruncationViolated { alpha: f64 },
    #[error("state carries no roots for reconstruction")]
    MissingRoots,
    #[error("polynomial has mixed parity about axis {axis}")]
    MixedParity { axis: usize },
    #[error("degree {degree} exceeds the operator-matrix guard {max}")]
    DimensionGuard { degree: usize, max: usize },
    #[error("no generic combination separated the joint spectrum")]
    DegenerateT,
    #[error("no consistent calibration map, residual {residual:e}")]
    NoConsistentMap { residual: f64 },
    #[error("eigenvalue pair outside the classical image")]
    OutsideImage,
    #[error("ambiguous lattice match at waypoint {waypoint}")]
    AmbiguousMatch { waypoint: usize },
    #[error("loop left the regular lattice at waypoint {waypoint}")]
    LeftLattice { waypoint: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
