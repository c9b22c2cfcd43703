//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("grid size {0} invalid: need a power of two >= 8")]
    InvalidGrid(usize),
    #[error("nonzero mean {mean:.3e} exceeds tolerance {tol:.3e}")]
    NonzeroMean { mean: f64, tol: f64 },
    #[error("integrability violated: |div of 2-form part| = {defect:.3e} > {tol:.3e}")]
    NotIntegrable { defect: f64, tol: f64 },
    #[error("Neumann iteration not contracting: measured ratio {ratio:.3} > {limit:.3}")]
    ContractionFailure { ratio: f64, limit: f64 },
    #[error("state left BN: |dy|_DN = {norm:.3e} >= radius {radius:.3e}")]
    BnExit { norm: f64, radius: f64 },
    #[error("step rejected {0} times, aborting")]
    StepRejected(usize),
    #[error("re-labeling fixed point did not converge after {0} iterations")]
    RelabelDiverged(usize),
    #[error("Jacobian degenerate: |minor| = {0:.3e}")]
    DegenerateJacobian(f64),
    #[error("log-radial period {got:.6} incompatible with KA*log(q1) = {want:.6}")]
    PeriodMismatch { got: f64, want: f64 },
    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("scale b = {0:.6e} not representable on the grid")]
    UnrepresentableScale(f64),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("alpha*l = {0} is an integer; the partial-fraction coefficient is singular")]
    IntegerAlphaEll(f64),
    #[error("the two h_l constructions disagree: defect {0:.3e}")]
    DualConstructionMismatch(f64),
    #[error("leading coefficient underflow: |prod sin| = {0:.3e}")]
    LeadingCoeffUnderflow(f64),
    #[error("flow map step size underflow at t = {0:.6}")]
    StepSizeUnderflow(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("snapshot format: {0}")]
    SnapshotFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
