use thiserror::Error;

use crate::numfmt::sig;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {}", sig(*.0))]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {})", sig(*.off_norm))]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state vector is not normalized: norm = {}", sig(*.0))]
    NotNormalized(f64),
    #[error("bad subsystem: {0}")]
    BadSubsystem(String),
    #[error("trace = {}", sig(*.0))]
    NotUnitTrace(f64),
    #[error("not positive semidefinite: {0}")]
    NotPositive(String),
    #[error("invalid family coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("photon number must be at least 1 for the closed form, got {0}")]
    BadPhotonNumber(u32),
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("mean collective spin vanishes (|<S>| = {}); squeezing parameter undefined", sig(*.0))]
    ZeroMeanSpin(f64),
    #[error("coherence Y must be zero for the diagonal family, got {0}")]
    NonDiagonal(String),
    #[error("coherence Y must be real, got imaginary part {}", sig(*.0))]
    NonReal(f64),
    #[error("invalid spin frame: {0}")]
    InvalidFrame(String),
}
