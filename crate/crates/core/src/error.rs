use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonHermitianInput: max |M - M^dagger| = {deviation:e} exceeds {tolerance:e}")]
    NonHermitianInput { deviation: f64, tolerance: f64 },

    #[error("NoConvergence: Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("DimensionMismatch: expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("InvalidDimension: {0}")]
    InvalidDimension(String),

    #[error("UnnormalizedState: norm {norm} differs from 1")]
    UnnormalizedState { norm: f64 },

    #[error("NonFinite: {0}")]
    NonFinite(String),

    #[error("InvalidStep: dt = {dt}, t_final = {t_final}")]
    InvalidStep { dt: f64, t_final: f64 },

    #[error("InvalidParams: {0}")]
    InvalidParams(String),

    #[error("DegenerateModel: g1 = rddi = 0 leaves no oscillation frequency")]
    DegenerateModel,

    #[error("DivisionByZeroCoupling: the effective Hamiltonian needs g1 > 0")]
    DivisionByZeroCoupling,

    #[error("ZeroCoupling: g1 = 0 makes the ratio rddi/g1 undefined")]
    ZeroCoupling,

    #[error("InvalidDensityMatrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("PatternMismatch: {0}")]
    PatternMismatch(String),

    #[error("NonpositiveSeparation: R = {0}")]
    NonpositiveSeparation(f64),

    #[error("CoincidentAtoms: atom 1 placed at atom 2's position x = {0}")]
    CoincidentAtoms(f64),

    #[error("InvalidGeometry: {0}")]
    InvalidGeometry(String),

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// True for failures of a numerical contract (as opposed to bad input
    /// parameters). Front ends map these to a distinct exit status.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonHermitianInput { .. }
                | Error::NoConvergence { .. }
                | Error::UnnormalizedState { .. }
                | Error::NonFinite(_)
                | Error::InvalidDensityMatrix(_)
                | Error::PatternMismatch(_)
        )
    }
}
