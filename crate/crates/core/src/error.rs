use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric (residual {0})")]
    NotSkew(f64),
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("torsion is not totally skew (residual {0})")]
    TorsionNotSkew(f64),
    #[error("Nomizu map is not h-equivariant (residual {0})")]
    NotEquivariant(f64),
    #[error("tensor is not h-invariant (residual {0})")]
    NotInvariant(f64),
    #[error("not an Ambrose-Singer structure: {what} residual {residual}")]
    NotAmbroseSinger { what: &'static str, residual: f64 },
    #[error("indeterminate split: {0}")]
    IndeterminateSplit(String),
    #[error("degenerate trace form")]
    DegenerateTraceForm,
    #[error("tau squared vanishes, kappa undefined")]
    ZeroTauSquared,
    #[error("g is not contained in the stabilizer of tau (residual {0})")]
    NotInStabilizer(f64),
    #[error("h is not contained in g")]
    NotSubalgebra,
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("model inconsistency: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
