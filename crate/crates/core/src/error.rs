use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Every variant maps to a stable machine-readable code through [`Error::code`],
/// which the CLI and the C interface surface verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator in rational expression")]
    ZeroDenominator,

    #[error("pole at x = {at}")]
    Pole { at: String },

    #[error("degenerate ODE: leading coefficient p is identically zero")]
    DegenerateOde,

    #[error("singular Mobius map: alpha*delta - beta*gamma is identically zero")]
    SingularMap,

    #[error("cannot rebuild a linear ODE: Riccati coefficient F is identically zero")]
    Reconstruction,

    #[error("{what} crosses zero near x = {at}")]
    PoleCrossing { what: String, at: f64 },

    #[error("map is affine (beta = 0); no inversion step to decompose")]
    AffineOnly,

    #[error("map entries must be constants")]
    NotConstant,

    #[error("singular branch: {0}")]
    SingularBranch(String),

    #[error("seed function vanishes near x = {at}")]
    Vanishing { at: f64 },

    #[error("seed does not solve the eigen-equation: max residual {residual:e} > {tol:e}")]
    InvalidSeed { residual: f64, tol: f64 },

    #[error("solution is not at the seed eigenvalue: max residual {residual:e} > {tol:e}")]
    EigenvalueMismatch { residual: f64, tol: f64 },

    #[error("map must satisfy alpha*delta - beta*gamma = 1, got {0}")]
    Normalization(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("refinement sequence error: {0}")]
    Refinement(String),

    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("exponent must be an integer")]
    NonIntegerExponent,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in JSON payloads and across the C interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "zero_denominator",
            Error::Pole { .. } => "pole",
            Error::DegenerateOde => "degenerate_ode",
            Error::SingularMap => "singular_map",
            Error::Reconstruction => "reconstruction",
            Error::PoleCrossing { .. } => "pole_crossing",
            Error::AffineOnly => "affine_only",
            Error::NotConstant => "not_constant",
            Error::SingularBranch(_) => "singular_branch",
            Error::Vanishing { .. } => "vanishing_seed",
            Error::InvalidSeed { .. } => "invalid_seed",
            Error::EigenvalueMismatch { .. } => "eigenvalue_mismatch",
            Error::Normalization(_) => "normalization",
            Error::Grid(_) => "grid",
            Error::Dimension(_) => "dimension_mismatch",
            Error::Refinement(_) => "refinement",
            Error::OracleInconclusive(_) => "oracle_inconclusive",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier(_) => "unknown_identifier",
            Error::NonIntegerExponent => "non_integer_exponent",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
