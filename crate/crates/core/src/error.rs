use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not strictly upper triangular")]
    NotStrictlyUpper,
    #[error("cocycle class is not totally skew (singular sigma)")]
    NotTotallySkew,
    #[error("matrix is singular")]
    Singular,
    #[error("phi = I + S_hat S is singular")]
    PhiSingular,
    #[error("pair is not transverse: {0}")]
    NotTransverse(String),
    #[error("not a lattice automorphism: {0}")]
    NotLatticeAutomorphism(String),
    #[error("lift {lift} does not restrict to torus class {class}")]
    BadLift { lift: String, class: String },
    #[error("element shapes do not match the cocycle (k={k}, n={n})")]
    ShapeMismatch { k: u32, n: usize },
    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),
    #[error("operator is not a scalar multiple of the identity (deviation {deviation:e})")]
    NotScalar { deviation: f64 },
    #[error("phase extraction failed: |z - nearest root| = {deviation:e}")]
    PhaseExtraction { deviation: f64 },
    #[error("table is not a 2-cocycle: {0}")]
    NotACocycle(String),
    #[error("projective representation invalid: {0}")]
    InvalidRepresentation(String),
    #[error("ambiguous lift on segment [{from}, {to}]: jump of exactly 1/2")]
    AmbiguousLift { from: String, to: String },
    #[error("no transverse lift for chart [{from}, {to}]")]
    NoLift { from: String, to: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("unsupported dimension {0}; bundles are two-dimensional")]
    UnsupportedDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotAntisymmetric => "NotAntisymmetric",
            Error::NotStrictlyUpper => "NotStrictlyUpper",
            Error::NotTotallySkew => "NotTotallySkew",
            Error::Singular => "Singular",
            Error::PhiSingular => "PhiSingular",
            Error::NotTransverse(_) => "NotTransverse",
            Error::NotLatticeAutomorphism(_) => "NotLatticeAutomorphism",
            Error::BadLift { .. } => "BadLift",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::WrongAlgebra(_) => "WrongAlgebra",
            Error::NotScalar { .. } => "NotScalar",
            Error::PhaseExtraction { .. } => "PhaseExtraction",
            Error::NotACocycle(_) => "NotACocycle",
            Error::InvalidRepresentation(_) => "InvalidRepresentation",
            Error::AmbiguousLift { .. } => "AmbiguousLift",
            Error::NoLift { .. } => "NoLift",
            Error::InvalidPath(_) => "InvalidPath",
            Error::InvalidAtlas(_) => "InvalidAtlas",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::Parse(_) => "Parse",
        }
    }
}
