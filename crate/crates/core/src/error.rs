use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("component count must be positive")]
    ZeroComponents,
    #[error("sequence length {len} is not a positive multiple of s={s}")]
    BadLength { s: usize, len: usize },
    #[error("empty entry range: lo={lo} > hi={hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("scalar must be a nonzero rational")]
    ZeroScalar,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("component count mismatch: geometry has s={expected}, sequence has s={found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("sequence {0} is periodic")]
    Periodic(String),
    #[error("Kahn condition violated: need d>0, or d=0 and lambda!=1 (got {0})")]
    KahnViolation(String),
    #[error("invalid cusp geometry: {0}")]
    InvalidGeometry(String),
    #[error("(p,q)=({p},{q}) is not in the T_pq cusp regime (need q>=p>=3 and 1/p+1/q<1/2)")]
    InvalidTpq { p: u32, q: u32 },
    #[error("labels belong to different geometries")]
    GeometryMismatch,
    #[error("the free module has no Auslander-Reiten translate")]
    FreeModule,
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake-case tag for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroComponents => "zero_components",
            Error::BadLength { .. } => "bad_length",
            Error::EmptyRange { .. } => "empty_range",
            Error::ZeroScalar => "zero_scalar",
            Error::ZeroMultiplicity => "zero_multiplicity",
            Error::ComponentMismatch { .. } => "component_mismatch",
            Error::Periodic(_) => "periodic",
            Error::KahnViolation(_) => "kahn_violation",
            Error::InvalidGeometry(_) => "invalid_geometry",
            Error::InvalidTpq { .. } => "invalid_tpq",
            Error::GeometryMismatch => "geometry_mismatch",
            Error::FreeModule => "free_module",
            Error::NonPositive { .. } => "non_positive",
            Error::Parse(_) => "parse",
        }
    }
}
