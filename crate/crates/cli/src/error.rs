use biclab_core::bic::BicError;
use biclab_core::dressing::DressingError;
use biclab_core::microscopic::MicroError;
use biclab_core::oracle::OracleError;
use biclab_core::params::ValidationError;
use biclab_core::spectrum::SpectrumError;
use biclab_core::EigenError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Validation(#[from] ValidationError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<BicError> for CliError {
    fn from(e: BicError) -> Self {
        match e {
            BicError::DegenerateVector(_) | BicError::SingularSolve(_) => CliError::Degenerate(e.to_string()),
            BicError::NonPositiveDecay { .. } => CliError::Config(e.to_string()),
            BicError::Eigen(e) => e.into(),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::InvalidGrid(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MicroError> for CliError {
    fn from(e: MicroError) -> Self {
        match e {
            MicroError::ZeroWidth | MicroError::ZeroCross(_) => CliError::Degenerate(e.to_string()),
            MicroError::InvalidModel(_) => CliError::Config(e.to_string()),
            MicroError::Quadrature(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::GridCoverage { .. } | OracleError::ProbeOnSpectrum(_) | OracleError::InvalidGrid(_) => {
                CliError::Config(e.to_string())
            }
            OracleError::Micro(m) => m.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<DressingError> for CliError {
    fn from(e: DressingError) -> Self {
        match e {
            DressingError::DegenerateDressing => CliError::Degenerate(e.to_string()),
            DressingError::ZeroLinewidth => CliError::Config(e.to_string()),
        }
    }
}
