//! Command-line front end for `nvsqueeze`: TOML configs, figure presets,
//! parallel sweeps with CSV/JSON output, and the validation suites.

pub mod config;
pub mod output;
pub mod presets;
pub mod sweep;
pub mod validate;

/// Worker-count override for sweeps.
pub const ENV_THREADS: &str = "NVSQ_THREADS";
/// Directory for outputs written without an explicit `--out`.
pub const ENV_OUT_DIR: &str = "NVSQ_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Figure(#[from] presets::UnknownFigure),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Figure(_) | CliError::Params(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<nvsqueeze::Error> for CliError {
    fn from(e: nvsqueeze::Error) -> Self {
        use nvsqueeze::Error as E;
        match e {
            E::InvalidParams(_) | E::InvalidRates { .. } | E::NoResonance(_) => CliError::Params(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
