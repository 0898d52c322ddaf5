use thiserror::Error;

use rectgf::potential::SpecFileError;

/// Failures that end a command, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Solver(String),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<rectgf::Error> for CliError {
    fn from(e: rectgf::Error) -> Self {
        use rectgf::Error as E;
        match e {
            E::InvalidSpec(_)
            | E::NonFinite(_)
            | E::Region { .. }
            | E::Geometry(_)
            | E::Config(_) => CliError::Spec(e.to_string()),
            E::NonConvergence { .. }
            | E::SingularSystem { .. }
            | E::ResonanceSingularity
            | E::AtPole { .. }
            | E::DegenerateThreshold { .. } => CliError::Solver(e.to_string()),
        }
    }
}

impl From<SpecFileError> for CliError {
    fn from(e: SpecFileError) -> Self {
        CliError::Spec(format!("spec file: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(format!("json: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let spec: CliError = rectgf::Error::InvalidSpec("x".into()).into();
        assert_eq!(spec.exit_code(), 2);
        let region: CliError = rectgf::Error::Region {
            x: 1.0,
            found: 0,
            expected: "inside",
        }
        .into();
        assert_eq!(region.exit_code(), 2);
        let stuck: CliError = rectgf::Error::NonConvergence {
            n: 3,
            residual: 1.0,
        }
        .into();
        assert_eq!(stuck.exit_code(), 3);
        let parse: CliError = SpecFileError::Parse {
            line: 2,
            column: 5,
            message: "eof".into(),
        }
        .into();
        assert_eq!(parse.exit_code(), 2);
        assert!(parse.to_string().contains("line 2, column 5"));
    }
}
