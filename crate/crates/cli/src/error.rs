use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] monocorr::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Library(e) => match e {
                monocorr::Error::Input(_) => "input",
                monocorr::Error::DimensionMismatch { .. } => "dimension_mismatch",
                monocorr::Error::CoordinateOutOfRange { .. } => "coordinate_out_of_range",
                monocorr::Error::Kind { .. } => "kind",
                monocorr::Error::Domain { .. } => "domain",
                monocorr::Error::Degenerate(_) => "degenerate",
                monocorr::Error::Precondition(_) => "precondition",
                monocorr::Error::TooLarge { .. } => "too_large",
            },
        }
    }

    /// Single-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}}).to_string()
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
