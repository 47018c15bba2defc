use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("invalid input: {0}")]
    Parse(String),

    #[error(transparent)]
    Math(#[from] krein_core::Error),
}

impl CliError {
    /// 2 for unreadable or malformed input, structural errors and invalid
    /// arguments, 3 for failures raised by the numerical routines.
    pub fn exit_code(&self) -> i32 {
        use krein_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Math(E::Usage(_) | E::Dimension(_) | E::NotSymmetric { .. } | E::NotInvolution(_)) => 2,
            CliError::Math(_) => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use krein_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Parse("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::NotSymmetric { defect: 1.0 }).exit_code(), 2);
        assert_eq!(CliError::from(E::Usage("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(E::NotJSelfadjoint { defect: 1.0 }).exit_code(), 3);
        assert_eq!(CliError::from(E::Numerical("x".into())).exit_code(), 3);
    }
}
