use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<cpgraphene::Error> for CliError {
    fn from(e: cpgraphene::Error) -> Self {
        use cpgraphene::Error as E;
        let msg = e.to_string();
        match e {
            _ if e.is_numerical() => CliError::Numerical(msg),
            E::Domain(_) | E::UnknownAtom { .. } | E::UnknownMaterial { .. } => CliError::Config(msg),
            _ => CliError::Data(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
