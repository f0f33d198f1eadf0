use thiserror::Error;

/// Errors raised by the library.
///
/// The three variants map one-to-one onto the CLI exit codes: usage errors
/// exit with 2, numerical failures with 3. Domain errors carry a certificate
/// and are reported as usage errors by the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        /// Free-form diagnostics (condition numbers, iterate counts, residuals).
        diagnostics: Vec<(String, f64)>,
    },

    #[error("point outside the convex hull: {message}")]
    Infeasible {
        message: String,
        /// Affine functional `normal · v <= offset` satisfied by every vertex
        /// and violated by the query point.
        normal: Vec<f64>,
        offset: f64,
    },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn numerical(msg: impl Into<String>, diagnostics: Vec<(&str, f64)>) -> Self {
        Error::Numerical {
            message: msg.into(),
            diagnostics: diagnostics
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
