use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or root finder stopped before reaching its tolerance.
    #[error("accuracy error: {what} reached {achieved:e}, needed {required:e}")]
    Accuracy {
        what: &'static str,
        achieved: f64,
        required: f64,
    },

    /// Bisection could not isolate an eigenvalue.
    #[error("eigensolver failed for eigenvalue {index}: interval [{lo:e}, {hi:e}]")]
    Eigensolver { index: usize, lo: f64, hi: f64 },

    /// A time step produced a non-finite state.
    #[error("integration error at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("invalid experiment: {0}")]
    Experiment(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
