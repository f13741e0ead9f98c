use thiserror::Error;

/// Errors raised by the numerical routines and the link model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Meijer-G specification or parameter set could not be built.
    #[error("invalid construction: {0}")]
    Construction(String),

    /// An iterative or adaptive procedure ran out of budget before reaching
    /// its tolerance. `partial` is the best estimate available at that point
    /// and `achieved` the error estimate attached to it.
    #[error("{what} did not converge: estimate {partial:e}, achieved error {achieved:e}")]
    Convergence {
        what: &'static str,
        partial: f64,
        achieved: f64,
    },

    /// Modulation name not listed in the BER parameter table.
    #[error("unsupported modulation scheme {0:?}; supported schemes: cbpsk, nbfsk")]
    UnsupportedScheme(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn construction(msg: impl Into<String>) -> Error {
    Error::Construction(msg.into())
}
