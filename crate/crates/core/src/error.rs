use crate::ComplexScalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Arguments outside the region where the requested formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments the implementation deliberately does not support.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Two independent reference evaluations disagreed beyond their bounds.
    #[error(
        "cross-check failure: {primary_method} gave {primary} (bound {primary_bound:e}), \
         {secondary_method} gave {secondary} (bound {secondary_bound:e})"
    )]
    CrossCheck {
        primary_method: String,
        primary: ComplexScalar,
        primary_bound: f64,
        secondary_method: String,
        secondary: ComplexScalar,
        secondary_bound: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
