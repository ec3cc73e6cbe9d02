use crate::latent::Shape;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: Shape, got: Shape },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    /// A velocity evaluation or an integration step failed at time `t`.
    #[error("sampling failed at t = {t}: {reason}")]
    Field { t: f64, reason: String },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
        if (0.0..=1.0).contains(&value) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name,
                value,
                range: "[0, 1]",
            })
        }
    }

    /// True for failures caused by numbers (as opposed to malformed inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonFinite(_) | Error::Field { .. } | Error::Domain(_))
    }
}
