use thiserror::Error;

/// Errors produced by the analysis and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical quantity violated a strict-positivity precondition.
    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: f64 },

    /// A value was structurally invalid for its role.
    #[error("invalid {what}: {message}")]
    Invalid {
        what: &'static str,
        message: String,
    },

    /// The selection window contains no candidate resources.
    #[error("selection window contains no candidate resources")]
    EmptySelectionWindow,

    /// Resource selection was attempted on an empty available set.
    #[error("no resource available for allocation")]
    AllocationFailed,

    /// The requested in-slot guard exceeds what a single slot can hold.
    #[error("guard budget exceeded: {needed} extra guard symbols requested, at most {max} fit in a slot")]
    GuardBudget { needed: u32, max: u32 },

    /// Scenario file parse or validation failure, with a line diagnostic.
    #[error("scenario line {line}: {message}")]
    Scenario { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            message: message.into(),
        }
    }

    pub(crate) fn scenario(line: usize, message: impl Into<String>) -> Self {
        Error::Scenario {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
