use serde::Serialize;
use thiserror::Error;

use crate::syntax::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Error {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("unsupported feature at {span}: {feature}")]
    Unsupported { span: Span, feature: String },
    #[error("budget exceeded: {what}")]
    BudgetExceeded { what: String },
}

impl Error {
    pub fn syntax(span: Span, message: impl Into<String>) -> Error {
        Error::Syntax {
            span,
            message: message.into(),
        }
    }

    pub fn unsupported(span: Span, feature: impl Into<String>) -> Error {
        Error::Unsupported {
            span,
            feature: feature.into(),
        }
    }

    pub fn budget(what: impl Into<String>) -> Error {
        Error::BudgetExceeded { what: what.into() }
    }

    /// Short machine-readable reason used in skip records.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::Unsupported { .. } => "unsupported",
            Error::BudgetExceeded { .. } => "budget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
