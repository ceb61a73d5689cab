use std::fmt;

use crate::surface::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorKind {
    UnboundVariable,
    ContextMisuse,
    ModeMismatch,
    TypeMismatch,
    EffectViolation,
    OpmViolation,
    DecompositionFailure,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 7] = [
        ErrorKind::UnboundVariable,
        ErrorKind::ContextMisuse,
        ErrorKind::ModeMismatch,
        ErrorKind::TypeMismatch,
        ErrorKind::EffectViolation,
        ErrorKind::OpmViolation,
        ErrorKind::DecompositionFailure,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::UnboundVariable => "unbound-variable",
            ErrorKind::ContextMisuse => "context-misuse",
            ErrorKind::ModeMismatch => "mode-mismatch",
            ErrorKind::TypeMismatch => "type-mismatch",
            ErrorKind::EffectViolation => "effect-violation",
            ErrorKind::OpmViolation => "opm-violation",
            ErrorKind::DecompositionFailure => "decomposition-failure",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl TypeError {
    pub fn new(kind: ErrorKind, span: Span, message: impl Into<String>) -> TypeError {
        TypeError {
            kind,
            span,
            message: message.into(),
            expected: None,
            actual: None,
        }
    }

    pub fn with(mut self, expected: impl fmt::Display, actual: impl fmt::Display) -> TypeError {
        self.expected = Some(expected.to_string());
        self.actual = Some(actual.to_string());
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            write!(f, " (expected {e}, found {a})")?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}
