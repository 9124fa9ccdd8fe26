use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use logiclab_core::formula::FormulaError;
use logiclab_core::puzzle::PuzzleError;
use logiclab_core::rewrite::DeriveError;
use logiclab_core::sat::CnfError;
use logiclab_core::semantics::SemanticsError;

/// The closed set of error codes reported by the service and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    MalformedRequest,
    UnknownEndpoint,
    MethodNotAllowed,
    ParseError,
    ArityMismatch,
    SortMismatch,
    LogicMismatch,
    TooManyAtoms,
    BudgetExceeded,
    NotASentence,
    InvalidSyllogism,
    SemanticsError,
    CnfBlowup,
    NotEquivalent,
    InvalidPuzzle,
    Contradiction,
    InternalError,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 17] = [
        ErrorCode::MalformedRequest,
        ErrorCode::UnknownEndpoint,
        ErrorCode::MethodNotAllowed,
        ErrorCode::ParseError,
        ErrorCode::ArityMismatch,
        ErrorCode::SortMismatch,
        ErrorCode::LogicMismatch,
        ErrorCode::TooManyAtoms,
        ErrorCode::BudgetExceeded,
        ErrorCode::NotASentence,
        ErrorCode::InvalidSyllogism,
        ErrorCode::SemanticsError,
        ErrorCode::CnfBlowup,
        ErrorCode::NotEquivalent,
        ErrorCode::InvalidPuzzle,
        ErrorCode::Contradiction,
        ErrorCode::InternalError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::MalformedRequest => "malformed_request",
            ErrorCode::UnknownEndpoint => "unknown_endpoint",
            ErrorCode::MethodNotAllowed => "method_not_allowed",
            ErrorCode::ParseError => "parse_error",
            ErrorCode::ArityMismatch => "arity_mismatch",
            ErrorCode::SortMismatch => "sort_mismatch",
            ErrorCode::LogicMismatch => "logic_mismatch",
            ErrorCode::TooManyAtoms => "too_many_atoms",
            ErrorCode::BudgetExceeded => "budget_exceeded",
            ErrorCode::NotASentence => "not_a_sentence",
            ErrorCode::InvalidSyllogism => "invalid_syllogism",
            ErrorCode::SemanticsError => "semantics_error",
            ErrorCode::CnfBlowup => "cnf_blowup",
            ErrorCode::NotEquivalent => "not_equivalent",
            ErrorCode::InvalidPuzzle => "invalid_puzzle",
            ErrorCode::Contradiction => "contradiction",
            ErrorCode::InternalError => "internal_error",
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            ErrorCode::MalformedRequest => 400,
            ErrorCode::UnknownEndpoint => 404,
            ErrorCode::MethodNotAllowed => 405,
            ErrorCode::InternalError => 500,
            _ => 422,
        }
    }

    /// Exit status for the CLI: 2 for usage and syntax problems, 1 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::MalformedRequest
            | ErrorCode::UnknownEndpoint
            | ErrorCode::MethodNotAllowed
            | ErrorCode::ParseError
            | ErrorCode::ArityMismatch
            | ErrorCode::SortMismatch
            | ErrorCode::LogicMismatch => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    /// Byte offset into the offending input, for syntax errors.
    pub position: Option<usize>,
    /// Which request field the offset refers to.
    pub field: Option<String>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            position: None,
            field: None,
        }
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        ApiError::new(ErrorCode::MalformedRequest, message)
    }

    pub fn in_field(mut self, field: &str) -> Self {
        self.field = Some(field.to_string());
        self
    }

    pub fn envelope(&self) -> Value {
        let mut error = json!({
            "code": self.code.as_str(),
            "message": self.message,
            "position": self.position,
        });
        if let Some(field) = &self.field {
            error["field"] = json!(field);
        }
        json!({ "ok": false, "error": error })
    }
}

impl From<FormulaError> for ApiError {
    fn from(e: FormulaError) -> Self {
        let code = match e {
            FormulaError::Parse(_) => ErrorCode::ParseError,
            FormulaError::ArityMismatch { .. } => ErrorCode::ArityMismatch,
            FormulaError::SortMismatch { .. } => ErrorCode::SortMismatch,
        };
        ApiError {
            position: Some(e.offset()),
            ..ApiError::new(code, e.to_string())
        }
    }
}

impl From<SemanticsError> for ApiError {
    fn from(e: SemanticsError) -> Self {
        let code = match e {
            SemanticsError::TooManyAtoms { .. } => ErrorCode::TooManyAtoms,
            SemanticsError::BudgetExceeded { .. } => ErrorCode::BudgetExceeded,
            SemanticsError::NotASentence(_) => ErrorCode::NotASentence,
            SemanticsError::UnknownMood(_) | SemanticsError::InvalidSyllogism(_) => ErrorCode::InvalidSyllogism,
            _ => ErrorCode::SemanticsError,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<CnfError> for ApiError {
    fn from(e: CnfError) -> Self {
        ApiError::new(ErrorCode::CnfBlowup, e.to_string())
    }
}

impl From<PuzzleError> for ApiError {
    fn from(e: PuzzleError) -> Self {
        let code = match e {
            PuzzleError::InvalidSpec(_) => ErrorCode::InvalidPuzzle,
            PuzzleError::ContradictionDetected { .. } | PuzzleError::ValueUnplaceable { .. } => {
                ErrorCode::Contradiction
            }
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<DeriveError> for ApiError {
    fn from(e: DeriveError) -> Self {
        match e {
            DeriveError::LogicMismatch => ApiError::new(ErrorCode::LogicMismatch, e.to_string()),
            DeriveError::NotEquivalent { ref witness, bounded } => {
                let mut message = e.to_string();
                if let Some(w) = witness {
                    message.push_str(&format!("; they differ at {}", crate::render::witness(w)));
                }
                if bounded {
                    message.push_str(" (bounded check)");
                }
                ApiError::new(ErrorCode::NotEquivalent, message)
            }
            DeriveError::Semantics(s) => s.into(),
        }
    }
}
