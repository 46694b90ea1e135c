use thiserror::Error;

/// Errors across the parse / analyze / rewrite / evaluate pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("duplicate name: {0}")]
    DuplicateName(String),

    #[error("unknown index symbol: {0}")]
    UnknownIndexSymbol(String),

    #[error("non-total index match: missing {}", missing.join(", "))]
    NonTotalIndexMatch { missing: Vec<String> },

    #[error("call cycle: {}", members.join(" -> "))]
    CycleDetected { members: Vec<String> },

    #[error("call to unknown definition: {0}")]
    UnboundCallee(String),

    #[error("unbound extern: {0}")]
    UnboundExtern(String),

    #[error("name collision: {0}")]
    NameCollision(String),

    #[error("unbound name: {0}")]
    UnboundName(String),

    #[error("arity mismatch calling {name}: expected {expected}, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("extern {0} has no body to evaluate")]
    ExternWithoutBody(String),
}

impl SpecError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> SpecError {
        SpecError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}
