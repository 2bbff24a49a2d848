//! Error type shared by the whole crate.
//!
//! Variants are grouped by how they should be reported: syntax errors carry a
//! position (byte offset in a literal, line number in a file), semantic errors
//! carry a message, and the two "give up" conditions (resource caps and
//! insufficient construction heights) are separate so callers can map them to
//! distinct exit codes.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while parsing, validating or running automata.
#[derive(Error, Debug)]
pub enum Error {
    /// Malformed tree/context literal; `offset` is a byte offset into the input.
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    /// Malformed automaton or table file; `line` is 1-based.
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },

    /// Structurally well-formed input that violates a semantic requirement
    /// (unknown state, non-total transition table, incompatible alphabets, ...).
    #[error("{0}")]
    Invalid(String),

    /// An enumeration or construction exceeded its configured cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Bounded Myhill-Nerode synthesis could not certify an automaton at the
    /// requested heights; the payload names the offending tree (and context).
    #[error("insufficient heights: {detail} (tree: {tree}{})",
            .context.as_deref().map(|c| format!(", context: {c}")).unwrap_or_default())]
    InsufficientHeights {
        tree: String,
        context: Option<String>,
        detail: String,
    },

    /// I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// Shorthand for [`Error::Invalid`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Shorthand for [`Error::Syntax`].
    pub fn syntax(offset: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            msg: msg.into(),
        }
    }

    /// Shorthand for [`Error::File`].
    pub fn file(line: usize, msg: impl Into<String>) -> Self {
        Error::File {
            line,
            msg: msg.into(),
        }
    }
}
