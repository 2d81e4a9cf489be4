//! The intermediate language: typing with simultaneous elaboration to the
//! target, dictionary typing, environment well-formedness and evaluation.

mod elab;
mod eval;
mod typeck;
mod wf;

use std::fmt;

pub use elab::{dict_target_name, elab_fd_env, elab_fd_q, elab_fd_type};
pub use eval::{fd_eval, fd_eval_counted, fd_step};
pub use typeck::{fd_typecheck_dict, fd_typecheck_expr, FdChecker};
pub use wf::{fd_env_wf, unify_heads};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FdErrorKind {
    UnboundVar,
    UnboundTyVar,
    UnboundDict,
    UnknownConstructor,
    UnknownMethod,
    Mismatch,
    ArityMismatch,
    Overlap,
    Ambiguity,
    PrefixViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct FdTypeError {
    pub kind: FdErrorKind,
    pub detail: String,
    /// Path from the root of the checked term to the offending node.
    pub location: Vec<&'static str>,
}

impl FdTypeError {
    pub fn new(kind: FdErrorKind, detail: impl Into<String>) -> Self {
        FdTypeError { kind, detail: detail.into(), location: Vec::new() }
    }

    pub(crate) fn at(mut self, segment: &'static str) -> Self {
        self.location.insert(0, segment);
        self
    }
}

impl fmt::Display for FdTypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)?;
        if !self.location.is_empty() {
            write!(f, " (at {})", self.location.join("."))?;
        }
        Ok(())
    }
}
