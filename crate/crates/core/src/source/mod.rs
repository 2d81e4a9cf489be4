//! The source language: well-formedness, superclass closure, instance
//! resolution and bidirectional typing, each elaborating judgment written
//! twice. `to_fd` produces explicit-dictionary terms, `to_tgt` produces
//! System F terms directly; the two share no elaboration code.

mod alts;
mod env;
mod program;
mod relations;
mod rules;
mod to_fd;
mod to_tgt;

use std::fmt;

pub use alts::Alts;
pub use env::{ClassEntry, ClassEnv, ProgramCtx, ProgramEntry, SrcBinding, TypingEnv};
pub use program::{
    resolve_names, typecheck_class, typecheck_instance, typecheck_program, FdProgramElab, ProgramTyping,
};
pub use relations::{
    closure, elab_constraint_fd, elab_constraint_tgt, elab_type_fd, elab_type_tgt, match_mono, unambig_constraint,
    unambig_scheme, unify_mono,
};
pub use to_fd::{check_fd, elab_env, entail_fd, infer_fd, FdEnvElab};
pub use to_tgt::{check_tgt, elab_env_tgt, entail_tgt, infer_tgt, TgtElaborator};

use crate::syntax::SrcMono;

/// Bounds on the enumeration of derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_resolution_depth: usize,
    pub max_elaborations: usize,
}

impl Limits {
    pub const DEFAULT_DEPTH: usize = 32;
    pub const DEFAULT_ELABORATIONS: usize = 256;

    pub fn new(max_resolution_depth: usize, max_elaborations: usize) -> Self {
        Limits { max_resolution_depth: max_resolution_depth.max(1), max_elaborations: max_elaborations.max(1) }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::new(Self::DEFAULT_DEPTH, Self::DEFAULT_ELABORATIONS)
    }
}

/// Every elaboration of one typing judgment, in derivation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabSet<T> {
    pub ty: SrcMono,
    pub alternatives: Vec<T>,
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SrcErrorKind {
    UnboundVar,
    UnboundTyVar,
    UnknownClass,
    DuplicateClass,
    DuplicateMethod,
    WrongMethod,
    Mismatch,
    NotInferable,
    Unsatisfiable,
    Ambiguity,
    Overlap,
    MethodShadowing,
    Rebinding,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SrcTypeError {
    pub kind: SrcErrorKind,
    pub message: String,
}

impl SrcTypeError {
    pub fn new(kind: SrcErrorKind, message: impl Into<String>) -> Self {
        SrcTypeError { kind, message: message.into() }
    }
}

impl fmt::Display for SrcTypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type SrcResult<T> = Result<T, SrcTypeError>;
