//! Type class elaboration through an explicit-dictionary calculus.
//!
//! Source programs with single-parameter type classes are elaborated along
//! two independent routes into System F with records: directly, and through
//! an intermediate language with first-class dictionaries. The `harness`
//! module checks that every elaboration of a program means the same thing.

pub mod fd;
pub mod fuel;
pub mod harness;
pub mod parser;
pub mod source;
pub mod syntax;
pub mod target;
