//! Executable checks over whole programs: coherence of all elaborations,
//! agreement of the two elaboration routes, and type safety along
//! evaluation traces.

mod coherence;
mod decompose;
mod gen;
mod meta;

use thiserror::Error;

pub use coherence::{check_coherence, value_preservation, CoherenceReport};
pub use decompose::{check_decomposition, composed_elaborations, DecompositionReport};
pub use gen::generate_fd_term;
pub use meta::{check_metatheory, MetaReport};

use crate::fd::FdTypeError;
use crate::fuel::{EvalError, Fuel};
use crate::source::{Limits, SrcTypeError};
use crate::syntax::SrcMono;
use crate::target::TgtTypeError;

/// How independent elaborations are processed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled; sequential otherwise.
    #[default]
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessOptions {
    pub limits: Limits,
    pub fuel: u64,
    pub strategy: Strategy,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { limits: Limits::default(), fuel: Fuel::DEFAULT, strategy: Strategy::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Source(#[from] SrcTypeError),
    #[error("intermediate typing failed: {0}")]
    Fd(#[from] FdTypeError),
    #[error("target typing failed: {0}")]
    Tgt(#[from] TgtTypeError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("main has type `{0}`, expected `Bool`")]
    NotBool(SrcMono),
}

/// Maps `f` over `items`, keeping input order whatever the strategy.
pub(crate) fn map_ordered<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_map_agrees_across_strategies() {
        let xs: Vec<u32> = (0..200).collect();
        let seq = map_ordered(Strategy::Sequential, &xs, |x| x * 3);
        let par = map_ordered(Strategy::Parallel, &xs, |x| x * 3);
        assert_eq!(seq, par);
    }
}
