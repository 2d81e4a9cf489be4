//! Step budgets shared by the two evaluators.

use thiserror::Error;

/// Remaining small steps; decremented once per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    pub remaining: u64,
}

impl Fuel {
    pub const DEFAULT: u64 = 100_000;

    pub fn new(remaining: u64) -> Self {
        Fuel { remaining }
    }

    /// Takes one step's worth of fuel; false when none is left.
    pub fn burn(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(Self::DEFAULT)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64 },
    #[error("evaluation stuck at non-value `{term}`")]
    Stuck { term: String },
}
