//! Abstract syntax for the source, intermediate and target languages.

pub mod alpha;
pub mod fd;
pub mod fresh;
pub mod pretty;
pub mod src;
pub mod tgt;

pub type Name = String;

pub use alpha::{alpha_eq, dedup_alpha, Alpha};
pub use fd::*;
pub use fresh::{prime_away, prime_away_set, FreshSupply, Namespace};
pub use src::*;
pub use tgt::*;
