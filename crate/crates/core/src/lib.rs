//! Combinatorics, sampling and list-decodability checks for random
//! rank-metric codes over finite fields.
//!
//! Counts are exact big integers, radii are exact fractions, and every
//! random draw is reproducible from a `(master_seed, trial_index)` pair.

pub mod chains;
pub mod cli;
pub mod codes;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod fraction;
pub mod gf;
pub mod matgf;
pub mod sampling;

pub use error::{Error, Result};

/// Arbitrary-precision non-negative count.
pub type BigCount = num_bigint::BigUint;
/// Exact rational used for radii, rates and distances.
pub type Rational = num_rational::BigRational;
