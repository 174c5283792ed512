//! Ramsey-type numbers for difference sets: exact backtracking search,
//! explicit avoiding colorings (doubling blocks, Beatty parities,
//! nested-interval slopes), analytic lower bounds, and machine-checkable
//! avoidance certificates tying the two together.
//!
//! A *diffsequence* for a gap set `D` is an increasing sequence of positive
//! integers whose consecutive differences all lie in `D`. Everything here
//! revolves around the smallest `n` such that every 2-coloring of `[1..n]`
//! contains a monochromatic diffsequence of a given length — computing it
//! exactly when feasible, and bounding it from below with certified
//! colorings otherwise.

pub mod analysis;
pub mod bits;
pub mod bounds;
pub mod coloring;
pub mod dividing;
pub mod error;
pub mod exactreal;
pub mod gapset;
pub mod solver;

pub use analysis::{Certificate, DiffseqWitness, VerifyOutcome};
pub use bits::Bits;
pub use coloring::{Coloring, ColoringDescriptor};
pub use error::{Error, Result};
pub use exactreal::AlphaValue;
pub use gapset::GapSet;
pub use solver::{SolverConfig, SolverResult};
