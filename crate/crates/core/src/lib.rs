//! Finite combinatorics of largeness relative to a bounded sentence `T`.
//!
//! The crate checks and extracts witnesses for `ω^n·k`-largeness(T), groupings,
//! Ramsey-type statements and a family of minimal large sets with a coloring
//! that defeats homogeneous large subsets. Every search returns a certificate
//! that an independent checker can replay.

pub mod coloring;
pub mod error;
pub mod finset;
pub mod formula;
pub mod grouping;
pub mod largeness;
pub mod lowerbound;
pub mod nat;
pub mod outcome;
pub mod ramsey;
pub mod registry;
pub mod sparsity;

pub use coloring::{Color, ColoringTable};
pub use error::{Error, Result};
pub use finset::FinSet;
pub use nat::Nat;
pub use outcome::{Budget, Outcome, Verdict};
pub use sparsity::SparsityPolicy;
