//! Ramsey-like statements over large sets: largeness and density relative to
//! a statement, transitive and homogeneous extraction for pair colorings, and
//! the table of explicit bounds.

pub mod ads;
pub mod bounds;
pub mod density;
pub mod em;

pub use ads::{
    ads_extract, ads_q_coloring, q_value, successor_registry, AdsRoute, AdsWitness, Length,
    LongIntervals, QValue, SuccessorReading,
};
pub use bounds::{bounds_row, bounds_table, to_tsv, BoundsRow};
pub use density::{
    coloring_count, is_large_gamma, is_n_dense, nth_coloring, Answer, DensityMode, DensityParams,
};
pub use em::{em_extract, EmConfig, EmFailure, EmWitness, FailureKind};
