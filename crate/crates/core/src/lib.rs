//! Leitmotif discovery in multivariate time series.
//!
//! A leitmotif is a set of `k` mutually similar, pairwise non-overlapping
//! subsequences of length `l` that manifest in a jointly selected subset of
//! `f` out of `d` dimensions. This crate holds the allocation-only core:
//! sliding statistics, the four subsequence distance measures with a
//! rolling-dot-product distance matrix, non-trivial k-NN extraction, the
//! joint candidate search with admissible pruning, extent-function based
//! parameter learning, and a two-pass sparse distance store for long series.
//!
//! The crate is `no_std` (it needs `alloc`). The default `parallel` feature
//! uses rayon for the quadratic kernels and the query loop; results do not
//! depend on the thread count.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distance;
mod error;
pub mod knn;
pub mod lama;
pub mod learn;
pub mod series;
pub mod sparse;

pub use distance::{
    pairwise_matrix, pairwise_matrix_with_budget, DenseDistanceMatrix, DistanceMeasure, DistanceSource,
};
pub use error::{CoreError, Result};
pub use knn::{non_trivial_arg_knn, KnnRow, KnnTable};
pub use lama::{lama, CandidateSource, LamaConfig, LamaOutput, LamaStats, Leitmotif};
pub use learn::{
    extent_function, find_elbows, learn_length, learn_parameters, Elbows, ExtentFunction, LearnConfig,
    LearnedParameters, LengthChoice, LengthProfile, LengthSweep,
};
pub use series::{
    is_overlapping, pairwise_disjoint, sliding_mean_std, MultivariateTimeSeries, OverlapRule, SlidingStats,
};
pub use sparse::{build_sparse, SparseDistanceStore};
