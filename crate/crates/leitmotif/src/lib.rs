//! Leitmotif discovery on files: CSV series in, JSON records and tables out,
//! plus synthetic benchmarks with ground truth and precision/recall scoring.

pub mod bench;
pub mod cli;
pub mod io;

pub use leitmotif_core as core;
