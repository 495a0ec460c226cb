//! Trade-based LDPC code construction.
//!
//! The pipeline starts from a super-simple directed block design, detects its
//! volume-2 trades, and turns the traded pairs into a sparse parity-check
//! matrix whose Tanner girth is twice the shortest cyclical trade. The same
//! trade-based matrix seeds two derived families: multiple-edge QC-LDPC codes
//! (base matrices from row-shifted copies, exponent matrices found by a
//! replication-aware backtracking search) and time-varying terminated
//! SC-LDPC codes (row-partition schedules validated block pair by block
//! pair). A sum-product simulator measures decoding performance over the
//! binary-input AWGN channel.
//!
//! Modules follow the pipeline: [`design`] and [`trades`] model the
//! combinatorics, [`builder`] produces the matrices, [`tanner`] measures
//! girth, [`qc`] and [`sc`] derive the two code families, [`sim`] decodes,
//! and [`alist`] reads and writes the interchange format.

pub mod alist;
pub mod builder;
pub mod design;
mod error;
pub mod matrix;
pub mod qc;
pub mod sc;
pub mod sim;
pub mod tanner;
pub mod trades;

pub use error::{Error, Result};
