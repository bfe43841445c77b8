//! Reconstruction codes for the single-deletion single-substitution
//! channel.
//!
//! A codeword `x` of length `n` passes through a channel that deletes one
//! symbol and may flip one other. The set of possible outputs is the error
//! ball `B(x)`. A code is an `(n, N; B)`-reconstruction code when any two
//! codewords share fewer than `N` outputs, so `N` distinct reads pin down
//! the codeword.
//!
//! Modules, bottom up:
//! - [`seq`]: packed binary sequences, runs, syndromes and the differential.
//! - [`ball`]: error balls and their pairwise intersections.
//! - [`confusability`]: the eighteen-way structure of `B(x) ∩ B(y)`.
//! - [`codes`]: syndrome-defined code families and exhaustive enumeration.
//! - [`delta`]: how each error moves the first-order syndrome of `ψ`.
//! - [`reconstruct`]: the channel, read sampling and decoding.
//! - [`verify`]: exhaustive checks producing structured reports.

pub mod ball;
pub mod codes;
pub mod confusability;
pub mod delta;
pub mod error;
pub mod reconstruct;
pub mod seq;
pub mod verify;

pub use ball::BallView;
pub use codes::{CodeSpec, Family, Residues, Structural};
pub use error::{Error, Result};
pub use seq::{BinSeq, ErrorOp};
