//! Exact discrepancy of the base-2 Van der Corput sequence.
//!
//! The scaled discrepancy `d_N = N·D_N` is computed three independent ways
//! (a distance-to-nearest-integer series, a divide-and-conquer recurrence,
//! and a brute-force evaluation over the sorted points), and the crate
//! checks the structure around it exhaustively at desk scale: upper bounds
//! and their extremal points, block-count sandwiches, the exact doubling law
//! of the summatory function with its periodic fluctuation, and invariance
//! under binary digit reversal for a whole family of recurrences.
//!
//! Start with [`vdc`]; the runnable programs under `examples/` walk
//! through each area.

pub mod cli;
pub mod error;
pub mod fluctuation;
pub mod irregularity;
pub mod numerics;
pub mod pairs;
pub mod report;
pub mod reversal;
pub mod sweep;
pub mod vdc;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{BinaryWord, Dyadic, Interval, Rational};
pub use report::{Check, Witness};
