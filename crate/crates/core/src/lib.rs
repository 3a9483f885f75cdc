//! Incremental-deployability toolkit for finite games.
//!
//! The crate covers the multiplicative-weights (Hedge) dynamic and its
//! entropy diagnostics, sampled checkers for polyorder and stability
//! notions, the Gale-Kuhn-Tucker reduction from bimatrix to symmetric games,
//! deployment-graph analysis of pure profiles, and stag-hunt coordination
//! mechanisms (insurance and election).

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod deployment;
pub mod error;
pub mod experiments;
pub mod game;
pub mod hedge;
pub mod mechanisms;
pub mod polyorders;
pub mod rng;
pub mod symmetrize;

pub use error::{Error, Result};
