//! Exact construction and verification of a rank-3 pair of commuting
//! ordinary differential operators attached to a genus-2 curve.

pub mod error;
pub mod cli;
pub mod curve;
pub mod diffop;
pub mod exact;
pub mod kncheck;
pub mod opdata;
pub mod pipeline;

pub use error::{Error, Result};
