#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comm;
pub mod compute;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod metrology;
pub mod optics;
pub mod photon_stats;
pub mod register;
pub mod rng;

pub use error::{Error, Result};
