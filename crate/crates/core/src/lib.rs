#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod quad;
pub mod rearrange;
pub mod sandbox;
pub mod spaces;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
