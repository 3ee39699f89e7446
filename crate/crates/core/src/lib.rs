pub mod cli;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod fsc;
pub mod gf;
pub mod groupsearch;
mod linalg;
pub mod partition_code;
pub mod simulator;
pub mod storage;
pub mod subspace;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use linalg::gaussian_binomial;
pub use subspace::{Subspace, Vector};
