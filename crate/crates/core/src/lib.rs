pub mod brenner_solver;
pub mod dmv_verifier;
pub mod error;
pub mod experiments;
pub mod field;
pub mod nsf_solver;
pub mod relative_energy;
mod scheme;
pub mod thermodynamics;
pub mod young_measure;

pub use error::{Error, Result};
pub use scheme::z_m;
