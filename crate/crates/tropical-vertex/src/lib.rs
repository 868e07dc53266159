//! Exact scattering diagrams valued in the extended tropical vertex group.

pub mod coeff;
pub mod error;
pub mod lattice;
pub mod gw;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod perturbation;
pub mod poly;
pub mod rational;
pub mod scattering;
pub mod series;
pub mod tropical;
pub mod svg;
pub mod cli;
pub mod wcf;

pub use error::{Error, Result};
