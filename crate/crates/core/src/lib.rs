//! Facet-count upper bounds for Dirichlet stereohedra of the eight quarter
//! cubic space groups, by pruning an auxiliary tessellation.

pub mod catalog;
pub mod error;
pub mod export;
pub mod geometry;
pub mod influence;
pub mod oracle;
pub mod projection;
pub mod pruning;
pub mod report;
pub mod tessellation;

pub use error::{Error, Result};
