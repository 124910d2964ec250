//! Heat flow and Li-Yau/Harnack diagnostics on Finsler tori.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod harnack;
pub mod heat;
pub mod linalg;
pub mod liyau;
pub mod metric;
pub mod numerics;
pub mod semigroup;

pub use error::{Error, Result};
