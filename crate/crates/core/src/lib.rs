pub mod census;
pub mod classifier;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod obstruction;
pub mod sweep;
pub mod threefold;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, SurfaceModel};
