//! Kostka cone, Kostka polytope and their face and Hilbert basis structure.

pub mod counting;
pub mod error;
pub mod euler;
pub mod faces;
pub mod hilbert;
pub mod linalg;
pub mod partition;
pub mod rays;

pub use error::{Error, Result};
pub use faces::{FaceVertexSet, KostkaPolytope, Limits, OrderClass};
pub use partition::{ConePoint, Partition};
pub use rays::{FacetId, FacetKind, RayLabel};
