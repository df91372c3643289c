//! Floor diagrams relative to a conic, and the Gromov–Witten and Welschinger
//! invariants of the blown-up plane and of Del Pezzo surfaces of degree 1, 2 and 3
//! that they compute.

pub mod diagrams;
pub mod error;
pub mod homology;
pub mod num;
pub mod relative_complex;
pub mod relative_real;
pub mod absolute;

pub use error::{Error, Result};
pub use homology::{MultiSeq, SurfaceClass, SurfaceModel};
pub use num::Int;
