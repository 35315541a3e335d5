//! Quiver flag varieties: combinatorics of dimension vectors, Schur functor
//! calculus on the tautological bundles, stability of representations, toric
//! cohomology and Plücker-type embeddings.

pub mod error;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod partitions;
pub mod plucker;
pub mod quiver;
pub mod schur;
pub mod toric;
pub mod toric_cohomology;

pub use error::{Error, Result};
pub use partitions::{DominantWeight, Partition};
pub use quiver::{Arrow, Quiver, QuiverFlagSpec};
