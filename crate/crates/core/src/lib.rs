//! Infinitesimal flexibility of closed triangulated polyhedra, exact volume
//! polynomials for small combinatorial classes, and an end-to-end check that
//! the volume of an infinitesimally flexible polyhedron is a multiple root of
//! its volume polynomial.

pub mod embedding;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod rigidity;
pub mod surface;
pub mod verify;
pub mod volume;

pub use embedding::{AnyEmbedding, Embedding, Representation};
pub use numeric::{Rational, Scalar};
pub use surface::{CombinatorialSurface, SmallDiagonal};
