//! Exact polynomial algebra over the rationals.

pub mod cayley_menger;
pub mod diagonal;
pub mod modular;
pub mod multipoly;
pub mod multiplicity;
pub mod octahedron;
pub mod resultant;
pub mod unipoly;
pub mod volpoly;

pub use multipoly::MultiPoly;
pub use unipoly::UniPoly;
