//! Simplicial collapse of finite 2-complexes, the density invariants `μ` and `μ̃`,
//! catalogs of forbidden pseudo-surfaces, simplicial embedding, and Monte Carlo
//! experiments over the Linial–Meshulam random 2-complex.

pub mod catalog;
pub mod collapse;
pub mod complex;
pub mod embedding;
pub mod error;
pub mod experiment;
pub mod mu;
pub mod random;

pub use complex::{Complex2, Edge, ExtNat, Triangle};
pub use error::{Error, Result};
pub use mu::{MuMethod, MuResult, Rational};
