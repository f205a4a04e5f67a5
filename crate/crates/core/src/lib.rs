//! Steklov (Dirichlet-to-Neumann) spectra of finite subsets of `Z^n` and of
//! finite graphs, with an exact checker for the lower bound on
//! `Σ_{i=2}^{n+1} 1/λ_i` in terms of `|Ω|` and every intermediate
//! inequality behind it.

pub mod bounds;
pub mod error;
pub mod gadget;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod polyomino;
pub mod record;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
