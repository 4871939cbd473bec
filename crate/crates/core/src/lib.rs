//! Exact computations with plabic graphs, r-dimer covers, SL_r webs and the
//! twist of the Grassmannian.
//!
//! Every quantity is an exact integer or rational. Parallel loops go through
//! [`par::Exec`], which degrades to sequential iteration when the `parallel`
//! feature is disabled.

pub mod basisgen;
pub mod dimers;
pub mod enumeration;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pairing;
pub mod par;
pub mod plabic;
pub mod plucker;
pub mod rng;
pub mod subsets;
pub mod tableaux;
pub mod verify;
pub mod webs;

pub use error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Q = num_rational::BigRational;

/// Vertex color in a bipartite graph. Boundary vertices are always black.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::Black => 'b',
            Color::White => 'w',
        }
    }
}
