//! Unoriented graph complex, Kontsevich oriented graphs and the orientation
//! morphism, with exact verification of the Leibniz-graph factorization of
//! the Poisson cocycle condition.

mod canon;
pub mod concrete;
pub mod complex;
pub mod endo;
pub mod diffpoly;
pub mod error;
pub mod graph;
pub mod leibniz;
pub mod linalg;
pub mod orient;
pub mod oriented;
pub mod rational;
pub mod superpoly;
mod xiform;

pub use canon::signed_permutations;
pub use error::{Error, Result};
pub use graph::{canonicalize, CanonicalForm, GraphSum, UnorientedGraph};
pub use rational::Rational;
