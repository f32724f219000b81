//! Enumeration and classification of wiring diagrams of real line arrangements.

pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod groupcmp;
pub mod lattice;
pub mod moves;
pub mod pi1;
pub mod pipeline;
pub mod render;
pub mod similarity;
pub mod sigs;

pub use diagram::{LefschetzList, LefschetzPair, Permutation, Signature};
pub use error::{Error, Result};
