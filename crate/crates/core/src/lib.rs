//! Homogeneous cycle-free edge partitions of `K_{2d}`, the face flip, the
//! signature `ε` it induces, the `S_{2d} × S_d` orbit structure and the
//! multilinear map `Det^{S²}`.
//!
//! Every stage can be checked exhaustively for `d ≤ 3`; see [`pipeline`] for
//! the standard chain from enumeration to a signature table.

pub mod algebra;
pub mod certificate;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod flips;
pub mod model;
pub mod pipeline;
pub mod symmetry;
mod union_find;

pub use error::{Error, Result};
pub use model::{EdgePartition, Face, TreeShape};
