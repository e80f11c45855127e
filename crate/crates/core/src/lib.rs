//! Desk-scale machinery for definability questions about gain-graphic matroids.
//!
//! The crate is organised bottom-up:
//!
//! - [`groups`]: finite groups as Cayley tables, word lengths, monomorphisms, word equations.
//! - [`multigraph`]: multigraphs with loops and parallel edges, cycles and bicycles.
//! - [`matroid`]: explicit independence families, rank/closure, amalgams.
//! - [`gain`]: gainings, biased graphs, switching and frame matroids.
//! - [`logic`]: CMSO1 formulas over hypergraphs.
//! - [`coloured`]: coloured systems, registries and clefts.
//! - [`gadgets`]: the H and Lambda gadget families.
//! - [`conviviality`]: conviviality graphs of finite groups.
//! - [`formats`] and [`cli`]: text formats and the command-line front end.
//!
//! Sets of elements (edges, matroid elements) are `u128` bitmasks indexed by
//! position in the owning ground list; see [`bits`].

pub mod bits;
pub mod cli;
pub mod coloured;
pub mod conviviality;
mod error;
pub mod formats;
pub mod gadgets;
pub mod gain;
pub mod groups;
mod limits;
pub mod logic;
pub mod matroid;
pub mod multigraph;

pub use error::{Error, Result};
pub use limits::Limits;
