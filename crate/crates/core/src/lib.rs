//! Degeneration order for representations of type D quivers, decided by
//! ranks of zig-zag block matrices.

pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod poset;
pub mod quiver;
pub mod slice;
pub mod star;
pub mod zigzag;

pub use linalg::{BlockLabels, ExactMatrix, Field, FieldScalar};
pub use quiver::{DimVector, GroupElement, Quiver, Representation};
