//! Exact computations with L∞ structures on finite-dimensional Z₂-graded
//! spaces: the bracket on `Hom(S(W), W)`, cohomology, order-by-order
//! miniversal deformations with relations, and coalgebra automorphisms.

pub mod cochain;
pub mod deform;
pub mod error;
pub mod exactla;
pub mod gspace;
pub mod morph;
pub mod paramring;
pub mod symw;

pub use error::{Error, Result};
