//! Exact symbolic engine for quantum-group modules, intertwiner trace functions and the
//! dynamical Weyl group, together with a checker and a constructive decomposition for
//! functions on the torus invariant in the sense of the quantum Chevalley restriction.

pub mod cartan;
pub mod error;
pub mod linalg;
pub mod modules;
pub mod qfield;
pub mod hull;
pub mod intertwiner;
pub mod torus;
pub mod symbolic;
pub mod dynamical;
pub mod chevalley;
pub mod suite;

pub use cartan::{CartanDatum, Weight, WeylElement, WeylGroup};
pub use error::{Error, Result};
pub use qfield::ExactScalar;
