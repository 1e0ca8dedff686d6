//! Construction, classification, conversion and equivalence testing of quantum
//! dynamical maps in signed operator-sum form.
//!
//! Maps that are Hermiticity preserving but not completely positive are handled
//! on the same footing as ordinary channels: their operator-sum representations
//! carry a sign per term, and two representations of the same map are related by
//! a pseudo-unitary matrix from `U(p, q)`. See [`equivalence::find_equivalence`].

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod mapio;
pub mod maps;

pub use error::{Error, Result};
