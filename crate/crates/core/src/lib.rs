//! Coupling-constant thresholds, threshold states and weighted convergence
//! for Schrödinger, pseudorelativistic and Dirac kinetic energies on a
//! three-dimensional lattice.

pub mod birman_schwinger;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod kinetic;
pub mod specfun;
pub mod threshold_state;
pub mod weights;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quickstart.md")]
    mod quickstart {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/kinetic.md")]
    mod kinetic {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/birman_schwinger.md")]
    mod birman_schwinger {}
    #[doc = include_str!("../../../book/src/threshold_state.md")]
    mod threshold_state {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/configuration.md")]
    mod configuration {}
}
