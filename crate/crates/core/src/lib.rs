//! Six-vertex model with domain wall boundary conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] — Boltzmann weights, monodromy matrix and brute-force
//!   correlators on small lattices;
//! * [`bethe`] — logarithmic Bethe equations and their solver;
//! * [`determinant`] — Slavnov and Gaudin determinants, the action of
//!   `D`-operators on Bethe states and the finite-size emptiness formation
//!   probability;
//! * [`thermo`] — linear integral equations for root densities and the
//!   multiple-integral emptiness formation probability.

pub mod algebra;
pub mod anisotropy;
pub mod bethe;
pub mod cli;
pub mod determinant;
pub mod error;
pub mod extrapolate;
pub mod thermo;

pub use anisotropy::AnisotropyParam;
pub use error::{Error, ErrorKind, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
    #[doc = include_str!("../../../book/src/bethe-roots.md")]
    mod bethe_roots {}
    #[doc = include_str!("../../../book/src/determinants.md")]
    mod determinants {}
    #[doc = include_str!("../../../book/src/thermodynamic-limit.md")]
    mod thermodynamic_limit {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
