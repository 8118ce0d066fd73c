//! Boundary-layer asymptotics of mean exit times for overdamped Langevin
//! dynamics `dY = −∇V(Y)dt + √2 ε dW` in a planar domain around a single
//! well, with independent numerical oracles.

pub mod asym;
pub mod config;
pub mod error;
pub mod geometry;
pub mod layer;
pub mod logspace;
pub mod potential;
pub mod quad;
pub mod quadrature;
pub mod run;
pub mod spectral;
pub mod validate;

pub use error::{Assumption, Error, Result};
pub use logspace::LogValue;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/potential.md")]
    mod potential {}
    #[doc = include_str!("../../../book/src/layers.md")]
    mod layers {}
    #[doc = include_str!("../../../book/src/assembly.md")]
    mod assembly {}
    #[doc = include_str!("../../../book/src/evaluators.md")]
    mod evaluators {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
}
