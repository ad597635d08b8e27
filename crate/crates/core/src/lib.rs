//! Semiclassical bound-state spectra for a charged particle in a central
//! power-law potential `V(r) = λ r^ν` threaded by an Aharonov-Bohm flux.
//!
//! The flux enters only through the effective angular momentum
//! `γ = q + |k + μ₀|`, which replaces the integer orbital quantum number in
//! the radial equation. Everything in this crate works in reduced units
//! (`ħ = 1`, `2m = 1`), where the radial equation reads
//!
//! ```text
//! u'' + (E - λ r^ν - γ(γ+1)/r²) u = 0
//! ```
//!
//! Modules:
//!
//! - [`special`]: gamma function, Bessel functions of the first kind and their zeros
//! - [`model`]: potentials, quantum numbers, unit scales, matching constants, duality map
//! - [`closed_form`]: closed-form semiclassical spectra and spectrum tables
//! - [`action`]: numerical and analytic action integrals, root-solved quantization
//! - [`oracles`]: exact Bessel-zero spectrum of the spherical well and a shooting eigensolver
//! - [`analysis`]: derivatives of the spectra and the tendency rules they imply

// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// coefficient and reference tables keep every digit of their source values
#![allow(clippy::excessive_precision)]

pub mod action;
pub mod analysis;
pub mod closed_form;
mod error;
pub mod model;
pub mod oracles;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod table;

pub use error::{Error, Result};
