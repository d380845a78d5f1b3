//! Shortcuts to adiabaticity for non-Hermitian Hamiltonians.
//!
//! The crate covers two model systems:
//!
//! * a decaying two-level atom driven by a chirped Gaussian pulse, where a
//!   counterdiabatic term keeps the state on an instantaneous (biorthogonal)
//!   eigenvector of the non-Hermitian Hamiltonian ([`ctrlh`], [`pulse`]);
//! * a classical particle in an expanding harmonic trap, treated as a formal
//!   two-component system with a generalized Lewis-Riesenfeld invariant and an
//!   inverse-engineered trap frequency ([`ermakov`]).
//!
//! [`czmath`] holds the 2×2 complex algebra and the biorthogonal
//! eigendecomposition, and [`prop`] the fixed-step RK4 propagator used to
//! verify every protocol dynamically.
//!
//! The crate is `no_std` and only needs `alloc`. Units are ħ = 1 throughout;
//! atomic scenarios use ns and rad/ns, the oscillator uses SI.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod ctrlh;
pub mod czmath;
pub mod ermakov;
mod error;
pub mod prop;
pub mod pulse;
pub mod quad;

pub use czmath::{BiorthoBasis, Mat2, Vec2, C64};
pub use error::{Error, Result};
