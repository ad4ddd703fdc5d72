//! Bosonic ladder-operator numerics.
//!
//! * [`fock`]: truncated single-mode Fock space, coherent states of the
//!   annihilation operator, quadratures and harmonic evolution.
//! * [`holes`]: hole-number states over a fully occupied condensate and the
//!   coherent states of the creation operator built on them.
//! * [`truncation`]: mode capacity under an energy budget and coherent
//!   states cut at that capacity.
//! * [`wavepacket`] and [`permanent`]: Gaussian wave packets, their overlaps
//!   and the permanents that normalize symmetrized many-boson states.
//! * [`plaser`]: a multiboson wave-packet source with stimulated-emission
//!   weights, sampled by importance sampling.

pub mod error;
pub mod fock;
pub mod holes;
pub mod permanent;
pub mod plaser;
pub mod poisson;
pub mod stats;
pub mod truncation;
pub mod wavepacket;

pub use error::{Error, Result};
pub use num_complex::Complex64;
