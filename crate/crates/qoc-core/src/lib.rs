//! Eigenmode and coupling calculations for flux-tunable superconducting
//! transmission-line resonators.
//!
//! The crate models three circuit building blocks and the composite system
//! made from them:
//!
//! - [`membrane`] — two grounded transmission-line resonators joined by a
//!   coupling capacitor. The capacitor scatters waves like a fixed
//!   semi-transparent mirror, and the normal-mode frequencies follow a
//!   transcendental eigenvalue equation in the capacitor position.
//! - [`squid`] — a transmission-line resonator terminated by a symmetric
//!   SQUID. The SQUID acts as a flux-tunable inductor and adds a tunable
//!   virtual length to the resonator.
//! - [`analog`] — the combined circuit: a capacitively-coupled pair of
//!   SQUID-terminated resonators (resonator A) inductively driven by an
//!   open-ended resonator (resonator B). Resonator A's mode frequencies
//!   depend quadratically on the antisymmetric flux drive, which yields an
//!   optomechanical-style `a†a (b†+b)²` interaction. The module assembles
//!   the full coupling report and the reference cavity comparison.
//! - [`validity`] — field-strength bounds that keep the quadratic model
//!   applicable: maximal quadrature amplitudes and per-state photon-number
//!   ceilings for vacuum, thermal, and coherent states.
//!
//! All quantities are strict SI; every frequency is angular (rad/s). Flux
//! crosses the API as the dimensionless ratio Φ/Φ₀.
//!
//! The crate is `no_std` (with `alloc`) so the solvers can be embedded; all
//! I/O lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analog;
pub mod error;
pub(crate) mod math;
pub mod membrane;
pub mod numerics;
pub mod params;
pub mod squid;
pub mod validity;

pub use error::Error;
pub use params::PhysicalConstants;

/// Complex scalar used for scattering amplitudes and coherent-state
/// amplitudes.
pub use num_complex::Complex64;
