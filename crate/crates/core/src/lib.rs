//! Quantum Otto refrigerator driven against an engineered cold reservoir.
//!
//! The cold reservoir is a Markovian bosonic bath seen through an auxiliary
//! qubit. Tuning the refrigerant–auxiliary coupling `J` against the
//! auxiliary–bath rate `κ` moves the refrigerant's reduced dynamics between
//! Markovian and non-Markovian regimes. This crate holds the whole numerical
//! model:
//!
//! - [`qmat`]: dense 2/4/16-dimensional complex linear algebra and
//!   quantum-information primitives (entropies, trace distance, Gibbs states).
//! - [`reservoir`]: the two-qubit Hamiltonian, its closed-form eigensystem,
//!   detailed-balance rates and the four-channel GKSL generator.
//! - [`dynamics`]: superoperator propagation, commuting-ramp unitaries and the
//!   hot Gibbs reset.
//! - [`cycle`]: the four-stroke refrigerator, its energy ledger and every
//!   figure of merit and identity check.
//! - [`witness`]: trace-distance non-Markovianity diagnostics.
//!
//! Natural units throughout (`ħ = k_B = 1`): energies, temperatures and
//! frequencies are angular frequencies in rad/s, inverse temperatures in s.
//!
//! The crate is `no_std` and only needs `alloc` (trajectories and scan
//! reports are vectors).

#![no_std]
// NaN-rejecting `!(x > 0.0)` guards are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cycle;
pub mod dynamics;
mod error;
pub mod qmat;
pub mod reservoir;
pub mod witness;

pub use error::{Error, Result};

/// Converts an ordinary frequency in kHz to an angular frequency in rad/s.
pub fn khz_to_rad_per_s(khz: f64) -> f64 {
    2.0 * core::f64::consts::PI * khz * 1e3
}
