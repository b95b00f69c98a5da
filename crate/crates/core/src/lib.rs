//! Simulation of Lévy-driven Volterra processes `Y_t = ∫_0^t g(t,s) dZ_s`
//! and pathwise integration against them via fractional calculus.
//!
//! The crate is organised around a small set of currencies:
//!
//! * [`levy::LevyTriplet`] — the law of the driving noise `Z` as a
//!   characteristic triplet `(a, b, π)`, including subordinated Wiener
//!   processes `W^L = W(L)`;
//! * [`grid::GridPath`] — a process sampled on a uniform time grid;
//! * [`volterra::VolterraKernel`] — evaluators for Volterra kernels
//!   (Molchan–Golosov and relatives);
//! * [`fractional`] — Riemann–Liouville fractional integrals/derivatives on
//!   grid functions and the generalized Lebesgue–Stieltjes integral;
//! * [`conditions`] — numerical finiteness checks for the integrability
//!   condition suites (D_p), (D_2), (D_infty).
//!
//! Monte Carlo loops parallelise across paths when the `parallel` feature is
//! enabled (default). Results are bit-identical for any worker count: every
//! path owns a seed-derived substream and reductions run in index order with
//! compensated summation.

pub mod conditions;
pub mod error;
pub mod fractional;
pub mod grid;
pub mod integral;
pub mod levy;
pub mod par;
pub mod quad;
pub(crate) mod rng;
pub mod special;
pub mod stats;
pub mod subordinator;
pub mod verify;
pub mod volterra;

pub use error::{Error, Result};
pub use grid::{GridPath, GridSpec};
pub use levy::{LevyMeasureSpec, LevyTriplet};
pub use subordinator::SubordinatorSpec;

