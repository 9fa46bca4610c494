//! Finite-temperature Casimir-Polder interaction between ground-state atoms and
//! material plates, optionally coated with a sheet of undoped gapless graphene.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`] — constants and the dimensionless Matsubara variables.
//! * [`atoms`] — single-oscillator dynamic polarizabilities.
//! * [`materials`] — plate permittivities at imaginary frequencies, including
//!   the Kramers-Kronig transform of tabulated optical data.
//! * [`graphene`] — the Dirac-model polarization tensor (thermal form at zero
//!   frequency, zero-temperature form elsewhere).
//! * [`reflection`] — TM/TE reflection coefficients of a coated half-space.
//! * [`lifshitz`] — Matsubara summation and y-quadrature for free energies,
//!   forces and the zero-temperature energy.
//! * [`asymptotics`] — closed-form classical limits and crossover analysis.
//!
//! Internally energies are in eV, lengths in nm and temperatures in K. SI values
//! appear only in [`lifshitz::CpResult`] and the classical expressions.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod atoms;
mod error;
pub mod graphene;
pub mod lifshitz;
pub mod materials;
pub mod quad;
pub mod reflection;
pub mod units;

pub use atoms::{builtin_atom, AtomModel};
pub use error::{Error, Result};
pub use graphene::{GrapheneSheet, TensorPair};
pub use lifshitz::{ComputeSettings, CpResult, Engine, Quantity, TermKind};
pub use materials::{builtin_material, PermittivityModel, StaticPermittivity};
pub use reflection::Surface;
pub use units::{Constants, Geometry};
