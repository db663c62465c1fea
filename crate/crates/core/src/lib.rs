//! Simulator for the lossless two-photon micromaser: a cavity field,
//! represented as a truncated Fock-basis density matrix, is pumped by a
//! stream of identically prepared two-level atoms. Each transit applies a
//! closed-form CPTP kick that exchanges photons strictly in pairs. The
//! crate tracks purity and photon statistics over hundreds of kicks,
//! locates the transit time that purifies the field best, and renders the
//! field in phase space through s-parameterized quasiprobabilities.
//!
//! Layout:
//! - [`state`]: density matrices, initial states, diagnostics.
//! - [`kick`]: the per-atom map, its brute-force oracle, coefficients.
//! - [`quasiprob`]: displaced-number overlaps, Wigner/Husimi values, grids.
//! - [`driver`]: evolution records, sweeps, optimum search, saturation.
//! - [`config`] and [`io`]: config parsing and deterministic CSV/manifest
//!   export used by the `micromaser` binary.

pub mod config;
pub mod driver;
pub mod error;
pub mod io;
pub mod kick;
mod linalg;
pub mod quasiprob;
pub mod state;

pub use error::{Error, Result};
pub use kick::{
    apply_kick, apply_kicks, intra_transit_trace, joint_unitary_oracle, rabi_coefficients,
    AtomPreparation, InteractionParams, RabiCoefficients, TransitSample,
};
pub use quasiprob::{
    displaced_number_overlap, quasiprob_grid, quasiprob_value, GridSpec, QuasiprobGrid,
};
pub use state::{DensityMatrix, FieldDiagnostics, DEFAULT_TAIL_TOL};
