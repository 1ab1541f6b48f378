//! Numerical half of the phase-space engine: Wigner functions sampled on
//! uniform grids, closed-form state generation, spectral evaluation of the
//! symbolic operators, environment currents, diagnostics, RK4 time
//! evolution, and the grid file formats.
//!
//! All fields are immutable snapshots and all operations are pure; runs are
//! single-threaded and bitwise deterministic for a fixed configuration.

pub mod apply;
pub mod currents;
pub mod error;
pub mod evolve;
pub mod field;
pub mod grid;
pub mod io;
pub mod spectral;
pub mod states;

pub use apply::{apply_expr, CompiledOp};
pub use currents::{classical_current, env_current, env_current_split, BathParams};
pub use error::GridError;
pub use evolve::{evolve, rhs, step, EvolutionConfig, Frame, Stepper};
pub use field::{diagnostics, CurrentField, Diagnostics, WignerField};
pub use grid::PhaseSpaceGrid;
pub use spectral::{fd4_derivative, Spectral2D};
pub use states::{make_state, StateSpec};
