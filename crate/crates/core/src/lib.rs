//! Exact symbolic engine for the phase-space operator algebra behind Wigner
//! function dynamics: arbitrary-precision polynomial symbols, normal-ordered
//! differential operators on W, Groenewold star products via Bopp shifts,
//! Moyal/Poisson brackets, the divergence-form decomposition with its
//! obstruction residual, and a small expression DSL.
//!
//! Everything in this crate is exact complex-rational arithmetic; there is
//! no floating point anywhere. All values are immutable after construction
//! and all operations are pure functions, so sharing across threads is safe.

pub mod divergence;
pub mod dsl;
pub mod error;
pub mod op;
pub mod poly;
pub mod scalar;
pub mod star;

pub use divergence::{
    decompose, is_divergence, j_lindblad, named_generator, residual, CurrentSymbol,
    Decomposition, GeneratorName, LindbladSign,
};
pub use error::AlgebraError;
pub use op::{default_hbar, DiffOpExpr, OpMonomial};
pub use poly::{PolySymbol, Powers};
pub use scalar::{CRat, Rational};
pub use star::{
    bopp, ladder_sandwich, ladder_star_pair, moyal_bracket, poisson_bracket, sandwich,
    star_poly, BoppSide, Ladder,
};
