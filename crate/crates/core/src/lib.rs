//! Ramsey theory on Nash-Williams barriers, made executable.
//!
//! * [`ordinal`]: Cantor-normal-form ordinals below ε₀ with fundamental sequences.
//! * [`barrier`]: barriers as stop rules, fronts, variants, `B⁺`, order types.
//! * [`solver`]: exhaustive finite-front search for monochromatic, free, thin
//!   and rainbow sets.
//! * [`reduction`]: the five reductions between the free set, thin set,
//!   rainbow Ramsey and Ramsey theorems for barriers, with an exhaustive checker.
//! * [`diag`]: staged colorings on `B₂ * B_α` that defeat thinness and
//!   rainbowness against mock limit-lemma oracles.

pub mod barrier;
pub mod coding;
pub mod diag;
pub mod error;
pub mod ordinal;
pub mod reduction;
pub mod seq;
pub mod solver;

pub use barrier::{BarrierSpec, Classification, StepOutcome};
pub use error::{Error, Result};
pub use ordinal::Ordinal;
pub use seq::{GroundSet, Progression, Seq};
