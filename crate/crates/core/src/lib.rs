//! Chemical reaction networks under forward and reverse semantics.
//!
//! Constructions for deciding semilinear predicates and computing
//! semilinear functions, bounded verification of stable and reverse-robust
//! computation, linear and modular invariants, and execution rewriting.

pub mod cli;
pub mod construct;
pub mod crn;
pub mod device;
pub mod error;
pub mod format;
pub mod invariant;
pub mod reach;
pub mod sweep;
pub mod transform;

pub use crn::{Configuration, Count, Crn, Direction, Mode, Reaction, Species, SpeciesId, Step};
pub use device::{Device, Expected, OutputSpec, OutputValue, Vote};
pub use error::{Error, Result};
pub use invariant::{check, conserved_along, find_linear_invariants, Invariant, LinearInvariant, ModularInvariant};
pub use reach::{explore, is_stable, verify, Cap, Execution, Model, ReachSet, Stability, Verdict, Verification};
