//! Compilers for deciders of semilinear predicates and computers of
//! semilinear functions. Each compiled device carries its invariants and a
//! reference oracle.
//!
//! Fresh species of composed devices are named `<base>#<unit>`, with units
//! numbered from 1 in composition order.

mod compose;
mod compute;
mod decide;
mod spec;

pub use compose::{parallel_compose, Composition};
pub use compute::{compile_affine, compile_semilinear, compile_semilinear_with_grid, DEFAULT_DOMAIN_GRID};
pub use decide::{combine_boolean, compile_mod, compile_predicate, compile_threshold, complement, BoolOp};
pub use spec::{grid, AffineSpec, ModSpec, Oracle, PredicateSpec, SemilinearSpec, ThresholdSpec};

pub(crate) fn input_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("X{i}")).collect()
}
