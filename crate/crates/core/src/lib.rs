//! A verifying kernel and principal-type inference for the Extended
//! Calculus of Constructions.
//!
//! Terms are named ([`term`]); reduction is β plus pair projections
//! ([`reduce`]); [`cumul`] decides the cumulativity order; [`strat`]
//! stratifies normal forms; [`infer`] computes principal types with a
//! syntax-directed trace; [`kernel`] turns traces into full derivations and
//! checks them independently.

pub mod cli;
pub mod cumul;
pub mod infer;
pub mod kernel;
pub mod reduce;
pub mod strat;
pub mod syntax;
pub mod term;
