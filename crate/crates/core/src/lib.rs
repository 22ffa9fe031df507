//! Terms, programs and the semantics of plural and singular parameter
//! passing for left-linear constructor systems.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod calculi;
pub mod program;
pub mod rewriting;
pub mod subst;
pub mod syntax;
pub mod term;
pub mod transform;

pub use calculi::{derives, enumerate_values, saturates, DenotationStream, EnumConfig, SemanticsMode};
pub use program::{Diagnostic, DiagnosticKind, Diagnostics, Plurality, PluralityMap, Program, Rule, Signature};
pub use rewriting::{
    one_step, reachable, reaches, runtime_denotation, runtime_values, Reach, SearchConfig, SearchStrategy,
};
pub use subst::{DisjSubst, EmptyInput};
pub use syntax::{parse_expression, parse_open_expression, parse_program, print_program, print_term};
pub use term::{Position, Subst, Sym, Term};
pub use transform::{is_class_cab, is_class_cab_combined, pst_optimized, pst_simple};
