//! Presupposition projection over logical discourse representations.
//!
//! The crate offers two routes to the same question — *which presuppositions
//! of a discourse survive (project), and which are already entailed by their
//! local context?*
//!
//! 1. **Baseline**: the classical recursive projection function
//!    ([`projection::pres`]) runs one independent entailment proof per
//!    presupposition trigger.
//! 2. **Contextual**: the discourse is translated
//!    ([`projection::translate_tau`]) into a language of nested contexts
//!    built on the `in`-predicate, and a single labeled tableau proof
//!    ([`tableau::prove`]) decides all projection problems at once, sharing
//!    premises between contexts instead of reproving them.
//!
//! The [`bench`] module quantifies the redundancy the second route
//! eliminates, and the `presup` command-line tool (crate `presup-cli`)
//! exposes everything as batch commands.

pub mod bench;
pub mod formulas;
pub mod projection;
pub mod syntax;
pub mod tableau;

pub use formulas::{ConFormula, Context, LFormula, PreFormula, Term};
pub use syntax::{parse_con, parse_l, parse_pre, render, ParseError};

/// The guide's chapters double as documentation tests: `cargo test`
/// compiles and runs every Rust code block in `book/src`, keeping the book
/// and the crate in lockstep.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/languages.md")]
    mod languages {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/translation.md")]
    mod translation {}
    #[doc = include_str!("../../../book/src/tableau.md")]
    mod tableau {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
