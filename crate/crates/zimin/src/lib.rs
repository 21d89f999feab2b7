//! Executable combinatorics on words around Zimin words and unavoidable
//! patterns: containment checking, pattern classification, verified
//! constructions of long Zimin-avoiding words, exact small-case search,
//! and an exact big-integer bounds calculator.
//!
//! Every construction in this crate is checked by an independent verifier
//! before it is trusted; the containment checker itself is cross-checked
//! against a generic backtracking pattern matcher.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod error;
pub mod explorer;
pub mod lce;
pub mod manifest;
pub mod pattern;
pub mod stepping;
pub mod word;
pub mod zimin_check;

pub use error::{Error, Result};
pub use lce::LceTable;
pub use pattern::{
    contains_pattern, contains_pattern_budgeted, is_unavoidable, is_unavoidable_budgeted,
    MatchOutcome, Pattern, PatternWitness, Unavoidability,
};
pub use word::{zimin, Alphabet, Rendering, Symbol, Word};
pub use zimin_check::{contains_zimin, min_end_table, scan_free, zimin_witness, ZiminWitness};
