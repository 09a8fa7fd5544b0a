//! Robust batch codes over small finite fields.
//!
//! A linear code `C: F^k → F^n` is an `(r, m, d)` robust batch code if any `r`
//! message symbols can be read off some `m` codeword symbols after an
//! adversary erases any `d` of them. This crate provides:
//!
//! - [`algebra`]: table-driven GF(p^e) arithmetic and exact matrix operations;
//! - [`codes`]: generator-matrix codes and the repetition, Reed–Solomon and
//!   block Reed–Solomon constructions;
//! - [`rbc`]: the determination oracle and the property verifier;
//! - [`bound`]: the exact lower bound on `n` for `m = r` and its rate table;
//! - [`shrink`]: the row-removal reduction behind that bound, with traces;
//! - [`search`]: exhaustive and random existence search.

pub mod algebra;
pub mod bound;
pub mod codes;
pub mod rbc;
pub mod search;
pub mod shrink;
pub mod subsets;

pub use algebra::{parse_matrix, render_matrix, FieldElem, FieldSpec, Matrix};
pub use bound::{theorem_bound, BoundResult, Regime};
pub use codes::{construct_block_rs, construct_mds, construct_repetition, LinearCode};
pub use rbc::{
    determines, find_repair_set, lemma1_check, verify_rbc, RbcParams, Strategy, VerdictReport, VerifyOptions,
};
pub use search::{exists_rbc, min_blocklength, SearchMode, SearchOptions, SearchOutcome, SearchStatus};
pub use shrink::{shrink_chain, shrink_once, ShrinkStep, ShrinkTrace};
