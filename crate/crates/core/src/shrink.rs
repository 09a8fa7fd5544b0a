//! Row-removal reduction for `(r, r, d)` robust batch codes and the iterated
//! chain that ends in a Singleton-bound check.
//!
//! One step picks the first message row `i` whose nonzero multiples of `e_i`
//! appear at most `d` times among the columns (`T_i`), deletes row `i` and
//! every column that is nonzero in row `i` (`S_i`), then pads with zero
//! columns so that the new length is exactly `n − (d+1) − (k−r)`. For a valid
//! code `|S_i| ≥ d + 1 + k − r`, so the padding count is never negative.

use std::fmt::Write as _;

use thiserror::Error;

use crate::codes::LinearCode;
use crate::rbc::{verify_rbc, Counterexample, RbcError, RbcParams, VerifyOptions};
use crate::subsets::{complement, fmt_set};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShrinkError {
    #[error("reduction needs m = r (got r={r}, m={m})")]
    NotSquare { r: usize, m: usize },
    #[error("reduction needs n < k(d+1), but n = {n} >= {bound}")]
    Precondition { n: usize, bound: usize },
    #[error("code has no message rows left")]
    NoMessages,
    #[error(
        "input violates |S_i| >= d + 1 + k - r (row {row}: |S_i| = {support}, need {needed}), \
         hence is not a valid (r,r,d) robust batch code"
    )]
    ClaimViolated { row: usize, support: usize, needed: i64 },
    #[error("r = {r} exceeds k = {k}")]
    RExceedsK { r: usize, k: usize },
    #[error("code after {step} reduction step(s) is not an (r,r,d) robust batch code; first failing pair {counterexample:?}")]
    IntermediateNotRbc { step: usize, counterexample: Option<Counterexample> },
    #[error(transparent)]
    Rbc(#[from] RbcError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkStep {
    /// Removed message row (0-based).
    pub row: usize,
    /// `T_i`: columns that are nonzero multiples of `e_i`.
    pub scalar_columns: Vec<usize>,
    /// `S_i`: columns with a nonzero entry in row `i`.
    pub support: Vec<usize>,
    pub k_before: usize,
    pub k_after: usize,
    pub n_before: usize,
    pub n_after: usize,
    pub pad_count: usize,
    /// `k_after < r`: the result can no longer be read as an `(r, r, d)` code.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkTrace {
    pub params: RbcParams,
    pub steps: Vec<ShrinkStep>,
    /// `n_0, n_1, …`
    pub n_sequence: Vec<usize>,
    /// Final length is at least `r + d`.
    pub singleton_check: bool,
    pub degenerate: bool,
    /// `n ≥ k(d+1)` on input, so no reduction applies.
    pub repetition_branch: bool,
}

impl ShrinkTrace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let (r, d) = (self.params.r, self.params.d);
        if self.repetition_branch {
            let _ = writeln!(out, "n = {} >= k(d+1): no reduction needed", self.n_sequence[0]);
        }
        for (lambda, s) in self.steps.iter().enumerate() {
            let _ = writeln!(out, "{}", s.render(lambda));
        }
        let seq: Vec<String> = self.n_sequence.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "n_sequence: {}", seq.join(", "));
        let last = *self.n_sequence.last().expect("sequence starts with n");
        let _ = writeln!(
            out,
            "singleton: n_{} = {} >= r + d = {}: {}",
            self.steps.len(),
            last,
            r + d,
            self.singleton_check
        );
        if self.degenerate {
            let _ = writeln!(out, "degenerate: message length dropped below r");
        }
        out
    }
}

impl ShrinkStep {
    pub fn render(&self, lambda: usize) -> String {
        format!(
            "step {lambda}: i={}, |T_i|={}, S_i={}, n: {}→{}, pad={}{}",
            self.row + 1,
            self.scalar_columns.len(),
            fmt_set(&self.support),
            self.n_before,
            self.n_after,
            self.pad_count,
            if self.degenerate { " (degenerate)" } else { "" }
        )
    }
}

/// `n − λ(d+1) − λ(k − r − (λ−1)/2)`, the closed form of the length recursion.
pub fn closed_form_length(n: usize, k: usize, r: usize, d: usize, lambda: usize) -> i64 {
    let (n, k, r, d, l) = (n as i64, k as i64, r as i64, d as i64, lambda as i64);
    // λ(λ−1)/2 is integral, keep everything in integers
    n - l * (d + 1) - l * (k - r) + l * (l - 1) / 2
}

/// One reduction step. See the module docs.
pub fn shrink_once(code: &LinearCode, params: RbcParams) -> Result<(LinearCode, ShrinkStep), ShrinkError> {
    if !params.is_square() {
        return Err(ShrinkError::NotSquare { r: params.r, m: params.m });
    }
    let (k, n, r, d) = (code.k(), code.n(), params.r, params.d);
    if k == 0 {
        return Err(ShrinkError::NoMessages);
    }
    if n >= k * (d + 1) {
        return Err(ShrinkError::Precondition { n, bound: k * (d + 1) });
    }
    let g = code.generator();
    let supports: Vec<Vec<usize>> = (0..n).map(|j| g.column_support(j)).collect();
    // T_i are disjoint, so if every |T_i| > d then n ≥ k(d+1)
    let (row, scalar_columns) = (0..k)
        .map(|i| {
            let t: Vec<usize> = (0..n).filter(|&j| supports[j] == [i]).collect();
            (i, t)
        })
        .find(|(_, t)| t.len() <= d)
        .expect("some row has at most d scalar columns when n < k(d+1)");
    let support: Vec<usize> = (0..n).filter(|&j| !g.get(row, j).is_zero()).collect();

    let needed = d as i64 + 1 + k as i64 - r as i64;
    if (support.len() as i64) < needed {
        return Err(ShrinkError::ClaimViolated { row, support: support.len(), needed });
    }
    let pad_count = (support.len() as i64 - needed) as usize;
    let rows = complement(&[row], k);
    let cols = complement(&support, n);
    let reduced = g.restrict(&rows, &cols).map_err(RbcError::from)?.pad_zero_columns(pad_count);
    let step = ShrinkStep {
        row,
        scalar_columns,
        support,
        k_before: k,
        k_after: k - 1,
        n_before: n,
        n_after: reduced.cols(),
        pad_count,
        degenerate: k - 1 < r,
    };
    debug_assert_eq!(step.n_after as i64, n as i64 - needed);
    Ok((LinearCode::new(reduced), step))
}

fn check_is_rbc(code: &LinearCode, params: RbcParams, step: usize) -> Result<(), ShrinkError> {
    let report = verify_rbc(code, params, &VerifyOptions::default())?;
    if report.holds {
        Ok(())
    } else {
        Err(ShrinkError::IntermediateNotRbc { step, counterexample: report.counterexample })
    }
}

/// Applies [`shrink_once`] `k − r` times. Returns the final code and the trace.
///
/// With `verify_each`, the input and every intermediate code are checked with
/// the naive verifier and the chain aborts on the first failure.
pub fn shrink_chain(
    code: &LinearCode,
    params: RbcParams,
    verify_each: bool,
) -> Result<(LinearCode, ShrinkTrace), ShrinkError> {
    if !params.is_square() {
        return Err(ShrinkError::NotSquare { r: params.r, m: params.m });
    }
    let (k, n, r, d) = (code.k(), code.n(), params.r, params.d);
    if r > k {
        return Err(ShrinkError::RExceedsK { r, k });
    }
    let mut trace = ShrinkTrace {
        params,
        steps: Vec::new(),
        n_sequence: vec![n],
        singleton_check: n >= r + d,
        degenerate: false,
        repetition_branch: n >= k * (d + 1),
    };
    if trace.repetition_branch {
        return Ok((code.clone(), trace));
    }
    if verify_each {
        check_is_rbc(code, params, 0)?;
    }
    let mut current = code.clone();
    for lambda in 0..k - r {
        if current.k() <= r {
            trace.degenerate = true;
            break;
        }
        let (next, step) = shrink_once(&current, params)?;
        trace.degenerate |= step.degenerate;
        trace.n_sequence.push(step.n_after);
        trace.steps.push(step);
        if verify_each {
            check_is_rbc(&next, params, lambda + 1)?;
        }
        current = next;
    }
    trace.singleton_check = current.n() >= r + d;
    Ok((current, trace))
}
