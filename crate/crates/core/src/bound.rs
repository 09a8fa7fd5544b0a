//! The lower bound on block length for `(r, r, d)` robust batch codes,
//!
//! ```text
//! n ≥ k(d+1) − max{0, d(r−1) − ½(k−r)²},
//! ```
//!
//! evaluated exactly, together with the rate table used to plot it.
//!
//! The repetition regime (penalty term clamped to zero) is decided by the
//! integer test `2d(r−1) ≤ (k−r)²`. The closed-form threshold
//! `k + d − √((k+d)² − k²)` is reported for display only: it drops the `+2d`
//! contribution of the exact quadratic and is therefore a sufficient, slightly
//! conservative cutoff. The exact crossover is
//! [`exact_repetition_threshold`].

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid bound parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RepetitionOptimal,
    PenaltyActive,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::RepetitionOptimal => "repetition_optimal",
            Regime::PenaltyActive => "penalty_active",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub k: u32,
    pub r: u32,
    pub d: u32,
    /// Exact lower bound on `n` (an integer or a half-integer).
    pub lower_bound: Ratio<i128>,
    /// `⌈lower_bound⌉`.
    pub lower_bound_int: i128,
    pub regime: Regime,
    /// `k + d − √((k+d)² − k²)`, display only.
    pub threshold_r: f64,
}

impl BoundResult {
    /// `k(d + 1)`.
    pub fn repetition_length(&self) -> i128 {
        self.k as i128 * (self.d as i128 + 1)
    }

    pub fn render(&self) -> String {
        format!(
            "k = {}, r = {}, d = {}\nlower_bound = {}\nlower_bound_int = {}\nregime = {}\nrepetition_length = {}\nthreshold_r = {:.6}\n",
            self.k,
            self.r,
            self.d,
            self.lower_bound,
            self.lower_bound_int,
            self.regime.as_str(),
            self.repetition_length(),
            self.threshold_r,
        )
    }
}

/// Whether the penalty term vanishes: `2d(r−1) ≤ (k−r)²`.
pub fn is_repetition_optimal(k: u32, r: u32, d: u32) -> bool {
    let lhs = 2 * d as i128 * (r as i128 - 1);
    let gap = k as i128 - r as i128;
    lhs <= gap * gap
}

pub fn theorem_bound(k: u32, r: u32, d: u32) -> Result<BoundResult, BoundError> {
    if r == 0 || r > k {
        return Err(BoundError::InvalidParams(format!("need 1 <= r <= k (k={k}, r={r})")));
    }
    let (ki, ri, di) = (k as i128, r as i128, d as i128);
    let repetition = Ratio::from_integer(ki * (di + 1));
    let penalty = Ratio::from_integer(di * (ri - 1)) - Ratio::new((ki - ri) * (ki - ri), 2);
    let penalty = penalty.max(Ratio::from_integer(0));
    let lower_bound = repetition - penalty;
    let regime = if is_repetition_optimal(k, r, d) { Regime::RepetitionOptimal } else { Regime::PenaltyActive };
    Ok(BoundResult {
        k,
        r,
        d,
        lower_bound,
        lower_bound_int: lower_bound.ceil().to_integer(),
        regime,
        threshold_r: repetition_threshold(k, d),
    })
}

/// `k + d − √((k+d)² − k²)`.
pub fn repetition_threshold(k: u32, d: u32) -> f64 {
    let (k, d) = (k as f64, d as f64);
    let s = k + d;
    s - (s * s - k * k).sqrt()
}

/// Largest `r ∈ [1, k]` for which the bound equals `k(d+1)`.
pub fn exact_repetition_threshold(k: u32, d: u32) -> u32 {
    // the regime test is monotone in r on [1, k]
    (1..=k).take_while(|&r| is_repetition_optimal(k, r, d)).last().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureRow {
    pub d: u32,
    pub r: u32,
    /// `k / lower_bound`.
    pub rate_upper_bound: Ratio<i128>,
}

/// Upper bounds on the rate for every `d` in `d_list` and `r` in `r_range`,
/// ordered by `d` (as given) then `r`.
pub fn figure_table(k: u32, d_list: &[u32], r_range: RangeInclusive<u32>) -> Result<Vec<FigureRow>, BoundError> {
    let mut rows = Vec::new();
    for &d in d_list {
        for r in r_range.clone() {
            let b = theorem_bound(k, r, d)?;
            rows.push(FigureRow { d, r, rate_upper_bound: Ratio::from_integer(k as i128) / b.lower_bound });
        }
    }
    Ok(rows)
}

/// CSV with header `d,r,rate_upper_bound`, LF endings, 6 significant digits.
pub fn figure_csv(rows: &[FigureRow]) -> String {
    let mut out = String::from("d,r,rate_upper_bound\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{}", row.d, row.r, format_significant(&row.rate_upper_bound, 6));
    }
    out
}

fn pow10(e: u32) -> i128 {
    10i128.pow(e)
}

/// Positional decimal rendering of a non-negative rational with `digits`
/// significant digits, rounding half up, computed in integer arithmetic.
pub fn format_significant(value: &Ratio<i128>, digits: u32) -> String {
    assert!(digits >= 1);
    let (num, den) = (*value.numer(), *value.denom());
    assert!(num >= 0 && den > 0, "negative values are not rendered");
    if num == 0 {
        return format!("0.{}", "0".repeat(digits as usize - 1));
    }
    // exponent: 10^e ≤ num/den < 10^(e+1)
    let ge_pow = |e: i32| -> bool {
        if e >= 0 {
            num >= den * pow10(e as u32)
        } else {
            num * pow10((-e) as u32) >= den
        }
    };
    let mut e: i32 = 0;
    while ge_pow(e + 1) {
        e += 1;
    }
    while !ge_pow(e) {
        e -= 1;
    }
    let shift = digits as i32 - 1 - e;
    let (n2, d2) = if shift >= 0 { (num * pow10(shift as u32), den) } else { (num, den * pow10((-shift) as u32)) };
    // operands are non-negative, so truncation is floor
    let mut scaled = (2 * n2 + d2) / (2 * d2);
    if scaled == pow10(digits) {
        scaled = pow10(digits - 1);
        e += 1;
    }
    let s = scaled.to_string();
    let int_digits = e + 1;
    if int_digits >= digits as i32 {
        format!("{s}{}", "0".repeat((int_digits - digits as i32) as usize))
    } else if int_digits > 0 {
        let (a, b) = s.split_at(int_digits as usize);
        format!("{a}.{b}")
    } else {
        format!("0.{}{s}", "0".repeat((-int_digits) as usize))
    }
}
