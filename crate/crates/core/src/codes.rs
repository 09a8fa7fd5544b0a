//! Linear codes given by generator matrices, the reference constructions, and
//! brute-force global statistics.

use num_rational::Ratio;
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldElem, FieldSpec, Matrix};
use crate::subsets::{binomial, subsets};

/// Default cap on `q^k` for [`LinearCode::min_distance`].
pub const DEFAULT_DISTANCE_BUDGET: u128 = 1 << 24;
/// Default cap on `C(n, k)` for [`LinearCode::is_mds`].
pub const DEFAULT_MDS_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("too large for brute force: {count} candidates exceeds budget {budget}")]
    TooLarge { count: u128, budget: u128 },
    #[error("field of order {order} is too small: need q >= {needed}")]
    FieldTooSmall { order: usize, needed: usize },
    #[error("block size {lambda} does not divide k = {k}")]
    BlockSize { k: usize, lambda: usize },
    #[error("code has no nonzero messages (k = 0)")]
    NoMessages,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A linear code `x ↦ xG` with a `k × n` generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    g: Matrix,
}

impl LinearCode {
    pub fn new(generator: Matrix) -> Self {
        LinearCode { g: generator }
    }

    /// Wraps `generator`, checking that it lives over `field`.
    pub fn with_field(field: &FieldSpec, generator: Matrix) -> Result<Self, CodeError> {
        if generator.field() != field {
            return Err(AlgebraError::FieldMismatch.into());
        }
        Ok(LinearCode { g: generator })
    }

    pub fn field(&self) -> &FieldSpec {
        self.g.field()
    }

    /// Message length.
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn into_generator(self) -> Matrix {
        self.g
    }

    /// `k / n`, or `None` for an empty block.
    pub fn rate(&self) -> Option<Ratio<u64>> {
        (self.n() > 0).then(|| Ratio::new(self.k() as u64, self.n() as u64))
    }

    pub fn encode(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>, CodeError> {
        if let Some(bad) = x.iter().find(|v| !self.field().contains(**v)) {
            return Err(AlgebraError::NotInField { value: bad.value() as u32, order: self.field().order() }.into());
        }
        Ok(self.g.left_mul(x)?)
    }

    /// Minimum Hamming weight of `xG` over nonzero `x`, by enumerating all
    /// `q^k - 1` nonzero messages. Returns 0 if `G` is rank deficient.
    pub fn min_distance(&self, budget: u128) -> Result<usize, CodeError> {
        let (k, n) = (self.k(), self.n());
        if k == 0 {
            return Err(CodeError::NoMessages);
        }
        let f = self.field();
        let q = f.order();
        let count = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if count > budget {
            return Err(CodeError::TooLarge { count, budget });
        }

        // Odometer over message digits; the codeword is updated by the delta
        // of the single digit that changed (plus any carries).
        let mut digits = vec![0usize; k];
        let mut word = vec![FieldElem::ZERO; n];
        let mut best = usize::MAX;
        'outer: loop {
            let mut i = 0;
            loop {
                if i == k {
                    break 'outer;
                }
                let old = FieldElem::from_raw(digits[i] as u8);
                digits[i] = (digits[i] + 1) % q;
                let new = FieldElem::from_raw(digits[i] as u8);
                let delta = f.sub(new, old);
                for (w, &g) in word.iter_mut().zip(self.g.row(i)) {
                    *w = f.add(*w, f.mul(delta, g));
                }
                if digits[i] != 0 {
                    break;
                }
                i += 1;
            }
            let weight = word.iter().filter(|v| !v.is_zero()).count();
            best = best.min(weight);
            if best == 0 {
                break;
            }
        }
        Ok(best)
    }

    /// Whether every `k × k` column submatrix of `G` is invertible.
    pub fn is_mds(&self, budget: u128) -> Result<bool, CodeError> {
        let (k, n) = (self.k(), self.n());
        let count = binomial(n, k);
        if count > budget {
            return Err(CodeError::TooLarge { count, budget });
        }
        if self.g.rank() < k {
            return Ok(false);
        }
        let all_rows: Vec<usize> = (0..k).collect();
        for cols in subsets(n, k) {
            if self.g.restrict(&all_rows, &cols)?.rank() < k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Each message symbol copied `d + 1` times; columns grouped by message index.
pub fn construct_repetition(field: &FieldSpec, k: usize, d: usize) -> LinearCode {
    let n = k * (d + 1);
    let mut g = Matrix::zeros(field, k, n);
    for i in 0..k {
        for c in 0..=d {
            g.set(i, i * (d + 1) + c, FieldElem::ONE);
        }
    }
    LinearCode::new(g)
}

/// Vandermonde generator on the first `k + d` field elements (0 included):
/// row `i` holds `a_j^i`, with `0^0 = 1`.
pub fn construct_mds(field: &FieldSpec, k: usize, d: usize) -> Result<LinearCode, CodeError> {
    let n = k + d;
    if field.order() < n {
        return Err(CodeError::FieldTooSmall { order: field.order(), needed: n });
    }
    let mut g = Matrix::zeros(field, k, n);
    for (j, a) in field.elements().take(n).enumerate() {
        for i in 0..k {
            g.set(i, j, field.pow(a, i as u32));
        }
    }
    Ok(LinearCode::new(g))
}

/// Block-diagonal code: `k / lambda` independent `lambda × (lambda + d)` MDS
/// blocks, contiguous in rows and columns.
pub fn construct_block_rs(field: &FieldSpec, k: usize, d: usize, lambda: usize) -> Result<LinearCode, CodeError> {
    if lambda == 0 {
        return Err(CodeError::InvalidParameter("block size must be positive".into()));
    }
    if !k.is_multiple_of(lambda) {
        return Err(CodeError::BlockSize { k, lambda });
    }
    let block = construct_mds(field, lambda, d)?;
    let width = lambda + d;
    let blocks = k / lambda;
    let mut g = Matrix::zeros(field, k, blocks * width);
    for b in 0..blocks {
        for i in 0..lambda {
            for j in 0..width {
                g.set(b * lambda + i, b * width + j, block.generator().get(i, j));
            }
        }
    }
    Ok(LinearCode::new(g))
}
