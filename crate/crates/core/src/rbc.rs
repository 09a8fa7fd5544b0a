//! Robust batch code verification.
//!
//! A linear code `C: F^k → F^n` is an `(r, m, d)`-robust batch code when for
//! every request set `I ⊆ [k]` with `|I| = r` and every erasure set
//! `D ⊆ [n]` with `|D| = d` there is a repair set `J ⊆ [n] \ D`, `|J| ≤ m`,
//! such that `C(x)|_J` determines `x|_I`.
//!
//! Determination is decided by linear algebra: `C(x)|_J` determines `x_i`
//! exactly when the unit vector `e_i` lies in the column space of `G|_{[k],J}`.
//!
//! Two search strategies are provided. [`Strategy::Naive`] tries every `J` by
//! increasing size in lexicographic order. [`Strategy::Lemma1`] is only valid
//! for `m = |I|`: any repair set of that size must consist of columns supported
//! inside `I` whose restriction to the rows `I` is invertible, so candidates are
//! filtered by support first. Both return the lexicographically smallest valid
//! `J` of minimum size, so their reports agree exactly.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, ColumnSpan, FieldElem, Matrix};
use crate::codes::LinearCode;
use crate::subsets::{binomial, one_based, subsets, subsets_of};

/// Default cap on `C(k, r) · C(n, d)` for [`verify_rbc`].
pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RbcError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("index set {0:?} is not strictly ascending")]
    NotASet(Vec<usize>),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parameters do not fit the code: {0}")]
    ParamsExceedCode(String),
    #[error("{0}")]
    SizeMismatch(String),
    #[error("too large for brute force: {pairs} (I, D) pairs exceeds budget {budget}")]
    TooLarge { pairs: u128, budget: u128 },
}

/// The triple `(r, m, d)`: requests, query budget, erasures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RbcParams {
    pub r: usize,
    pub m: usize,
    pub d: usize,
}

impl RbcParams {
    pub fn new(r: usize, m: usize, d: usize) -> Result<Self, RbcError> {
        if r == 0 || m == 0 {
            return Err(RbcError::InvalidParams(format!("r and m must be at least 1 (r={r}, m={m})")));
        }
        Ok(RbcParams { r, m, d })
    }

    /// `(r, r, d)`.
    pub fn square(r: usize, d: usize) -> Result<Self, RbcError> {
        Self::new(r, r, d)
    }

    pub fn is_square(&self) -> bool {
        self.r == self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Naive,
    Lemma1,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Strategy::Naive),
            "lemma1" => Ok(Strategy::Lemma1),
            other => Err(format!("unknown strategy `{other}` (expected naive or lemma1)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub strategy: Strategy,
    pub pair_budget: u128,
    /// Worker threads; 1 runs inline.
    pub threads: usize,
    /// Record the chosen `J` for every `(I, D)` pair.
    pub collect_witnesses: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            strategy: Strategy::Naive,
            pair_budget: DEFAULT_PAIR_BUDGET,
            threads: 1,
            collect_witnesses: false,
        }
    }
}

impl VerifyOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        VerifyOptions { strategy, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub requested: Vec<usize>,
    pub erased: Vec<usize>,
    pub repair: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub requested: Vec<usize>,
    pub erased: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerifyStats {
    /// `(I, D)` pairs examined, including a failing one.
    pub pairs_checked: u64,
    /// Candidate repair sets `J` tested.
    pub candidates_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictReport {
    pub params: RbcParams,
    pub strategy: Strategy,
    pub holds: bool,
    /// First `(I, D)` in lexicographic order with no repair set.
    pub counterexample: Option<Counterexample>,
    pub witnesses: Option<Vec<Witness>>,
    pub stats: VerifyStats,
}

#[derive(Serialize)]
struct SetPairView {
    #[serde(rename = "I")]
    requested: Vec<usize>,
    #[serde(rename = "D")]
    erased: Vec<usize>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    repair: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct ReportView<'a> {
    holds: bool,
    params: &'a RbcParams,
    strategy: Strategy,
    counterexample: Option<SetPairView>,
    stats: &'a VerifyStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<SetPairView>>,
}

impl VerdictReport {
    /// JSON rendering with 1-based index sets and a fixed field order.
    pub fn to_json(&self) -> String {
        let view = ReportView {
            holds: self.holds,
            params: &self.params,
            strategy: self.strategy,
            counterexample: self.counterexample.as_ref().map(|c| SetPairView {
                requested: one_based(&c.requested),
                erased: one_based(&c.erased),
                repair: None,
            }),
            stats: &self.stats,
            witnesses: self.witnesses.as_ref().map(|ws| {
                ws.iter()
                    .map(|w| SetPairView {
                        requested: one_based(&w.requested),
                        erased: one_based(&w.erased),
                        repair: Some(one_based(&w.repair)),
                    })
                    .collect()
            }),
        };
        serde_json::to_string_pretty(&view).expect("report serializes")
    }
}

fn check_set(set: &[usize], bound: usize) -> Result<(), RbcError> {
    if let Some(&index) = set.iter().find(|&&i| i >= bound) {
        return Err(AlgebraError::IndexOutOfRange { index, bound }.into());
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RbcError::NotASet(set.to_vec()));
    }
    Ok(())
}

/// Column data precomputed once per code.
struct Prepared<'a> {
    code: &'a LinearCode,
    columns: Vec<Vec<FieldElem>>,
    supports: Vec<Vec<usize>>,
}

impl<'a> Prepared<'a> {
    fn new(code: &'a LinearCode) -> Self {
        let g = code.generator();
        Prepared {
            code,
            columns: (0..code.n()).map(|j| g.column(j)).collect(),
            supports: (0..code.n()).map(|j| g.column_support(j)).collect(),
        }
    }

    fn determines(&self, requested: &[usize], repair: &[usize]) -> bool {
        let mut span = ColumnSpan::new(self.code.field(), self.code.k());
        for &j in repair {
            span.insert(self.columns[j].clone());
        }
        requested.iter().all(|&i| span.contains_unit(i))
    }

    /// Returns the repair set (if any) and the number of candidates tried.
    fn find_repair(
        &self,
        requested: &[usize],
        erased: &[usize],
        m: usize,
        strategy: Strategy,
    ) -> (Option<Vec<usize>>, u64) {
        let n = self.code.n();
        let mut examined = 0u64;
        match strategy {
            Strategy::Naive => {
                let pool: Vec<usize> = (0..n).filter(|j| !erased.contains(j)).collect();
                for size in 0..=m.min(pool.len()) {
                    for repair in subsets_of(&pool, size) {
                        examined += 1;
                        if self.determines(requested, &repair) {
                            return (Some(repair), examined);
                        }
                    }
                }
                (None, examined)
            }
            Strategy::Lemma1 => {
                let r = requested.len();
                let pool: Vec<usize> = (0..n)
                    .filter(|j| !erased.contains(j))
                    .filter(|&j| {
                        let s = &self.supports[j];
                        !s.is_empty() && s.iter().all(|i| requested.contains(i))
                    })
                    .collect();
                if r > 0 && pool.len() < r {
                    return (None, examined);
                }
                let g = self.code.generator();
                for repair in subsets_of(&pool, r) {
                    examined += 1;
                    let square = g.restrict(requested, &repair).expect("indices validated by caller");
                    if square.rank() == r && self.determines(requested, &repair) {
                        return (Some(repair), examined);
                    }
                }
                (None, examined)
            }
        }
    }
}

/// Whether `C(x)|_J` determines `x|_I` for every message `x`.
pub fn determines(code: &LinearCode, requested: &[usize], repair: &[usize]) -> Result<bool, RbcError> {
    check_set(requested, code.k())?;
    check_set(repair, code.n())?;
    let all_rows: Vec<usize> = (0..code.k()).collect();
    let sub = code.generator().restrict(&all_rows, repair)?;
    let span = ColumnSpan::of_columns(&sub, 0..sub.cols());
    Ok(requested.iter().all(|&i| span.contains_unit(i)))
}

/// `G|_{I,J}` has full rank `|I|` and `G|_{[k]\I, J}` is zero. Requires
/// `|I| = |J|`.
pub fn lemma1_check(code: &LinearCode, requested: &[usize], repair: &[usize]) -> Result<bool, RbcError> {
    check_set(requested, code.k())?;
    check_set(repair, code.n())?;
    if requested.len() != repair.len() {
        return Err(RbcError::SizeMismatch(format!(
            "support check needs |I| = |J| (got {} and {})",
            requested.len(),
            repair.len()
        )));
    }
    let g = code.generator();
    let rest: Vec<usize> = (0..code.k()).filter(|i| !requested.contains(i)).collect();
    let outside: Matrix = g.restrict(&rest, repair)?;
    Ok(outside.is_zero() && g.restrict(requested, repair)?.rank() == requested.len())
}

/// Lexicographically smallest `J` of minimum size with `|J| ≤ m`,
/// `J ∩ D = ∅` and `C(x)|_J` determining `x|_I`.
pub fn find_repair_set(
    code: &LinearCode,
    requested: &[usize],
    erased: &[usize],
    m: usize,
    strategy: Strategy,
) -> Result<Option<Vec<usize>>, RbcError> {
    check_set(requested, code.k())?;
    check_set(erased, code.n())?;
    if strategy == Strategy::Lemma1 && m != requested.len() {
        return Err(RbcError::SizeMismatch(format!("lemma1 strategy needs m = |I| (m={m}, |I|={})", requested.len())));
    }
    Ok(Prepared::new(code).find_repair(requested, erased, m, strategy).0)
}

struct RequestOutcome {
    pairs: u64,
    examined: u64,
    failing: Option<Vec<usize>>,
    witnesses: Vec<Witness>,
}

fn check_request(
    prep: &Prepared<'_>,
    requested: &[usize],
    params: RbcParams,
    options: &VerifyOptions,
) -> RequestOutcome {
    let mut out = RequestOutcome { pairs: 0, examined: 0, failing: None, witnesses: Vec::new() };
    for erased in subsets(prep.code.n(), params.d) {
        out.pairs += 1;
        let (found, examined) = prep.find_repair(requested, &erased, params.m, options.strategy);
        out.examined += examined;
        match found {
            Some(repair) => {
                if options.collect_witnesses {
                    out.witnesses.push(Witness { requested: requested.to_vec(), erased, repair });
                }
            }
            None => {
                out.failing = Some(erased);
                break;
            }
        }
    }
    out
}

/// Checks the robust batch code property over every `(I, D)` pair.
pub fn verify_rbc(code: &LinearCode, params: RbcParams, options: &VerifyOptions) -> Result<VerdictReport, RbcError> {
    let (k, n) = (code.k(), code.n());
    if params.r > k {
        return Err(RbcError::ParamsExceedCode(format!("r = {} > k = {k}", params.r)));
    }
    if params.d > n {
        return Err(RbcError::ParamsExceedCode(format!("d = {} > n = {n}", params.d)));
    }
    if options.strategy == Strategy::Lemma1 && !params.is_square() {
        return Err(RbcError::SizeMismatch(format!("lemma1 strategy needs m = r (r={}, m={})", params.r, params.m)));
    }
    let pairs = binomial(k, params.r).saturating_mul(binomial(n, params.d));
    if pairs > options.pair_budget {
        return Err(RbcError::TooLarge { pairs, budget: options.pair_budget });
    }

    let prep = Prepared::new(code);
    let requests: Vec<Vec<usize>> = subsets(k, params.r).collect();
    let mut stats = VerifyStats::default();
    let mut witnesses = Vec::new();
    let mut counterexample = None;

    let mut absorb = |requested: &[usize], out: RequestOutcome| -> bool {
        stats.pairs_checked += out.pairs;
        stats.candidates_examined += out.examined;
        witnesses.extend(out.witnesses);
        if let Some(erased) = out.failing {
            counterexample = Some(Counterexample { requested: requested.to_vec(), erased });
            return true;
        }
        false
    };

    if options.threads <= 1 {
        for requested in &requests {
            if absorb(requested, check_request(&prep, requested, params, options)) {
                break;
            }
        }
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(options.threads).build().expect("thread pool");
        // Batches are merged in request order, so the first counterexample and
        // the statistics match the sequential scan.
        'batches: for batch in requests.chunks(options.threads * 4) {
            let outcomes: Vec<RequestOutcome> = pool.install(|| {
                batch.par_iter().map(|requested| check_request(&prep, requested, params, options)).collect()
            });
            for (requested, out) in batch.iter().zip(outcomes) {
                if absorb(requested, out) {
                    break 'batches;
                }
            }
        }
    }

    Ok(VerdictReport {
        params,
        strategy: options.strategy,
        holds: counterexample.is_none(),
        counterexample,
        witnesses: options.collect_witnesses.then_some(witnesses),
        stats,
    })
}

/// Convenience wrapper: does `code` satisfy `params` (naive strategy, default
/// budget)?
pub fn is_rbc(code: &LinearCode, params: RbcParams) -> Result<bool, RbcError> {
    Ok(verify_rbc(code, params, &VerifyOptions::default())?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::codes::{construct_mds, construct_repetition};

    fn code(q: usize, rows: &[&[u32]]) -> LinearCode {
        LinearCode::new(Matrix::from_rows(&FieldSpec::new(q).unwrap(), rows).unwrap())
    }

    fn identity(q: usize, k: usize) -> LinearCode {
        LinearCode::new(Matrix::identity(&FieldSpec::new(q).unwrap(), k))
    }

    #[test]
    fn determines_examples() {
        let id = identity(2, 3);
        assert!(determines(&id, &[0], &[0]).unwrap());
        assert!(!determines(&id, &[0], &[1]).unwrap());
        let g = code(2, &[&[1, 0, 1], &[0, 1, 1]]);
        assert!(!determines(&g, &[0], &[2]).unwrap());
        assert!(determines(&g, &[0, 1], &[1, 2]).unwrap());
        assert!(determines(&g, &[], &[]).unwrap());
        assert!(!determines(&g, &[1], &[]).unwrap());
        assert!(determines(&g, &[], &[0, 2]).unwrap());
    }

    #[test]
    fn determines_rejects_bad_sets() {
        let id = identity(2, 3);
        assert!(matches!(determines(&id, &[3], &[0]), Err(RbcError::Algebra(_))));
        assert!(matches!(determines(&id, &[0], &[5]), Err(RbcError::Algebra(_))));
        assert!(matches!(determines(&id, &[1, 0], &[0]), Err(RbcError::NotASet(_))));
    }

    #[test]
    fn lemma1_examples() {
        let g = code(2, &[&[1, 0, 1], &[0, 1, 1]]);
        assert!(lemma1_check(&g, &[0, 1], &[0, 1]).unwrap());
        assert!(!lemma1_check(&g, &[0], &[2]).unwrap());
        assert!(lemma1_check(&identity(2, 2), &[0], &[0]).unwrap());
        assert!(matches!(lemma1_check(&g, &[0], &[0, 1]), Err(RbcError::SizeMismatch(_))));
    }

    #[test]
    fn repair_set_examples() {
        let rep = construct_repetition(&FieldSpec::new(2).unwrap(), 2, 1);
        for s in [Strategy::Naive, Strategy::Lemma1] {
            assert_eq!(find_repair_set(&rep, &[0], &[0], 1, s).unwrap(), Some(vec![1]));
            assert_eq!(find_repair_set(&identity(2, 2), &[0], &[0], 1, s).unwrap(), None);
        }
        let mds = construct_mds(&FieldSpec::new(5).unwrap(), 2, 2).unwrap();
        for s in [Strategy::Naive, Strategy::Lemma1] {
            assert_eq!(find_repair_set(&mds, &[0, 1], &[0, 1], 2, s).unwrap(), Some(vec![2, 3]));
        }
        assert!(matches!(find_repair_set(&rep, &[0], &[0], 2, Strategy::Lemma1), Err(RbcError::SizeMismatch(_))));
        // naive accepts m > |I| and still returns a minimum-size set
        assert_eq!(find_repair_set(&rep, &[0], &[0], 3, Strategy::Naive).unwrap(), Some(vec![1]));
    }

    #[test]
    fn verify_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let rep = construct_repetition(&f2, 2, 1);
        assert!(is_rbc(&rep, RbcParams::new(1, 1, 1).unwrap()).unwrap());
        let report = verify_rbc(&rep, RbcParams::new(2, 2, 1).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(report.holds);
        assert_eq!(report.stats.pairs_checked, 4);

        let report = verify_rbc(&identity(2, 2), RbcParams::new(1, 1, 1).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(!report.holds);
        assert_eq!(report.counterexample, Some(Counterexample { requested: vec![0], erased: vec![0] }));

        let mds = construct_mds(&FieldSpec::new(5).unwrap(), 2, 2).unwrap();
        for s in [Strategy::Naive, Strategy::Lemma1] {
            let report = verify_rbc(&mds, RbcParams::new(2, 2, 2).unwrap(), &VerifyOptions::with_strategy(s));
            assert!(report.unwrap().holds);
        }
    }

    #[test]
    fn verify_preconditions() {
        let rep = construct_repetition(&FieldSpec::new(2).unwrap(), 2, 1);
        let opts = VerifyOptions::default();
        assert!(matches!(
            verify_rbc(&rep, RbcParams::new(3, 3, 1).unwrap(), &opts),
            Err(RbcError::ParamsExceedCode(_))
        ));
        assert!(matches!(
            verify_rbc(&rep, RbcParams::new(1, 1, 5).unwrap(), &opts),
            Err(RbcError::ParamsExceedCode(_))
        ));
        assert!(matches!(
            verify_rbc(&rep, RbcParams::new(1, 2, 1).unwrap(), &VerifyOptions::with_strategy(Strategy::Lemma1)),
            Err(RbcError::SizeMismatch(_))
        ));
        let tight = VerifyOptions { pair_budget: 3, ..Default::default() };
        assert_eq!(
            verify_rbc(&rep, RbcParams::new(2, 2, 1).unwrap(), &tight),
            Err(RbcError::TooLarge { pairs: 4, budget: 3 })
        );
        assert!(RbcParams::new(0, 1, 1).is_err());
        assert!(RbcParams::new(1, 0, 1).is_err());
    }

    #[test]
    fn witnesses_and_json() {
        let rep = construct_repetition(&FieldSpec::new(2).unwrap(), 2, 1);
        let opts = VerifyOptions { collect_witnesses: true, ..Default::default() };
        let report = verify_rbc(&rep, RbcParams::new(1, 1, 1).unwrap(), &opts).unwrap();
        let ws = report.witnesses.as_ref().unwrap();
        assert_eq!(ws.len(), 8);
        assert_eq!(ws[0], Witness { requested: vec![0], erased: vec![0], repair: vec![1] });
        let json = report.to_json();
        let holds = json.find("\"holds\"").unwrap();
        let params = json.find("\"params\"").unwrap();
        let stats = json.find("\"stats\"").unwrap();
        assert!(holds < params && params < stats);
        assert!(json.contains("\"J\": [\n        2\n      ]"));

        let bad = verify_rbc(&identity(2, 2), RbcParams::new(1, 1, 1).unwrap(), &VerifyOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&bad.to_json()).unwrap();
        assert_eq!(v["holds"], false);
        assert_eq!(v["counterexample"]["I"], serde_json::json!([1]));
        assert_eq!(v["counterexample"]["D"], serde_json::json!([1]));
    }

    #[test]
    fn threads_do_not_change_the_report() {
        let f3 = FieldSpec::new(3).unwrap();
        let g = code(3, &[&[1, 0, 0, 1, 1, 0], &[0, 1, 0, 1, 2, 1], &[0, 0, 1, 0, 1, 1]]);
        let rep = construct_repetition(&f3, 3, 1);
        for c in [g, rep] {
            for params in
                [RbcParams::new(1, 1, 1).unwrap(), RbcParams::new(2, 2, 1).unwrap(), RbcParams::new(1, 2, 2).unwrap()]
            {
                let seq =
                    verify_rbc(&c, params, &VerifyOptions { collect_witnesses: true, ..Default::default() }).unwrap();
                let par = verify_rbc(
                    &c,
                    params,
                    &VerifyOptions { threads: 3, collect_witnesses: true, ..Default::default() },
                )
                .unwrap();
                assert_eq!(seq, par);
            }
        }
    }
}
