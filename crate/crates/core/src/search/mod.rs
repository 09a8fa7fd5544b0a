//! Existence search for robust batch codes at small parameters.
//!
//! The exhaustive mode enumerates generator matrices up to column permutation
//! and nonzero column scaling, both of which preserve the robust batch code
//! property (a repair set only depends on the column span of the columns it
//! picks). Each column is replaced by its canonical representative: the zero
//! column, or the scalar multiple whose first nonzero entry is 1. Column types
//! are ordered by `(support bitmask, entries)` and only non-decreasing
//! sequences of types are generated, so every equivalence class under those
//! two symmetries is visited exactly once.
//!
//! Row operations are not quotiented: the property refers to fixed message
//! coordinates.
//!
//! Results are per field. Nonexistence over GF(2) says nothing about larger
//! fields.

mod cache;

pub use cache::SearchCache;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{render_matrix, FieldElem, FieldSpec, Matrix};
use crate::codes::LinearCode;
use crate::rbc::{verify_rbc, RbcError, RbcParams, Strategy, VerifyOptions};
use crate::subsets::{binomial, subsets};

/// Default cap on the number of canonical matrices in exhaustive mode.
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Rbc(#[from] RbcError),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("search at n = {n} was inconclusive; cannot decide the minimum block length")]
    Undecided { n: usize },
    #[error("fast verifier accepted a candidate the naive verifier rejects: {0}")]
    VerifierDisagreement(String),
    #[error("cache error: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

impl SearchMode {
    pub fn key(&self) -> String {
        match self {
            SearchMode::Exhaustive => "exhaustive".to_string(),
            SearchMode::Random { seed, samples } => format!("random:{seed}:{samples}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    Inconclusive,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "Found",
            SearchStatus::ExhaustedNone => "ExhaustedNone",
            SearchStatus::Inconclusive => "Inconclusive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Found" => Some(SearchStatus::Found),
            "ExhaustedNone" => Some(SearchStatus::ExhaustedNone),
            "Inconclusive" => Some(SearchStatus::Inconclusive),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub candidate_budget: u128,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { candidate_budget: DEFAULT_CANDIDATE_BUDGET, threads: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub field: FieldSpec,
    pub k: usize,
    pub n: usize,
    pub params: RbcParams,
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub witness: Option<LinearCode>,
    pub matrices_enumerated: u64,
    pub matrices_after_pruning: u64,
    /// Wall time spent; not part of the rendered output.
    pub elapsed: Duration,
    pub note: Option<String>,
}

impl SearchOutcome {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let p = self.params;
        let _ = writeln!(out, "status: {}", self.status.as_str());
        let _ = writeln!(out, "field: {}", self.field);
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "params: ({},{},{})", p.r, p.m, p.d);
        let _ = writeln!(out, "mode: {}", self.mode.key());
        let _ = writeln!(out, "matrices_enumerated: {}", self.matrices_enumerated);
        let _ = writeln!(out, "matrices_after_pruning: {}", self.matrices_after_pruning);
        if let Some(note) = &self.note {
            let _ = writeln!(out, "note: {note}");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness:");
            out.push_str(&render_matrix(w.generator()));
        }
        out
    }
}

/// Canonical column types in enumeration order, with their support bitmasks.
fn column_types(field: &FieldSpec, k: usize) -> Vec<(u64, Vec<FieldElem>)> {
    let q = field.order();
    let total = q.pow(k as u32);
    let mut types = Vec::new();
    for code in 0..total {
        let mut v = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            v.push(FieldElem::from_raw((c % q) as u8));
            c /= q;
        }
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if *first != FieldElem::ONE {
                continue;
            }
        }
        let mask = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).fold(0u64, |m, (i, _)| m | 1 << i);
        types.push((mask, v));
    }
    types.sort();
    types
}

/// Everything needed to test one candidate, shared across workers.
struct Searcher<'a> {
    field: &'a FieldSpec,
    k: usize,
    n: usize,
    params: RbcParams,
    types: Vec<(u64, Vec<FieldElem>)>,
    request_masks: Vec<u64>,
}

#[derive(Default)]
struct Tally {
    enumerated: u64,
    after_pruning: u64,
}

impl<'a> Searcher<'a> {
    fn new(field: &'a FieldSpec, k: usize, n: usize, params: RbcParams) -> Self {
        let request_masks = if params.is_square() {
            subsets(k, params.r).map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i)).collect()
        } else {
            Vec::new()
        };
        Searcher { field, k, n, params, types: column_types(field, k), request_masks }
    }

    /// Cheap necessary conditions on the multiset of column masks.
    fn survives_pruning(&self, masks: &[u64]) -> bool {
        let d = self.params.d;
        // every message symbol needs more than d supporting columns
        for i in 0..self.k {
            if masks.iter().filter(|&&m| m >> i & 1 == 1).count() <= d {
                return false;
            }
        }
        // with m = r, a repair set uses only nonzero columns supported inside I,
        // and the adversary can erase d of them
        let need = self.params.r + d;
        self.request_masks.iter().all(|&req| masks.iter().filter(|&&m| m != 0 && m & !req == 0).count() >= need)
    }

    fn fast_strategy(&self) -> Strategy {
        if self.params.is_square() {
            Strategy::Lemma1
        } else {
            Strategy::Naive
        }
    }

    /// Full check of a candidate that survived pruning. Witnesses accepted by
    /// the fast path are re-confirmed with the naive verifier.
    fn accepts(&self, code: &LinearCode) -> Result<bool, SearchError> {
        let strategy = self.fast_strategy();
        let fast = verify_rbc(code, self.params, &VerifyOptions::with_strategy(strategy))?.holds;
        if fast && strategy != Strategy::Naive {
            let naive = verify_rbc(code, self.params, &VerifyOptions::default())?.holds;
            if !naive {
                return Err(SearchError::VerifierDisagreement(render_matrix(code.generator())));
            }
        }
        Ok(fast)
    }

    fn build(&self, idx: &[usize]) -> LinearCode {
        let cols: Vec<Vec<FieldElem>> = idx.iter().map(|&t| self.types[t].1.clone()).collect();
        LinearCode::new(Matrix::from_columns(self.field, self.k, &cols))
    }

    /// Walks every non-decreasing type sequence starting with `first`.
    /// `visit` returns `Ok(true)` to stop.
    fn scan_prefix(
        &self,
        first: usize,
        tally: &mut Tally,
        visit: &mut dyn FnMut(LinearCode) -> Result<bool, SearchError>,
    ) -> Result<bool, SearchError> {
        let t = self.types.len();
        let n = self.n;
        if n == 0 {
            return Ok(false);
        }
        let mut idx = vec![first; n];
        let mut masks: Vec<u64> = vec![self.types[first].0; n];
        loop {
            tally.enumerated += 1;
            if self.survives_pruning(&masks) {
                tally.after_pruning += 1;
                let code = self.build(&idx);
                if self.accepts(&code)? && visit(code)? {
                    return Ok(true);
                }
            }
            // next non-decreasing sequence, position 0 fixed
            let mut pos = n - 1;
            loop {
                if pos == 0 {
                    return Ok(false);
                }
                if idx[pos] + 1 < t {
                    idx[pos] += 1;
                    let v = idx[pos];
                    for p in pos..n {
                        idx[p] = v;
                        masks[p] = self.types[v].0;
                    }
                    break;
                }
                pos -= 1;
            }
        }
    }
}

fn validate(k: usize, n: usize, params: RbcParams) -> Result<(), SearchError> {
    if k == 0 {
        return Err(SearchError::InvalidParams("k must be at least 1".into()));
    }
    if params.r > k {
        return Err(SearchError::InvalidParams(format!("r = {} exceeds k = {k}", params.r)));
    }
    if params.d > n {
        return Err(SearchError::InvalidParams(format!("d = {} exceeds n = {n}", params.d)));
    }
    if k > 32 {
        return Err(SearchError::InvalidParams("k above 32 is out of reach".into()));
    }
    Ok(())
}

/// Number of canonical matrices the exhaustive mode would visit, saturating.
pub fn canonical_count(field: &FieldSpec, k: usize, n: usize) -> u128 {
    let q = field.order() as u128;
    let nonzero = q.checked_pow(k as u32).map(|t| (t - 1) / (q - 1));
    match nonzero {
        Some(t) => {
            let types = (t + 1) as usize;
            if n == 0 {
                1
            } else {
                binomial(types + n - 1, n)
            }
        }
        None => u128::MAX,
    }
}

fn run_exhaustive(
    searcher: &Searcher<'_>,
    options: &SearchOptions,
    stop_at_first: bool,
) -> Result<(Tally, Vec<LinearCode>), SearchError> {
    let t = searcher.types.len();
    let mut tally = Tally::default();
    let mut found = Vec::new();
    if searcher.n == 0 {
        return Ok((tally, found));
    }
    let scan = |first: usize| -> Result<(Tally, Vec<LinearCode>, bool), SearchError> {
        let mut tally = Tally::default();
        let mut hits = Vec::new();
        let stopped = searcher.scan_prefix(first, &mut tally, &mut |code| {
            hits.push(code);
            Ok(stop_at_first)
        })?;
        Ok((tally, hits, stopped))
    };
    let merge = |tally: &mut Tally, found: &mut Vec<LinearCode>, part: (Tally, Vec<LinearCode>, bool)| {
        tally.enumerated += part.0.enumerated;
        tally.after_pruning += part.0.after_pruning;
        found.extend(part.1);
        part.2
    };

    if options.threads <= 1 {
        for first in 0..t {
            if merge(&mut tally, &mut found, scan(first)?) {
                break;
            }
        }
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(options.threads).build().expect("thread pool");
        let prefixes: Vec<usize> = (0..t).collect();
        // prefixes are merged in order, so results equal the sequential scan
        'batches: for batch in prefixes.chunks(options.threads * 2) {
            let parts: Vec<_> = pool.install(|| batch.par_iter().map(|&f| scan(f)).collect());
            for part in parts {
                if merge(&mut tally, &mut found, part?) {
                    break 'batches;
                }
            }
        }
    }
    Ok((tally, found))
}

/// Looks for a `(r, m, d)` robust batch code `F^k → F^n`.
pub fn exists_rbc(
    field: &FieldSpec,
    k: usize,
    n: usize,
    params: RbcParams,
    mode: SearchMode,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    validate(k, n, params)?;
    let start = Instant::now();
    let mut outcome = SearchOutcome {
        field: field.clone(),
        k,
        n,
        params,
        mode,
        status: SearchStatus::Inconclusive,
        witness: None,
        matrices_enumerated: 0,
        matrices_after_pruning: 0,
        elapsed: Duration::ZERO,
        note: None,
    };
    let searcher = Searcher::new(field, k, n, params);
    match mode {
        SearchMode::Exhaustive => {
            let count = canonical_count(field, k, n);
            if count > options.candidate_budget {
                outcome.note =
                    Some(format!("{count} canonical matrices exceed the budget of {}", options.candidate_budget));
            } else {
                let (tally, mut found) = run_exhaustive(&searcher, options, true)?;
                outcome.matrices_enumerated = tally.enumerated;
                outcome.matrices_after_pruning = tally.after_pruning;
                if found.is_empty() {
                    outcome.status = SearchStatus::ExhaustedNone;
                } else {
                    outcome.status = SearchStatus::Found;
                    outcome.witness = Some(found.swap_remove(0));
                }
            }
        }
        SearchMode::Random { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = field.order();
            for _ in 0..samples {
                let data: Vec<FieldElem> = (0..k * n).map(|_| FieldElem::from_raw(rng.gen_range(0..q) as u8)).collect();
                let g = Matrix::new(field.clone(), k, n, data).expect("entries drawn from the field");
                outcome.matrices_enumerated += 1;
                let masks: Vec<u64> =
                    (0..n).map(|j| g.column_support(j).iter().fold(0u64, |m, &i| m | 1 << i)).collect();
                if !searcher.survives_pruning(&masks) {
                    continue;
                }
                outcome.matrices_after_pruning += 1;
                let code = LinearCode::new(g);
                if searcher.accepts(&code)? {
                    outcome.status = SearchStatus::Found;
                    outcome.witness = Some(code);
                    break;
                }
            }
        }
    }
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}

/// Every canonical `(r, m, d)` robust batch code `F^k → F^n`, in enumeration
/// order. Errors instead of truncating when the space exceeds the budget.
pub fn all_rbcs(
    field: &FieldSpec,
    k: usize,
    n: usize,
    params: RbcParams,
    options: &SearchOptions,
) -> Result<Vec<LinearCode>, SearchError> {
    validate(k, n, params)?;
    let count = canonical_count(field, k, n);
    if count > options.candidate_budget {
        return Err(SearchError::InvalidParams(format!(
            "{count} canonical matrices exceed the budget of {}",
            options.candidate_budget
        )));
    }
    let searcher = Searcher::new(field, k, n, params);
    Ok(run_exhaustive(&searcher, options, false)?.1)
}

/// Smallest `n ≤ n_max` admitting a code, scanning upward from `n = d`
/// (shorter blocks have no erasure pattern of size `d`). Every negative step
/// must be an exhaustive proof of nonexistence.
pub fn min_blocklength(
    field: &FieldSpec,
    k: usize,
    params: RbcParams,
    n_max: usize,
    options: &SearchOptions,
) -> Result<Option<usize>, SearchError> {
    for n in params.d.max(1)..=n_max {
        let outcome = exists_rbc(field, k, n, params, SearchMode::Exhaustive, options)?;
        match outcome.status {
            SearchStatus::Found => return Ok(Some(n)),
            SearchStatus::ExhaustedNone => {}
            SearchStatus::Inconclusive => return Err(SearchError::Undecided { n }),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::theorem_bound;
    use crate::codes::construct_repetition;
    use num_rational::Ratio;

    fn gf2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn sq(r: usize, d: usize) -> RbcParams {
        RbcParams::square(r, d).unwrap()
    }

    #[test]
    fn column_types_are_canonical() {
        let types = column_types(&FieldSpec::new(3).unwrap(), 2);
        // zero + (3^2 - 1) / 2 projective points
        assert_eq!(types.len(), 5);
        assert_eq!(types[0].0, 0);
        for (_, v) in &types[1..] {
            assert_eq!(*v.iter().find(|x| !x.is_zero()).unwrap(), FieldElem::ONE);
        }
        assert_eq!(canonical_count(&FieldSpec::new(3).unwrap(), 2, 3), binomial(7, 3));
    }

    #[test]
    fn flagship_nonexistence() {
        let out = exists_rbc(&gf2(), 3, 5, sq(2, 1), SearchMode::Exhaustive, &SearchOptions::default()).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert_eq!(out.matrices_enumerated as u128, canonical_count(&gf2(), 3, 5));
        assert!(out.matrices_after_pruning < out.matrices_enumerated);
        assert!(theorem_bound(3, 2, 1).unwrap().lower_bound > Ratio::from_integer(5));
    }

    #[test]
    fn parity_extended_identity_is_found() {
        let out = exists_rbc(&gf2(), 3, 4, sq(3, 1), SearchMode::Exhaustive, &SearchOptions::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let w = out.witness.unwrap();
        assert!(verify_rbc(&w, sq(3, 1), &VerifyOptions::default()).unwrap().holds);
        // canonical form: sorted by support mask
        assert_eq!(w.generator().to_rows(), vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
    }

    #[test]
    fn repetition_is_found() {
        let out = exists_rbc(&gf2(), 2, 4, sq(1, 1), SearchMode::Exhaustive, &SearchOptions::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.witness.unwrap(), construct_repetition(&gf2(), 2, 1));
    }

    #[test]
    fn min_blocklength_examples() {
        let opts = SearchOptions::default();
        assert_eq!(min_blocklength(&gf2(), 2, sq(1, 1), 5, &opts).unwrap(), Some(4));
        assert_eq!(min_blocklength(&gf2(), 3, sq(3, 1), 5, &opts).unwrap(), Some(4));
        assert_eq!(min_blocklength(&gf2(), 3, sq(2, 1), 6, &opts).unwrap(), Some(6));
        assert_eq!(min_blocklength(&gf2(), 3, sq(2, 1), 5, &opts).unwrap(), None);
    }

    #[test]
    fn budget_gives_inconclusive_never_none() {
        let opts = SearchOptions { candidate_budget: 10, threads: 1 };
        let out = exists_rbc(&gf2(), 3, 5, sq(2, 1), SearchMode::Exhaustive, &opts).unwrap();
        assert_eq!(out.status, SearchStatus::Inconclusive);
        assert_eq!(min_blocklength(&gf2(), 3, sq(2, 1), 6, &opts), Err(SearchError::Undecided { n: 2 }));
    }

    #[test]
    fn random_mode_is_deterministic() {
        let mode = SearchMode::Random { seed: 7, samples: 500 };
        let a = exists_rbc(&gf2(), 2, 4, sq(1, 1), mode, &SearchOptions::default()).unwrap();
        let b = exists_rbc(&gf2(), 2, 4, sq(1, 1), mode, &SearchOptions::default()).unwrap();
        assert_eq!(a.status, SearchStatus::Found);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.matrices_enumerated, b.matrices_enumerated);
        // random mode never claims nonexistence
        let c = exists_rbc(&gf2(), 3, 5, sq(2, 1), mode, &SearchOptions::default()).unwrap();
        assert_eq!(c.status, SearchStatus::Inconclusive);
    }

    #[test]
    fn threads_do_not_change_outcome() {
        for (k, n, p) in [(3, 4, sq(3, 1)), (3, 5, sq(2, 1)), (2, 4, RbcParams::new(1, 2, 1).unwrap())] {
            let a = exists_rbc(&gf2(), k, n, p, SearchMode::Exhaustive, &SearchOptions::default()).unwrap();
            let b = exists_rbc(
                &gf2(),
                k,
                n,
                p,
                SearchMode::Exhaustive,
                &SearchOptions { threads: 4, ..Default::default() },
            )
            .unwrap();
            assert_eq!((a.status, a.witness.clone()), (b.status, b.witness.clone()));
            assert_eq!(a.matrices_enumerated, b.matrices_enumerated);
            assert_eq!(a.matrices_after_pruning, b.matrices_after_pruning);
        }
        let seq = all_rbcs(&gf2(), 3, 4, sq(3, 1), &SearchOptions::default()).unwrap();
        let par = all_rbcs(&gf2(), 3, 4, sq(3, 1), &SearchOptions { threads: 3, ..Default::default() }).unwrap();
        assert_eq!(seq, par);
        assert!(!seq.is_empty());
    }

    #[test]
    fn invalid_parameters() {
        let opts = SearchOptions::default();
        assert!(exists_rbc(&gf2(), 0, 3, sq(1, 1), SearchMode::Exhaustive, &opts).is_err());
        assert!(exists_rbc(&gf2(), 2, 3, sq(3, 1), SearchMode::Exhaustive, &opts).is_err());
        assert!(exists_rbc(&gf2(), 2, 1, sq(1, 2), SearchMode::Exhaustive, &opts).is_err());
    }

    #[test]
    fn render_lists_counters_and_witness() {
        let out = exists_rbc(&gf2(), 2, 4, sq(1, 1), SearchMode::Exhaustive, &SearchOptions::default()).unwrap();
        let text = out.render();
        assert!(text.starts_with("status: Found\nfield: GF(2)\nk: 2\nn: 4\nparams: (1,1,1)\nmode: exhaustive\n"));
        assert!(text.ends_with("witness:\n2 2 4\n1 1 0 0\n0 0 1 1\n"));
    }
}
