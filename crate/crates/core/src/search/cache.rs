//! Append-only result cache, one JSON object per line.
//!
//! Only decided outcomes (`Found`, `ExhaustedNone`) are stored. Cached
//! witnesses are re-verified on load, so a corrupted cache can slow a run
//! down but never change its answer.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{SearchError, SearchMode, SearchOutcome, SearchStatus};
use crate::algebra::{FieldSpec, Matrix};
use crate::codes::LinearCode;
use crate::rbc::{verify_rbc, RbcParams, VerifyOptions};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    status: String,
    matrices_enumerated: u64,
    matrices_after_pruning: u64,
    witness: Option<Vec<Vec<u32>>>,
}

pub struct SearchCache {
    path: PathBuf,
}

fn cache_err(e: impl std::fmt::Display) -> SearchError {
    SearchError::Cache(e.to_string())
}

impl SearchCache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        SearchCache { path: path.as_ref().to_path_buf() }
    }

    pub fn key(field: &FieldSpec, k: usize, n: usize, params: RbcParams, mode: SearchMode) -> String {
        let fld = if field.degree() > 1 {
            let poly: Vec<String> = field.poly_high_first().iter().map(u32::to_string).collect();
            format!("{}/{}", field.order(), poly.join(","))
        } else {
            field.order().to_string()
        };
        format!("q={fld} k={k} n={n} r={} m={} d={} mode={}", params.r, params.m, params.d, mode.key())
    }

    /// Latest decided entry for this query, if any.
    pub fn lookup(
        &self,
        field: &FieldSpec,
        k: usize,
        n: usize,
        params: RbcParams,
        mode: SearchMode,
    ) -> Result<Option<SearchOutcome>, SearchError> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(cache_err(e)),
        };
        let key = Self::key(field, k, n, params, mode);
        let mut hit = None;
        for line in BufReader::new(file).lines() {
            let line = line.map_err(cache_err)?;
            let Ok(entry) = serde_json::from_str::<Entry>(&line) else {
                continue;
            };
            if entry.key == key {
                hit = Some(entry);
            }
        }
        let Some(entry) = hit else { return Ok(None) };
        let Some(status) = SearchStatus::parse(&entry.status) else {
            return Ok(None);
        };
        let witness = match (&status, entry.witness) {
            (SearchStatus::Found, Some(rows)) => {
                let g = if rows.is_empty() {
                    return Ok(None);
                } else {
                    match Matrix::from_rows(field, &rows) {
                        Ok(g) if g.rows() == k && g.cols() == n => g,
                        _ => return Ok(None),
                    }
                };
                let code = LinearCode::new(g);
                if !verify_rbc(&code, params, &VerifyOptions::default())?.holds {
                    return Ok(None);
                }
                Some(code)
            }
            (SearchStatus::ExhaustedNone, None) => None,
            _ => return Ok(None),
        };
        Ok(Some(SearchOutcome {
            field: field.clone(),
            k,
            n,
            params,
            mode,
            status,
            witness,
            matrices_enumerated: entry.matrices_enumerated,
            matrices_after_pruning: entry.matrices_after_pruning,
            elapsed: Duration::ZERO,
            note: Some("from cache".into()),
        }))
    }

    pub fn append(&self, outcome: &SearchOutcome) -> Result<(), SearchError> {
        if outcome.status == SearchStatus::Inconclusive {
            return Ok(());
        }
        let entry = Entry {
            key: Self::key(&outcome.field, outcome.k, outcome.n, outcome.params, outcome.mode),
            status: outcome.status.as_str().to_string(),
            matrices_enumerated: outcome.matrices_enumerated,
            matrices_after_pruning: outcome.matrices_after_pruning,
            witness: outcome.witness.as_ref().map(|w| w.generator().to_rows()),
        };
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(cache_err)?;
        let line = serde_json::to_string(&entry).map_err(cache_err)?;
        writeln!(file, "{line}").map_err(cache_err)
    }
}
