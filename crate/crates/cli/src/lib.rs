//! Command-line front end: verify, construct, bound, shrink, search and
//! tabulate robust batch codes.
//!
//! Exit status: 0 when the property holds (or the command simply succeeded),
//! 1 when it fails, 2 on usage or input errors, 3 when a search could not
//! decide within its budget.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rbc_core::bound::{figure_csv, figure_table};
use rbc_core::search::{SearchCache, DEFAULT_CANDIDATE_BUDGET};
use rbc_core::shrink::ShrinkError;
use rbc_core::{
    construct_block_rs, construct_mds, construct_repetition, exists_rbc, parse_matrix, render_matrix, shrink_chain,
    shrink_once, theorem_bound, verify_rbc, FieldSpec, LinearCode, RbcParams, SearchMode, SearchOptions, SearchStatus,
    Strategy, VerifyOptions,
};

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "rbc", version, about = "Robust batch code toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the (r, m, d) property of a generator matrix; prints a JSON report.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        d: usize,
        #[arg(long, default_value = "naive")]
        strategy: Strategy,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Include the repair set chosen for every (I, D) pair.
        #[arg(long)]
        witnesses: bool,
        /// Maximum number of (I, D) pairs to examine.
        #[arg(long, default_value_t = rbc_core::rbc::DEFAULT_PAIR_BUDGET)]
        budget: u128,
    },
    /// Exact lower bound on n for an (r, r, d) code of message length k.
    Bound {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        r: u32,
        #[arg(short)]
        d: u32,
    },
    /// Write the generator matrix of a standard construction.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short)]
        q: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
        /// Block size for `blockrs`.
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply the row-removal reduction to an (r, r, d) code.
    Shrink {
        #[arg(long)]
        code: PathBuf,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        d: usize,
        /// Iterate down to message length r and check the final length.
        #[arg(long)]
        chain: bool,
        /// Verify the input and every intermediate code.
        #[arg(long)]
        verify_each: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for an (r, m, d) code F_q^k -> F_q^n.
    Search {
        #[arg(short)]
        q: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        d: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Append-only cache of decided searches.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Maximum number of canonical matrices in exhaustive mode.
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_BUDGET)]
        budget: u128,
    },
    /// Rate upper bounds for r = 1..k as CSV.
    Figure {
        #[arg(short)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        d_list: Vec<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Repetition,
    Mds,
    Blockrs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

fn read_code(path: &Path) -> Result<LinearCode> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let g = parse_matrix(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    Ok(LinearCode::new(g))
}

fn emit(output: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs one parsed invocation, writing the report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Verify { code, r, m, d, strategy, threads, witnesses, budget } => {
            let code = read_code(&code)?;
            let options = VerifyOptions { strategy, pair_budget: budget, threads, collect_witnesses: witnesses };
            let report = verify_rbc(&code, RbcParams::new(r, m, d)?, &options)?;
            writeln!(out, "{}", report.to_json())?;
            Ok(if report.holds { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Bound { k, r, d } => {
            write!(out, "{}", theorem_bound(k, r, d)?.render())?;
            Ok(EXIT_HOLDS)
        }
        Command::Construct { kind, q, k, d, lambda, output } => {
            let field = FieldSpec::new(q)?;
            let code = match (kind, lambda) {
                (Kind::Repetition, None) => construct_repetition(&field, k, d),
                (Kind::Mds, None) => construct_mds(&field, k, d)?,
                (Kind::Blockrs, Some(lambda)) => construct_block_rs(&field, k, d, lambda)?,
                (Kind::Blockrs, None) => bail!("--kind blockrs needs --lambda"),
                (_, Some(_)) => bail!("--lambda only applies to --kind blockrs"),
            };
            emit(output.as_deref(), out, &render_matrix(code.generator()))?;
            Ok(EXIT_HOLDS)
        }
        Command::Shrink { code, r, d, chain, verify_each, output } => {
            let code = read_code(&code)?;
            let params = RbcParams::square(r, d)?;
            let (reduced, status) = if chain {
                let (reduced, trace) = shrink_chain(&code, params, verify_each)?;
                write!(out, "{}", trace.render())?;
                (reduced, if trace.singleton_check { EXIT_HOLDS } else { EXIT_FAILS })
            } else {
                if verify_each && !verify_rbc(&code, params, &VerifyOptions::default())?.holds {
                    return Err(ShrinkError::IntermediateNotRbc { step: 0, counterexample: None }.into());
                }
                let (reduced, step) = shrink_once(&code, params)?;
                writeln!(out, "{}", step.render(0))?;
                if verify_each && !step.degenerate && !verify_rbc(&reduced, params, &VerifyOptions::default())?.holds {
                    return Err(ShrinkError::IntermediateNotRbc { step: 1, counterexample: None }.into());
                }
                (reduced, EXIT_HOLDS)
            };
            if let Some(path) = output {
                emit(Some(&path), out, &render_matrix(reduced.generator()))?;
            }
            Ok(status)
        }
        Command::Search { q, k, n, r, m, d, mode, seed, samples, threads, cache, budget } => {
            let field = FieldSpec::new(q)?;
            let params = RbcParams::new(r, m, d)?;
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Random => SearchMode::Random { seed, samples },
            };
            let cache = cache.map(SearchCache::new);
            let cached = match &cache {
                Some(c) => c.lookup(&field, k, n, params, mode)?,
                None => None,
            };
            let outcome = match cached {
                Some(hit) => hit,
                None => {
                    let options = SearchOptions { candidate_budget: budget, threads };
                    let outcome = exists_rbc(&field, k, n, params, mode, &options)?;
                    if let Some(c) = &cache {
                        c.append(&outcome)?;
                    }
                    outcome
                }
            };
            write!(out, "{}", outcome.render())?;
            Ok(match outcome.status {
                SearchStatus::Found => EXIT_HOLDS,
                SearchStatus::ExhaustedNone => EXIT_FAILS,
                SearchStatus::Inconclusive => EXIT_UNDECIDED,
            })
        }
        Command::Figure { k, d_list, output } => {
            let rows = figure_table(k, &d_list, 1..=k)?;
            emit(output.as_deref(), out, &figure_csv(&rows))?;
            Ok(EXIT_HOLDS)
        }
    }
}

/// Exit status for an error returned by [`run`].
pub fn failure_code(err: &anyhow::Error) -> u8 {
    // an input that breaks the reduction's counting claim, or fails
    // verification mid-chain, is a failing property rather than misuse
    match err.downcast_ref::<ShrinkError>() {
        Some(ShrinkError::ClaimViolated { .. } | ShrinkError::IntermediateNotRbc { .. }) => EXIT_FAILS,
        _ => EXIT_ERROR,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Diagnostics go to `err` as a single line.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "rbc: {e:#}");
            failure_code(&e)
        }
    }
}
