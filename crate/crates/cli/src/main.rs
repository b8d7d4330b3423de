use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hurwitz_core::blocks::{factor_covering, find_block_decomposition};
use hurwitz_core::catalog::{enumerate_compatible, run_catalog, CatalogConfig};
use hurwitz_core::criteria::{classify_with, ClassifyOptions, Verdict};
use hurwitz_core::dessin::dessin_from_realization;
use hurwitz_core::realizer::{search_with, Realization, SearchConfig, SearchOutcome, DEFAULT_BUDGET};
use hurwitz_core::{BranchDatum, Surface};

const OK: u8 = 0;
const FAILURE: u8 = 1;
const INCOMPATIBLE: u8 = 2;
const BUDGET: u8 = 3;
const PARSE: u8 = 4;

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Realizability of branch data for branched coverings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compatibility report and verdict for one datum.
    Check {
        datum: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verdict, optionally with an explicit witness.
    Realize {
        datum: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// List compatible data of one degree.
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value = "O0")]
        base: String,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Classify every sphere-base datum up to the given degree into a TSV file.
    Catalog {
        #[arg(long)]
        d_max: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value = "catalog.tsv")]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
    },
    /// Search for a witness and print its dessin.
    Dessin {
        datum: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search for a witness and factor it through a block system of order K.
    Decompose {
        datum: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { PARSE } else { OK });
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    };
    ExitCode::from(code)
}

struct Failure(u8, String);

fn parse_datum(s: &str) -> Result<BranchDatum, Failure> {
    s.parse().map_err(|e: hurwitz_core::ParseError| Failure(PARSE, e.to_string()))
}

fn parse_surface(s: &str) -> Result<Surface, Failure> {
    s.parse().map_err(|e: hurwitz_core::ParseError| Failure(PARSE, e.to_string()))
}

fn exit_for(v: &Verdict) -> u8 {
    match v {
        Verdict::Incompatible(_) => INCOMPATIBLE,
        Verdict::Unknown { .. } => BUDGET,
        _ => OK,
    }
}

fn classify(datum: &BranchDatum, budget: u64, threads: usize, witness: bool) -> Result<Verdict, Failure> {
    let opts = ClassifyOptions {
        budget,
        threads,
        attach_witness: witness,
    };
    classify_with(datum, &opts)
        .map(|c| c.verdict)
        .map_err(|e| Failure(FAILURE, e.to_string()))
}

/// Runs the search directly; sphere base only.
fn find_witness(datum: &BranchDatum, budget: u64) -> Result<Result<Realization, u8>, Failure> {
    let report = datum.check_compatibility();
    if !report.is_compatible() {
        println!("{datum} INCOMPATIBLE {report}");
        return Ok(Err(INCOMPATIBLE));
    }
    let config = SearchConfig {
        budget,
        threads: default_threads(),
    };
    let report = search_with(datum, &config).map_err(|e| Failure(FAILURE, e.to_string()))?;
    match report.outcome {
        SearchOutcome::Found(w) => Ok(Ok(w)),
        SearchOutcome::Exhausted => {
            println!("{datum} EXCEPTIONAL tag=search-exhausted");
            Ok(Err(OK))
        }
        SearchOutcome::BudgetExceeded => {
            println!("{datum} UNKNOWN tag=search-budget");
            Ok(Err(BUDGET))
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { datum, budget } => {
            let datum = parse_datum(&datum)?;
            let report = datum.check_compatibility();
            println!("{report}");
            let v = classify(&datum, budget, 1, false)?;
            println!("{}", v.line(&datum));
            Ok(exit_for(&v))
        }
        Command::Realize {
            datum,
            budget,
            witness,
            threads,
        } => {
            let datum = parse_datum(&datum)?;
            let v = classify(&datum, budget, threads, witness)?;
            println!("{}", v.line(&datum));
            if witness {
                if let Some(w) = v.witness() {
                    for line in w.witness_lines() {
                        println!("{line}");
                    }
                }
            }
            Ok(exit_for(&v))
        }
        Command::Enumerate {
            d,
            n_min,
            n_max,
            base,
            cover,
        } => {
            let base = parse_surface(&base)?;
            let cover = cover.as_deref().map(parse_surface).transpose()?;
            if d < 2 {
                return Err(Failure(PARSE, "degree must be at least 2".into()));
            }
            for datum in enumerate_compatible(d, n_min..=n_max, base, cover) {
                println!("{datum}");
            }
            Ok(OK)
        }
        Command::Catalog {
            d_max,
            n_max,
            budget,
            out,
            resume,
            threads,
        } => {
            let config = CatalogConfig {
                d_max,
                n_max,
                budget,
                threads,
                out,
                resume,
            };
            let summary = run_catalog(&config).map_err(|e| Failure(FAILURE, e.to_string()))?;
            for line in summary.footer_lines() {
                println!("{}", line.trim_start_matches("# "));
            }
            let unknown = summary.by_verdict.get("UNKNOWN").copied().unwrap_or(0);
            Ok(if unknown > 0 { BUDGET } else { OK })
        }
        Command::Dessin { datum, budget } => {
            let datum = parse_datum(&datum)?;
            let w = match find_witness(&datum, budget)? {
                Ok(w) => w,
                Err(code) => return Ok(code),
            };
            let dsn = dessin_from_realization(&w).map_err(|e| Failure(FAILURE, e.to_string()))?;
            print!("{}", dsn.export());
            Ok(OK)
        }
        Command::Decompose { datum, k, budget } => {
            let datum = parse_datum(&datum)?;
            let w = match find_witness(&datum, budget)? {
                Ok(w) => w,
                Err(code) => return Ok(code),
            };
            for line in w.witness_lines() {
                println!("{line}");
            }
            let found = find_block_decomposition(w.taus(), k).map_err(|e| Failure(FAILURE, e.to_string()))?;
            match found {
                None => println!("no block system of order {k}"),
                Some(bd) => {
                    println!("{bd}");
                    let (inner, outer) =
                        factor_covering(&datum, &w, &bd).map_err(|e| Failure(FAILURE, e.to_string()))?;
                    println!("inner {inner}");
                    println!("outer {outer}");
                }
            }
            Ok(OK)
        }
    }
}
