use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use seqlab::dsl::{self, ParseError};
use seqlab::oeis::{MatchKind, Snapshot};
use seqlab::search::{self, SearchOptions};
use seqlab::Term;

const FULL: u8 = 0;
const USAGE: u8 = 1;
const EVAL: u8 = 2;
const TRUNCATED: u8 = 3;

/// `println!` that ignores a closed stdout, e.g. when piped into `head`.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "seqlab",
    version,
    about = "Integer-sequence pipelines, search and OEIS lookup"
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first terms of a pipeline such as "primes | add(-2) | intersect(primes)".
    Eval {
        pipeline: String,
        #[arg(short = 'n', long = "count", default_value_t = 10)]
        n: usize,
    },
    /// Find pipelines whose first terms equal a target.
    Search {
        /// Comma-separated target terms.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Comma-separated base sequence names.
        #[arg(long)]
        bases: Option<String>,
        /// Most candidates to enumerate.
        #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Look a prefix up in an OEIS stripped-format snapshot.
    Oeis {
        /// Comma-separated query terms.
        #[arg(long)]
        query: String,
        /// Snapshot file; the bundled snapshot is used when neither this nor
        /// SEQLAB_OEIS_DB is set.
        #[arg(long, env = "SEQLAB_OEIS_DB")]
        db: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct EvalJson {
    pipeline: String,
    terms: Vec<String>,
    truncated: bool,
}

#[derive(Serialize)]
struct SearchJson {
    results: Vec<SearchResultJson>,
    candidates: usize,
    budget_exceeded: bool,
}

#[derive(Serialize)]
struct SearchResultJson {
    pipeline: String,
    depth: usize,
    matched_len: usize,
}

#[derive(Serialize)]
struct MatchJson {
    id: String,
    kind: &'static str,
    start_offset: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { FULL };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(match cli.command {
        Command::Eval { pipeline, n } => eval(&pipeline, n, cli.json),
        Command::Search {
            target,
            depth,
            bases,
            budget,
        } => run_search(&target, depth, bases.as_deref(), budget, cli.json),
        Command::Oeis { query, db } => oeis(&query, db, cli.json),
    })
}

fn terms_arg(s: &str) -> Result<Vec<Term>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Term>()
                .map_err(|_| format!("`{}` is not an integer", t.trim()))
        })
        .collect()
}

fn report_parse_error(text: &str, e: &ParseError) {
    eprintln!("error: {e}");
    eprintln!("  {text}");
    eprintln!("  {}^", " ".repeat(e.offset()));
}

fn eval(text: &str, n: usize, json: bool) -> u8 {
    if n == 0 {
        eprintln!("error: -n must be at least 1");
        return USAGE;
    }
    let pipeline = match dsl::parse(text) {
        Ok(p) => p,
        Err(e) => {
            report_parse_error(text, &e);
            return USAGE;
        }
    };
    let out = match dsl::eval(&pipeline, n) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return EVAL;
        }
    };
    let terms: Vec<String> = out.terms.iter().map(ToString::to_string).collect();
    if json {
        let j = EvalJson {
            pipeline: pipeline.to_string(),
            terms,
            truncated: out.is_truncated(),
        };
        out!("{}", serde_json::to_string(&j).expect("serializable"));
    } else {
        out!("{}", terms.join(","));
    }
    match out.truncation {
        Some(why) => {
            eprintln!("truncated: {} of {n} terms ({why})", out.terms.len());
            TRUNCATED
        }
        None => FULL,
    }
}

fn run_search(target: &str, depth: usize, bases: Option<&str>, budget: usize, json: bool) -> u8 {
    let target = match terms_arg(target) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let mut opts = SearchOptions {
        max_depth: depth,
        budget,
        ..SearchOptions::default()
    };
    if let Some(b) = bases {
        opts.bases = b.split(',').map(|s| s.trim().to_string()).collect();
    }
    let report = match search::search(&target, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    if json {
        let j = SearchJson {
            results: report
                .results
                .iter()
                .map(|r| SearchResultJson {
                    pipeline: r.pipeline.to_string(),
                    depth: r.depth,
                    matched_len: r.matched_len,
                })
                .collect(),
            candidates: report.candidates,
            budget_exceeded: report.budget_exceeded,
        };
        out!("{}", serde_json::to_string(&j).expect("serializable"));
    } else {
        for r in &report.results {
            out!("{}", r.pipeline);
        }
    }
    if report.budget_exceeded {
        eprintln!("warning: candidate budget of {budget} exhausted; results are partial");
        TRUNCATED
    } else {
        FULL
    }
}

fn oeis(query: &str, db: Option<PathBuf>, json: bool) -> u8 {
    let query = match terms_arg(query) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let snapshot = match db {
        Some(path) => match Snapshot::load(&path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return EVAL;
            }
        },
        None => Snapshot::bundled(),
    };
    let matches = match snapshot.lookup(&query) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    if json {
        let j: Vec<MatchJson> = matches
            .iter()
            .map(|m| MatchJson {
                id: m.id.clone(),
                kind: match m.kind {
                    MatchKind::Aligned => "ALIGNED",
                    MatchKind::Embedded => "EMBEDDED",
                },
                start_offset: m.start_offset,
            })
            .collect();
        out!("{}", serde_json::to_string(&j).expect("serializable"));
    } else {
        for m in &matches {
            out!("{m}");
        }
    }
    FULL
}
