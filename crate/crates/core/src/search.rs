//! Breadth-first search for pipelines that reproduce a target prefix.
//!
//! Level 0 is the bare base sequences; level `d` extends every buildable
//! level `d - 1` pipeline by one stage from [`vocabulary`]. A candidate is
//! reported when its first `|target|` terms are decidable and equal the target.
//! Candidates share their parent's sequence, so a prefix is computed once per
//! search rather than once per extension.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use thiserror::Error;

use crate::dsl::{self, Op, Pipeline};
use crate::error::Result;
use crate::seqcore::{FnSpec, Limits, Sequence, Term};

pub const MIN_TARGET: usize = 5;
pub const MAX_DEPTH: usize = 4;
pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_BASES: &[&str] = &[
    "naturals",
    "primes",
    "fib",
    "squares",
    "triangular",
    "oblong",
    "ones",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("target has {0} terms; at least {MIN_TARGET} are required")]
    TargetTooShort(usize),
    #[error("depth {0} exceeds the maximum of {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("unknown base sequence `{0}`")]
    UnknownBase(String),
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_depth: usize,
    pub bases: Vec<String>,
    /// Most candidates enumerated before giving up.
    pub budget: usize,
    /// Constants tried for `add`, `mul`, `delta` and `prepend`; zero is skipped.
    pub constants: RangeInclusive<i64>,
    /// Counts tried for `shiftl`, `shiftr` and `dilate`.
    pub counts: RangeInclusive<usize>,
    /// Limits each candidate is evaluated under.
    pub limits: Limits,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_depth: 2,
            bases: DEFAULT_BASES.iter().map(|s| s.to_string()).collect(),
            budget: DEFAULT_BUDGET,
            constants: -3..=3,
            counts: 1..=3,
            limits: Limits {
                max_materialized: 20_000,
                scan_budget: 2_000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub pipeline: Pipeline,
    /// Always the full target length.
    pub matched_len: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    /// Ordered by depth, then pipeline text.
    pub results: Vec<SearchResult>,
    pub candidates: usize,
    /// The budget ran out; `results` covers only what was enumerated.
    pub budget_exceeded: bool,
}

/// One-stage extensions tried at every level, in a fixed order. Binary stages
/// take a bare base as their second argument.
pub fn vocabulary(opts: &SearchOptions) -> Vec<Op> {
    let mut ops = vec![
        Op::Revsq,
        Op::MinLInv,
        Op::MaxLInv,
        Op::MinRInv,
        Op::MaxRInv,
        Op::GeomInv,
        Op::Ind,
        Op::RevInd,
        Op::Comp,
        Op::Psum,
        Op::Diff,
        Op::Pprod,
        Op::ConvInv,
        Op::Bt,
        Op::Ibt,
        Op::Bt3,
        Op::ConcatRev(None),
        Op::Imap(FnSpec::Square),
        Op::MapSet(FnSpec::ReverseSquare),
    ];
    for c in opts.constants.clone().filter(|&c| c != 0) {
        let c = BigInt::from(c);
        ops.push(Op::Add(c.clone()));
        ops.push(Op::Mul(c.clone()));
        ops.push(Op::Delta(c.clone()));
        ops.push(Op::Prepend(c));
    }
    for k in opts.counts.clone().filter(|&k| k > 0) {
        ops.push(Op::ShiftL(k));
        ops.push(Op::ShiftR(k));
        ops.push(Op::Dilate(BigInt::from(k)));
    }
    for b in &opts.bases {
        for name in [
            "compose",
            "intersect",
            "union",
            "sumset",
            "prodset",
            "conv",
            "zipsum",
            "zipprod",
            "concatrev",
        ] {
            ops.push(Op::with_pipe(name, Pipeline::named(b)));
        }
    }
    ops
}

/// Whether the first `target.len()` terms of `seq` are decidable and equal `target`.
pub fn reproduces(seq: &Sequence, target: &[Term]) -> bool {
    target
        .iter()
        .enumerate()
        .all(|(i, t)| seq.term(i + 1).is_ok_and(|v| v == *t))
}

pub fn search(
    target: &[Term],
    opts: &SearchOptions,
) -> std::result::Result<SearchReport, SearchError> {
    if target.len() < MIN_TARGET {
        return Err(SearchError::TargetTooShort(target.len()));
    }
    if opts.max_depth > MAX_DEPTH {
        return Err(SearchError::DepthTooLarge(opts.max_depth));
    }
    if let Some(b) = opts.bases.iter().find(|b| dsl::base(b).is_none()) {
        return Err(SearchError::UnknownBase(b.clone()));
    }
    Ok(opts.limits.scope(|| run(target, opts)))
}

fn run(target: &[Term], opts: &SearchOptions) -> SearchReport {
    // One shared instance per base, so their caches serve every candidate.
    let bases: BTreeMap<String, Sequence> = opts
        .bases
        .iter()
        .map(|b| (b.clone(), dsl::base(b).expect("checked")))
        .collect();
    let mut resolve = |p: &Pipeline| -> Result<Sequence> {
        let dsl::Source::Named(n) = &p.source else {
            return dsl::build(p);
        };
        match (p.stages.is_empty(), bases.get(n)) {
            (true, Some(s)) => Ok(s.clone()),
            _ => dsl::build(p),
        }
    };
    let vocab = vocabulary(opts);
    let mut found: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut pipelines: BTreeMap<String, Pipeline> = BTreeMap::new();
    let mut candidates = 0;
    let mut budget_exceeded = false;

    let mut frontier: Vec<(Pipeline, Sequence)> = Vec::new();
    for b in &opts.bases {
        candidates += 1;
        let p = Pipeline::named(b);
        let s = bases[b].clone();
        if reproduces(&s, target) {
            found.insert((0, p.to_string()));
            pipelines.insert(p.to_string(), p.clone());
        }
        frontier.push((p, s));
    }

    'levels: for depth in 1..=opts.max_depth {
        let mut next = Vec::new();
        for (parent, seq) in &frontier {
            for op in &vocab {
                if candidates >= opts.budget {
                    budget_exceeded = true;
                    break 'levels;
                }
                candidates += 1;
                let Ok(child) = dsl::apply_with(op, seq, &mut resolve) else {
                    continue;
                };
                let p = parent.clone().then(op.clone());
                if reproduces(&child, target) {
                    let text = p.to_string();
                    found.insert((depth, text.clone()));
                    pipelines.insert(text, p.clone());
                }
                if depth < opts.max_depth {
                    next.push((p, child));
                }
            }
        }
        frontier = next;
    }

    let results = found
        .into_iter()
        .map(|(depth, text)| SearchResult {
            pipeline: pipelines.remove(&text).expect("recorded"),
            matched_len: target.len(),
            depth,
        })
        .collect();
    SearchReport {
        results,
        candidates,
        budget_exceeded,
    }
}
