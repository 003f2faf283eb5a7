//! Pipeline language: a source sequence followed by `|`-separated stages.
//!
//! ```text
//! pipeline := source { "|" stage } ;
//! source   := NAME | "lit" "(" int { "," int } ")" ;
//! stage    := NAME [ "(" arg { "," arg } ")" ] ;
//! arg      := int | pipeline ;
//! ```
//!
//! Stages that take a function (`imap`, `mapset`) spell it as a name followed
//! by its integer arguments: `imap(add, 1)`, `mapset(revsq)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::calcconv::{self, BinomialVariant};
use crate::error::{Result, SeqError};
use crate::inverses;
use crate::pointwise::{self, ZipOp};
use crate::seqcore::{self, FnSpec, Sequence, Term};
use crate::setops;

/// Names accepted as a pipeline source, besides `lit(...)`.
pub const BASES: &[&str] = &[
    "naturals",
    "primes",
    "fib",
    "squares",
    "triangular",
    "oblong",
    "ones",
];

pub fn base(name: &str) -> Option<Sequence> {
    Some(match name {
        "naturals" => seqcore::naturals(),
        "primes" => seqcore::primes(),
        "fib" | "fibonacci" => seqcore::fibonacci(),
        "squares" => seqcore::squares(),
        "triangular" => seqcore::triangular(),
        "oblong" => seqcore::oblong(),
        "ones" => seqcore::ones(),
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgKind {
    None,
    /// Any integer.
    Int,
    /// A non-negative integer.
    Count,
    /// A positive integer.
    Positive,
    /// A function from the closed vocabulary.
    Func,
    /// A sub-pipeline.
    Pipe,
    /// Either no argument or a sub-pipeline.
    OptPipe,
}

/// Every stage the language knows, with its argument shape and meaning.
pub const STAGES: &[(&str, ArgKind, &str)] = &[
    ("add", ArgKind::Int, "a(n) + c"),
    ("mul", ArgKind::Int, "c * a(n)"),
    ("revsq", ArgKind::None, "digits of a(n)^2 reversed"),
    ("delta", ArgKind::Int, "1 where a(n) = m, else 0"),
    ("imap", ArgKind::Func, "a(f(n))"),
    ("dilate", ArgKind::Positive, "a(k n)"),
    ("compose", ArgKind::Pipe, "p(a(n))"),
    ("minlinv", ArgKind::None, "minimal left inverse"),
    ("maxlinv", ArgKind::None, "maximal left inverse"),
    ("minrinv", ArgKind::None, "minimal right inverse"),
    ("maxrinv", ArgKind::None, "maximal right inverse"),
    ("geominv", ArgKind::None, "number of terms below n"),
    ("ind", ArgKind::None, "number of times n is attained"),
    ("revind", ArgKind::None, "each n repeated a(n) times"),
    ("comp", ArgKind::None, "positive integers not in a"),
    ("intersect", ArgKind::Pipe, "values in both"),
    ("union", ArgKind::Pipe, "values in either"),
    ("mapset", ArgKind::Func, "sorted distinct values f(a(n))"),
    ("sumset", ArgKind::Pipe, "sorted distinct x + y"),
    ("prodset", ArgKind::Pipe, "sorted distinct x * y"),
    ("psum", ArgKind::None, "partial sums"),
    ("diff", ArgKind::None, "first difference, a(0) = 0"),
    ("pprod", ArgKind::None, "partial products"),
    ("conv", ArgKind::Pipe, "shifted convolution with p"),
    ("convinv", ArgKind::None, "convolutional inverse"),
    ("prepend", ArgKind::Int, "v, a(1), a(2), ..."),
    ("bt", ArgKind::None, "binomial transform"),
    ("ibt", ArgKind::None, "inverse binomial transform"),
    ("bt3", ArgKind::None, "signed binomial transform"),
    ("zipsum", ArgKind::Pipe, "a(n) + p(n)"),
    ("zipprod", ArgKind::Pipe, "a(n) * p(n)"),
    (
        "concatrev",
        ArgKind::OptPipe,
        "a(n) followed by the reversed digits of a(n), or of p(n)",
    ),
    ("shiftr", ArgKind::Count, "k zeros, then a"),
    ("shiftl", ArgKind::Count, "a(n + k)"),
];

pub fn stage_kind(name: &str) -> Option<ArgKind> {
    STAGES.iter().find(|s| s.0 == name).map(|s| s.1)
}

/// Byte range in the source text. Positional metadata only: two spans always
/// compare equal, so ASTs compare by structure.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Named(String),
    Literal(Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pipeline {
    pub source: Source,
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub op: Op,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Add(Term),
    Mul(Term),
    Revsq,
    Delta(Term),
    Imap(FnSpec),
    Dilate(Term),
    Compose(Box<Pipeline>),
    MinLInv,
    MaxLInv,
    MinRInv,
    MaxRInv,
    GeomInv,
    Ind,
    RevInd,
    Comp,
    Intersect(Box<Pipeline>),
    Union(Box<Pipeline>),
    MapSet(FnSpec),
    SumSet(Box<Pipeline>),
    ProdSet(Box<Pipeline>),
    Psum,
    Diff,
    Pprod,
    Conv(Box<Pipeline>),
    ConvInv,
    Prepend(Term),
    Bt,
    Ibt,
    Bt3,
    ZipSum(Box<Pipeline>),
    ZipProd(Box<Pipeline>),
    ConcatRev(Option<Box<Pipeline>>),
    ShiftR(usize),
    ShiftL(usize),
}

impl Pipeline {
    pub fn named(name: &str) -> Pipeline {
        Pipeline {
            source: Source::Named(name.to_string()),
            stages: Vec::new(),
        }
    }

    /// `self | op`, with an empty span.
    pub fn then(mut self, op: Op) -> Pipeline {
        self.stages.push(Stage {
            op,
            span: Span::default(),
        });
        self
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Add(_) => "add",
            Op::Mul(_) => "mul",
            Op::Revsq => "revsq",
            Op::Delta(_) => "delta",
            Op::Imap(_) => "imap",
            Op::Dilate(_) => "dilate",
            Op::Compose(_) => "compose",
            Op::MinLInv => "minlinv",
            Op::MaxLInv => "maxlinv",
            Op::MinRInv => "minrinv",
            Op::MaxRInv => "maxrinv",
            Op::GeomInv => "geominv",
            Op::Ind => "ind",
            Op::RevInd => "revind",
            Op::Comp => "comp",
            Op::Intersect(_) => "intersect",
            Op::Union(_) => "union",
            Op::MapSet(_) => "mapset",
            Op::SumSet(_) => "sumset",
            Op::ProdSet(_) => "prodset",
            Op::Psum => "psum",
            Op::Diff => "diff",
            Op::Pprod => "pprod",
            Op::Conv(_) => "conv",
            Op::ConvInv => "convinv",
            Op::Prepend(_) => "prepend",
            Op::Bt => "bt",
            Op::Ibt => "ibt",
            Op::Bt3 => "bt3",
            Op::ZipSum(_) => "zipsum",
            Op::ZipProd(_) => "zipprod",
            Op::ConcatRev(_) => "concatrev",
            Op::ShiftR(_) => "shiftr",
            Op::ShiftL(_) => "shiftl",
        }
    }

    /// The same stage shape with a different sub-pipeline. Panics on stages
    /// that take none.
    pub fn with_pipe(name: &str, p: Pipeline) -> Op {
        let p = Box::new(p);
        match name {
            "compose" => Op::Compose(p),
            "intersect" => Op::Intersect(p),
            "union" => Op::Union(p),
            "sumset" => Op::SumSet(p),
            "prodset" => Op::ProdSet(p),
            "conv" => Op::Conv(p),
            "zipsum" => Op::ZipSum(p),
            "zipprod" => Op::ZipProd(p),
            "concatrev" => Op::ConcatRev(Some(p)),
            _ => panic!("{name} takes no sub-pipeline"),
        }
    }

    fn pipe(&self) -> Option<&Pipeline> {
        match self {
            Op::Compose(p)
            | Op::Intersect(p)
            | Op::Union(p)
            | Op::SumSet(p)
            | Op::ProdSet(p)
            | Op::Conv(p)
            | Op::ZipSum(p)
            | Op::ZipProd(p)
            | Op::ConcatRev(Some(p)) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Named(n) => f.write_str(n)?,
            Source::Literal(ts) => {
                let ts: Vec<String> = ts.iter().map(ToString::to_string).collect();
                write!(f, "lit({})", ts.join(", "))?
            }
        }
        for s in &self.stages {
            write!(f, " | {}", s.op)?;
        }
        Ok(())
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        if let Some(p) = self.pipe() {
            return write!(f, "{name}({p})");
        }
        match self {
            Op::Add(c) | Op::Mul(c) | Op::Delta(c) | Op::Dilate(c) | Op::Prepend(c) => {
                write!(f, "{name}({c})")
            }
            Op::ShiftR(k) | Op::ShiftL(k) => write!(f, "{name}({k})"),
            Op::Imap(g) | Op::MapSet(g) => write!(f, "{name}({g})"),
            _ => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown stage `{name}` at offset {offset}")]
    UnknownStage { name: String, offset: usize },
    #[error("unknown source `{name}` at offset {offset}")]
    UnknownSource { name: String, offset: usize },
    #[error("bad arguments to `{stage}` at offset {offset}: expected {expected}")]
    ArityMismatch {
        stage: String,
        offset: usize,
        expected: String,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownStage { offset, .. }
            | ParseError::UnknownSource { offset, .. }
            | ParseError::ArityMismatch { offset, .. } => *offset,
        }
    }
}

// The parser first builds an untyped tree, because whether a bare name is a
// sequence or a function depends on the enclosing stage.
struct RawPipe {
    name: String,
    name_at: usize,
    lit: Option<Vec<Term>>,
    stages: Vec<RawStage>,
}

struct RawStage {
    name: String,
    span: Span,
    args: Option<Vec<RawArg>>,
}

enum RawArg {
    Int(Term, usize),
    Pipe(RawPipe),
}

impl RawArg {
    fn offset(&self) -> usize {
        match self {
            RawArg::Int(_, at) => *at,
            RawArg::Pipe(p) => p.name_at,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", c as char)))
        }
    }

    fn unexpected(&mut self, wanted: &str) -> ParseError {
        self.ws();
        // Running out of input is reported at the last byte read, so the
        // offset always points into the text.
        let (offset, found) = match self.src.get(self.pos) {
            Some(&c) => (self.pos, format!("`{}`", c as char)),
            None => {
                let last = self.src.iter().rposition(|c| !c.is_ascii_whitespace());
                (last.unwrap_or(0), "end of input".to_string())
            }
        };
        ParseError::Syntax {
            offset,
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn name(&mut self) -> std::result::Result<(String, usize), ParseError> {
        let start = {
            self.ws();
            self.pos
        };
        if !self.src.get(start).is_some_and(u8::is_ascii_lowercase) {
            return Err(self.unexpected("a name"));
        }
        let mut end = start + 1;
        while self
            .src
            .get(end)
            .is_some_and(|&c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_')
        {
            end += 1;
        }
        self.pos = end;
        let s = std::str::from_utf8(&self.src[start..end]).expect("ascii");
        Ok((s.to_string(), start))
    }

    fn int(&mut self) -> Option<(Term, usize)> {
        self.ws();
        let start = self.pos;
        let mut end = start + usize::from(self.src.get(start) == Some(&b'-'));
        let digits = end;
        while self.src.get(end).is_some_and(u8::is_ascii_digit) {
            end += 1;
        }
        if end == digits {
            return None;
        }
        self.pos = end;
        let s = std::str::from_utf8(&self.src[start..end]).expect("ascii");
        Some((s.parse().expect("validated integer"), start))
    }

    fn pipeline(&mut self) -> std::result::Result<RawPipe, ParseError> {
        let (name, name_at) = self.name()?;
        let lit = if name == "lit" {
            self.expect(b'(')?;
            let mut terms = Vec::new();
            loop {
                match self.int() {
                    Some((t, _)) => terms.push(t),
                    None => return Err(self.unexpected("an integer")),
                }
                if !self.eat(b',') {
                    break;
                }
            }
            self.expect(b')')?;
            Some(terms)
        } else {
            None
        };
        let mut stages = Vec::new();
        while self.eat(b'|') {
            stages.push(self.stage()?);
        }
        Ok(RawPipe {
            name,
            name_at,
            lit,
            stages,
        })
    }

    fn stage(&mut self) -> std::result::Result<RawStage, ParseError> {
        let (name, start) = self.name()?;
        let args = if self.eat(b'(') {
            let mut args = Vec::new();
            loop {
                let arg = match self.int() {
                    Some((t, at)) => RawArg::Int(t, at),
                    None => match self.peek() {
                        Some(c) if c.is_ascii_lowercase() => RawArg::Pipe(self.pipeline()?),
                        _ => return Err(self.unexpected("an integer or a pipeline")),
                    },
                };
                args.push(arg);
                if !self.eat(b',') {
                    break;
                }
            }
            self.expect(b')')?;
            Some(args)
        } else {
            None
        };
        Ok(RawStage {
            name,
            span: Span {
                start,
                end: self.pos,
            },
            args,
        })
    }
}

pub fn parse(text: &str) -> std::result::Result<Pipeline, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(p.unexpected("a pipeline"));
    }
    let raw = p.pipeline()?;
    if p.peek().is_some() {
        return Err(p.unexpected("`|` or end of input"));
    }
    typed(raw)
}

fn typed(raw: RawPipe) -> std::result::Result<Pipeline, ParseError> {
    let source = match raw.lit {
        Some(terms) => Source::Literal(terms),
        None if base(&raw.name).is_some() => Source::Named(if raw.name == "fibonacci" {
            "fib".to_string()
        } else {
            raw.name
        }),
        None => {
            return Err(ParseError::UnknownSource {
                name: raw.name,
                offset: raw.name_at,
            })
        }
    };
    let stages = raw
        .stages
        .into_iter()
        .map(|s| {
            let span = s.span;
            typed_stage(s).map(|op| Stage { op, span })
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(Pipeline { source, stages })
}

fn typed_stage(s: RawStage) -> std::result::Result<Op, ParseError> {
    let offset = s.span.start;
    let Some(kind) = stage_kind(&s.name) else {
        return Err(ParseError::UnknownStage {
            name: s.name,
            offset,
        });
    };
    let mismatch = |expected: &str| ParseError::ArityMismatch {
        stage: s.name.clone(),
        offset,
        expected: expected.to_string(),
    };
    let mut args = s.args.unwrap_or_default();
    let int = |args: &mut Vec<RawArg>, want: &str| match (args.len(), args.pop()) {
        (1, Some(RawArg::Int(t, _))) => Ok(t),
        _ => Err(mismatch(want)),
    };
    Ok(match kind {
        ArgKind::None => {
            if !args.is_empty() {
                return Err(mismatch("no arguments"));
            }
            match s.name.as_str() {
                "revsq" => Op::Revsq,
                "minlinv" => Op::MinLInv,
                "maxlinv" => Op::MaxLInv,
                "minrinv" => Op::MinRInv,
                "maxrinv" => Op::MaxRInv,
                "geominv" => Op::GeomInv,
                "ind" => Op::Ind,
                "revind" => Op::RevInd,
                "comp" => Op::Comp,
                "psum" => Op::Psum,
                "diff" => Op::Diff,
                "pprod" => Op::Pprod,
                "convinv" => Op::ConvInv,
                "bt" => Op::Bt,
                "ibt" => Op::Ibt,
                "bt3" => Op::Bt3,
                other => unreachable!("stage table lists {other}"),
            }
        }
        ArgKind::Int => {
            let c = int(&mut args, "one integer")?;
            match s.name.as_str() {
                "add" => Op::Add(c),
                "mul" => Op::Mul(c),
                "delta" => Op::Delta(c),
                "prepend" => Op::Prepend(c),
                other => unreachable!("stage table lists {other}"),
            }
        }
        ArgKind::Positive => {
            let c = int(&mut args, "one positive integer")?;
            if !c.is_positive() {
                return Err(mismatch("one positive integer"));
            }
            Op::Dilate(c)
        }
        ArgKind::Count => {
            let want = "one non-negative integer";
            let k = int(&mut args, want)?
                .to_usize()
                .ok_or_else(|| mismatch(want))?;
            if s.name == "shiftr" {
                Op::ShiftR(k)
            } else {
                Op::ShiftL(k)
            }
        }
        ArgKind::Func => {
            let f = func(args).map_err(|()| mismatch("a function such as `add, 1` or `revsq`"))?;
            if s.name == "imap" {
                Op::Imap(f)
            } else {
                Op::MapSet(f)
            }
        }
        ArgKind::Pipe | ArgKind::OptPipe => match (args.len(), args.pop()) {
            (0, _) if kind == ArgKind::OptPipe => Op::ConcatRev(None),
            (1, Some(RawArg::Pipe(p))) => Op::with_pipe(&s.name, typed(p)?),
            (_, arg) => {
                let offset = arg.map_or(offset, |a| a.offset());
                return Err(ParseError::ArityMismatch {
                    stage: s.name,
                    offset,
                    expected: "one sub-pipeline".to_string(),
                });
            }
        },
    })
}

fn func(args: Vec<RawArg>) -> std::result::Result<FnSpec, ()> {
    let mut it = args.into_iter();
    let Some(RawArg::Pipe(p)) = it.next() else {
        return Err(());
    };
    if p.lit.is_some() || !p.stages.is_empty() {
        return Err(());
    }
    let ints: Vec<Term> = it
        .map(|a| match a {
            RawArg::Int(t, _) => Ok(t),
            RawArg::Pipe(_) => Err(()),
        })
        .collect::<std::result::Result<_, _>>()?;
    let one = || match ints.as_slice() {
        [c] => Ok(c.clone()),
        _ => Err(()),
    };
    let none = |f: FnSpec| if ints.is_empty() { Ok(f) } else { Err(()) };
    match p.name.as_str() {
        "add" => Ok(FnSpec::Add(one()?)),
        "mul" => Ok(FnSpec::Mul(one()?)),
        "delta" => Ok(FnSpec::Delta(one()?)),
        "const" => Ok(FnSpec::Const(one()?)),
        "square" => none(FnSpec::Square),
        "revsq" => none(FnSpec::ReverseSquare),
        "concatrev" => none(FnSpec::ConcatRev),
        "id" => none(FnSpec::Identity),
        _ => Err(()),
    }
}

/// The sequence a pipeline denotes. Errors raised while building or reading
/// a stage carry that stage's span.
pub fn build(p: &Pipeline) -> Result<Sequence> {
    build_with(p, &mut |sub| build(sub))
}

/// As [`build`], resolving sub-pipelines through `sub`.
pub fn build_with(
    p: &Pipeline,
    sub: &mut dyn FnMut(&Pipeline) -> Result<Sequence>,
) -> Result<Sequence> {
    let mut seq = match &p.source {
        Source::Named(n) => base(n).ok_or_else(|| SeqError::Staged {
            start: 0,
            end: 0,
            message: format!("unknown source {n}"),
        })?,
        Source::Literal(ts) => seqcore::literal(ts.clone()),
    };
    for s in &p.stages {
        let Span { start, end } = s.span;
        seq = apply_with(&s.op, &seq, sub)
            .map_err(|e| match e {
                SeqError::Staged { .. } => e,
                e => SeqError::Staged {
                    start,
                    end,
                    message: format!("{}: {e}", s.op.name()),
                },
            })?
            .with_span(start, end);
    }
    Ok(seq)
}

/// `a | op`.
pub fn apply(op: &Op, a: &Sequence) -> Result<Sequence> {
    apply_with(op, a, &mut |sub| build(sub))
}

pub fn apply_with(
    op: &Op,
    a: &Sequence,
    sub: &mut dyn FnMut(&Pipeline) -> Result<Sequence>,
) -> Result<Sequence> {
    let arg = match op.pipe() {
        Some(p) => Some(sub(p)?),
        None => None,
    };
    let b = || arg.as_ref().expect("sub-pipeline stage");
    Ok(match op {
        Op::Add(c) => pointwise::elementwise(a, FnSpec::Add(c.clone())),
        Op::Mul(c) => pointwise::elementwise(a, FnSpec::Mul(c.clone())),
        Op::Revsq => pointwise::elementwise(a, FnSpec::ReverseSquare),
        Op::Delta(m) => pointwise::elementwise(a, FnSpec::Delta(m.clone())),
        Op::Imap(f) => pointwise::index_map(a, f.clone()),
        Op::Dilate(k) => pointwise::index_map(a, FnSpec::Mul(k.clone())),
        Op::Compose(_) => pointwise::compose(b(), a),
        Op::MinLInv => inverses::minimal_left_inverse(a)?,
        Op::MaxLInv => inverses::maximal_left_inverse(a)?,
        Op::MinRInv => inverses::minimal_right_inverse(a)?,
        Op::MaxRInv => inverses::maximal_right_inverse(a)?,
        Op::GeomInv => inverses::geometric_inverse(a)?,
        Op::Ind => inverses::indicator(a)?,
        Op::RevInd => inverses::reverse_indicator(a),
        Op::Comp => setops::complement(a)?,
        Op::Intersect(_) => setops::intersect(a, b())?,
        Op::Union(_) => setops::union(a, b())?,
        Op::MapSet(f) => setops::map_set(f.clone(), a)?,
        Op::SumSet(_) => setops::sumset(a, b())?,
        Op::ProdSet(_) => setops::productset(a, b())?,
        Op::Psum => calcconv::partial_sums(a),
        Op::Diff => calcconv::first_difference(a),
        Op::Pprod => calcconv::partial_products(a),
        Op::Conv(_) => calcconv::convolve(a, b()),
        Op::ConvInv => calcconv::conv_inverse(a)?,
        Op::Prepend(v) => calcconv::prepend(a, v.clone()),
        Op::Bt => calcconv::binomial_transform(a, BinomialVariant::Bt),
        Op::Ibt => calcconv::binomial_transform(a, BinomialVariant::Ibt),
        Op::Bt3 => calcconv::binomial_transform(a, BinomialVariant::Bt3),
        Op::ZipSum(_) => pointwise::zip_with(ZipOp::Sum, a, b()),
        Op::ZipProd(_) => pointwise::zip_with(ZipOp::Product, a, b()),
        Op::ConcatRev(None) => pointwise::elementwise(a, FnSpec::ConcatRev),
        Op::ConcatRev(Some(_)) => pointwise::zip_with(ZipOp::ConcatAbRev, a, b()),
        Op::ShiftR(k) => calcconv::shift_right(a, *k),
        Op::ShiftL(k) => pointwise::index_map(a, FnSpec::Add(BigInt::from(*k))),
    })
}

/// The first terms of a pipeline. `truncation` is set when fewer than the
/// requested terms could be decided; the terms present are still exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub terms: Vec<Term>,
    pub truncation: Option<SeqError>,
}

impl Evaluation {
    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }
}

pub fn eval(p: &Pipeline, n: usize) -> Result<Evaluation> {
    let seq = build(p)?;
    let (terms, err) = seq.take_partial(n);
    match err {
        Some(e) if !e.is_truncation() => Err(e),
        truncation => Ok(Evaluation { terms, truncation }),
    }
}
