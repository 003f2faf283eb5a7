//! Prefix lookup against a local OEIS snapshot in "stripped" format.
//!
//! A data line looks like `A000045 ,0,1,1,2,3,5,8,13,`. The format carries no
//! offset, so a query either starts an entry (`Aligned`) or occurs a few terms
//! in (`Embedded`), and that is all a lookup can report.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

use crate::seqcore::Term;

/// Queries shorter than this are refused; they match too much to be useful.
pub const MIN_QUERY: usize = 4;
/// Default number of leading entry terms a query may skip.
pub const DEFAULT_WINDOW: usize = 3;

const BUNDLED: &str = include_str!("../fixtures/paper_stripped.txt");

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("query has {0} terms; at least {MIN_QUERY} are required")]
    QueryTooShort(usize),
    #[error("cannot read snapshot: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OeisEntry {
    pub id: String,
    pub terms: Vec<Term>,
    trailing_comma: bool,
}

impl OeisEntry {
    /// The entry as a stripped-format line, without the newline.
    pub fn to_line(&self) -> String {
        let mut s = format!("{} ", self.id);
        for t in &self.terms {
            s.push(',');
            s.push_str(&t.to_string());
        }
        if self.trailing_comma {
            s.push(',');
        }
        s
    }

    /// Offset at which `query` occurs as a contiguous run, looking no further
    /// than `window` terms in.
    fn occurrence(&self, query: &[Term], window: usize) -> Option<usize> {
        (0..=window).find(|&off| self.terms.get(off..off + query.len()) == Some(query))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchKind {
    Aligned,
    Embedded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub id: String,
    pub kind: MatchKind,
    /// Zero exactly when `kind` is `Aligned`.
    pub start_offset: usize,
}

impl fmt::Display for MatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MatchKind::Aligned => write!(f, "{}\tALIGNED", self.id),
            MatchKind::Embedded => write!(f, "{}\tEMBEDDED@{}", self.id, self.start_offset),
        }
    }
}

#[derive(Debug, Clone)]
enum Line {
    /// Comment or blank line, kept verbatim.
    Raw(String),
    Entry(usize),
}

/// A loaded snapshot. Immutable once built, so it can be shared freely.
#[derive(Debug, Clone)]
pub struct Snapshot {
    lines: Vec<Line>,
    entries: Vec<OeisEntry>,
    trailing_newline: bool,
    window: usize,
    /// Each 4-term run starting within the first `window + 1` positions of an
    /// entry, mapped to (entry, offset) pairs.
    index: HashMap<Vec<Term>, Vec<(usize, usize)>>,
}

impl Snapshot {
    pub fn parse(text: &str) -> Result<Snapshot, OeisError> {
        Snapshot::parse_with_window(text, DEFAULT_WINDOW)
    }

    pub fn parse_with_window(text: &str, window: usize) -> Result<Snapshot, OeisError> {
        let trailing_newline = text.ends_with('\n');
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = Vec::new();
        let mut entries = Vec::new();
        if !text.is_empty() {
            for (i, raw) in body.split('\n').enumerate() {
                if raw.starts_with('#') || raw.is_empty() {
                    lines.push(Line::Raw(raw.to_string()));
                    continue;
                }
                let entry = parse_line(raw).map_err(|reason| OeisError::MalformedLine {
                    line: i + 1,
                    reason,
                })?;
                lines.push(Line::Entry(entries.len()));
                entries.push(entry);
            }
        }
        let mut index: HashMap<Vec<Term>, Vec<(usize, usize)>> = HashMap::new();
        for (e, entry) in entries.iter().enumerate() {
            for off in 0..=window {
                if let Some(key) = entry.terms.get(off..off + MIN_QUERY) {
                    index.entry(key.to_vec()).or_default().push((e, off));
                }
            }
        }
        Ok(Snapshot {
            lines,
            entries,
            trailing_newline,
            window,
            index,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Snapshot, OeisError> {
        Snapshot::parse(&std::fs::read_to_string(path)?)
    }

    /// The snapshot compiled into the library.
    pub fn bundled() -> Snapshot {
        Snapshot::parse(BUNDLED).expect("bundled snapshot is well formed")
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[OeisEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&OeisEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// The file this snapshot was parsed from, byte for byte.
    pub fn to_stripped(&self) -> String {
        let mut out: Vec<String> = Vec::with_capacity(self.lines.len());
        for line in &self.lines {
            out.push(match line {
                Line::Raw(s) => s.clone(),
                Line::Entry(e) => self.entries[*e].to_line(),
            });
        }
        let mut s = out.join("\n");
        if self.trailing_newline {
            s.push('\n');
        }
        s
    }

    pub fn lookup(&self, query: &[Term]) -> Result<Vec<MatchResult>, OeisError> {
        self.lookup_within(query, self.window)
    }

    /// Entries containing `query` as a contiguous run that starts within the
    /// first `window` terms. Aligned matches come first, then by A-number.
    pub fn lookup_within(
        &self,
        query: &[Term],
        window: usize,
    ) -> Result<Vec<MatchResult>, OeisError> {
        if query.len() < MIN_QUERY {
            return Err(OeisError::QueryTooShort(query.len()));
        }
        if window > self.window {
            return self.scan(query, window);
        }
        let mut found: Vec<(usize, usize)> = Vec::new();
        for &(e, _) in self.index.get(&query[..MIN_QUERY]).into_iter().flatten() {
            if found.iter().any(|&(f, _)| f == e) {
                continue;
            }
            if let Some(off) = self.entries[e].occurrence(query, window) {
                found.push((e, off));
            }
        }
        Ok(self.results(found))
    }

    /// Reference lookup by linear scan of every entry.
    pub fn scan(&self, query: &[Term], window: usize) -> Result<Vec<MatchResult>, OeisError> {
        if query.len() < MIN_QUERY {
            return Err(OeisError::QueryTooShort(query.len()));
        }
        let found = self
            .entries
            .iter()
            .enumerate()
            .filter_map(|(e, entry)| entry.occurrence(query, window).map(|off| (e, off)))
            .collect();
        Ok(self.results(found))
    }

    fn results(&self, found: Vec<(usize, usize)>) -> Vec<MatchResult> {
        let mut out: Vec<MatchResult> = found
            .into_iter()
            .map(|(e, off)| MatchResult {
                id: self.entries[e].id.clone(),
                kind: if off == 0 {
                    MatchKind::Aligned
                } else {
                    MatchKind::Embedded
                },
                start_offset: off,
            })
            .collect();
        out.sort_by(|a, b| (a.kind, &a.id).cmp(&(b.kind, &b.id)));
        out
    }
}

fn parse_line(raw: &str) -> std::result::Result<OeisEntry, String> {
    let (id, rest) = raw
        .split_once(' ')
        .ok_or_else(|| "expected an A-number followed by a space".to_string())?;
    let b = id.as_bytes();
    if b.len() != 7 || b[0] != b'A' || !b[1..].iter().all(u8::is_ascii_digit) {
        return Err(format!("bad A-number {id:?}"));
    }
    let rest = rest
        .strip_prefix(',')
        .ok_or_else(|| "terms must start with a comma".to_string())?;
    let (rest, trailing_comma) = match rest.strip_suffix(',') {
        Some(r) => (r, true),
        None => (rest, false),
    };
    if rest.is_empty() {
        return Err("no terms".to_string());
    }
    let terms = rest
        .split(',')
        .map(parse_term)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(OeisEntry {
        id: id.to_string(),
        terms,
        trailing_comma,
    })
}

/// Canonical decimal only: no sign on zero, no leading zeros, no spaces.
fn parse_term(s: &str) -> std::result::Result<Term, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|c| c.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && !(s.starts_with('-') && digits == "0");
    if !canonical {
        return Err(format!("bad term {s:?}"));
    }
    Ok(s.parse::<BigInt>().expect("validated decimal"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<Term> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parses_a_line() {
        let s = Snapshot::parse("A000045 ,0,1,1,2,3,5,8,13,\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.entries()[0].id, "A000045");
        assert_eq!(s.entries()[0].terms, q(&[0, 1, 1, 2, 3, 5, 8, 13]));
    }

    #[test]
    fn comments_are_skipped_and_kept() {
        let text = "# OEIS stripped file\nA000012 ,1,1,1,1,1,\n";
        let s = Snapshot::parse(text).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.to_stripped(), text);
    }

    #[test]
    fn trailing_comma_and_newline_are_preserved() {
        for text in [
            "A000001 ,1,2,3,4",
            "A000001 ,1,2,3,4\n",
            "A000001 ,1,2,3,4,",
        ] {
            assert_eq!(Snapshot::parse(text).unwrap().to_stripped(), text);
        }
    }

    #[test]
    fn big_terms_do_not_overflow() {
        let s = Snapshot::parse("A000001 ,123456789012345678901234567890,-5,").unwrap();
        assert_eq!(
            s.entries()[0].terms[0].to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn malformed_lines_report_their_number() {
        for bad in [
            "A00045 ,1,2",
            "B000045 ,1,2",
            "A000045,1,2",
            "A000045 1,2",
            "A000045 ,",
            "A000045 ,1,,2",
            "A000045 ,01",
            "A000045 ,-0",
            "A000045 ,1, 2",
            "A000045 ,1,x",
        ] {
            let text = format!("# header\nA000001 ,1,\n{bad}\n");
            match Snapshot::parse(&text) {
                Err(OeisError::MalformedLine { line, .. }) => assert_eq!(line, 3, "{bad}"),
                other => panic!("{bad:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let s = Snapshot::bundled();
        let r = s.lookup(&q(&[2, 3, 5, 7, 11])).unwrap();
        assert_eq!(r[0].id, "A000040");
        assert_eq!(r[0].kind, MatchKind::Aligned);

        let r = s.lookup(&q(&[1, 2, 4, 7, 12, 20])).unwrap();
        let m = r.iter().find(|m| m.id == "A000071").unwrap();
        assert_eq!((m.kind, m.start_offset), (MatchKind::Embedded, 1));

        assert!(s.lookup(&q(&[9, 9, 9, 9])).unwrap().is_empty());
        assert!(matches!(
            s.lookup(&q(&[1, 2, 3])),
            Err(OeisError::QueryTooShort(3))
        ));
    }

    #[test]
    fn aligned_results_sort_first() {
        let s = Snapshot::parse("A000003 ,0,1,2,3,4,\nA000002 ,1,2,3,4,\nA000001 ,9,0,1,2,3,4,\n")
            .unwrap();
        let r = s.lookup(&q(&[1, 2, 3, 4])).unwrap();
        let got: Vec<String> = r.iter().map(ToString::to_string).collect();
        assert_eq!(
            got,
            [
                "A000002\tALIGNED",
                "A000001\tEMBEDDED@2",
                "A000003\tEMBEDDED@1"
            ]
        );
    }

    #[test]
    fn window_bounds_the_offset() {
        let s = Snapshot::parse("A000001 ,0,0,0,0,1,2,3,4,\n").unwrap();
        assert!(s.lookup(&q(&[1, 2, 3, 4])).unwrap().is_empty());
        let wide = s.lookup_within(&q(&[1, 2, 3, 4]), 4).unwrap();
        assert_eq!(wide[0].start_offset, 4);
    }

    #[test]
    fn bundled_fixture_round_trips() {
        assert_eq!(Snapshot::bundled().to_stripped(), Snapshot::bundled_text());
        assert!(Snapshot::bundled()
            .entries()
            .iter()
            .all(|e| e.terms.len() >= 10));
    }

    proptest! {
        #[test]
        fn index_agrees_with_scan(
            rows in prop::collection::vec(prop::collection::vec(0i64..4, 1..12), 1..20),
            query in prop::collection::vec(0i64..4, 4..7),
            window in 0usize..5,
        ) {
            let text: String = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let t: Vec<String> = r.iter().map(ToString::to_string).collect();
                    format!("A{:06} ,{},\n", i + 1, t.join(","))
                })
                .collect();
            let s = Snapshot::parse(&text).unwrap();
            let query = q(&query);
            prop_assert_eq!(s.lookup_within(&query, window).unwrap(), s.scan(&query, window).unwrap());
        }
    }
}
