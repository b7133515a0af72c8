//! Designs (collections of k-subsets) and the block-list text format.
//!
//! ```text
//! # optional comment lines, anywhere; leading ones are kept as provenance
//! 49 6 5          <- header: "n k t" (covering) or "n k p t" (lottery)
//! 1 2 3 4 5 6     <- one block per line: k distinct labels from 1..=n
//! ...
//! ```
//!
//! Blocks are stored flat, one byte per label, so labels are limited to
//! `1..=255`. Elements within a block are sorted on input; block order and
//! duplicate blocks are kept as given.

use std::fmt;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::combin::{binomial_u64, next_colex, BinomialTable};
use crate::error::{Error, ParseError, Result};

pub const MAX_LABEL: u32 = u8::MAX as u32;

/// Default limit on the number of blocks [`enumerate_full_design`] will build.
pub const DEFAULT_ENUMERATION_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DesignKind {
    /// Every t-subset lies inside some block.
    Covering { n: u32, k: u32, t: u32 },
    /// Every p-subset meets some block in at least t elements.
    Lottery { n: u32, k: u32, p: u32, t: u32 },
}

impl DesignKind {
    pub fn covering(n: u32, k: u32, t: u32) -> Result<Self> {
        if n == 0 || k == 0 || t == 0 || t > k || k > n {
            return Err(Error::invalid(format!(
                "covering ({n}, {k}, {t}) needs 1 <= t <= k <= n"
            )));
        }
        if n > MAX_LABEL {
            return Err(Error::invalid(format!("n = {n} exceeds {MAX_LABEL}")));
        }
        Ok(DesignKind::Covering { n, k, t })
    }

    pub fn lottery(n: u32, k: u32, p: u32, t: u32) -> Result<Self> {
        if n == 0 || k == 0 || p == 0 || t == 0 || t > p.min(k) || p.max(k) > n {
            return Err(Error::invalid(format!(
                "lottery ({n}, {k}, {p}, {t}) needs 1 <= t <= min(p, k) <= max(p, k) <= n"
            )));
        }
        if n > MAX_LABEL {
            return Err(Error::invalid(format!("n = {n} exceeds {MAX_LABEL}")));
        }
        Ok(DesignKind::Lottery { n, k, p, t })
    }

    /// From header fields: 3 for covering, 4 for lottery.
    pub fn from_fields(fields: &[u32]) -> Result<Self> {
        match *fields {
            [n, k, t] => Self::covering(n, k, t),
            [n, k, p, t] => Self::lottery(n, k, p, t),
            _ => Err(Error::invalid(format!(
                "expected 3 or 4 header fields, got {}",
                fields.len()
            ))),
        }
    }

    pub fn fields(&self) -> Vec<u32> {
        match *self {
            DesignKind::Covering { n, k, t } => vec![n, k, t],
            DesignKind::Lottery { n, k, p, t } => vec![n, k, p, t],
        }
    }

    pub fn n(&self) -> u32 {
        match *self {
            DesignKind::Covering { n, .. } | DesignKind::Lottery { n, .. } => n,
        }
    }

    pub fn k(&self) -> u32 {
        match *self {
            DesignKind::Covering { k, .. } | DesignKind::Lottery { k, .. } => k,
        }
    }

    pub fn t(&self) -> u32 {
        match *self {
            DesignKind::Covering { t, .. } | DesignKind::Lottery { t, .. } => t,
        }
    }

    pub fn is_covering(&self) -> bool {
        matches!(self, DesignKind::Covering { .. })
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DesignKind::Covering { n, k, t } => write!(f, "covering ({n}, {k}, {t})"),
            DesignKind::Lottery { n, k, p, t } => write!(f, "lottery ({n}, {k}, {p}, {t})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Design {
    kind: DesignKind,
    labels: Vec<u8>,
    provenance: String,
}

impl Design {
    /// Builds a design from sorted, in-range blocks; at least one block.
    pub fn from_blocks<I, B>(kind: DesignKind, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[u32]>,
    {
        let k = kind.k() as usize;
        let mut labels = Vec::new();
        let mut scratch = Vec::with_capacity(k);
        for (i, block) in blocks.into_iter().enumerate() {
            scratch.clear();
            scratch.extend_from_slice(block.as_ref());
            scratch.sort_unstable();
            check_block(&scratch, kind).map_err(|m| Error::invalid(format!("block {i}: {m}")))?;
            labels.extend(scratch.iter().map(|&x| x as u8));
        }
        if labels.is_empty() {
            return Err(Error::invalid("a design needs at least one block"));
        }
        Ok(Design {
            kind,
            labels,
            provenance: String::new(),
        })
    }

    /// Trusted constructor for builders in this crate; may be empty.
    pub(crate) fn from_labels_unchecked(kind: DesignKind, labels: Vec<u8>) -> Self {
        debug_assert_eq!(labels.len() % kind.k() as usize, 0);
        Design {
            kind,
            labels,
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance = note.into();
        self
    }

    /// Same blocks under a different header with the same n and k.
    pub fn reinterpret(&self, kind: DesignKind) -> Result<Self> {
        if kind.n() != self.kind.n() || kind.k() != self.kind.k() {
            return Err(Error::invalid(format!(
                "cannot reinterpret {} as {kind}",
                self.kind
            )));
        }
        Ok(Design {
            kind,
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
        })
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.kind.n()
    }

    pub fn k(&self) -> usize {
        self.kind.k() as usize
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn block_count(&self) -> usize {
        self.labels.len() / self.k()
    }

    pub fn blocks(&self) -> std::slice::ChunksExact<'_, u8> {
        self.labels.chunks_exact(self.k())
    }

    pub fn block(&self, i: usize) -> &[u8] {
        let k = self.k();
        &self.labels[i * k..(i + 1) * k]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Copy without block `i`; fails if that would leave no blocks.
    pub fn without_block(&self, i: usize) -> Result<Self> {
        if self.block_count() <= 1 {
            return Err(Error::invalid("cannot remove the only block"));
        }
        let k = self.k();
        let mut labels = self.labels.clone();
        labels.drain(i * k..(i + 1) * k);
        Ok(Design {
            kind: self.kind,
            labels,
            provenance: self.provenance.clone(),
        })
    }

    /// Copy with one more block appended.
    pub fn with_block(&self, block: &[u32]) -> Result<Self> {
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        check_block(&sorted, self.kind).map_err(Error::invalid)?;
        let mut labels = self.labels.clone();
        labels.extend(sorted.iter().map(|&x| x as u8));
        Ok(Design {
            kind: self.kind,
            labels,
            provenance: self.provenance.clone(),
        })
    }

    /// Number of blocks that repeat an earlier block.
    pub fn duplicate_blocks(&self) -> u64 {
        let mut keys: Vec<&[u8]> = self.blocks().collect();
        if let Ok(table) = BinomialTable::new(self.n(), self.k()) {
            let mut ranks: Vec<u64> = keys.iter().map(|b| table.rank(b)).collect();
            ranks.sort_unstable();
            return ranks.windows(2).filter(|w| w[0] == w[1]).count() as u64;
        }
        keys.sort_unstable();
        keys.windows(2).filter(|w| w[0] == w[1]).count() as u64
    }
}

impl fmt::Debug for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Design")
            .field("kind", &self.kind)
            .field("blocks", &self.block_count())
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Sorted block check: size k, labels in 1..=n, no repeats.
fn check_block(block: &[u32], kind: DesignKind) -> std::result::Result<(), String> {
    if block.len() != kind.k() as usize {
        return Err(format!("expected {} elements, got {}", kind.k(), block.len()));
    }
    if let Some(&x) = block.iter().find(|&&x| x == 0 || x > kind.n()) {
        return Err(format!("element {x} outside 1..={}", kind.n()));
    }
    if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("element {} repeated", w[0]));
    }
    Ok(())
}

/// Parses a block-list file with a header line.
pub fn parse_design<R: BufRead>(reader: R) -> Result<Design> {
    parse_inner(reader, None)
}

/// Parses a headerless block list; every non-comment line is a block.
pub fn parse_design_with_kind<R: BufRead>(reader: R, kind: DesignKind) -> Result<Design> {
    parse_inner(reader, Some(kind))
}

fn parse_inner<R: BufRead>(reader: R, preset: Option<DesignKind>) -> Result<Design> {
    let mut kind = preset;
    let mut provenance: Vec<String> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut block: Vec<u32> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if kind.is_none() || (preset.is_some() && labels.is_empty()) {
                provenance.push(comment.strip_prefix(' ').unwrap_or(comment).to_owned());
            }
            continue;
        }
        let body = line.trim();
        if body.is_empty() {
            continue;
        }

        let Some(kind) = kind else {
            let fields = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| {
                        ParseError::new(lineno, Some(tok), "header field is not a non-negative integer")
                    })
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            kind = Some(
                DesignKind::from_fields(&fields)
                    .map_err(|e| ParseError::new(lineno, None, format!("bad header: {e}")))?,
            );
            continue;
        };

        block.clear();
        for tok in body.split_whitespace() {
            let x: u32 = tok
                .parse()
                .map_err(|_| ParseError::new(lineno, Some(tok), "not a non-negative integer"))?;
            if x == 0 || x > kind.n() {
                return Err(ParseError::new(
                    lineno,
                    Some(tok),
                    format!("element outside 1..={}", kind.n()),
                )
                .into());
            }
            block.push(x);
        }
        if block.len() != kind.k() as usize {
            return Err(ParseError::new(
                lineno,
                None,
                format!("expected {} elements, found {}", kind.k(), block.len()),
            )
            .into());
        }
        block.sort_unstable();
        if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
            let tok = w[0].to_string();
            return Err(ParseError::new(lineno, Some(&tok), "element repeated within block").into());
        }
        labels.extend(block.iter().map(|&x| x as u8));
    }

    let Some(kind) = kind else {
        return Err(ParseError::new(last_line.max(1), None, "missing header line").into());
    };
    if labels.is_empty() {
        return Err(ParseError::new(last_line.max(1), None, "design has no blocks").into());
    }
    Ok(Design {
        kind,
        labels,
        provenance: provenance.join("\n"),
    })
}

/// Writes provenance comments, the header, then one block per line.
pub fn write_design<W: Write>(design: &Design, mut out: W) -> std::io::Result<()> {
    if !design.provenance.is_empty() {
        for line in design.provenance.split('\n') {
            if line.is_empty() {
                writeln!(out, "#")?;
            } else {
                writeln!(out, "# {line}")?;
            }
        }
    }
    let header: Vec<String> = design.kind.fields().iter().map(u32::to_string).collect();
    writeln!(out, "{}", header.join(" "))?;
    let mut line = String::new();
    for block in design.blocks() {
        line.clear();
        for (i, x) in block.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(itoa_u8(*x));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

fn itoa_u8(x: u8) -> &'static str {
    static TABLE: std::sync::OnceLock<Vec<String>> = std::sync::OnceLock::new();
    &TABLE.get_or_init(|| (0..=255u32).map(|i| i.to_string()).collect())[x as usize]
}

/// All `C(n, k)` k-subsets of `1..=n` in colex order, as a covering design
/// with `t = k`.
pub fn enumerate_full_design(n: u32, k: u32, cap: u64) -> Result<Design> {
    let kind = DesignKind::covering(n, k, k)?;
    let count = binomial_u64(n as u64, k as u64)
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::resource(format!("C({n}, {k}) blocks exceed the cap of {cap}")))?;
    let k = k as usize;
    let mut labels = Vec::with_capacity(count as usize * k);
    let mut cur: Vec<u8> = (1..=k as u8).collect();
    loop {
        labels.extend_from_slice(&cur);
        if !next_colex(&mut cur, n) {
            break;
        }
    }
    debug_assert_eq!(labels.len() as u64, count * k as u64);
    Ok(Design::from_labels_unchecked(kind, labels).with_provenance(format!(
        "all {k}-subsets of 1..{n} in colex order"
    )))
}
