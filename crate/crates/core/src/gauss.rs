//! Gauss codes and phrases for virtual, flat and free knots.
//!
//! A code is a cyclic word in which every label occurs exactly twice. The
//! decoration attached to each occurrence is what distinguishes the three
//! flavors: a virtual code records over/under and the crossing sign, a flat
//! code records which end of the chord carries the arrowhead, and a free code
//! records nothing at all.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::reidemeister::Triangle;

pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Passage {
    Over,
    Under,
}

impl Passage {
    pub fn flip(self) -> Passage {
        match self {
            Passage::Over => Passage::Under,
            Passage::Under => Passage::Over,
        }
    }
}

/// Chord end of a flat code. `Head` is where the arrow points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Head,
    Tail,
}

impl End {
    pub fn flip(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

/// Decoration of one occurrence in a virtual code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub passage: Passage,
    pub sign: Sign,
}

impl Crossing {
    pub fn new(passage: Passage, sign: Sign) -> Self {
        Crossing { passage, sign }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Virtual,
    Flat,
    Free,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Virtual => "virtual",
            Flavor::Flat => "flat",
            Flavor::Free => "free",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("malformed token {token:?}")]
    MalformedToken { token: String },
    #[error("label {label} occurs {count} time(s), expected exactly 2")]
    LabelCount { label: String, count: usize },
    #[error("label {label} must occur once over and once under")]
    PassageImbalance { label: String },
    #[error("label {label} must have one head and one tail")]
    ArrowImbalance { label: String },
    #[error("sign mismatch on label {label}")]
    SignMismatch { label: String },
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("expected a single closed word")]
    NotACode,
    #[error("expected a phrase")]
    NotAPhrase,
}

/// Per-flavor behaviour of an occurrence decoration: validation, the text
/// grammar, and which Reidemeister configurations are legal.
pub trait Decoration: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static {
    const FLAVOR: Flavor;

    /// Separator between serialized tokens.
    const SEPARATOR: &'static str;

    fn check_pair(label: &str, a: Self, b: Self) -> Result<(), GaussError>;

    fn write_token(&self, label: Label, out: &mut String);

    fn parse_word(text: &str) -> Result<Vec<(String, Self)>, GaussError>;

    fn sign(&self) -> Option<Sign> {
        None
    }

    /// `Some(true)` when the chord's arrowhead sits at this occurrence.
    fn is_head(&self) -> Option<bool> {
        None
    }

    /// Decorations (first, second occurrence) for a new kink.
    fn r1_variants() -> Vec<[Self; 2]>;

    /// Decorations `[b, c, b', c']` for a new bigon: `b, c` on the first
    /// strand, `b', c'` on the second.
    fn r2_variants() -> Vec<[Self; 4]>;

    /// Whether labels `b, c` whose occurrences form two adjacent blocks can be
    /// cancelled. `first` holds the decorations of `b, c` in the first block,
    /// `second` those of `b, c` in the second block.
    fn r2_legal(first: [Self; 2], second: [Self; 2]) -> bool;

    fn r3_legal(t: &Triangle<Self>) -> bool;
}

/// Flavors on which the smoothing sum is defined.
pub trait FlatLike: Decoration {}

impl FlatLike for End {}
impl FlatLike for () {}

fn split_label(s: &str) -> Option<&str> {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric()) {
        Some(s)
    } else {
        None
    }
}

impl Decoration for Crossing {
    const FLAVOR: Flavor = Flavor::Virtual;
    const SEPARATOR: &'static str = "";

    fn check_pair(label: &str, a: Self, b: Self) -> Result<(), GaussError> {
        if a.passage == b.passage {
            return Err(GaussError::PassageImbalance { label: label.to_string() });
        }
        if a.sign != b.sign {
            return Err(GaussError::SignMismatch { label: label.to_string() });
        }
        Ok(())
    }

    fn write_token(&self, label: Label, out: &mut String) {
        use std::fmt::Write;
        let p = match self.passage {
            Passage::Over => 'O',
            Passage::Under => 'U',
        };
        let s = match self.sign {
            Sign::Pos => '+',
            Sign::Neg => '-',
        };
        let _ = write!(out, "{p}{label}{s}");
    }

    fn parse_word(text: &str) -> Result<Vec<(String, Self)>, GaussError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bytes = compact.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let passage = match bytes[i] {
                b'O' => Passage::Over,
                b'U' => Passage::Under,
                _ => return Err(malformed(&compact[start..])),
            };
            i += 1;
            let label_start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            if i == label_start || i == bytes.len() {
                return Err(malformed(&compact[start..]));
            }
            let sign = match bytes[i] {
                b'+' => Sign::Pos,
                b'-' => Sign::Neg,
                _ => return Err(malformed(&compact[start..=i])),
            };
            out.push((compact[label_start..i].to_string(), Crossing::new(passage, sign)));
            i += 1;
        }
        Ok(out)
    }

    fn sign(&self) -> Option<Sign> {
        Some(self.sign)
    }

    fn is_head(&self) -> Option<bool> {
        Some(self.passage == Passage::Over)
    }

    fn r1_variants() -> Vec<[Self; 2]> {
        let mut v = Vec::with_capacity(4);
        for sign in [Sign::Pos, Sign::Neg] {
            for first in [Passage::Over, Passage::Under] {
                v.push([Crossing::new(first, sign), Crossing::new(first.flip(), sign)]);
            }
        }
        v
    }

    fn r2_variants() -> Vec<[Self; 4]> {
        let mut v = Vec::with_capacity(4);
        for top in [Passage::Over, Passage::Under] {
            for sign in [Sign::Pos, Sign::Neg] {
                v.push([
                    Crossing::new(top, sign),
                    Crossing::new(top, -sign),
                    Crossing::new(top.flip(), sign),
                    Crossing::new(top.flip(), -sign),
                ]);
            }
        }
        v
    }

    fn r2_legal(first: [Self; 2], second: [Self; 2]) -> bool {
        // One strand passes over both crossings; the bigon's crossings have
        // opposite signs.
        first[0].passage == first[1].passage
            && second[0].passage == second[1].passage
            && first[0].passage != second[0].passage
            && first[0].sign != first[1].sign
    }

    fn r3_legal(t: &Triangle<Self>) -> bool {
        let Some(over) = t.over_relation(|d| d.passage == Passage::Over) else {
            return false;
        };
        // sigma[i][j]: orientation of (direction of strand i, direction of
        // strand j), recovered from the crossing sign and which strand is on top.
        let mut sigma = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (_, deco) = t.crossing(i, j);
                let s = deco.sign.value() * if over[i][j] { 1 } else { -1 };
                sigma[i][j] = s;
                sigma[j][i] = -s;
            }
        }
        let e = t.strand_orders();
        let a = e[0] * e[1] * sigma[0][1];
        let b = e[0] * e[2] * sigma[0][2];
        let c = e[1] * e[2] * sigma[1][2];
        a == b && b == c
    }
}

impl Decoration for End {
    const FLAVOR: Flavor = Flavor::Flat;
    const SEPARATOR: &'static str = " ";

    fn check_pair(label: &str, a: Self, b: Self) -> Result<(), GaussError> {
        if a == b {
            return Err(GaussError::ArrowImbalance { label: label.to_string() });
        }
        Ok(())
    }

    fn write_token(&self, label: Label, out: &mut String) {
        use std::fmt::Write;
        let e = match self {
            End::Head => 'H',
            End::Tail => 'T',
        };
        let _ = write!(out, "{e}{label}");
    }

    fn parse_word(text: &str) -> Result<Vec<(String, Self)>, GaussError> {
        text.split_whitespace()
            .map(|tok| {
                let end = match tok.as_bytes()[0] {
                    b'H' => End::Head,
                    b'T' => End::Tail,
                    _ => return Err(malformed(tok)),
                };
                let label = split_label(&tok[1..]).ok_or_else(|| malformed(tok))?;
                Ok((label.to_string(), end))
            })
            .collect()
    }

    fn is_head(&self) -> Option<bool> {
        Some(*self == End::Head)
    }

    fn r1_variants() -> Vec<[Self; 2]> {
        vec![[End::Head, End::Tail], [End::Tail, End::Head]]
    }

    fn r2_variants() -> Vec<[Self; 4]> {
        vec![[End::Head, End::Tail, End::Tail, End::Head], [End::Tail, End::Head, End::Head, End::Tail]]
    }

    fn r2_legal(first: [Self; 2], _second: [Self; 2]) -> bool {
        // Lifted, the two crossings get opposite signs exactly when their
        // heads lie on different strands.
        first[0] != first[1]
    }

    fn r3_legal(t: &Triangle<Self>) -> bool {
        (0..8u8).any(|heights| Crossing::r3_legal(&lift_triangle(t, heights)))
    }
}

/// The virtual crossing that flattens to `end` with the given passage.
pub fn lift(end: End, passage: Passage) -> Crossing {
    let sign = if (end == End::Head) == (passage == Passage::Over) { Sign::Pos } else { Sign::Neg };
    Crossing::new(passage, sign)
}

/// Bit `k` of `heights` puts the lower-numbered strand of pair `k` on top,
/// pairs being `(0,1), (0,2), (1,2)`.
fn lift_triangle(t: &Triangle<End>, heights: u8) -> Triangle<Crossing> {
    let pair_bit = |i: usize, j: usize| match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    };
    let mut blocks = [[Symbol::new(0, Crossing::new(Passage::Over, Sign::Pos)); 2]; 3];
    for i in 0..3 {
        for k in 0..2 {
            let s = t.blocks[i][k];
            let j = (0..3).find(|&j| j != i && t.blocks[j].iter().any(|o| o.label == s.label)).unwrap();
            let lower_on_top = heights >> pair_bit(i, j) & 1 == 1;
            let over = lower_on_top == (i < j);
            blocks[i][k] = Symbol::new(s.label, lift(s.deco, if over { Passage::Over } else { Passage::Under }));
        }
    }
    Triangle { blocks }
}

impl Decoration for () {
    const FLAVOR: Flavor = Flavor::Free;
    const SEPARATOR: &'static str = " ";

    fn check_pair(_: &str, _: Self, _: Self) -> Result<(), GaussError> {
        Ok(())
    }

    fn write_token(&self, label: Label, out: &mut String) {
        use std::fmt::Write;
        let _ = write!(out, "{label}");
    }

    fn parse_word(text: &str) -> Result<Vec<(String, Self)>, GaussError> {
        text.split_whitespace()
            .map(|tok| split_label(tok).map(|l| (l.to_string(), ())).ok_or_else(|| malformed(tok)))
            .collect()
    }

    fn r1_variants() -> Vec<[Self; 2]> {
        vec![[(), ()]]
    }

    fn r2_variants() -> Vec<[Self; 4]> {
        vec![[(), (), (), ()]]
    }

    fn r2_legal(_: [Self; 2], _: [Self; 2]) -> bool {
        true
    }

    fn r3_legal(_: &Triangle<Self>) -> bool {
        true
    }
}

fn malformed(tok: &str) -> GaussError {
    GaussError::MalformedToken { token: tok.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol<D> {
    pub label: Label,
    pub deco: D,
}

impl<D> Symbol<D> {
    pub fn new(label: Label, deco: D) -> Self {
        Symbol { label, deco }
    }
}

/// Checks that every label occurs exactly twice with compatible decorations.
pub(crate) fn validate<D: Decoration>(symbols: &[Symbol<D>]) -> Result<(), GaussError> {
    let mut seen: HashMap<Label, (D, usize)> = HashMap::new();
    for s in symbols {
        let e = seen.entry(s.label).or_insert((s.deco, 0));
        e.1 += 1;
        if e.1 == 2 {
            D::check_pair(&s.label.to_string(), e.0, s.deco)?;
        }
    }
    let mut bad: Vec<_> = seen.iter().filter(|(_, (_, n))| *n != 2).collect();
    bad.sort_by_key(|(l, _)| **l);
    if let Some((l, (_, n))) = bad.first() {
        return Err(GaussError::LabelCount { label: l.to_string(), count: *n });
    }
    Ok(())
}

/// Positions of both occurrences of every label, keyed by label.
pub(crate) fn occurrence_table<D>(symbols: &[Symbol<D>]) -> HashMap<Label, (usize, usize)> {
    let mut t: HashMap<Label, (usize, usize)> = HashMap::with_capacity(symbols.len() / 2);
    for (i, s) in symbols.iter().enumerate() {
        t.entry(s.label).and_modify(|e| e.1 = i).or_insert((i, usize::MAX));
    }
    t
}

/// Serializes `symbols` read cyclically from `start`, relabelling in order of
/// first occurrence.
fn relabelled(symbols: &[Symbol<impl Decoration>], start: usize, out: &mut String) {
    let n = symbols.len();
    let mut map: HashMap<Label, Label> = HashMap::with_capacity(n / 2);
    relabelled_into(symbols, start, n, &mut map, out);
}

fn relabelled_into<D: Decoration>(
    symbols: &[Symbol<D>],
    start: usize,
    count: usize,
    map: &mut HashMap<Label, Label>,
    out: &mut String,
) {
    let n = symbols.len();
    for k in 0..count {
        let s = symbols[(start + k) % n];
        let next = map.len() as Label + 1;
        let l = *map.entry(s.label).or_insert(next);
        if !out.is_empty() && !out.ends_with('/') && !out.ends_with(':') {
            out.push_str(D::SEPARATOR);
        }
        s.deco.write_token(l, out);
    }
}

/// Least serialization over all rotations, with labels renumbered 1..n in
/// order of first occurrence.
pub(crate) fn closed_normal_form<D: Decoration>(symbols: &[Symbol<D>]) -> String {
    if symbols.is_empty() {
        return "()".to_string();
    }
    let mut best: Option<String> = None;
    let mut buf = String::new();
    for r in 0..symbols.len() {
        buf.clear();
        relabelled(symbols, r, &mut buf);
        if best.as_ref().is_none_or(|b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    best.unwrap()
}

/// A single-component Gauss code. Rotations denote the same code.
#[derive(Clone, Debug)]
pub struct GaussCode<D> {
    symbols: Vec<Symbol<D>>,
}

pub type VirtualGaussCode = GaussCode<Crossing>;
pub type FlatGaussCode = GaussCode<End>;
pub type FreeGaussCode = GaussCode<()>;

impl<D: Decoration> GaussCode<D> {
    pub fn new(symbols: Vec<Symbol<D>>) -> Result<Self, GaussError> {
        validate(&symbols)?;
        Ok(GaussCode { symbols })
    }

    pub(crate) fn from_valid(symbols: Vec<Symbol<D>>) -> Self {
        debug_assert!(validate(&symbols).is_ok(), "invalid code {symbols:?}");
        GaussCode { symbols }
    }

    pub fn empty() -> Self {
        GaussCode { symbols: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self, GaussError> {
        match parse::<D>(text)? {
            Parsed::Code(c) => Ok(c),
            Parsed::Phrase(_) => Err(GaussError::NotACode),
        }
    }

    pub fn symbols(&self) -> &[Symbol<D>] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol<D>> {
        self.symbols
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.symbols.len() / 2
    }

    /// Labels in order of first occurrence.
    pub fn labels(&self) -> Vec<Label> {
        let mut seen = std::collections::HashSet::new();
        self.symbols.iter().filter(|s| seen.insert(s.label)).map(|s| s.label).collect()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.symbols.iter().any(|s| s.label == label)
    }

    pub fn occurrences(&self, label: Label) -> Option<(usize, usize)> {
        let mut it = self.symbols.iter().enumerate().filter(|(_, s)| s.label == label).map(|(i, _)| i);
        Some((it.next()?, it.next()?))
    }

    pub(crate) fn require(&self, label: Label) -> Result<(usize, usize), GaussError> {
        self.occurrences(label).ok_or(GaussError::UnknownLabel(label))
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut symbols = self.symbols.clone();
        if !symbols.is_empty() {
            let k = k % symbols.len();
            symbols.rotate_left(k);
        }
        GaussCode { symbols }
    }

    /// Renames labels through `f`, which must be injective on this code.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Self {
        GaussCode::from_valid(self.symbols.iter().map(|s| Symbol::new(f(s.label), s.deco)).collect())
    }

    pub fn max_label(&self) -> Label {
        self.symbols.iter().map(|s| s.label).max().unwrap_or(0)
    }

    pub fn to_chord_diagram(&self) -> ChordDiagram {
        ChordDiagram::from_symbols(&self.symbols)
    }

    /// The serialization in the order stored, labels as stored.
    pub fn raw_string(&self) -> String {
        if self.symbols.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                out.push_str(D::SEPARATOR);
            }
            s.deco.write_token(s.label, &mut out);
        }
        out
    }

    /// Canonical text: first-occurrence relabelling, least rotation.
    pub fn canonical_string(&self) -> String {
        closed_normal_form(&self.symbols)
    }

    pub(crate) fn map_decorations<E: Decoration>(&self, f: impl Fn(Label, D) -> E) -> GaussCode<E> {
        GaussCode::from_valid(self.symbols.iter().map(|s| Symbol::new(s.label, f(s.label, s.deco))).collect())
    }
}

impl<D: Decoration> PartialEq for GaussCode<D> {
    fn eq(&self, other: &Self) -> bool {
        self.symbols.len() == other.symbols.len() && self.canonical_string() == other.canonical_string()
    }
}

impl<D: Decoration> Eq for GaussCode<D> {}

impl<D: Decoration> fmt::Display for GaussCode<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl<D: Decoration> std::str::FromStr for GaussCode<D> {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussCode::parse(s)
    }
}

/// Drops signs; the arrowhead goes to the over-passing occurrence.
/// Forgets over/under but keeps the local framing: the head sits at the over
/// passage of a positive crossing and at the under passage of a negative one,
/// so a crossing change leaves the flat code unchanged.
pub fn flatten(code: &VirtualGaussCode) -> FlatGaussCode {
    code.map_decorations(|_, d| flat_end(d))
}

fn flat_end(d: Crossing) -> End {
    if (d.passage == Passage::Over) == (d.sign == Sign::Pos) {
        End::Head
    } else {
        End::Tail
    }
}

pub fn forget_arrows(code: &FlatGaussCode) -> FreeGaussCode {
    code.map_decorations(|_, _| ())
}

/// Reverses the arrow of one chord.
pub fn virtualize(code: &FlatGaussCode, label: Label) -> Result<FlatGaussCode, GaussError> {
    code.require(label)?;
    Ok(code.map_decorations(|l, d| if l == label { d.flip() } else { d }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhraseKind {
    /// Closed components; each word may be rotated independently.
    Closed,
    /// Components are intervals with fixed endpoints; no rotation.
    Long,
}

/// An ordered list of words, one per component.
#[derive(Clone, Debug)]
pub struct GaussPhrase<D> {
    words: Vec<Vec<Symbol<D>>>,
    kind: PhraseKind,
}

impl<D: Decoration> GaussPhrase<D> {
    pub fn new(words: Vec<Vec<Symbol<D>>>, kind: PhraseKind) -> Result<Self, GaussError> {
        let all: Vec<_> = words.iter().flatten().copied().collect();
        validate(&all)?;
        Ok(GaussPhrase { words, kind })
    }

    pub(crate) fn from_valid(words: Vec<Vec<Symbol<D>>>, kind: PhraseKind) -> Self {
        debug_assert!(validate(&words.iter().flatten().copied().collect::<Vec<_>>()).is_ok());
        GaussPhrase { words, kind }
    }

    pub fn parse(text: &str) -> Result<Self, GaussError> {
        match parse::<D>(text)? {
            Parsed::Phrase(p) => Ok(p),
            Parsed::Code(_) => Err(GaussError::NotAPhrase),
        }
    }

    pub fn words(&self) -> &[Vec<Symbol<D>>] {
        &self.words
    }

    pub fn kind(&self) -> PhraseKind {
        self.kind
    }

    pub fn crossing_count(&self) -> usize {
        self.words.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All words joined in their fixed order.
    pub fn concatenated(&self) -> Vec<Symbol<D>> {
        self.words.iter().flatten().copied().collect()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.words.iter().flatten().any(|s| s.label == label)
    }

    /// Canonical text. Long phrases are relabelled in order of first
    /// occurrence; closed phrases additionally take the least combination of
    /// per-word rotations.
    pub fn canonical_string(&self) -> String {
        match self.kind {
            PhraseKind::Long => {
                let starts = vec![0; self.words.len()];
                format!("long:{}", self.serialize_with(&starts))
            }
            PhraseKind::Closed => {
                let mut best: Option<String> = None;
                let mut starts = vec![0; self.words.len()];
                loop {
                    let s = self.serialize_with(&starts);
                    if best.as_ref().is_none_or(|b| s < *b) {
                        best = Some(s);
                    }
                    // odometer over rotations
                    let mut k = 0;
                    loop {
                        if k == starts.len() {
                            return best.unwrap_or_default();
                        }
                        starts[k] += 1;
                        if starts[k] < self.words[k].len().max(1) {
                            break;
                        }
                        starts[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }

    fn serialize_with(&self, starts: &[usize]) -> String {
        let mut out = String::new();
        let mut map = HashMap::new();
        for (w, word) in self.words.iter().enumerate() {
            if w > 0 {
                out.push('/');
            }
            if word.is_empty() {
                out.push_str("()");
            } else {
                relabelled_into(word, starts[w], word.len(), &mut map, &mut out);
            }
        }
        out
    }
}

impl<D: Decoration> PartialEq for GaussPhrase<D> {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.words.len() == other.words.len()
            && self.canonical_string() == other.canonical_string()
    }
}

impl<D: Decoration> Eq for GaussPhrase<D> {}

impl<D: Decoration> fmt::Display for GaussPhrase<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl<D: Decoration> std::str::FromStr for GaussPhrase<D> {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussPhrase::parse(s)
    }
}

pub fn flatten_phrase(p: &GaussPhrase<Crossing>) -> GaussPhrase<End> {
    GaussPhrase::from_valid(
        p.words.iter().map(|w| w.iter().map(|s| Symbol::new(s.label, flat_end(s.deco))).collect()).collect(),
        p.kind,
    )
}

pub fn forget_phrase_arrows(p: &GaussPhrase<End>) -> GaussPhrase<()> {
    GaussPhrase::from_valid(
        p.words.iter().map(|w| w.iter().map(|s| Symbol::new(s.label, ())).collect()).collect(),
        p.kind,
    )
}

/// Result of parsing one line of input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed<D: Decoration> {
    Code(GaussCode<D>),
    Phrase(GaussPhrase<D>),
}

fn strip_comment(text: &str) -> &str {
    match text.find('#') {
        Some(i) => &text[..i],
        None => text,
    }
}

/// Parses a code (`O1+U1+`), a closed phrase (`w1/w2`) or a long phrase
/// (`long:w1/w2`). The empty word is written `()`.
///
/// Labels that are all plain decimal numbers keep their values; otherwise
/// labels are numbered 1..n in order of first occurrence.
pub fn parse<D: Decoration>(text: &str) -> Result<Parsed<D>, GaussError> {
    let body = strip_comment(text).trim();
    let (kind, body) = match body.strip_prefix("long:") {
        Some(rest) => (Some(PhraseKind::Long), rest.trim()),
        None if body.contains('/') => (Some(PhraseKind::Closed), body),
        None => (None, body),
    };
    let raw_words: Vec<Vec<(String, D)>> = body
        .split('/')
        .map(|w| {
            let w = w.trim();
            if w == "()" || w.is_empty() {
                Ok(Vec::new())
            } else {
                D::parse_word(w)
            }
        })
        .collect::<Result<_, _>>()?;

    let all_numeric =
        raw_words.iter().flatten().all(|(l, _)| (l == "0" || !l.starts_with('0')) && l.parse::<Label>().is_ok());
    let mut interned: HashMap<String, Label> = HashMap::new();
    let mut label_of = |name: &str| -> Label {
        if all_numeric {
            return name.parse().unwrap();
        }
        let next = interned.len() as Label + 1;
        *interned.entry(name.to_string()).or_insert(next)
    };
    let words: Vec<Vec<Symbol<D>>> =
        raw_words.iter().map(|w| w.iter().map(|(l, d)| Symbol::new(label_of(l), *d)).collect()).collect();

    // Validate with the original names in error messages.
    let mut counts: HashMap<&str, (usize, D)> = HashMap::new();
    for (name, d) in raw_words.iter().flatten() {
        let e = counts.entry(name.as_str()).or_insert((0, *d));
        e.0 += 1;
        if e.0 == 2 {
            D::check_pair(name, e.1, *d)?;
        }
    }
    let mut names: Vec<_> = raw_words.iter().flatten().map(|(n, _)| n.as_str()).collect();
    names.dedup();
    for name in names {
        let n = counts[name].0;
        if n != 2 {
            return Err(GaussError::LabelCount { label: name.to_string(), count: n });
        }
    }

    match kind {
        None => Ok(Parsed::Code(GaussCode::from_valid(words.into_iter().next().unwrap_or_default()))),
        Some(k) => Ok(Parsed::Phrase(GaussPhrase::from_valid(words, k))),
    }
}

/// Guesses the flavor of a line: signs mean virtual, H/T-prefixed tokens
/// that pair up mean flat, anything else is free.
pub fn detect_flavor(text: &str) -> Flavor {
    let body = strip_comment(text).trim();
    let body = body.strip_prefix("long:").unwrap_or(body);
    if body.contains('+') || body.contains('-') {
        return Flavor::Virtual;
    }
    let flat = body
        .split('/')
        .filter(|w| w.trim() != "()")
        .flat_map(str::split_whitespace)
        .all(|t| t.len() > 1 && (t.starts_with('H') || t.starts_with('T')));
    if flat && parse::<End>(body).is_ok() {
        Flavor::Flat
    } else {
        Flavor::Free
    }
}

/// A chord of a Gauss diagram, endpoints given as positions on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    pub label: Label,
    pub ends: (usize, usize),
    pub sign: Option<Sign>,
    /// Position of the arrowhead, when the flavor has arrows.
    pub head: Option<usize>,
}

impl Chord {
    pub fn tail(&self) -> Option<usize> {
        self.head.map(|h| if h == self.ends.0 { self.ends.1 } else { self.ends.0 })
    }
}

fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordDiagram {
    chords: Vec<Chord>,
    circle_size: usize,
}

impl ChordDiagram {
    pub fn from_symbols<D: Decoration>(symbols: &[Symbol<D>]) -> Self {
        let table = occurrence_table(symbols);
        let mut chords: Vec<Chord> = table
            .iter()
            .map(|(&label, &(a, b))| {
                let (da, _) = (symbols[a].deco, symbols[b].deco);
                let head = da.is_head().map(|h| if h { a } else { b });
                Chord { label, ends: (a, b), sign: da.sign(), head }
            })
            .collect();
        chords.sort_by_key(|c| c.ends.0);
        ChordDiagram { chords, circle_size: symbols.len() }
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn circle_size(&self) -> usize {
        self.circle_size
    }

    pub fn chord(&self, label: Label) -> Option<&Chord> {
        self.chords.iter().find(|c| c.label == label)
    }

    pub fn intersects(&self, a: Label, b: Label) -> bool {
        match (self.chord(a), self.chord(b)) {
            (Some(x), Some(y)) if a != b => interleaved(x.ends, y.ends),
            _ => false,
        }
    }

    /// Labels of the chords crossing `label`'s chord.
    pub fn crossing(&self, label: Label) -> Vec<Label> {
        let Some(c) = self.chord(label) else { return Vec::new() };
        self.chords.iter().filter(|d| d.label != label && interleaved(c.ends, d.ends)).map(|d| d.label).collect()
    }

    /// All intersecting pairs `(a, b)` with `a < b`, sorted.
    pub fn intersecting_pairs(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for (i, c) in self.chords.iter().enumerate() {
            for d in &self.chords[i + 1..] {
                if interleaved(c.ends, d.ends) {
                    out.push((c.label.min(d.label), c.label.max(d.label)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn parity(&self, label: Label) -> Option<Parity> {
        self.chord(label)?;
        Some(Parity::of(self.crossing(label).len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VirtualGaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn parses_trefoil() {
        let k = v("O1+U2+O3+U1+O2+U3+");
        assert_eq!(k.crossing_count(), 3);
        assert!(k.symbols().iter().all(|s| s.deco.sign == Sign::Pos));
    }

    #[test]
    fn parses_kink() {
        let k = v("O1+U1+");
        assert_eq!(k.crossing_count(), 1);
    }

    #[test]
    fn sign_mismatch_is_rejected() {
        assert_eq!(VirtualGaussCode::parse("O1+U1-"), Err(GaussError::SignMismatch { label: "1".into() }));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(VirtualGaussCode::parse("O1+O1+"), Err(GaussError::PassageImbalance { .. })));
        assert!(matches!(VirtualGaussCode::parse("O1+U2+"), Err(GaussError::LabelCount { count: 1, .. })));
        assert!(matches!(VirtualGaussCode::parse("O1+U1+X2"), Err(GaussError::MalformedToken { .. })));
        assert!(matches!(VirtualGaussCode::parse("O1+U1"), Err(GaussError::MalformedToken { .. })));
        assert!(matches!(FlatGaussCode::parse("H1 H1"), Err(GaussError::ArrowImbalance { .. })));
        assert!(matches!(FreeGaussCode::parse("1 2 1 2 1"), Err(GaussError::LabelCount { count: 3, .. })));
    }

    #[test]
    fn alphanumeric_labels_are_renumbered() {
        let k = FreeGaussCode::parse("a bc a bc").unwrap();
        assert_eq!(k.symbols().iter().map(|s| s.label).collect::<Vec<_>>(), vec![1, 2, 1, 2]);
        let n = FreeGaussCode::parse("7 3 7 3").unwrap();
        assert!(n.contains(7) && n.contains(3));
        assert_eq!(n.to_string(), "1 2 1 2");
    }

    #[test]
    fn comments_and_empty() {
        let k = FreeGaussCode::parse("() # the unknot").unwrap();
        assert!(k.is_empty());
        assert_eq!(k.to_string(), "()");
        assert!(VirtualGaussCode::parse("").unwrap().is_empty());
    }

    #[test]
    fn equality_is_rotation_and_relabel_invariant() {
        let a = v("O1+U2+O3+U1+O2+U3+");
        assert_eq!(a.rotated(2), a);
        assert_eq!(a.to_string(), "O1+U2+O3+U1+O2+U3+");
        assert_eq!(a, v("O3+U1+O2+U3+O1+U2+"));
        assert_ne!(a, v("O1-U2-O3-U1-O2-U3-"));
        assert_ne!(a, v("O1+O2+O3+U1+U2+U3+"));
    }

    #[test]
    fn chord_diagram_intersections() {
        let t = v("O1+U2+O3+U1+O2+U3+").to_chord_diagram();
        assert_eq!(t.intersecting_pairs(), vec![(1, 2), (1, 3), (2, 3)]);
        let c = t.chord(1).unwrap();
        assert_eq!(c.head, Some(0));
        assert_eq!(c.tail(), Some(3));
        let u = v("O1+U1+O2+U2+").to_chord_diagram();
        assert!(u.intersecting_pairs().is_empty());
        assert!(!u.intersects(1, 1));
    }

    #[test]
    fn flatten_and_forget() {
        let k = v("O1+U1+");
        let f = flatten(&k);
        assert_eq!(f.symbols()[0].deco, End::Head);
        let t = flatten(&v("O1+U2+O3+U1+O2+U3+"));
        assert_eq!(t.to_string(), "H1 T2 H3 T1 H2 T3");
        assert_eq!(forget_arrows(&t).raw_string(), "1 2 3 1 2 3");
        // a crossing change does not alter the flat code
        assert_eq!(flatten(&v("U1-U2+O3+O1-O2+U3+")).to_string(), "H1 T2 H3 T1 H2 T3");
        assert_eq!(flatten(&v("O1-U1-")).symbols()[0].deco, End::Tail);
        assert!(forget_arrows(&FlatGaussCode::empty()).is_empty());
    }

    #[test]
    fn virtualize_is_an_involution() {
        let f = FlatGaussCode::parse("H1 T1").unwrap();
        let g = virtualize(&f, 1).unwrap();
        assert_eq!(g.raw_string(), "T1 H1");
        assert_eq!(virtualize(&g, 1).unwrap().raw_string(), f.raw_string());
        assert_eq!(forget_arrows(&g), forget_arrows(&f));
        assert_eq!(virtualize(&f, 9), Err(GaussError::UnknownLabel(9)));
    }

    #[test]
    fn phrases() {
        let p = GaussPhrase::<()>::parse("long:1 3/1 2 2/4 3 5/4/5").unwrap();
        assert_eq!(p.kind(), PhraseKind::Long);
        assert_eq!(p.words().len(), 5);
        assert_eq!(p.to_string(), "long:1 2/1 3 3/4 2 5/4/5");
        let q = GaussPhrase::<Crossing>::parse("U2+O3+/O2+U3+").unwrap();
        assert_eq!(q.kind(), PhraseKind::Closed);
        assert_eq!(q, GaussPhrase::parse("O3+U2+/U3+O2+").unwrap());
        let e = GaussPhrase::<Crossing>::parse("()/()").unwrap();
        assert_eq!(e.to_string(), "()/()");
    }

    #[test]
    fn flavor_detection() {
        assert_eq!(detect_flavor("O1+U1+"), Flavor::Virtual);
        assert_eq!(detect_flavor("H1 T1"), Flavor::Flat);
        assert_eq!(detect_flavor("1 2 1 2"), Flavor::Free);
        assert_eq!(detect_flavor("H1 H2 H1 H2"), Flavor::Free);
        assert_eq!(detect_flavor("long:H1 T2/T1 H2"), Flavor::Flat);
    }
}
