//! The formal sum η over smoothings of odd/even crossing pairs, its iterates,
//! and the version for long links.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::canonical::{canonical_key_long, reduce, reduce_long};
use crate::gauss::{Decoration, FlatLike, GaussCode, GaussError, GaussPhrase, Label, Parity, PhraseKind, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("chords {0} and {1} do not intersect")]
    NotInterleaved(Label, Label),
    #[error("smoothing {0} and {1} closes off a loop, changing the number of components")]
    ComponentChange(Label, Label),
    #[error("expected a long phrase")]
    NotLong,
}

/// A sum of terms with coefficients in Z/2, keyed by canonical text. A term
/// is present exactly when its coefficient is 1.
#[derive(Clone, Debug)]
pub struct FormalSum<T> {
    terms: BTreeMap<String, T>,
}

impl<T> Default for FormalSum<T> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<T> FormalSum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.terms.contains_key(key)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &T)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds one copy of `term`; a second copy cancels the first.
    pub fn add(&mut self, key: String, term: T) {
        if self.terms.remove(&key).is_none() {
            self.terms.insert(key, term);
        }
    }

    pub fn add_sum(&mut self, other: FormalSum<T>) {
        for (k, t) in other.terms {
            self.add(k, t);
        }
    }
}

impl<T> PartialEq for FormalSum<T> {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len() && self.terms.keys().eq(other.terms.keys())
    }
}

impl<T> Eq for FormalSum<T> {}

struct Terms<'a>(&'a [&'a String]);

impl Serialize for Terms<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for k in self.0 {
            seq.serialize_element(&serde_json::json!({ "code": k, "coeff": 1 }))?;
        }
        seq.end()
    }
}

impl<T> Serialize for FormalSum<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let keys: Vec<&String> = self.terms.keys().collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("terms", &Terms(&keys))?;
        m.serialize_entry("zero", &self.is_zero())?;
        m.end()
    }
}

pub type PairSet = BTreeSet<(Label, Label)>;

/// Intersecting chord pairs of opposite Gaussian parity.
pub fn parity_pairs<D: Decoration>(code: &GaussCode<D>) -> PairSet {
    let d = code.to_chord_diagram();
    d.intersecting_pairs().into_iter().filter(|&(a, b)| d.parity(a) != d.parity(b)).collect()
}

/// Smooths both crossings of an intersecting pair: the cyclic word
/// `p a q b r a s b` becomes `p s r q`.
pub fn smooth_pair<D: Decoration>(code: &GaussCode<D>, pair: (Label, Label)) -> Result<GaussCode<D>, EtaError> {
    let (a0, a1) = code.require(pair.0)?;
    let (b0, b1) = code.require(pair.1)?;
    if pair.0 == pair.1 || !code.to_chord_diagram().intersects(pair.0, pair.1) {
        return Err(EtaError::NotInterleaved(pair.0, pair.1));
    }
    let mut pos = [a0, a1, b0, b1];
    pos.sort_unstable();
    let [i1, i2, i3, i4] = pos;
    let sym = code.symbols();
    let mut out = Vec::with_capacity(sym.len() - 4);
    out.extend_from_slice(&sym[i4 + 1..]);
    out.extend_from_slice(&sym[..i1]);
    out.extend_from_slice(&sym[i3 + 1..i4]);
    out.extend_from_slice(&sym[i2 + 1..i3]);
    out.extend_from_slice(&sym[i1 + 1..i2]);
    Ok(GaussCode::from_valid(out))
}

/// Sum of the reduced smoothings over all parity pairs.
pub fn eta<D: FlatLike>(code: &GaussCode<D>, depth: usize) -> FormalSum<GaussCode<D>> {
    let mut sum = FormalSum::zero();
    for pair in parity_pairs(code) {
        let smoothed = smooth_pair(code, pair).expect("parity pairs intersect");
        let r = reduce(&smoothed, depth);
        sum.add(r.canonical_string(), r);
    }
    sum
}

/// η applied `j` times, extended linearly over the terms.
pub fn eta_iterate<D: FlatLike>(code: &GaussCode<D>, j: usize, depth: usize) -> FormalSum<GaussCode<D>> {
    assert!(j >= 1, "iterate index starts at 1");
    let mut sum = eta(code, depth);
    for _ in 1..j {
        let mut next = FormalSum::zero();
        for (_, term) in sum.terms() {
            next.add_sum(eta(term, depth));
        }
        sum = next;
    }
    sum
}

/// Parity of the number of occurrences strictly between the two occurrences
/// of `label`, reading the words in order.
pub fn phrase_parity<D: Decoration>(phrase: &GaussPhrase<D>, label: Label) -> Result<Parity, EtaError> {
    let all = phrase.concatenated();
    let pos: Vec<usize> = all.iter().enumerate().filter(|(_, s)| s.label == label).map(|(i, _)| i).collect();
    match pos[..] {
        [i, j] => Ok(Parity::of(j - i - 1)),
        _ => Err(GaussError::UnknownLabel(label).into()),
    }
}

/// One term of η of a long link. `ends[k]` is the component whose endpoint
/// the strand starting at component `k` now reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongTerm<D: Decoration> {
    pub phrase: GaussPhrase<D>,
    pub ends: Vec<usize>,
}

impl<D: Decoration> LongTerm<D> {
    fn key(&self, depth: usize) -> String {
        let text = canonical_key_long(&self.phrase, depth).text;
        if self.ends.iter().enumerate().all(|(k, &e)| k == e) {
            text
        } else {
            let ends: Vec<String> = self.ends.iter().map(|e| (e + 1).to_string()).collect();
            format!("{text};ends={}", ends.join(","))
        }
    }
}

/// Smooths `labels` in a long phrase by following each strand from its
/// starting point.
fn smooth_long<D: Decoration>(phrase: &GaussPhrase<D>, pair: (Label, Label)) -> Result<LongTerm<D>, EtaError> {
    let words = phrase.words();
    let mut bounds = Vec::new();
    let mut word_of = Vec::new();
    let mut flat: Vec<Symbol<D>> = Vec::new();
    for (w, word) in words.iter().enumerate() {
        bounds.push((flat.len(), flat.len() + word.len()));
        word_of.extend(std::iter::repeat_n(w, word.len()));
        flat.extend_from_slice(word);
    }
    let other =
        |p: usize| (0..flat.len()).find(|&q| q != p && flat[q].label == flat[p].label).expect("labels occur twice");
    let smoothed = |l: Label| l == pair.0 || l == pair.1;
    let mut visited = 0;
    let mut out = Vec::with_capacity(words.len());
    let mut ends = Vec::with_capacity(words.len());
    for (k, &(start, _)) in bounds.iter().enumerate() {
        let (mut w, mut pos) = (k, start);
        let mut word = Vec::new();
        while pos < bounds[w].1 {
            visited += 1;
            if smoothed(flat[pos].label) {
                let q = other(pos);
                w = word_of[q];
                pos = q + 1;
            } else {
                word.push(flat[pos]);
                pos += 1;
            }
        }
        out.push(word);
        ends.push(w);
    }
    if visited < flat.len() {
        return Err(EtaError::ComponentChange(pair.0, pair.1));
    }
    Ok(LongTerm { phrase: GaussPhrase::from_valid(out, PhraseKind::Long), ends })
}

fn interleaved(pos_a: (usize, usize), pos_b: (usize, usize)) -> bool {
    let inside = |x: usize| pos_a.0 < x && x < pos_a.1;
    inside(pos_b.0) != inside(pos_b.1)
}

/// Pairs of opposite phrase parity whose occurrences alternate in the
/// phrase read in order.
pub fn long_parity_pairs<D: Decoration>(phrase: &GaussPhrase<D>) -> PairSet {
    let all = phrase.concatenated();
    let mut pos: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (i, s) in all.iter().enumerate() {
        pos.entry(s.label).or_default().push(i);
    }
    let labels: Vec<(Label, (usize, usize), usize)> =
        pos.iter().map(|(&l, p)| (l, (p[0], p[1]), (p[1] - p[0] - 1) % 2)).collect();
    let mut out = PairSet::new();
    for (i, &(a, pa, par_a)) in labels.iter().enumerate() {
        for &(b, pb, par_b) in &labels[i + 1..] {
            if par_a != par_b && interleaved(pa, pb) {
                out.insert((a, b));
            }
        }
    }
    out
}

/// η of a long flat (or free) link. Fails when some pair's smoothing closes
/// off a loop.
pub fn eta_long<D: FlatLike>(phrase: &GaussPhrase<D>, depth: usize) -> Result<FormalSum<LongTerm<D>>, EtaError> {
    if phrase.kind() != PhraseKind::Long {
        return Err(EtaError::NotLong);
    }
    let mut sum = FormalSum::zero();
    for pair in long_parity_pairs(phrase) {
        let mut term = smooth_long(phrase, pair)?;
        term.phrase = reduce_long(&term.phrase, depth);
        sum.add(term.key(depth), term);
    }
    Ok(sum)
}
