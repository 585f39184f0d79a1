//! Normal forms for flat and free codes.
//!
//! A code is first shrunk by deletions. Third moves are then explored
//! breadth-first up to `depth` steps; any code in that ball admitting a
//! deletion is shrunk and the search restarts, otherwise the search moves to
//! the least code in the ball until that code is its own minimum. Every step
//! is a legal move, so equal keys mean equivalent codes. The converse is not
//! guaranteed.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::gauss::{closed_normal_form, Decoration, GaussCode, GaussPhrase, Label, PhraseKind, Symbol};
use crate::reidemeister::Strands;

pub const DEFAULT_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey {
    pub text: String,
    pub reduced_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identification {
    Equal,
    NotIdentified,
}

type Words<D> = Vec<Vec<Symbol<D>>>;

fn relabel<D: Copy>(words: &[Vec<Symbol<D>>]) -> Words<D> {
    let mut map: std::collections::HashMap<Label, Label> = std::collections::HashMap::new();
    words
        .iter()
        .map(|w| {
            w.iter()
                .map(|s| {
                    let next = map.len() as Label + 1;
                    Symbol::new(*map.entry(s.label).or_insert(next), s.deco)
                })
                .collect()
        })
        .collect()
}

/// Normal-form text and the words written in that form.
fn normal<D: Decoration>(words: &[Vec<Symbol<D>>], closed: bool) -> (String, Words<D>) {
    if !closed {
        let w = relabel(words);
        let text = GaussPhrase::from_valid(w.clone(), PhraseKind::Long).canonical_string();
        return (text, w);
    }
    let sym = &words[0];
    let text = closed_normal_form(sym);
    for r in 0..sym.len().max(1) {
        let mut rot = sym.clone();
        if !rot.is_empty() {
            rot.rotate_left(r);
        }
        let w = relabel(&[rot]);
        if GaussCode::from_valid(w[0].clone()).raw_string() == text {
            return (text, w);
        }
    }
    unreachable!("some rotation realizes the normal form")
}

fn size<D>(words: &[Vec<Symbol<D>>]) -> usize {
    words.iter().map(Vec::len).sum::<usize>() / 2
}

fn greedy_delete<D: Decoration>(mut words: Words<D>, closed: bool) -> Words<D> {
    loop {
        let s = Strands::new(&words, closed);
        match s.deletions().first() {
            Some(m) => words = normal(&s.apply(m), closed).1,
            None => return words,
        }
    }
}

fn reduce_words<D: Decoration>(words: &[Vec<Symbol<D>>], closed: bool, depth: usize) -> Words<D> {
    let mut cur = greedy_delete(normal(words, closed).1, closed);
    if depth == 0 {
        return normal(&cur, closed).1;
    }
    loop {
        let (cur_text, cur_words) = normal(&cur, closed);
        let mut seen: HashSet<String> = HashSet::from([cur_text.clone()]);
        let mut queue = VecDeque::from([(cur_words, 0usize)]);
        let mut least = cur_text.clone();
        let mut least_words = cur.clone();
        let mut deletable: Option<(String, Words<D>)> = None;
        while let Some((w, d)) = queue.pop_front() {
            let s = Strands::new(&w, closed);
            let (text, _) = normal(&w, closed);
            if !s.deletions().is_empty() && deletable.as_ref().is_none_or(|(t, _)| text < *t) {
                deletable = Some((text.clone(), w.clone()));
            }
            if text < least {
                least = text;
                least_words = w.clone();
            }
            if d < depth {
                for m in s.r3_moves() {
                    let (t2, w2) = normal(&s.apply(&m), closed);
                    if seen.insert(t2) {
                        queue.push_back((w2, d + 1));
                    }
                }
            }
        }
        if let Some((_, w)) = deletable {
            cur = greedy_delete(w, closed);
        } else if least == cur_text {
            return normal(&cur, closed).1;
        } else {
            cur = least_words;
        }
    }
}

/// Shrinks `code` by deletions, using up to `depth` third moves at a time to
/// expose further deletions. The result is written in normal form.
pub fn reduce<D: Decoration>(code: &GaussCode<D>, depth: usize) -> GaussCode<D> {
    let w = reduce_words(&[code.symbols().to_vec()], true, depth);
    GaussCode::from_valid(w.into_iter().next().unwrap_or_default())
}

pub fn canonical_key<D: Decoration>(code: &GaussCode<D>, depth: usize) -> CanonicalKey {
    let r = reduce(code, depth);
    CanonicalKey { text: r.canonical_string(), reduced_size: r.crossing_count() }
}

/// Long phrases: words are intervals, so nothing is rotated.
pub fn reduce_long<D: Decoration>(phrase: &GaussPhrase<D>, depth: usize) -> GaussPhrase<D> {
    GaussPhrase::from_valid(reduce_words(phrase.words(), false, depth), PhraseKind::Long)
}

pub fn canonical_key_long<D: Decoration>(phrase: &GaussPhrase<D>, depth: usize) -> CanonicalKey {
    let r = reduce_long(phrase, depth);
    CanonicalKey { text: r.canonical_string(), reduced_size: size(r.words()) }
}

/// `Equal` when the keys agree. `NotIdentified` does not mean the codes are
/// inequivalent.
pub fn equal_flat<D: Decoration>(a: &GaussCode<D>, b: &GaussCode<D>, depth: usize) -> Identification {
    if canonical_key(a, depth) == canonical_key(b, depth) {
        Identification::Equal
    } else {
        Identification::NotIdentified
    }
}
