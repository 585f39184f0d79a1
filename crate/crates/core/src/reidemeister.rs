//! Reidemeister moves on Gauss codes.
//!
//! Deletions and third moves are found by pattern matching on adjacent
//! blocks of the word; insertions place fresh labels into gaps. Which
//! decorations are allowed is decided per flavor by [`Decoration`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gauss::{occurrence_table, Decoration, GaussCode, Label, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] =
        [MoveKind::R1Insert, MoveKind::R1Delete, MoveKind::R2Insert, MoveKind::R2Delete, MoveKind::R3];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Insert => "R1-insert",
            MoveKind::R1Delete => "R1-delete",
            MoveKind::R2Insert => "R2-insert",
            MoveKind::R2Delete => "R2-delete",
            MoveKind::R3 => "R3",
        }
    }

    pub fn is_deletion(self) -> bool {
        matches!(self, MoveKind::R1Delete | MoveKind::R2Delete)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MoveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown move kind {s:?}"))
    }
}

/// Relative direction of the two strands of a bigon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BigonPattern {
    /// `(b c) … (b c)`
    Parallel,
    /// `(b c) … (c b)`
    Antiparallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant<D> {
    None,
    /// Decorations of the first and second occurrence of a new kink.
    Kink([D; 2]),
    /// `[b, c, b', c']`: decorations on the first and second strand.
    Bigon {
        pattern: BigonPattern,
        decos: [D; 4],
    },
}

fn tag<D: Decoration>(d: D) -> String {
    let mut s = String::new();
    d.write_token(0, &mut s);
    s.replace('0', "")
}

impl<D: Decoration> fmt::Display for Variant<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::None => Ok(()),
            Variant::Kink(d) => write!(f, "{},{}", tag(d[0]), tag(d[1])),
            Variant::Bigon { pattern, decos } => {
                let p = match pattern {
                    BigonPattern::Parallel => "parallel",
                    BigonPattern::Antiparallel => "antiparallel",
                };
                let t: Vec<String> = decos.iter().map(|d| tag(*d)).collect();
                write!(f, "{p}:{}", t.join(","))
            }
        }
    }
}

/// One applicable move. Sites are positions in the code as stored: for
/// insertions they are gap indices (insert before that position), otherwise
/// the positions of the affected occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveDescriptor<D> {
    pub kind: MoveKind,
    pub site: Vec<usize>,
    pub variant: Variant<D>,
}

impl<D: Decoration> Serialize for MoveDescriptor<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MoveDescriptor", 3)?;
        st.serialize_field("kind", self.kind.name())?;
        st.serialize_field("site", &self.site)?;
        st.serialize_field("variant", &self.variant.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{kind} is not applicable at site {site:?}")]
    NotApplicable { kind: MoveKind, site: Vec<usize> },
}

/// Three blocks of adjacent occurrences forming a third-move triangle, in
/// order of position. Block `i` is the piece of strand `i` that passes the
/// two crossings it shares with the other strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle<D> {
    pub blocks: [[Symbol<D>; 2]; 3],
}

impl<D: Copy> Triangle<D> {
    /// The crossing of strands `i` and `j`, with its decoration as seen on
    /// strand `i`.
    pub fn crossing(&self, i: usize, j: usize) -> (Label, D) {
        let on_j = |l: Label| self.blocks[j].iter().any(|s| s.label == l);
        let s = self.blocks[i].iter().find(|s| on_j(s.label)).expect("strands of a triangle share a crossing");
        (s.label, s.deco)
    }

    /// `over[i][j]` is true when strand `i` lies above strand `j`. `None` when
    /// the relation is cyclic, which no arrangement of heights realizes.
    pub fn over_relation(&self, on_top: impl Fn(&D) -> bool) -> Option<[[bool; 3]; 3]> {
        let mut over = [[false; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    over[i][j] = on_top(&self.crossing(i, j).1);
                }
            }
        }
        let cyclic = (0..3).all(|i| over[i].iter().filter(|&&b| b).count() == 1);
        (!cyclic).then_some(over)
    }

    /// `+1` when strand `i` meets its crossing with the lower-numbered other
    /// strand first, `-1` otherwise.
    pub fn strand_orders(&self) -> [i64; 3] {
        let mut e = [0; 3];
        for (i, ei) in e.iter_mut().enumerate() {
            let lower = (0..3).find(|&j| j != i).unwrap();
            let (l, _) = self.crossing(i, lower);
            *ei = if self.blocks[i][0].label == l { 1 } else { -1 };
        }
        e
    }
}

/// Words viewed as strands: a flat array of occurrences with word boundaries.
/// Closed words wrap around; open words do not.
pub(crate) struct Strands<D> {
    pub(crate) flat: Vec<Symbol<D>>,
    bounds: Vec<(usize, usize)>,
    word_of: Vec<usize>,
    closed: bool,
    occ: HashMap<Label, (usize, usize)>,
}

/// A deletion or third move located in a [`Strands`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LocalMove {
    pub(crate) kind: MoveKind,
    pub(crate) positions: Vec<usize>,
}

impl<D: Decoration> Strands<D> {
    pub(crate) fn new(words: &[Vec<Symbol<D>>], closed: bool) -> Self {
        let mut flat = Vec::new();
        let mut bounds = Vec::new();
        let mut word_of = Vec::new();
        for (w, word) in words.iter().enumerate() {
            bounds.push((flat.len(), flat.len() + word.len()));
            flat.extend_from_slice(word);
            word_of.extend(std::iter::repeat_n(w, word.len()));
        }
        let occ = occurrence_table(&flat);
        Strands { flat, bounds, word_of, closed, occ }
    }

    fn succ(&self, p: usize) -> Option<usize> {
        let (a, b) = self.bounds[self.word_of[p]];
        if p + 1 < b {
            Some(p + 1)
        } else if self.closed && b - a >= 2 {
            Some(a)
        } else {
            None
        }
    }

    fn pred(&self, p: usize) -> Option<usize> {
        let (a, b) = self.bounds[self.word_of[p]];
        if p > a {
            Some(p - 1)
        } else if self.closed && b - a >= 2 {
            Some(b - 1)
        } else {
            None
        }
    }

    fn other(&self, p: usize) -> usize {
        let (a, b) = self.occ[&self.flat[p].label];
        if a == p {
            b
        } else {
            a
        }
    }

    fn is_block(&self, p: usize, q: usize) -> bool {
        self.succ(p) == Some(q)
    }

    pub(crate) fn deletions(&self) -> Vec<LocalMove> {
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        for p in 0..self.flat.len() {
            let Some(q) = self.succ(p) else { continue };
            if self.flat[p].label == self.flat[q].label && done.insert((self.flat[p].label, 0)) {
                out.push(LocalMove { kind: MoveKind::R1Delete, positions: vec![p, q] });
            }
        }
        for p in 0..self.flat.len() {
            if let Some(m) = self.r2_at(p) {
                let (b, c) = (self.flat[p].label, self.flat[m.positions[1]].label);
                if done.insert((b.min(c), b.max(c))) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// R2 cancellation whose first block starts at `p`.
    fn r2_at(&self, p: usize) -> Option<LocalMove> {
        let q = self.succ(p)?;
        let (b, c) = (self.flat[p], self.flat[q]);
        if b.label == c.label {
            return None;
        }
        let (pb, qc) = (self.other(p), self.other(q));
        let second = if self.is_block(pb, qc) {
            (pb, qc)
        } else if self.is_block(qc, pb) {
            (qc, pb)
        } else {
            return None;
        };
        let legal = D::r2_legal([b.deco, c.deco], [self.flat[pb].deco, self.flat[qc].deco]);
        legal.then(|| LocalMove { kind: MoveKind::R2Delete, positions: vec![p, q, second.0, second.1] })
    }

    pub(crate) fn r3_moves(&self) -> Vec<LocalMove> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for p1 in 0..self.flat.len() {
            let Some(p2) = self.succ(p1) else { continue };
            let (a, b) = (self.flat[p1].label, self.flat[p2].label);
            if a == b {
                continue;
            }
            let (pa, pb) = (self.other(p1), self.other(p2));
            for b2 in self.blocks_through(pa) {
                let cpos = if b2.0 == pa { b2.1 } else { b2.0 };
                let c = self.flat[cpos].label;
                if c == a || c == b {
                    continue;
                }
                for b3 in self.blocks_through(pb) {
                    let cpos2 = if b3.0 == pb { b3.1 } else { b3.0 };
                    if self.flat[cpos2].label != c || cpos2 == cpos {
                        continue;
                    }
                    let mut blocks = [(p1, p2), b2, b3];
                    blocks.sort();
                    if !seen.insert(blocks) {
                        continue;
                    }
                    let t = Triangle { blocks: blocks.map(|(x, y)| [self.flat[x], self.flat[y]]) };
                    if D::r3_legal(&t) {
                        out.push(LocalMove {
                            kind: MoveKind::R3,
                            positions: blocks.iter().flat_map(|&(x, y)| [x, y]).collect(),
                        });
                    }
                }
            }
        }
        out
    }

    fn blocks_through(&self, p: usize) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(2);
        if let Some(q) = self.pred(p) {
            v.push((q, p));
        }
        if let Some(q) = self.succ(p) {
            if self.pred(p) != Some(q) || v.is_empty() {
                v.push((p, q));
            }
        }
        v
    }

    /// Applies a located move, returning the new words.
    pub(crate) fn apply(&self, m: &LocalMove) -> Vec<Vec<Symbol<D>>> {
        let mut flat: Vec<Option<Symbol<D>>> = self.flat.iter().copied().map(Some).collect();
        match m.kind {
            MoveKind::R1Delete | MoveKind::R2Delete => {
                for &p in &m.positions {
                    flat[p] = None;
                }
            }
            MoveKind::R3 => {
                for pair in m.positions.chunks(2) {
                    flat.swap(pair[0], pair[1]);
                }
            }
            _ => unreachable!("insertions are not local moves"),
        }
        self.bounds.iter().map(|&(a, b)| flat[a..b].iter().flatten().copied().collect()).collect()
    }

    /// Checks that `m` is one of the moves this configuration admits.
    pub(crate) fn admits(&self, m: &LocalMove) -> bool {
        let n = self.flat.len();
        if m.positions.iter().any(|&p| p >= n) {
            return false;
        }
        match m.kind {
            MoveKind::R1Delete => {
                let [p, q] = m.positions[..] else { return false };
                self.is_block(p, q) && self.flat[p].label == self.flat[q].label
            }
            MoveKind::R2Delete => m.positions.len() == 4 && self.r2_at(m.positions[0]).as_ref() == Some(m),
            MoveKind::R3 => self.r3_moves().contains(m),
            _ => false,
        }
    }
}

fn local_to_descriptor<D>(m: LocalMove) -> MoveDescriptor<D> {
    MoveDescriptor { kind: m.kind, site: m.positions, variant: Variant::None }
}

fn gap_count<D>(code: &GaussCode<D>) -> usize
where
    D: Decoration,
{
    code.symbols().len().max(1)
}

/// Every applicable move of the requested kinds.
pub fn enumerate_moves<D: Decoration>(code: &GaussCode<D>, kinds: &[MoveKind]) -> Vec<MoveDescriptor<D>> {
    let strands = Strands::new(std::slice::from_ref(&code.symbols().to_vec()), true);
    let mut out = Vec::new();
    let want = |k: MoveKind| kinds.contains(&k);
    if want(MoveKind::R1Delete) || want(MoveKind::R2Delete) {
        out.extend(strands.deletions().into_iter().filter(|m| want(m.kind)).map(local_to_descriptor));
    }
    if want(MoveKind::R3) {
        out.extend(strands.r3_moves().into_iter().map(local_to_descriptor));
    }
    let gaps = gap_count(code);
    if want(MoveKind::R1Insert) {
        for g in 0..gaps {
            for v in D::r1_variants() {
                out.push(MoveDescriptor { kind: MoveKind::R1Insert, site: vec![g], variant: Variant::Kink(v) });
            }
        }
    }
    if want(MoveKind::R2Insert) {
        for g1 in 0..gaps {
            for g2 in g1..gaps {
                for pattern in [BigonPattern::Parallel, BigonPattern::Antiparallel] {
                    for decos in D::r2_variants() {
                        out.push(MoveDescriptor {
                            kind: MoveKind::R2Insert,
                            site: vec![g1, g2],
                            variant: Variant::Bigon { pattern, decos },
                        });
                    }
                }
            }
        }
    }
    out
}

fn insert<D: Decoration>(code: &GaussCode<D>, mv: &MoveDescriptor<D>) -> Vec<Symbol<D>> {
    let mut s = code.symbols().to_vec();
    let fresh = code.max_label() + 1;
    match (&mv.variant, &mv.site[..]) {
        (Variant::Kink(d), &[g]) => {
            s.insert(g, Symbol::new(fresh, d[1]));
            s.insert(g, Symbol::new(fresh, d[0]));
        }
        (Variant::Bigon { pattern, decos }, &[g1, g2]) => {
            let (b, c) = (fresh, fresh + 1);
            let second = match pattern {
                BigonPattern::Parallel => [Symbol::new(b, decos[2]), Symbol::new(c, decos[3])],
                BigonPattern::Antiparallel => [Symbol::new(c, decos[3]), Symbol::new(b, decos[2])],
            };
            s.splice(g2..g2, second);
            s.splice(g1..g1, [Symbol::new(b, decos[0]), Symbol::new(c, decos[1])]);
        }
        _ => unreachable!("checked by caller"),
    }
    s
}

/// Applies `mv` to `code`, checking that it is legal there.
pub fn apply_move<D: Decoration>(code: &GaussCode<D>, mv: &MoveDescriptor<D>) -> Result<GaussCode<D>, MoveError> {
    let not_applicable = || MoveError::NotApplicable { kind: mv.kind, site: mv.site.clone() };
    let gaps = gap_count(code);
    match mv.kind {
        MoveKind::R1Insert => match (&mv.variant, &mv.site[..]) {
            (Variant::Kink(d), &[g]) if g < gaps && D::r1_variants().contains(d) => {
                Ok(GaussCode::from_valid(insert(code, mv)))
            }
            _ => Err(not_applicable()),
        },
        MoveKind::R2Insert => match (&mv.variant, &mv.site[..]) {
            (Variant::Bigon { decos, .. }, &[g1, g2]) if g1 <= g2 && g2 < gaps && D::r2_variants().contains(decos) => {
                Ok(GaussCode::from_valid(insert(code, mv)))
            }
            _ => Err(not_applicable()),
        },
        _ => {
            let strands = Strands::new(std::slice::from_ref(&code.symbols().to_vec()), true);
            let m = LocalMove { kind: mv.kind, positions: mv.site.clone() };
            if mv.variant != Variant::None || !strands.admits(&m) {
                return Err(not_applicable());
            }
            let word = strands.apply(&m).pop().unwrap_or_default();
            Ok(GaussCode::from_valid(word))
        }
    }
}

/// The insertion that undoes a deletion `mv` of `code`, expressed on the
/// code obtained by the deletion. Reapplying it gives back `code` up to
/// rotation and relabelling.
pub fn inverse_of_deletion<D: Decoration>(code: &GaussCode<D>, mv: &MoveDescriptor<D>) -> Option<MoveDescriptor<D>> {
    let s = code.symbols();
    let n = s.len();
    let rest = n.checked_sub(mv.site.len())?;
    let succ = |p: usize| (p + 1) % n;
    // gap of the deleted word where a block starting at p goes back in
    let gap = |p: usize| {
        if succ(p) < p {
            return 0;
        }
        (p - mv.site.iter().filter(|&&q| q < p).count()) % rest.max(1)
    };
    match (mv.kind, &mv.site[..]) {
        (MoveKind::R1Delete, &[p, q]) if succ(p) == q => Some(MoveDescriptor {
            kind: MoveKind::R1Insert,
            site: vec![gap(p)],
            variant: Variant::Kink([s[p].deco, s[q].deco]),
        }),
        (MoveKind::R2Delete, &[p, q, p2, q2]) => {
            let (g1, g2) = (gap(p), gap(p2));
            let b1_first = g1 < g2 || (g1 == g2 && succ(q) == p2);
            let ((a, a2), (o, o2)) = if b1_first { ((p, q), (p2, q2)) } else { ((p2, q2), (p, q)) };
            let b = s[a].label;
            let (ob, oc) = if s[o].label == b { (o, o2) } else { (o2, o) };
            let pattern = if s[o].label == b { BigonPattern::Parallel } else { BigonPattern::Antiparallel };
            Some(MoveDescriptor {
                kind: MoveKind::R2Insert,
                site: vec![g1.min(g2), g1.max(g2)],
                variant: Variant::Bigon { pattern, decos: [s[a].deco, s[a2].deco, s[ob].deco, s[oc].deco] },
            })
        }
        _ => None,
    }
}

/// One step of a walk: the move taken and the code it produced.
#[derive(Clone, Debug)]
pub struct TraceStep<D> {
    pub descriptor: MoveDescriptor<D>,
    pub resulting_code: GaussCode<D>,
}

impl<D: Decoration> Serialize for TraceStep<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TraceStep", 4)?;
        st.serialize_field("kind", self.descriptor.kind.name())?;
        st.serialize_field("site", &self.descriptor.site)?;
        st.serialize_field("variant", &self.descriptor.variant.to_string())?;
        st.serialize_field("resulting_code", &self.resulting_code.raw_string())?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct Walk<D> {
    pub code: GaussCode<D>,
    pub trace: Vec<TraceStep<D>>,
}

impl<D: Decoration> Walk<D> {
    /// The trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        self.trace.iter().map(|t| serde_json::to_string(t).expect("trace serializes") + "\n").collect()
    }
}

/// Applies `steps` random moves drawn from `kinds`. Each step first picks a
/// kind uniformly among those with at least one applicable move, then a move
/// of that kind uniformly.
pub fn random_walk<D: Decoration>(code: &GaussCode<D>, steps: usize, seed: u64, kinds: &[MoveKind]) -> Walk<D> {
    walk(code, steps, seed, kinds, false)
}

/// Like [`random_walk`], but bigon insertions use decorations that are not
/// legal moves. Only useful as a negative control for invariance checks.
#[doc(hidden)]
pub fn random_walk_corrupted<D: Decoration>(
    code: &GaussCode<D>,
    steps: usize,
    seed: u64,
    kinds: &[MoveKind],
) -> Walk<D> {
    walk(code, steps, seed, kinds, true)
}

fn walk<D: Decoration>(code: &GaussCode<D>, steps: usize, seed: u64, kinds: &[MoveKind], corrupt: bool) -> Walk<D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = code.clone();
    let mut trace = Vec::with_capacity(steps);
    let mut kinds: Vec<MoveKind> = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    for _ in 0..steps {
        let strands = Strands::new(std::slice::from_ref(&cur.symbols().to_vec()), true);
        let deletions = strands.deletions();
        let r3 = if kinds.contains(&MoveKind::R3) { strands.r3_moves() } else { Vec::new() };
        let available: Vec<MoveKind> = kinds
            .iter()
            .copied()
            .filter(|k| match k {
                MoveKind::R1Insert | MoveKind::R2Insert => true,
                MoveKind::R3 => !r3.is_empty(),
                _ => deletions.iter().any(|m| m.kind == *k),
            })
            .collect();
        if available.is_empty() {
            break;
        }
        let kind = available[rng.gen_range(0..available.len())];
        let gaps = gap_count(&cur);
        let mv = match kind {
            MoveKind::R1Insert => {
                let v = D::r1_variants();
                MoveDescriptor {
                    kind,
                    site: vec![rng.gen_range(0..gaps)],
                    variant: Variant::Kink(v[rng.gen_range(0..v.len())]),
                }
            }
            MoveKind::R2Insert => {
                let (a, b) = (rng.gen_range(0..gaps), rng.gen_range(0..gaps));
                let pattern = if rng.gen_bool(0.5) { BigonPattern::Parallel } else { BigonPattern::Antiparallel };
                let v = D::r2_variants();
                let mut decos = v[rng.gen_range(0..v.len())];
                if corrupt {
                    decos[1] = decos[0];
                    decos[3] = decos[2];
                }
                MoveDescriptor { kind, site: vec![a.min(b), a.max(b)], variant: Variant::Bigon { pattern, decos } }
            }
            MoveKind::R3 => local_to_descriptor(r3[rng.gen_range(0..r3.len())].clone()),
            _ => {
                let of_kind: Vec<&LocalMove> = deletions.iter().filter(|m| m.kind == kind).collect();
                local_to_descriptor(of_kind[rng.gen_range(0..of_kind.len())].clone())
            }
        };
        cur = if corrupt && kind == MoveKind::R2Insert {
            match GaussCode::new(insert(&cur, &mv)) {
                Ok(c) => c,
                Err(_) => continue,
            }
        } else {
            apply_move(&cur, &mv).expect("sampled moves are applicable")
        };
        trace.push(TraceStep { descriptor: mv, resulting_code: cur.clone() });
    }
    Walk { code: cur, trace }
}
