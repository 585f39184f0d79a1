//! Writhe, vertical smoothing, linking numbers of the smoothed states, chord
//! parity and the α, β, γ invariants.

use serde::Serialize;

use crate::gauss::{
    Crossing, Decoration, GaussCode, GaussError, GaussPhrase, Label, Parity, Passage, PhraseKind, Sign,
    VirtualGaussCode,
};
use crate::poly::Poly;

pub fn writhe(code: &VirtualGaussCode) -> i64 {
    code.symbols().iter().filter(|s| s.deco.passage == Passage::Over).map(|s| s.deco.sign.value()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    A,
    B,
}

impl Component {
    fn index(self) -> usize {
        match self {
            Component::A => 0,
            Component::B => 1,
        }
    }
}

/// The two-component link left by smoothing one crossing along the
/// orientation. Word 0 is `A`, the arc strictly between the two passes
/// through the crossing; word 1 is `B`, the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoComponentState {
    pub phrase: GaussPhrase<Crossing>,
    pub smoothed_label: Label,
    pub origin_sign: Sign,
}

impl TwoComponentState {
    pub fn component(&self, c: Component) -> &[crate::gauss::Symbol<Crossing>] {
        &self.phrase.words()[c.index()]
    }

    /// Labels with one occurrence on each component.
    pub fn mixed_labels(&self) -> Vec<Label> {
        let a = self.component(Component::A);
        let b = self.component(Component::B);
        let mut v: Vec<Label> = a.iter().filter(|s| b.iter().any(|t| t.label == s.label)).map(|s| s.label).collect();
        v.sort_unstable();
        v
    }
}

/// Splits the cyclic word `p c q c` into `A = q` and `B = p`.
pub fn vertical_smooth(code: &VirtualGaussCode, label: Label) -> Result<TwoComponentState, GaussError> {
    let (i, j) = code.require(label)?;
    let s = code.symbols();
    let a = s[i + 1..j].to_vec();
    let b: Vec<_> = s[j + 1..].iter().chain(&s[..i]).copied().collect();
    Ok(TwoComponentState {
        phrase: GaussPhrase::from_valid(vec![a, b], PhraseKind::Closed),
        smoothed_label: label,
        origin_sign: s[i].deco.sign,
    })
}

/// Sum of the signs of crossings where `over` passes over `under`.
pub fn linking_number(state: &TwoComponentState, over: Component, under: Component) -> i64 {
    let top = state.component(over);
    let bottom = state.component(under);
    top.iter()
        .filter(|s| s.deco.passage == Passage::Over)
        .filter(|s| bottom.iter().any(|t| t.label == s.label && t.deco.passage == Passage::Under))
        .map(|s| s.deco.sign.value())
        .sum()
}

fn linking_pair(state: &TwoComponentState) -> (i64, i64) {
    (linking_number(state, Component::A, Component::B), linking_number(state, Component::B, Component::A))
}

/// `|l(A,B) - l(B,A)|`.
pub fn l_prime(state: &TwoComponentState) -> u64 {
    let (ab, ba) = linking_pair(state);
    (ab - ba).unsigned_abs()
}

/// Absolute signed count of the virtual crossings between `A` and `B`,
/// each made classical with `A` on top.
///
/// Two closed plane curves meet with total intersection number zero, so in
/// any planar realization of the state the virtual `A`–`B` crossings sum to
/// `l(B,A) - l(A,B)` under that convention. The count is therefore read off
/// the code without a diagram.
pub fn l_virtual(state: &TwoComponentState) -> u64 {
    let (ab, ba) = linking_pair(state);
    (ba - ab).unsigned_abs()
}

pub fn gaussian_parity<D: Decoration>(code: &GaussCode<D>, label: Label) -> Result<Parity, GaussError> {
    code.require(label)?;
    Ok(code.to_chord_diagram().parity(label).expect("label is present"))
}

/// `(p, n)`: signed sums over the chords meeting `label`'s chord positively
/// (their head lies on the arc from this chord's tail to its head) and
/// negatively.
pub fn oriented_parity_parts(code: &VirtualGaussCode, label: Label) -> Result<(i64, i64), GaussError> {
    code.require(label)?;
    let d = code.to_chord_diagram();
    let c = d.chord(label).expect("label is present");
    let (head, tail) = (c.head.unwrap(), c.tail().unwrap());
    let n = d.circle_size();
    let on_arc = |x: usize| (x + n - tail) % n < (head + n - tail) % n;
    let (mut p, mut q) = (0, 0);
    for other in d.crossing(label) {
        let t = d.chord(other).unwrap();
        let sign = t.sign.unwrap().value();
        if on_arc(t.head.unwrap()) {
            p += sign;
        } else {
            q += sign;
        }
    }
    Ok((p, q))
}

/// `|p - n|`.
pub fn oriented_parity(code: &VirtualGaussCode, label: Label) -> Result<u64, GaussError> {
    let (p, n) = oriented_parity_parts(code, label)?;
    Ok((p - n).unsigned_abs())
}

/// Writhe, the α and β vectors, the γ matrix and their polynomials.
///
/// Entry 0 of each vector (and entry (0,0) of γ) holds the raw count minus
/// the writhe. Vectors and the matrix stop at their last nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantBundle {
    pub writhe: i64,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub gamma: Vec<Vec<i64>>,
    pub alpha_poly: Poly,
    pub beta_poly: Poly,
    pub gamma_poly: Poly,
}

impl InvariantBundle {
    pub fn raw_alpha(&self) -> Vec<i64> {
        let mut v = self.alpha.clone();
        v[0] += self.writhe;
        v
    }

    pub fn raw_beta(&self) -> Vec<i64> {
        let mut v = self.beta.clone();
        v[0] += self.writhe;
        v
    }

    pub fn raw_gamma(&self) -> Vec<Vec<i64>> {
        let mut g = self.gamma.clone();
        g[0][0] += self.writhe;
        g
    }

    /// Some entry of α or γ is nonzero, so the knot is not the unknot.
    pub fn distinguished(&self) -> bool {
        self.alpha.iter().chain(self.gamma.iter().flatten()).any(|&x| x != 0)
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn trim_matrix(mut g: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let cols = g.iter().filter_map(|row| row.iter().rposition(|&x| x != 0)).max().map_or(1, |c| c + 1);
    for row in &mut g {
        row.truncate(cols);
    }
    while g.len() > 1 && g.last().is_some_and(|r| r.iter().all(|&x| x == 0)) {
        g.pop();
    }
    g
}

pub fn invariant_bundle(code: &VirtualGaussCode) -> InvariantBundle {
    let w = writhe(code);
    let mut per_crossing = Vec::new();
    for label in code.labels() {
        let state = vertical_smooth(code, label).expect("label of the code");
        per_crossing.push((l_prime(&state) as usize, l_virtual(&state) as usize, state.origin_sign.value()));
    }
    let size = per_crossing.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0) + 1;
    let mut a = vec![0; size];
    let mut b = vec![0; size];
    let mut g = vec![vec![0; size]; size];
    for &(i, j, sgn) in &per_crossing {
        a[i] += sgn;
        b[j] += sgn;
        g[i][j] += sgn;
    }
    a[0] -= w;
    b[0] -= w;
    g[0][0] -= w;
    let (alpha, beta, gamma) = (trim(a), trim(b), trim_matrix(g));

    let mut alpha_poly = Poly::zero();
    for (i, &x) in alpha.iter().enumerate() {
        alpha_poly.add_term(i as u32, 0, x);
    }
    let mut beta_poly = Poly::zero();
    for (j, &x) in beta.iter().enumerate() {
        beta_poly.add_term(0, j as u32, x);
    }
    let mut gamma_poly = Poly::zero();
    gamma_poly.add_term(0, 0, gamma[0][0]);
    for (i, row) in gamma.iter().enumerate().skip(1) {
        for (j, &x) in row.iter().enumerate().skip(1) {
            gamma_poly.add_term(i as u32, j as u32, x);
        }
    }
    InvariantBundle { writhe: w, alpha, beta, gamma, alpha_poly, beta_poly, gamma_poly }
}
