//! Smoothing by walking the 4-valent graph of a code.
#![allow(dead_code)]

use std::collections::HashSet;

use knotink::{Decoration, GaussCode, Label, Symbol};

/// A port of a crossing: which passage (0 = first occurrence) and whether
/// the strand enters or leaves there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Port {
    node: usize,
    passage: usize,
    leaving: bool,
}

struct Graph<D> {
    /// node -> (label, decorations of the two passages)
    nodes: Vec<(Label, [D; 2])>,
    /// leaving port -> entering port it is wired to
    edges: Vec<(Port, Port)>,
}

fn build<D: Decoration>(code: &GaussCode<D>) -> Graph<D> {
    let sym = code.symbols();
    let mut nodes: Vec<(Label, [D; 2])> = Vec::new();
    let mut port_of = Vec::with_capacity(sym.len());
    for s in sym {
        match nodes.iter().position(|(l, _)| *l == s.label) {
            Some(k) => {
                nodes[k].1[1] = s.deco;
                port_of.push((k, 1));
            }
            None => {
                nodes.push((s.label, [s.deco, s.deco]));
                port_of.push((nodes.len() - 1, 0));
            }
        }
    }
    let n = sym.len();
    let edges = (0..n)
        .map(|i| {
            let (a, pa) = port_of[i];
            let (b, pb) = port_of[(i + 1) % n];
            (Port { node: a, passage: pa, leaving: true }, Port { node: b, passage: pb, leaving: false })
        })
        .collect();
    Graph { nodes, edges }
}

/// Components after the oriented smoothing of every crossing in `labels`.
/// Each component is the cyclic word of surviving crossings met along it; a
/// loop meeting none is an empty word.
pub fn trace<D: Decoration>(code: &GaussCode<D>, labels: &[Label]) -> Vec<Vec<Symbol<D>>> {
    let g = build(code);
    let smoothed = |node: usize| labels.contains(&g.nodes[node].0);
    let mut used: HashSet<usize> = HashSet::new();
    let mut comps = Vec::new();
    for start in 0..g.edges.len() {
        if used.contains(&start) {
            continue;
        }
        let mut word = Vec::new();
        let mut e = start;
        while used.insert(e) {
            let arrive = g.edges[e].1;
            let (label, decos) = g.nodes[arrive.node];
            // at a smoothed crossing the strand leaves along the other passage
            let passage = if smoothed(arrive.node) { 1 - arrive.passage } else { arrive.passage };
            if !smoothed(arrive.node) {
                word.push(Symbol::new(label, decos[arrive.passage]));
            }
            let leave = Port { node: arrive.node, passage, leaving: true };
            e = g.edges.iter().position(|(from, _)| *from == leave).unwrap();
        }
        comps.push(word);
    }
    comps
}

/// Cyclic words are equal up to rotation.
pub fn same_cycle<D: PartialEq>(a: &[D], b: &[D]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| a.iter().cycle().skip(r).take(a.len()).eq(b.iter())))
}
