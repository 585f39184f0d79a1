//! Random codes for property tests.
#![allow(dead_code)]

use knotink::gauss::{Crossing, End, Passage, Sign, Symbol};
use knotink::GaussCode;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random pairing of `2n` positions, as a label per position.
pub fn random_word(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    let mut labels: Vec<u32> = (1..=n as u32).flat_map(|l| [l, l]).collect();
    labels.shuffle(rng);
    labels
}

pub fn random_virtual(rng: &mut impl Rng, n: usize) -> GaussCode<Crossing> {
    let word = random_word(rng, n);
    let signs: Vec<Sign> = (0..=n).map(|_| if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg }).collect();
    let first_over: Vec<bool> = (0..=n).map(|_| rng.gen_bool(0.5)).collect();
    let mut seen = vec![false; n + 1];
    let symbols = word
        .iter()
        .map(|&l| {
            let first = !seen[l as usize];
            seen[l as usize] = true;
            let over = first == first_over[l as usize];
            let passage = if over { Passage::Over } else { Passage::Under };
            Symbol::new(l, Crossing::new(passage, signs[l as usize]))
        })
        .collect();
    GaussCode::new(symbols).unwrap()
}

pub fn random_flat(rng: &mut impl Rng, n: usize) -> GaussCode<End> {
    let word = random_word(rng, n);
    let first_head: Vec<bool> = (0..=n).map(|_| rng.gen_bool(0.5)).collect();
    let mut seen = vec![false; n + 1];
    let symbols = word
        .iter()
        .map(|&l| {
            let first = !seen[l as usize];
            seen[l as usize] = true;
            let head = first == first_head[l as usize];
            Symbol::new(l, if head { End::Head } else { End::Tail })
        })
        .collect();
    GaussCode::new(symbols).unwrap()
}

pub fn random_free(rng: &mut impl Rng, n: usize) -> GaussCode<()> {
    let word = random_word(rng, n);
    GaussCode::new(word.into_iter().map(|l| Symbol::new(l, ())).collect()).unwrap()
}
pub mod oracle;
pub mod planar;

/// Every chord diagram on `2n` points, labels in order of first occurrence.
pub fn pairings(n: usize) -> Vec<Vec<u32>> {
    fn fill(word: &mut Vec<u32>, next: u32, out: &mut Vec<Vec<u32>>) {
        let Some(i) = word.iter().position(|&x| x == 0) else {
            out.push(word.clone());
            return;
        };
        word[i] = next;
        for j in i + 1..word.len() {
            if word[j] == 0 {
                word[j] = next;
                fill(word, next + 1, out);
                word[j] = 0;
            }
        }
        word[i] = 0;
    }
    let mut out = Vec::new();
    fill(&mut vec![0; 2 * n], 1, &mut out);
    out
}

/// Every virtual decoration of a chord diagram: bit `l-1` of `over` puts the
/// first occurrence of `l` on top, bit `l-1` of `neg` makes it negative.
pub fn virtual_lifts(word: &[u32]) -> Vec<GaussCode<Crossing>> {
    let n = word.len() / 2;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for over in 0..1u32 << n {
        for neg in 0..1u32 << n {
            let mut seen = vec![false; n + 1];
            let symbols = word
                .iter()
                .map(|&l| {
                    let first = !std::mem::replace(&mut seen[l as usize], true);
                    let on_top = first == (over >> (l - 1) & 1 == 1);
                    let sign = if neg >> (l - 1) & 1 == 1 { Sign::Neg } else { Sign::Pos };
                    Symbol::new(l, Crossing::new(if on_top { Passage::Over } else { Passage::Under }, sign))
                })
                .collect();
            out.push(GaussCode::new(symbols).unwrap());
        }
    }
    out
}

/// Every arrow assignment of a chord diagram.
pub fn flat_lifts(word: &[u32]) -> Vec<GaussCode<End>> {
    let n = word.len() / 2;
    (0..1u32 << n)
        .map(|heads| {
            let mut seen = vec![false; n + 1];
            let symbols = word
                .iter()
                .map(|&l| {
                    let first = !std::mem::replace(&mut seen[l as usize], true);
                    let head = first == (heads >> (l - 1) & 1 == 1);
                    Symbol::new(l, if head { End::Head } else { End::Tail })
                })
                .collect();
            GaussCode::new(symbols).unwrap()
        })
        .collect()
}

pub fn free_code(word: &[u32]) -> GaussCode<()> {
    GaussCode::new(word.iter().map(|&l| Symbol::new(l, ())).collect()).unwrap()
}
pub mod fixtures;
