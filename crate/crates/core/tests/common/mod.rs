#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use relhyp::{GroupSpec, Letter, NormalForm, Syllable, Word};

/// An element as a list of `(factor, exponent vector)` blocks.
pub type Blocks = Vec<(usize, Vec<i64>)>;

/// Free reduction with per-factor abelianisation, done the slow way: merge
/// every pair of adjacent blocks of one factor, drop zero blocks, and repeat
/// until nothing changes.
pub fn naive_reduce(spec: &GroupSpec, word: &Word) -> Blocks {
    let mut blocks: Blocks = word
        .letters
        .iter()
        .map(|l| {
            let mut v = vec![0; spec.rank(l.gen.factor)];
            v[l.gen.coord] = l.sign as i64;
            (l.gen.factor, v)
        })
        .collect();
    loop {
        let before = blocks.len();
        let mut merged: Blocks = Vec::with_capacity(blocks.len());
        let mut i = 0;
        while i < blocks.len() {
            let (f, mut v) = blocks[i].clone();
            if i + 1 < blocks.len() && blocks[i + 1].0 == f {
                for (a, b) in v.iter_mut().zip(&blocks[i + 1].1) {
                    *a += b;
                }
                i += 2;
            } else {
                i += 1;
            }
            merged.push((f, v));
        }
        merged.retain(|(_, v)| v.iter().any(|&e| e != 0));
        let stable = merged.len() == before && merged == blocks;
        blocks = merged;
        if stable {
            return blocks;
        }
    }
}

pub fn blocks_of(g: &NormalForm) -> Blocks {
    g.syllables().iter().map(|s| (s.factor, s.exps.to_vec())).collect()
}

pub fn from_blocks(b: &Blocks) -> NormalForm {
    NormalForm::from_syllables(b.iter().map(|(f, v)| Syllable::new(*f, v)))
}

pub fn random_word(spec: &GroupSpec, rng: &mut impl Rng, max_len: usize) -> Word {
    let gens = spec.generators();
    let len = rng.gen_range(0..=max_len);
    Word::new(
        (0..len)
            .map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], sign: if rng.gen() { 1 } else { -1 } })
            .collect(),
    )
}

pub fn concat(words: &[&Word]) -> Word {
    Word::new(words.iter().flat_map(|w| w.letters.iter().copied()).collect())
}

pub fn inverse_word(w: &Word) -> Word {
    Word::new(w.letters.iter().rev().map(|l| l.inverse()).collect())
}

/// Right multiplication of a block list by one block.
pub fn push_block(g: &Blocks, factor: usize, v: &[i64]) -> Blocks {
    let mut out = g.clone();
    match out.last_mut() {
        Some((f, last)) if *f == factor => {
            for (a, b) in last.iter_mut().zip(v) {
                *a += b;
            }
            if last.iter().all(|&e| e == 0) {
                out.pop();
            }
        }
        _ => out.push((factor, v.to_vec())),
    }
    out
}

pub fn x_len(g: &Blocks) -> u64 {
    g.iter().flat_map(|(_, v)| v.iter()).map(|e| e.unsigned_abs()).sum()
}

/// Breadth-first distances from the identity using the given steps, visiting
/// only vertices accepted by `keep`, out to `radius`.
pub fn bfs(steps: &[(usize, Vec<i64>)], radius: usize, keep: impl Fn(&Blocks) -> bool) -> HashMap<Blocks, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(Vec::new(), 0);
    queue.push_back(Vec::new());
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for (f, v) in steps {
            let h = push_block(&g, *f, v);
            if keep(&h) && !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}

pub fn x_step_blocks(spec: &GroupSpec) -> Vec<(usize, Vec<i64>)> {
    let mut out = Vec::new();
    for g in spec.generators() {
        for sign in [1, -1] {
            let mut v = vec![0; spec.rank(g.factor)];
            v[g.coord] = sign;
            out.push((g.factor, v));
        }
    }
    out
}

pub fn rel_step_blocks(spec: &GroupSpec, exp_cap: i64) -> Vec<(usize, Vec<i64>)> {
    let mut out = Vec::new();
    for f in 0..spec.num_factors() {
        if !spec.is_peripheral(f) {
            out.push((f, vec![1]));
            out.push((f, vec![-1]));
            continue;
        }
        let rank = spec.rank(f);
        let side = (2 * exp_cap + 1) as usize;
        for code in 0..side.pow(rank as u32) {
            let mut c = code;
            let v: Vec<i64> = (0..rank)
                .map(|_| {
                    let e = (c % side) as i64 - exp_cap;
                    c /= side;
                    e
                })
                .collect();
            if v.iter().any(|&e| e != 0) {
                out.push((f, v));
            }
        }
    }
    out
}

/// `k`-th forward difference of `values` at every admissible start.
pub fn differences(values: &[num::BigInt], k: usize) -> Vec<num::BigInt> {
    let mut cur = values.to_vec();
    for _ in 0..k {
        cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    cur
}
