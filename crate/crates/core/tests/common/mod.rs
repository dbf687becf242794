#![allow(dead_code)]

pub mod suites;

use qcrit_core::{OperatorSet, Partition, PauliString};
use rand::Rng;

pub fn random_pauli<R: Rng>(width: usize, rng: &mut R) -> PauliString {
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    loop {
        let p = PauliString::from_supports(width, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask)
            .unwrap();
        if !p.is_identity() {
            return p;
        }
    }
}

/// Greedy family whose members pairwise satisfy `accept`, up to `target` members.
pub fn greedy_family<R: Rng>(
    width: usize,
    target: usize,
    rng: &mut R,
    accept: impl Fn(&PauliString, &PauliString) -> bool,
) -> Vec<PauliString> {
    let mut family: Vec<PauliString> = Vec::new();
    for _ in 0..400 {
        if family.len() == target {
            break;
        }
        let p = random_pauli(width, rng);
        if family.iter().all(|q| *q != p && accept(q, &p)) {
            family.push(p);
        }
    }
    family
}

/// Mutually anticommuting strings; at most `2 * width + 1` exist.
pub fn anticommuting_family<R: Rng>(width: usize, rng: &mut R) -> Vec<PauliString> {
    let target = rng.gen_range(1..=2 * width + 1);
    greedy_family(width, target, rng, |a, b| a.anticommutes(b).unwrap())
}

pub fn random_partition<R: Rng>(width: usize, rng: &mut R) -> Partition {
    let k = rng.gen_range(1..=width);
    let mut blocks = vec![Vec::new(); k];
    for q in 0..width {
        blocks[rng.gen_range(0..k)].push(q);
    }
    blocks.retain(|b| !b.is_empty());
    Partition::new(width, blocks).unwrap()
}

/// Random refinement: each block is split again at random.
pub fn random_refinement<R: Rng>(part: &Partition, rng: &mut R) -> Partition {
    let mut blocks = Vec::new();
    for b in part.blocks() {
        let k = rng.gen_range(1..=b.len());
        let mut sub = vec![Vec::new(); k];
        for &q in b {
            sub[rng.gen_range(0..k)].push(q);
        }
        blocks.extend(sub.into_iter().filter(|s| !s.is_empty()));
    }
    Partition::new(part.width(), blocks).unwrap()
}

pub fn random_sigma<R: Rng>(width: usize, size: usize, rng: &mut R) -> OperatorSet {
    OperatorSet::new_dedup((0..size).map(|_| random_pauli(width, rng))).unwrap()
}

pub fn example1() -> OperatorSet {
    OperatorSet::parse_list(&["xxx", "yxx", "xyx", "yyx", "xxy", "yxy", "xyy", "yyy"]).unwrap()
}

pub fn glocal5() -> OperatorSet {
    let patterns: Vec<PauliString> = ["1xxxz", "1zxxz", "1zxzz"]
        .iter()
        .map(|t| t.parse().unwrap())
        .collect();
    qcrit_core::pauli::cp_expand_all(&patterns).unwrap()
}
