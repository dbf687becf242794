//! Qubit partitions and the cut-(anti)commutation predicates.
//!
//! Two strings *cut-anticommute* under a partition when their factors
//! anticommute on at least one block, and *cut-commute* when their factors
//! commute on every block. For a bipartition `A|B` this is the usual notion
//! of operators anticommuting "on part A or on part B"; with more blocks it
//! describes states that factorize across all of them. Because Pauli factors
//! always either commute or anticommute, exactly one of the two predicates
//! holds for every pair.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{OperatorSet, PauliString, MAX_WIDTH};

/// Widest partition the letter syntax (`A`..`Z`) can express.
pub const LETTER_WIDTH_CAP: usize = 26;
/// Default cap for [`enumerate_bipartitions`].
pub const BIPARTITION_WIDTH_CAP: usize = 20;
/// Default cap for [`symmetry_group`].
pub const SYMMETRY_WIDTH_CAP: usize = 12;

/// A set partition of `{0, …, width-1}` in canonical form: indices sorted
/// within each block, blocks sorted by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    width: usize,
}

impl Partition {
    pub fn new(width: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let text = format!("{blocks:?}");
        let invalid = |reason: String| Error::InvalidPartition {
            text: text.clone(),
            reason,
        };
        if width == 0 {
            return Err(invalid("width must be positive".into()));
        }
        if width > MAX_WIDTH {
            return Err(Error::cap("partition width", width, MAX_WIDTH));
        }
        let mut seen = vec![false; width];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(invalid("empty block".into()));
            }
            for &i in &b {
                if i >= width {
                    return Err(invalid(format!("index {i} >= width {width}")));
                }
                if seen[i] {
                    return Err(invalid(format!("repeated index {i}")));
                }
                seen[i] = true;
            }
            b.sort_unstable();
            canon.push(b);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("missing index {missing}")));
        }
        canon.sort();
        Ok(Partition {
            blocks: canon,
            width,
        })
    }

    /// All qubits in one block (plain, uncut commutation).
    pub fn trivial(width: usize) -> Result<Self> {
        Self::new(width, vec![(0..width).collect()])
    }

    /// All singletons (full separability).
    pub fn finest(width: usize) -> Result<Self> {
        Self::new(width, (0..width).map(|i| vec![i]).collect())
    }

    /// Parses `"AC|BDE"` (letter `A` is qubit 0) or `"0,2|1,3,4"`.
    pub fn parse(text: &str, width: usize) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidPartition {
            text: text.to_string(),
            reason,
        };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(invalid("empty partition text".into()));
        }
        let index_syntax = trimmed.chars().any(|c| c.is_ascii_digit());
        let mut blocks = Vec::new();
        for part in trimmed.split('|') {
            let part = part.trim();
            if part.is_empty() {
                return Err(invalid("empty block".into()));
            }
            let mut block = Vec::new();
            if index_syntax {
                for tok in part.split(',') {
                    let tok = tok.trim();
                    let i: usize = tok
                        .parse()
                        .map_err(|_| invalid(format!("bad index {tok:?}")))?;
                    block.push(i);
                }
            } else {
                for c in part.chars().filter(|c| !c.is_whitespace()) {
                    if !c.is_ascii_alphabetic() {
                        return Err(invalid(format!("bad qubit label {c:?}")));
                    }
                    block.push((c.to_ascii_uppercase() as u8 - b'A') as usize);
                }
            }
            blocks.push(block);
        }
        Self::new(width, blocks).map_err(|e| match e {
            Error::InvalidPartition { reason, .. } => invalid(reason),
            other => other,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &i| m | (1u64 << i)))
    }

    pub fn is_finest(&self) -> bool {
        self.blocks.len() == self.width
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `true` when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.width == coarser.width
            && self
                .block_masks()
                .all(|m| coarser.block_masks().any(|c| m & !c == 0))
    }

    /// Image under the relabeling `i -> perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Partition> {
        if perm.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: perm.len(),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&i| perm[i]).collect())
            .collect();
        Partition::new(self.width, blocks)
    }

    /// Letter form when `width <= 26`, index form otherwise.
    pub fn label(&self) -> String {
        if self.width <= LETTER_WIDTH_CAP {
            self.blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&i| (b'A' + i as u8) as char)
                        .collect::<String>()
                })
                .collect::<Vec<_>>()
                .join("|")
        } else {
            self.index_label()
        }
    }

    pub fn index_label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Block sizes, largest first, e.g. `[4, 1]` for a 1|4 cut.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<_> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    fn check(&self, p: &PauliString, q: &PauliString) -> Result<()> {
        for w in [p.width(), q.width()] {
            if w != self.width {
                return Err(Error::WidthMismatch {
                    expected: self.width,
                    found: w,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All unordered two-block partitions of `width` qubits, sorted.
pub fn enumerate_bipartitions(width: usize) -> Result<Vec<Partition>> {
    enumerate_bipartitions_capped(width, BIPARTITION_WIDTH_CAP)
}

pub fn enumerate_bipartitions_capped(width: usize, cap: usize) -> Result<Vec<Partition>> {
    if width < 2 {
        return Err(Error::InvalidArgument(format!(
            "bipartitions need at least 2 qubits, got {width}"
        )));
    }
    if width > cap {
        return Err(Error::cap("bipartition width", width, cap));
    }
    // Qubit 0 always sits in the first block; the subset S of the remaining
    // qubits joining it ranges over everything except "all of them".
    let rest = width - 1;
    let mut out = Vec::with_capacity((1usize << rest) - 1);
    for s in 0..(1u64 << rest) - 1 {
        let mut a = vec![0];
        let mut b = Vec::new();
        for i in 1..width {
            if (s >> (i - 1)) & 1 == 1 {
                a.push(i);
            } else {
                b.push(i);
            }
        }
        out.push(Partition::new(width, vec![a, b])?);
    }
    out.sort();
    Ok(out)
}

/// `true` iff the factors of `p` and `q` anticommute on at least one block.
pub fn cut_anticommute(p: &PauliString, q: &PauliString, part: &Partition) -> Result<bool> {
    part.check(p, q)?;
    Ok(part.block_masks().any(|m| p.symplectic_parity(q, m)))
}

/// `true` iff the factors of `p` and `q` commute on every block.
pub fn cut_commute(p: &PauliString, q: &PauliString, part: &Partition) -> Result<bool> {
    cut_anticommute(p, q, part).map(|a| !a)
}

/// Which partitions a separability class ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparabilityClass {
    FullSeparability,
    AnyBipartition,
    Explicit(Partition),
    ExplicitList(Vec<Partition>),
}

impl SeparabilityClass {
    pub fn key(&self) -> &'static str {
        match self {
            SeparabilityClass::FullSeparability => "full_separability",
            SeparabilityClass::AnyBipartition => "any_bipartition",
            SeparabilityClass::Explicit(_) => "explicit_partition",
            SeparabilityClass::ExplicitList(_) => "explicit_list",
        }
    }

    pub fn partitions(&self, width: usize) -> Result<Vec<Partition>> {
        let check = |p: &Partition| {
            if p.width() != width {
                Err(Error::WidthMismatch {
                    expected: width,
                    found: p.width(),
                })
            } else {
                Ok(())
            }
        };
        match self {
            SeparabilityClass::FullSeparability => Ok(vec![Partition::finest(width)?]),
            SeparabilityClass::AnyBipartition => enumerate_bipartitions(width),
            SeparabilityClass::Explicit(p) => {
                check(p)?;
                Ok(vec![p.clone()])
            }
            SeparabilityClass::ExplicitList(ps) => {
                if ps.is_empty() {
                    return Err(Error::InvalidArgument("empty partition list".into()));
                }
                ps.iter().try_for_each(check)?;
                Ok(ps.clone())
            }
        }
    }
}

/// A qubit relabeling: site `i` maps to `perm[i]`.
pub type Permutation = Vec<usize>;

/// All qubit relabelings that map `sigma` onto itself, sorted, identity first.
///
/// Exhaustive search over partial assignments, pruned by per-qubit letter
/// counts and by requiring every member to have a partial image in `sigma`.
/// Factorial time in the worst case.
pub fn symmetry_group(sigma: &OperatorSet) -> Result<Vec<Permutation>> {
    symmetry_group_capped(sigma, SYMMETRY_WIDTH_CAP)
}

pub fn symmetry_group_capped(sigma: &OperatorSet, cap: usize) -> Result<Vec<Permutation>> {
    let n = sigma.width();
    if n > cap {
        return Err(Error::cap("symmetry search width", n, cap));
    }
    let members = sigma.members();
    let signature: Vec<[usize; 4]> = (0..n)
        .map(|k| {
            let mut c = [0usize; 4];
            for p in members {
                c[p.letter(k) as usize] += 1;
            }
            c
        })
        .collect();

    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(sigma, &signature, &mut perm, &mut used, &mut out);
    out.sort();

    let as_set: BTreeSet<&Permutation> = out.iter().collect();
    for g in &out {
        for h in &out {
            let gh: Permutation = (0..n).map(|i| g[h[i]]).collect();
            if !as_set.contains(&gh) {
                return Err(Error::Internal("symmetry set not closed".into()));
            }
        }
    }
    Ok(out)
}

fn search(
    sigma: &OperatorSet,
    signature: &[[usize; 4]],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Permutation>,
) {
    let n = sigma.width();
    let k = perm.len();
    if k == n {
        out.push(perm.clone());
        return;
    }
    for target in 0..n {
        if used[target] || signature[target] != signature[k] {
            continue;
        }
        perm.push(target);
        if partial_images_exist(sigma, perm) {
            used[target] = true;
            search(sigma, signature, perm, used, out);
            used[target] = false;
        }
        perm.pop();
    }
}

fn partial_images_exist(sigma: &OperatorSet, perm: &[usize]) -> bool {
    sigma.members().iter().all(|p| {
        sigma.members().iter().any(|q| {
            perm.iter()
                .enumerate()
                .all(|(i, &t)| q.letter(t) == p.letter(i))
        })
    })
}

/// Smallest image of `part` under `group`.
pub fn canonical_under(part: &Partition, group: &[Permutation]) -> Result<Partition> {
    let mut best = part.clone();
    for g in group {
        let img = part.relabel(g)?;
        if img < best {
            best = img;
        }
    }
    Ok(best)
}

/// One representative (the lexicographically smallest member) per orbit,
/// sorted.
pub fn orbit_representatives(parts: &[Partition], group: &[Permutation]) -> Result<Vec<Partition>> {
    let mut reps = BTreeSet::new();
    for p in parts {
        reps.insert(canonical_under(p, group)?);
    }
    Ok(reps.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::cp_expand_all;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn eq10() -> OperatorSet {
        cp_expand_all(&[p("1xxxz"), p("1zxxz"), p("1zxzz")]).unwrap()
    }

    #[test]
    fn parse_letters_and_indices() {
        let part = Partition::parse("AC|BDE", 5).unwrap();
        assert_eq!(part.blocks(), &[vec![0, 2], vec![1, 3, 4]]);
        assert_eq!(part.label(), "AC|BDE");
        assert!(Partition::parse("0|1|2", 3).unwrap().is_finest());
        assert_eq!(
            Partition::parse("0,2 | 1,3,4", 5).unwrap(),
            Partition::parse("ac|bde", 5).unwrap()
        );
    }

    #[test]
    fn parse_errors() {
        let e = Partition::parse("AB|AB", 4).unwrap_err();
        assert!(e.to_string().contains("repeated index"), "{e}");
        let e = Partition::parse("AB|C", 4).unwrap_err();
        assert!(e.to_string().contains("missing index 3"), "{e}");
        let e = Partition::parse("0|1|5", 3).unwrap_err();
        assert!(e.to_string().contains("index 5"), "{e}");
        assert!(Partition::parse("A||B", 2).is_err());
        assert!(Partition::parse("A|B?", 2).is_err());
    }

    #[test]
    fn bipartition_counts() {
        let three = enumerate_bipartitions(3).unwrap();
        let labels: Vec<_> = three.iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["A|BC", "AB|C", "AC|B"]);
        assert_eq!(enumerate_bipartitions(5).unwrap().len(), 15);
        assert_eq!(enumerate_bipartitions(2).unwrap().len(), 1);
        assert!(enumerate_bipartitions(1).is_err());
        assert!(enumerate_bipartitions(21).unwrap_err().is_cap());
    }

    #[test]
    fn cut_predicates() {
        let ab = Partition::parse("A|B", 2).unwrap();
        let whole = Partition::trivial(2).unwrap();
        assert!(cut_anticommute(&p("xx"), &p("yy"), &ab).unwrap());
        assert!(!cut_commute(&p("xx"), &p("yy"), &ab).unwrap());
        assert!(cut_commute(&p("xx"), &p("yy"), &whole).unwrap());
        for part in enumerate_bipartitions(4).unwrap() {
            assert!(!cut_anticommute(&p("x1x1"), &p("xy1z"), &part).unwrap());
        }
        let fine = Partition::finest(5).unwrap();
        assert!(!cut_commute(&p("1xxxz"), &p("1zxxz"), &fine).unwrap());
        assert!(!cut_anticommute(&p("xyz"), &p("xyz"), &Partition::finest(3).unwrap()).unwrap());
        assert!(cut_commute(&p("xx"), &p("xxx"), &ab).is_err());
    }

    #[test]
    fn refinement() {
        let fine = Partition::finest(4).unwrap();
        let cut = Partition::parse("AB|CD", 4).unwrap();
        assert!(fine.refines(&cut));
        assert!(cut.refines(&Partition::trivial(4).unwrap()));
        assert!(!cut.refines(&Partition::parse("AC|BD", 4).unwrap()));
    }

    #[test]
    fn symmetry_of_cyclic_set() {
        let g = symmetry_group(&eq10()).unwrap();
        assert_eq!(g[0], vec![0, 1, 2, 3, 4]);
        for s in 0..5 {
            let shift: Vec<_> = (0..5).map(|i| (i + s) % 5).collect();
            assert!(g.contains(&shift), "missing shift {s}");
        }
    }

    #[test]
    fn small_symmetry_groups() {
        let xx_yy = OperatorSet::parse_list(&["xx", "yy"]).unwrap();
        assert_eq!(
            symmetry_group(&xx_yy).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        let xz = OperatorSet::parse_list(&["xz"]).unwrap();
        assert_eq!(symmetry_group(&xz).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn orbits() {
        let g = symmetry_group(&eq10()).unwrap();
        let reps = orbit_representatives(&enumerate_bipartitions(5).unwrap(), &g).unwrap();
        assert_eq!(reps.len(), 3);
        let shapes: Vec<_> = reps.iter().map(|r| r.shape()).collect();
        assert!(shapes.contains(&vec![4, 1]));
        assert_eq!(shapes.iter().filter(|s| **s == vec![3, 2]).count(), 2);
        // adjacent and non-adjacent pairs land in different orbits
        let adj = canonical_under(&Partition::parse("AB|CDE", 5).unwrap(), &g).unwrap();
        let non = canonical_under(&Partition::parse("AC|BDE", 5).unwrap(), &g).unwrap();
        assert_ne!(adj, non);

        let parts = enumerate_bipartitions(3).unwrap();
        let id = vec![vec![0, 1, 2]];
        assert_eq!(orbit_representatives(&parts, &id).unwrap(), parts);
        let s3: Vec<Permutation> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        assert_eq!(orbit_representatives(&parts, &s3).unwrap().len(), 1);
    }

    #[test]
    fn classes() {
        assert_eq!(
            SeparabilityClass::FullSeparability.partitions(3).unwrap(),
            vec![Partition::finest(3).unwrap()]
        );
        assert_eq!(
            SeparabilityClass::AnyBipartition
                .partitions(4)
                .unwrap()
                .len(),
            7
        );
        let wrong = SeparabilityClass::Explicit(Partition::finest(2).unwrap());
        assert!(wrong.partitions(3).is_err());
    }
}
