//! Phase-free Pauli strings and operator sets.
//!
//! A [`PauliString`] is an `N`-fold tensor product of single-qubit operators
//! drawn from `{1, x, y, z}`, stored as two bitmasks in the symplectic
//! convention: bit `k` of `x_support` is set when site `k` carries `x` or `y`,
//! bit `k` of `z_support` when it carries `z` or `y`. The leftmost character
//! of the text form is qubit 0.
//!
//! No phase is tracked. Operators are only ever compared for (anti)commutation
//! and applied to states, so products such as `x·z = -i y` are not
//! representable here.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of qubits a [`PauliString`] can hold.
pub const MAX_WIDTH: usize = 64;

/// Default cap on the width accepted by [`PauliString::to_matrix`].
pub const MATRIX_WIDTH_CAP: usize = 6;

/// Single-site letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::I => '1',
            Letter::X => 'x',
            Letter::Y => 'y',
            Letter::Z => 'z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            '1' | 'I' => Some(Letter::I),
            'x' | 'X' => Some(Letter::X),
            'y' | 'Y' => Some(Letter::Y),
            'z' | 'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// The 2×2 matrix of the letter.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Letter::I => [l, o, o, l],
            Letter::X => [o, l, l, o],
            Letter::Y => [o, -i, i, o],
            Letter::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }
}

fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// An `N`-qubit tensor product of `{1, x, y, z}` without phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    width: usize,
    x_support: u64,
    z_support: u64,
}

impl PauliString {
    /// Builds a string from raw supports. Bits at or above `width` are rejected.
    pub fn from_supports(width: usize, x_support: u64, z_support: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::EmptyPauli);
        }
        if width > MAX_WIDTH {
            return Err(Error::cap("Pauli string width", width, MAX_WIDTH));
        }
        let mask = low_mask(width);
        if x_support & !mask != 0 || z_support & !mask != 0 {
            let stray = (x_support | z_support) & !mask;
            return Err(Error::IndexOutOfRange {
                index: stray.trailing_zeros() as usize,
                width,
            });
        }
        Ok(PauliString {
            width,
            x_support,
            z_support,
        })
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::from_supports(width, 0, 0)
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let (mut x, mut z) = (0u64, 0u64);
        if letters.len() > MAX_WIDTH {
            return Err(Error::cap("Pauli string width", letters.len(), MAX_WIDTH));
        }
        for (k, l) in letters.iter().enumerate() {
            let (bx, bz) = l.bits();
            x |= (bx as u64) << k;
            z |= (bz as u64) << k;
        }
        Self::from_supports(letters.len(), x, z)
    }

    /// Parses text such as `"1xxxz"`. Accepts `1`/`I` for the identity and
    /// either case for `x`, `y`, `z`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match Letter::from_char(ch) {
                Some(l) => letters.push(l),
                None => return Err(Error::IllegalCharacter { ch, position }),
            }
        }
        Self::from_letters(&letters)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn x_support(&self) -> u64 {
        self.x_support
    }

    pub fn z_support(&self) -> u64 {
        self.z_support
    }

    /// Letter at qubit `k`. Panics if `k >= width`.
    pub fn letter(&self, k: usize) -> Letter {
        assert!(k < self.width, "qubit {k} out of range");
        match ((self.x_support >> k) & 1, (self.z_support >> k) & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.width).map(|k| self.letter(k))
    }

    /// Bitmask of sites whose letter is not the identity.
    pub fn support(&self) -> u64 {
        self.x_support | self.z_support
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// The factor of `self` on the sites in `block`, in the order given.
    pub fn restrict(&self, block: &[usize]) -> Result<PauliString> {
        if block.is_empty() {
            return Err(Error::EmptyBlock);
        }
        let mut letters = Vec::with_capacity(block.len());
        for &k in block {
            if k >= self.width {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    width: self.width,
                });
            }
            letters.push(self.letter(k));
        }
        Self::from_letters(&letters)
    }

    fn check_width(&self, other: &PauliString) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    /// Symplectic form restricted to `mask`: odd iff the factors on `mask`
    /// anticommute. Widths are assumed equal.
    pub(crate) fn symplectic_parity(&self, other: &PauliString, mask: u64) -> bool {
        let s = (self.x_support & other.z_support) ^ (self.z_support & other.x_support);
        (s & mask).count_ones() % 2 == 1
    }

    /// `true` iff the two strings anticommute.
    pub fn anticommutes(&self, other: &PauliString) -> Result<bool> {
        self.check_width(other)?;
        Ok(self.symplectic_parity(other, u64::MAX))
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.anticommutes(other).map(|a| !a)
    }

    /// Relabels qubits: site `k` of `self` moves to site `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<PauliString> {
        if perm.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: perm.len(),
            });
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (k, &target) in perm.iter().enumerate() {
            if target >= self.width {
                return Err(Error::IndexOutOfRange {
                    index: target,
                    width: self.width,
                });
            }
            x |= ((self.x_support >> k) & 1) << target;
            z |= ((self.z_support >> k) & 1) << target;
        }
        Self::from_supports(self.width, x, z)
    }

    /// Rotates the string `shift` places to the right, wrapping around.
    pub fn rotate_right(&self, shift: usize) -> PauliString {
        let n = self.width;
        let shift = shift % n;
        let rot = |m: u64| {
            if shift == 0 {
                m
            } else {
                ((m << shift) | (m >> (n - shift))) & low_mask(n)
            }
        };
        PauliString {
            width: n,
            x_support: rot(self.x_support),
            z_support: rot(self.z_support),
        }
    }

    /// The dense `2^N × 2^N` matrix, qubit 0 as the most significant tensor factor.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.to_matrix_capped(MATRIX_WIDTH_CAP)
    }

    pub fn to_matrix_capped(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.width > cap {
            return Err(Error::cap("matrix width", self.width, cap));
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for l in self.letters() {
            m = m.kronecker(&l.matrix());
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        PauliString::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// An ordered set of distinct, non-identity Pauli strings of a common width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorSet {
    width: usize,
    members: Vec<PauliString>,
}

impl OperatorSet {
    pub fn new(members: Vec<PauliString>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidSet("no operators".into()))?;
        let width = first.width();
        let mut seen = HashSet::with_capacity(members.len());
        for p in &members {
            if p.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: p.width(),
                });
            }
            if p.is_identity() {
                return Err(Error::InvalidSet(format!(
                    "the all-identity string {p} cannot be a member"
                )));
            }
            if !seen.insert(*p) {
                return Err(Error::InvalidSet(format!("duplicate member {p}")));
            }
        }
        Ok(OperatorSet { width, members })
    }

    /// Like [`OperatorSet::new`] but silently drops repeated members.
    pub fn new_dedup(members: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut seen = HashSet::new();
        let kept: Vec<_> = members.into_iter().filter(|p| seen.insert(*p)).collect();
        Self::new(kept)
    }

    pub fn parse_list<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        let members = texts
            .iter()
            .map(|t| PauliString::parse(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    /// Parses the line-oriented set format: one string per line, blank lines
    /// and `#` comments skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut members = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p = PauliString::parse(line)
                .map_err(|e| Error::InvalidSet(format!("line {}: {e}", lineno + 1)))?;
            if let Some(first) = members.first().map(|q: &PauliString| q.width()) {
                if p.width() != first {
                    return Err(Error::InvalidSet(format!(
                        "line {}: width {} differs from {first}",
                        lineno + 1,
                        p.width()
                    )));
                }
            }
            members.push(p);
        }
        Self::new(members)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.members {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[PauliString] {
        &self.members
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.members.contains(p)
    }

    pub fn position(&self, p: &PauliString) -> Option<usize> {
        self.members.iter().position(|q| q == p)
    }

    /// Set-union preserving the order of first appearance.
    pub fn union(&self, other: &OperatorSet) -> Result<OperatorSet> {
        Self::new_dedup(self.members.iter().chain(other.members.iter()).copied())
    }

    /// Members as a sorted set, for order-insensitive comparison.
    pub fn sorted_members(&self) -> Vec<PauliString> {
        let mut v = self.members.clone();
        v.sort();
        v
    }
}

/// All cyclic rotations of `pattern`, deduplicated.
pub fn cp_expand(pattern: &PauliString) -> Result<OperatorSet> {
    OperatorSet::new_dedup((0..pattern.width()).map(|k| pattern.rotate_right(k)))
}

/// Union of [`cp_expand`] over several patterns.
pub fn cp_expand_all(patterns: &[PauliString]) -> Result<OperatorSet> {
    let mut all = Vec::new();
    for p in patterns {
        all.extend(cp_expand(p)?.members);
    }
    OperatorSet::new_dedup(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_bits() {
        let q = p("1xxxz");
        assert_eq!(q.width(), 5);
        assert_eq!(q.x_support(), 0b01110);
        assert_eq!(q.z_support(), 0b10000);
        let y = p("y");
        assert_eq!((y.x_support(), y.z_support()), (1, 1));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            PauliString::parse("q"),
            Err(Error::IllegalCharacter {
                ch: 'q',
                position: 0
            })
        );
        assert_eq!(
            PauliString::parse("xxw"),
            Err(Error::IllegalCharacter {
                ch: 'w',
                position: 2
            })
        );
        assert_eq!(PauliString::parse(""), Err(Error::EmptyPauli));
    }

    #[test]
    fn format() {
        assert_eq!(p("zxxz1").to_string(), "zxxz1");
        assert_eq!(PauliString::identity(3).unwrap().to_string(), "111");
        assert_eq!(
            PauliString::from_supports(1, 1, 1).unwrap().to_string(),
            "y"
        );
        assert_eq!(p("IXyZ").to_string(), "1xyz");
    }

    #[test]
    fn weights() {
        assert_eq!(p("1xxxz").weight(), 4);
        assert_eq!(p("111").weight(), 0);
        assert_eq!(p("yyy").weight(), 3);
    }

    #[test]
    fn restriction() {
        assert_eq!(p("xyz").restrict(&[0, 2]).unwrap(), p("xz"));
        assert_eq!(p("1zxxz").restrict(&[0]).unwrap(), p("1"));
        assert_eq!(p("x1x1").restrict(&[2, 3]).unwrap(), p("x1"));
        assert_eq!(p("xyz").restrict(&[]), Err(Error::EmptyBlock));
        assert!(matches!(
            p("xyz").restrict(&[3]),
            Err(Error::IndexOutOfRange { index: 3, width: 3 })
        ));
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("xxx").anticommutes(&p("yz1")).unwrap());
        assert!(!p("xxx").anticommutes(&p("xyz")).unwrap());
        assert!(p("xxx").anticommutes(&p("x1y")).unwrap());
        assert!(!p("xyz").anticommutes(&p("xyz")).unwrap());
        assert!(p("xx").anticommutes(&p("xxx")).is_err());
    }

    #[test]
    fn cyclic_expansion() {
        let s = cp_expand(&p("1xxxz")).unwrap();
        let mut want: Vec<_> = ["1xxxz", "z1xxx", "xz1xx", "xxz1x", "xxxz1"]
            .iter()
            .map(|t| p(t))
            .collect();
        want.sort();
        assert_eq!(s.sorted_members(), want);
        assert_eq!(cp_expand(&p("xx")).unwrap().members(), &[p("xx")]);
        let all = cp_expand_all(&[p("1xxxz"), p("1zxxz"), p("1zxzz")]).unwrap();
        assert_eq!(all.len(), 15);
        assert!(cp_expand(&p("111")).is_err());
    }

    #[test]
    fn rotation_direction_irrelevant() {
        let pat = p("1zxzz");
        let left: Vec<_> = (0..5).map(|k| pat.rotate_right(5 - k)).collect();
        let mut left = OperatorSet::new_dedup(left).unwrap().sorted_members();
        left.sort();
        assert_eq!(left, cp_expand(&pat).unwrap().sorted_members());
    }

    #[test]
    fn matrices() {
        let z = p("z").to_matrix().unwrap();
        assert_eq!(z[(0, 0)].re, 1.0);
        assert_eq!(z[(1, 1)].re, -1.0);
        assert_eq!(z[(0, 1)].norm(), 0.0);
        assert_eq!(p("1").to_matrix().unwrap(), DMatrix::identity(2, 2));
        let xx = p("xx").to_matrix().unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r + c == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(r, c)], Complex64::new(want, 0.0));
            }
        }
        assert!(p("xxxxxxx").to_matrix().unwrap_err().is_cap());
    }

    #[test]
    fn set_validation() {
        assert!(OperatorSet::parse_list(&["xx", "xx"]).is_err());
        assert!(OperatorSet::parse_list(&["xx", "11"]).is_err());
        assert!(OperatorSet::parse_list(&["xx", "xxx"]).is_err());
        assert!(OperatorSet::parse_list::<&str>(&[]).is_err());
    }

    #[test]
    fn set_file_format() {
        let s = OperatorSet::from_text("# comment\n\nxx\n  yy \n").unwrap();
        assert_eq!(s.to_text(), "xx\nyy\n");
        let e = OperatorSet::from_text("xx\nxyz\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
        assert!(OperatorSet::from_text("# only comments\n").is_err());
    }

    #[test]
    fn permutation() {
        // site 0 -> 1, 1 -> 2, 2 -> 0
        assert_eq!(p("xyz").permute(&[1, 2, 0]).unwrap(), p("zxy"));
        assert_eq!(p("xyz").rotate_right(1), p("zxy"));
    }
}
