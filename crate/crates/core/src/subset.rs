//! Subsets of the ground set `[n] = {1, ..., n}` stored as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 63;

/// A subset of `[n]`. Bit `i - 1` of the mask holds element `i`.
///
/// Ordering is lexicographic on the sorted member lists, which is the
/// canonical order used throughout reports.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    n: u8,
    mask: u64,
}

impl Subset {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        check_ground(n)?;
        let mut mask = 0u64;
        for (pos, e) in members.into_iter().enumerate() {
            if e == 0 || e > n {
                return Err(Error::parse(pos, format!("element {e} outside [1, {n}]")));
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::parse(pos, format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        Ok(Subset { n: n as u8, mask })
    }

    /// Builds a subset from a raw mask. Bits above `n` are rejected.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_ground(n)?;
        if n < 64 && mask >> n != 0 {
            return Err(Error::domain(format!("mask {mask:#x} has bits outside [1, {n}]")));
        }
        Ok(Subset { n: n as u8, mask })
    }

    pub(crate) fn from_mask_unchecked(n: usize, mask: u64) -> Self {
        debug_assert!(n <= MAX_GROUND && mask >> n == 0);
        Subset { n: n as u8, mask }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    pub fn full(n: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(Subset {
            n: n as u8,
            mask: low_bits(n),
        })
    }

    pub fn ground(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        e >= 1 && e <= self.ground() && self.mask & (1 << (e - 1)) != 0
    }

    /// Members in increasing order, 1-based.
    pub fn members(&self) -> Members {
        Members { mask: self.mask }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members().collect()
    }

    /// `self ∪ {e}`. Panics if `e` is outside the ground set.
    pub fn with(&self, e: usize) -> Self {
        assert!(e >= 1 && e <= self.ground(), "element {e} outside ground set");
        Subset {
            n: self.n,
            mask: self.mask | (1 << (e - 1)),
        }
    }

    /// `self ∖ {e}`.
    pub fn without(&self, e: usize) -> Self {
        assert!(e >= 1 && e <= self.ground(), "element {e} outside ground set");
        Subset {
            n: self.n,
            mask: self.mask & !(1 << (e - 1)),
        }
    }

    pub fn union(&self, other: &Subset) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            n: self.n,
            mask: self.mask | other.mask,
        }
    }

    pub fn intersection(&self, other: &Subset) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            n: self.n,
            mask: self.mask & other.mask,
        }
    }

    pub fn difference(&self, other: &Subset) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            n: self.n,
            mask: self.mask & !other.mask,
        }
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// `[n] ∖ self`.
    pub fn complement(&self) -> Self {
        Subset {
            n: self.n,
            mask: !self.mask & low_bits(self.ground()),
        }
    }

    /// Position of this subset in `enumerate_subsets(n, self.len())`.
    pub fn lex_rank(&self) -> usize {
        let n = self.ground();
        let d = self.len();
        let mut rank = 0;
        let mut prev = 0;
        for (i, c) in self.members().enumerate() {
            for j in prev + 1..c {
                rank += binomial(n - j, d - i - 1);
            }
            prev = c;
        }
        rank
    }

    /// The 0/1 indicator vector `e_S` in `n`-space.
    pub fn indicator(&self) -> Vec<i64> {
        (1..=self.ground()).map(|i| self.contains(i) as i64).collect()
    }

    /// Parses the text format: a digit string such as `134` when `n <= 9`,
    /// comma-separated integers such as `1,10,12` otherwise. Comma-separated
    /// input is accepted for every `n`; the empty string is the empty set.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        check_ground(n)?;
        let text = text.trim();
        if text.is_empty() || text == "{}" {
            return Self::empty(n);
        }
        let mut members = Vec::new();
        if text.contains(',') || n > 9 {
            let mut offset = 0;
            for piece in text.split(',') {
                let trimmed = piece.trim();
                let value: usize = trimmed.parse().map_err(|_| {
                    Error::parse(offset, format!("expected an element, found {trimmed:?}"))
                })?;
                members.push((offset, value));
                offset += piece.len() + 1;
            }
        } else {
            for (pos, ch) in text.char_indices() {
                let value = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::parse(pos, format!("unexpected character {ch:?}")))?;
                members.push((pos, value as usize));
            }
        }
        let mut mask = 0u64;
        for (pos, e) in members {
            if e == 0 || e > n {
                return Err(Error::parse(pos, format!("element {e} outside [1, {n}]")));
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::parse(pos, format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        Ok(Subset { n: n as u8, mask })
    }
}

/// Iterator over the members of a [`Subset`].
pub struct Members {
    mask: u64,
}

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.mask == 0 {
            return None;
        }
        let bit = self.mask.trailing_zeros() as usize;
        self.mask &= self.mask - 1;
        Some(bit + 1)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ground() <= 9 {
            for m in self.members() {
                write!(f, "{m}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.members().map(|m| m.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}/{}", self.n)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All `d`-subsets of `[n]` in lexicographic order.
pub fn enumerate_subsets(n: usize, d: usize) -> Result<Vec<Subset>> {
    check_ground(n)?;
    if d > n {
        return Err(Error::domain(format!("subset size {d} exceeds ground set size {n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, d));
    let mut current = Vec::with_capacity(d);
    push_combinations(n, d, 1, &mut current, &mut out);
    Ok(out)
}

fn push_combinations(n: usize, d: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Subset>) {
    if current.len() == d {
        let mask = current.iter().fold(0u64, |m, &e| m | 1 << (e - 1));
        out.push(Subset::from_mask_unchecked(n, mask));
        return;
    }
    let remaining = d - current.len();
    for e in start..=n + 1 - remaining {
        current.push(e);
        push_combinations(n, d, e + 1, current, out);
        current.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::domain(format!("ground set size {n} outside [1, {MAX_GROUND}]")));
    }
    Ok(())
}
