//! Matroids given by their bases: exchange checks, quotients, flats, and the
//! analysis of subdivision cells as pairs of matroids.

mod cells;
mod experiment;

pub use cells::{
    analyze_cells, analyze_cells_with, internal_edges, internal_edges_with, is_concordant_polytope, CellAnalysis,
};
pub use experiment::{
    possibility_experiment, replay_record, trial_config, trial_records, CellRecord, ExperimentMode, ExperimentReport,
    QuadrantCounts, TrialSummary,
};

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{binomial, enumerate_subsets, Subset};

/// Largest ground set accepted by [`enumerate_matroids`] without the override.
pub const ENUMERATION_LIMIT: usize = 5;
/// Hard cap on the number of candidate bases, even with the override.
const MAX_CANDIDATES: usize = 24;

/// A matroid on `[n]` given by its (nonempty) family of bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Subset>,
}

/// Failure of basis exchange: no `y ∈ b2 ∖ b1` makes `b1 - x + y` a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeWitness {
    pub b1: Subset,
    pub b2: Subset,
    pub x: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatroidCheck {
    pub is_matroid: bool,
    pub witness: Option<ExchangeWitness>,
}

/// A basis `b` of the larger matroid and an element `i ∉ b` that no basis
/// of the smaller matroid inside `b` can match.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientWitness {
    pub b: Subset,
    pub i: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub is_quotient: bool,
    pub witness: Option<QuotientWitness>,
}

fn validate_family(n: usize, rank: usize, bases: &[Subset]) -> Result<Vec<Subset>> {
    if bases.is_empty() {
        return Err(Error::domain("a matroid needs at least one basis"));
    }
    if rank > n {
        return Err(Error::domain(format!("rank {rank} exceeds ground set size {n}")));
    }
    for b in bases {
        if b.ground() != n {
            return Err(Error::domain(format!("basis {b} lives on [{}], expected [{n}]", b.ground())));
        }
        if b.len() != rank {
            return Err(Error::domain(format!("basis {b} has {} elements, expected rank {rank}", b.len())));
        }
    }
    let mut sorted = bases.to_vec();
    sorted.sort();
    sorted.dedup();
    Ok(sorted)
}

fn exchange_violation(bases: &[Subset]) -> Option<ExchangeWitness> {
    let lookup: HashSet<u64> = bases.iter().map(|b| b.mask()).collect();
    for b1 in bases {
        for b2 in bases {
            let gain = b2.difference(b1);
            for x in b1.difference(b2).members() {
                let base = b1.without(x);
                if !gain.members().any(|y| lookup.contains(&base.with(y).mask())) {
                    return Some(ExchangeWitness { b1: *b1, b2: *b2, x });
                }
            }
        }
    }
    None
}

/// Basis-exchange test, with the first failing `(B1, B2, x)` in lexicographic order.
pub fn is_matroid(n: usize, rank: usize, bases: &[Subset]) -> Result<MatroidCheck> {
    let sorted = validate_family(n, rank, bases)?;
    let witness = exchange_violation(&sorted);
    Ok(MatroidCheck {
        is_matroid: witness.is_none(),
        witness,
    })
}

impl Matroid {
    pub fn new(n: usize, rank: usize, bases: &[Subset]) -> Result<Self> {
        let bases = validate_family(n, rank, bases)?;
        if let Some(w) = exchange_violation(&bases) {
            return Err(Error::domain(format!(
                "not a matroid: exchanging {} out of {} towards {} fails",
                w.x, w.b1, w.b2
            )));
        }
        Ok(Matroid { n, rank, bases })
    }

    /// Builds from bases given as subset strings, e.g. `["12", "34"]`; the rank is read off the first.
    pub fn parse(n: usize, bases: &[&str]) -> Result<Self> {
        let parsed: Vec<Subset> = bases.iter().map(|b| Subset::parse(b, n)).collect::<Result<_>>()?;
        let rank = parsed.first().map_or(0, |b| b.len());
        Self::new(n, rank, &parsed)
    }

    /// The uniform matroid `U_{rank,n}`.
    pub fn uniform(rank: usize, n: usize) -> Result<Self> {
        Self::new(n, rank, &enumerate_subsets(n, rank)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn is_basis(&self, s: &Subset) -> bool {
        self.bases.binary_search(s).is_ok()
    }

    /// `max |X ∩ B|` over bases `B`.
    pub fn rank_of(&self, x: &Subset) -> usize {
        self.bases.iter().map(|b| b.intersection(x).len()).max().unwrap_or(0)
    }

    pub fn closure(&self, x: &Subset) -> Subset {
        let r = self.rank_of(x);
        (1..=self.n).fold(*x, |acc, e| {
            if !x.contains(e) && self.rank_of(&x.with(e)) == r {
                acc.with(e)
            } else {
                acc
            }
        })
    }

    /// The same ground set with one more basis; fails if exchange breaks.
    pub fn with_basis(&self, b: Subset) -> Result<Self> {
        let mut bases = self.bases.clone();
        bases.push(b);
        Self::new(self.n, self.rank, &bases)
    }
}

fn check_pair(low: &Matroid, high: &Matroid) -> Result<()> {
    if low.n != high.n {
        return Err(Error::domain(format!("ground sets differ: [{}] vs [{}]", low.n, high.n)));
    }
    if low.rank > high.rank {
        return Err(Error::domain(format!(
            "quotient candidate has rank {} above the source's {}",
            low.rank, high.rank
        )));
    }
    Ok(())
}

/// `{j ∈ B ∪ i : B ∪ i ∖ j is a basis}`.
fn exchange_set(m: &Matroid, b: &Subset, i: usize) -> Subset {
    let bi = b.with(i);
    bi.members().fold(Subset::empty(m.n).expect("ground checked"), |acc, j| {
        if m.is_basis(&bi.without(j)) {
            acc.with(j)
        } else {
            acc
        }
    })
}

/// Basis-level quotient test: for every basis `B` of `high` and `i ∉ B` some
/// basis `B' ⊆ B` of `low` has its exchange set inside `B`'s. Containments
/// are non-strict.
pub fn is_quotient(low: &Matroid, high: &Matroid) -> Result<QuotientCheck> {
    check_pair(low, high)?;
    for b in &high.bases {
        for i in b.complement().members() {
            let left = exchange_set(high, b, i);
            let repaired = low
                .bases
                .iter()
                .filter(|bp| bp.is_subset(b))
                .any(|bp| exchange_set(low, bp, i).is_subset(&left));
            if !repaired {
                return Ok(QuotientCheck {
                    is_quotient: false,
                    witness: Some(QuotientWitness { b: *b, i }),
                });
            }
        }
    }
    Ok(QuotientCheck {
        is_quotient: true,
        witness: None,
    })
}

/// All flats, as closures of every subset of the ground set.
pub fn flats(m: &Matroid) -> Result<BTreeSet<Subset>> {
    if m.n > 20 {
        return Err(Error::Budget(format!("flats of a matroid on {} elements", m.n)));
    }
    Ok((0..1u64 << m.n)
        .map(|mask| m.closure(&Subset::from_mask(m.n, mask).expect("mask within ground set")))
        .collect())
}

/// Independent quotient oracle: every flat of `low` is a flat of `high`.
pub fn is_quotient_via_flats(low: &Matroid, high: &Matroid) -> Result<bool> {
    check_pair(low, high)?;
    let high_flats = flats(high)?;
    Ok(flats(low)?.iter().all(|f| high_flats.contains(f)))
}

/// Every matroid of the given rank on `[n]`, by filtering all nonempty
/// families of `rank`-subsets. Families are ordered by their bitmask over the
/// lexicographic list of candidates.
pub fn enumerate_matroids(n: usize, rank: usize, allow_large: bool) -> Result<Vec<Matroid>> {
    if n > ENUMERATION_LIMIT && !allow_large {
        return Err(Error::Budget(format!(
            "enumerating matroids on {n} > {ENUMERATION_LIMIT} elements needs the override"
        )));
    }
    if rank > n {
        return Err(Error::domain(format!("rank {rank} exceeds ground set size {n}")));
    }
    let candidates = enumerate_subsets(n, rank)?;
    if binomial(n, rank) > MAX_CANDIDATES {
        return Err(Error::Budget(format!(
            "{} candidate bases give too many families to enumerate",
            candidates.len()
        )));
    }
    let mut out = Vec::new();
    for family in 1u64..1 << candidates.len() {
        let bases: Vec<Subset> = (0..candidates.len())
            .filter(|k| family >> k & 1 == 1)
            .map(|k| candidates[k])
            .collect();
        if exchange_violation(&bases).is_none() {
            out.push(Matroid { n, rank, bases });
        }
    }
    Ok(out)
}
