//! Tropical Plücker vectors (min-plus convention), their three-term relations,
//! duality, membership in the associated tropical linear space, and the
//! incidence relations between two vectors.

mod incidence;

pub use incidence::{check_flag, check_incidence, FlagInstance, FlagReport, LayerReport, PairReport};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{ExtRational, Rational};
use crate::subset::{enumerate_subsets, Subset};

/// A total assignment of rationals to the `d`-subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    n: usize,
    d: usize,
    /// Indexed by lexicographic rank of the subset.
    weights: Vec<Rational>,
}

impl PluckerVector {
    /// `weights` lists the values in lexicographic subset order.
    pub fn new(n: usize, d: usize, weights: Vec<Rational>) -> Result<Self> {
        if d == 0 || d >= n {
            return Err(Error::domain(format!("Plücker vector needs 1 <= d <= n-1, got d={d}, n={n}")));
        }
        let expected = crate::subset::binomial(n, d);
        if weights.len() != expected {
            return Err(Error::domain(format!(
                "expected {expected} weights for d={d}, n={n}, got {}",
                weights.len()
            )));
        }
        Ok(PluckerVector { n, d, weights })
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&Subset) -> Rational) -> Result<Self> {
        let subsets = enumerate_subsets(n, d)?;
        Self::new(n, d, subsets.iter().map(&mut f).collect())
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::from_fn(n, d, |_| Rational::zero())
    }

    /// Builds from an explicit map; the map must cover every `d`-subset.
    pub fn from_map(n: usize, d: usize, map: &BTreeMap<Subset, Rational>) -> Result<Self> {
        let subsets = enumerate_subsets(n, d)?;
        let mut weights = Vec::with_capacity(subsets.len());
        for s in &subsets {
            match map.get(s) {
                Some(w) => weights.push(w.clone()),
                None => return Err(Error::domain(format!("missing weight for subset {s}"))),
            }
        }
        if map.len() != subsets.len() {
            return Err(Error::domain(format!("weight map has entries that are not {d}-subsets of [{n}]")));
        }
        Self::new(n, d, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Weight of a `d`-subset. Panics on a subset of the wrong size or ground set.
    pub fn get(&self, s: &Subset) -> &Rational {
        assert!(s.ground() == self.n && s.len() == self.d, "subset {s:?} is not a {}-subset of [{}]", self.d, self.n);
        &self.weights[s.lex_rank()]
    }

    pub fn set(&mut self, s: &Subset, value: Rational) {
        assert!(s.ground() == self.n && s.len() == self.d);
        let idx = s.lex_rank();
        self.weights[idx] = value;
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn subsets(&self) -> Vec<Subset> {
        enumerate_subsets(self.n, self.d).expect("dimensions validated at construction")
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, &Rational)> {
        self.subsets().into_iter().zip(self.weights.iter())
    }

    /// Adds `c` to every weight.
    pub fn shifted(&self, c: &Rational) -> Self {
        PluckerVector {
            n: self.n,
            d: self.d,
            weights: self.weights.iter().map(|w| w + c).collect(),
        }
    }
}

/// A point of tropical projective space: `n` coordinates modulo adding a
/// common finite constant, stored with the minimum finite coordinate at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TropPoint {
    coords: Vec<ExtRational>,
}

impl TropPoint {
    pub fn new(coords: Vec<ExtRational>) -> Result<Self> {
        let min = coords
            .iter()
            .filter_map(|c| c.finite())
            .min()
            .cloned()
            .ok_or_else(|| Error::domain("a tropical point needs at least one finite coordinate"))?;
        let coords = coords
            .into_iter()
            .map(|c| match c {
                ExtRational::Finite(v) => ExtRational::Finite(v - &min),
                ExtRational::Infinity => ExtRational::Infinity,
            })
            .collect();
        Ok(TropPoint { coords })
    }

    pub fn from_finite(coords: &[Rational]) -> Result<Self> {
        Self::new(coords.iter().cloned().map(ExtRational::Finite).collect())
    }

    pub fn coords(&self) -> &[ExtRational] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate of element `j` (1-based).
    pub fn get(&self, j: usize) -> &ExtRational {
        &self.coords[j - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Plucker,
    Incidence,
}

/// A relation whose terms attain their minimum exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationViolation {
    pub kind: RelationKind,
    pub s: Subset,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Subset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<[usize; 4]>,
    pub terms: Vec<ExtRational>,
}

/// True iff the minimum of `terms` is attained at least twice, or is `+∞`.
pub fn trop_vanishes(terms: &[ExtRational]) -> Result<bool> {
    let min = terms
        .iter()
        .min()
        .ok_or_else(|| Error::domain("tropical vanishing test on an empty term list"))?;
    if min.is_infinite() {
        return Ok(true);
    }
    Ok(terms.iter().filter(|t| *t == min).count() >= 2)
}

pub(crate) fn finite_vanishes(terms: &[Rational]) -> bool {
    let min = terms.iter().min().expect("relation with no terms");
    terms.iter().filter(|t| *t == min).count() >= 2
}

/// All three-term Plücker relations with a unique minimum. Empty iff `p` is
/// a tropical Plücker vector.
pub fn check_plucker(p: &PluckerVector) -> Vec<RelationViolation> {
    let (n, d) = (p.n, p.d);
    let mut out = Vec::new();
    if d < 2 || n - d < 2 {
        return out;
    }
    for s in enumerate_subsets(n, d - 2).expect("valid sizes") {
        let rest: Vec<usize> = s.complement().to_vec();
        for a in 0..rest.len() {
            for b in a + 1..rest.len() {
                for c in b + 1..rest.len() {
                    for e in c + 1..rest.len() {
                        let (i, j, k, l) = (rest[a], rest[b], rest[c], rest[e]);
                        let w = |x: usize, y: usize| p.get(&s.with(x).with(y));
                        let terms = [w(i, j) + w(k, l), w(i, k) + w(j, l), w(i, l) + w(j, k)];
                        if !finite_vanishes(&terms) {
                            out.push(RelationViolation {
                                kind: RelationKind::Plucker,
                                s,
                                t: None,
                                indices: Some([i, j, k, l]),
                                terms: terms.into_iter().map(ExtRational::Finite).collect(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// The dual vector on `(n - d)`-subsets: `q(J) = p([n] ∖ J)`.
pub fn dualize(p: &PluckerVector) -> PluckerVector {
    PluckerVector::from_fn(p.n, p.n - p.d, |j| p.get(&j.complement()).clone())
        .expect("complement sizes are valid")
}

/// Membership of `x` in the tropical linear space of `p`.
pub fn point_in_space(p: &PluckerVector, x: &TropPoint) -> Result<bool> {
    if x.n() != p.n {
        return Err(Error::domain(format!("point has {} coordinates, space lives in {}-space", x.n(), p.n)));
    }
    let violations = check_plucker(p);
    if !violations.is_empty() {
        return Err(Error::NotPlucker(violations));
    }
    for big in enumerate_subsets(p.n, p.d + 1)? {
        let terms: Vec<ExtRational> = big
            .members()
            .map(|j| &ExtRational::Finite(p.get(&big.without(j)).clone()) + x.get(j))
            .collect();
        if !trop_vanishes(&terms)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The cocircuit point of `p` for a `(d-1)`-subset `k`: coordinate
/// `p(K ∪ {j})` off `K` and `+∞` on `K`.
pub fn cocircuit(p: &PluckerVector, k: &Subset) -> Result<TropPoint> {
    if k.ground() != p.n || k.len() + 1 != p.d {
        return Err(Error::domain(format!("cocircuit index must be a {}-subset of [{}]", p.d - 1, p.n)));
    }
    let violations = check_plucker(p);
    if !violations.is_empty() {
        return Err(Error::NotPlucker(violations));
    }
    let coords = (1..=p.n)
        .map(|j| {
            if k.contains(j) {
                ExtRational::Infinity
            } else {
                ExtRational::Finite(p.get(&k.with(j)).clone())
            }
        })
        .collect();
    TropPoint::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn vec_from(n: usize, d: usize, pairs: &[(&str, i64)]) -> PluckerVector {
        let mut p = PluckerVector::zeros(n, d).unwrap();
        for (s, w) in pairs {
            p.set(&Subset::parse(s, n).unwrap(), rat(*w));
        }
        p
    }

    fn ext(values: &[i64]) -> Vec<ExtRational> {
        values.iter().map(|&v| ExtRational::from(v)).collect()
    }

    #[test]
    fn vanishing_examples() {
        assert!(trop_vanishes(&ext(&[0, 0, 5])).unwrap());
        assert!(!trop_vanishes(&ext(&[1, 2, 3])).unwrap());
        assert!(trop_vanishes(&[ExtRational::Infinity, ExtRational::Infinity]).unwrap());
        assert!(trop_vanishes(&[]).is_err());
        assert!(!trop_vanishes(&[ExtRational::Infinity, ExtRational::from(2)]).unwrap());
    }

    #[test]
    fn plucker_examples() {
        assert!(check_plucker(&PluckerVector::zeros(4, 2).unwrap()).is_empty());
        assert!(check_plucker(&vec_from(4, 2, &[("12", 1), ("34", 1)])).is_empty());
        let bad = check_plucker(&vec_from(4, 2, &[("13", -1)]));
        assert_eq!(bad.len(), 1);
        assert!(bad[0].s.is_empty());
        assert_eq!(bad[0].indices, Some([1, 2, 3, 4]));
        assert_eq!(bad[0].terms, ext(&[0, -1, 0]));
        // no relations at all when d < 2 or n - d < 2
        assert!(check_plucker(&vec_from(4, 1, &[("1", 5)])).is_empty());
        assert!(check_plucker(&vec_from(4, 3, &[("123", 5)])).is_empty());
    }

    #[test]
    fn dual_examples() {
        let p = PluckerVector::new(3, 1, vec![rat(0), rat(1), rat(2)]).unwrap();
        let q = dualize(&p);
        assert_eq!(q.d(), 2);
        let get = |s: &str| q.get(&Subset::parse(s, 3).unwrap()).clone();
        assert_eq!((get("23"), get("13"), get("12")), (rat(0), rat(1), rat(2)));
        let sym = vec_from(4, 2, &[("12", 1), ("34", 1)]);
        assert_eq!(dualize(&sym), sym);
        assert!(check_plucker(&dualize(&sym)).is_empty());
        assert!(check_plucker(&dualize(&p)).is_empty());
        assert_eq!(dualize(&dualize(&p)), p);
    }

    #[test]
    fn membership_examples() {
        let zero42 = PluckerVector::zeros(4, 2).unwrap();
        let x = TropPoint::new(ext(&[0, 0, 0, 1])).unwrap();
        assert!(point_in_space(&zero42, &x).unwrap());
        let zero31 = PluckerVector::zeros(3, 1).unwrap();
        assert!(!point_in_space(&zero31, &TropPoint::new(ext(&[0, 0, 1])).unwrap()).unwrap());
        let mut coords = ext(&[0, 0, 0]);
        coords.insert(0, ExtRational::Infinity);
        assert!(point_in_space(&zero42, &TropPoint::new(coords).unwrap()).unwrap());
        let bad = vec_from(4, 2, &[("13", -1)]);
        assert!(matches!(point_in_space(&bad, &x), Err(Error::NotPlucker(v)) if v.len() == 1));
    }

    #[test]
    fn membership_shift_invariance() {
        let p = vec_from(4, 2, &[("12", 1), ("34", 1)]);
        let x = TropPoint::new(ext(&[0, 2, 1, 1])).unwrap();
        let shifted_p = p.shifted(&rat(7));
        let shifted_x = TropPoint::new(ext(&[5, 7, 6, 6])).unwrap();
        assert_eq!(x, shifted_x);
        assert_eq!(point_in_space(&p, &x).unwrap(), point_in_space(&shifted_p, &shifted_x).unwrap());
    }

    #[test]
    fn cocircuit_examples() {
        let zero42 = PluckerVector::zeros(4, 2).unwrap();
        let c = cocircuit(&zero42, &Subset::parse("1", 4).unwrap()).unwrap();
        let mut expected = ext(&[0, 0, 0]);
        expected.insert(0, ExtRational::Infinity);
        assert_eq!(c.coords(), expected.as_slice());
        assert!(point_in_space(&zero42, &c).unwrap());

        let p = PluckerVector::new(3, 1, vec![rat(0), rat(1), rat(2)]).unwrap();
        let c = cocircuit(&p, &Subset::empty(3).unwrap()).unwrap();
        assert_eq!(c.coords(), ext(&[0, 1, 2]).as_slice());
        assert!(point_in_space(&p, &c).unwrap());

        assert!(cocircuit(&zero42, &Subset::parse("12", 4).unwrap()).is_err());
    }

    #[test]
    fn trop_point_requires_finite() {
        assert!(TropPoint::new(vec![ExtRational::Infinity]).is_err());
    }
}
