//! Face and edge tests for finite point configurations, optionally lifted by weights.

use num_traits::{One, Zero};

use super::lp::{solve_standard_exact, StdOutcome};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `ε <= 1` such that some affine `f` equals `w` on `candidate` and
/// satisfies `f(v) + ε <= w(v)` on every other point; `None` when no affine
/// function interpolates `w` on `candidate` at all.
///
/// Solved through the LP dual (one column per point, `dim + 2` rows), which
/// is far smaller than the primal's one row per point.
pub fn face_margin(points: &[Vec<Rational>], weights: &[Rational], candidate: &[bool]) -> Result<Option<Rational>> {
    if points.len() != weights.len() || points.len() != candidate.len() {
        return Err(Error::domain("points, weights and candidate mask differ in length"));
    }
    if !candidate.iter().any(|&c| c) {
        return Err(Error::domain("empty candidate set"));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::domain("points of mixed dimension"));
    }
    // columns: λ_v for outside points, λ⁺_v and λ⁻_v for candidates, then μ
    let mut cols: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for ((p, w), &inside) in points.iter().zip(weights).zip(candidate) {
        let mut col: Vec<Rational> = p.clone();
        col.push(Rational::one());
        col.push(if inside { Rational::zero() } else { Rational::one() });
        if inside {
            let neg: Vec<Rational> = col.iter().map(|v| -v).collect();
            cols.push((col, w.clone()));
            cols.push((neg, -w));
        } else {
            cols.push((col, w.clone()));
        }
    }
    let mut mu = vec![Rational::zero(); dim + 2];
    mu[dim + 1] = Rational::one();
    cols.push((mu, Rational::one()));

    let rows = dim + 2;
    let a: Vec<Vec<Rational>> = (0..rows).map(|r| cols.iter().map(|(c, _)| c[r].clone()).collect()).collect();
    let mut b = vec![Rational::zero(); rows];
    b[dim + 1] = Rational::one();
    let c: Vec<Rational> = cols.iter().map(|(_, w)| w.clone()).collect();
    match solve_standard_exact(&a, &b, &c) {
        StdOutcome::Optimal { value, .. } => Ok(Some(value)),
        StdOutcome::Unbounded => Ok(None),
        StdOutcome::Infeasible => unreachable!("λ = 0, μ = 1 is always dual feasible"),
    }
}

/// True iff some affine functional is constant on `candidate` and strictly
/// smaller on every other point.
pub fn is_face(points: &[Vec<Rational>], candidate: &[bool]) -> Result<bool> {
    let zeros = vec![Rational::zero(); points.len()];
    Ok(face_margin(points, &zeros, candidate)?.is_some_and(|m| m > Rational::zero()))
}

/// Pairs `(i, j)`, `i < j`, spanning an edge of the convex hull. Pairs are
/// faces exactly when they are edges because the inputs are distinct 0/1
/// points, no three of them collinear.
pub fn edges_of_polytope(points: &[Vec<Rational>]) -> Result<Vec<(usize, usize)>> {
    weighted_edges(points, &vec![Rational::zero(); points.len()])
}

/// Pairs spanning an edge of the regular subdivision induced by `weights`.
pub fn weighted_edges(points: &[Vec<Rational>], weights: &[Rational]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut mask = vec![false; points.len()];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            mask[i] = true;
            mask[j] = true;
            if face_margin(points, weights, &mask)?.is_some_and(|m| m > Rational::zero()) {
                out.push((i, j));
            }
            mask[i] = false;
            mask[j] = false;
        }
    }
    Ok(out)
}

/// Coordinate indices onto which projection is injective on the affine hull
/// of `points` (greedy, in coordinate order).
pub(crate) fn affine_coordinates(points: &[Vec<Rational>]) -> Vec<usize> {
    let dim = points.first().map_or(0, |p| p.len());
    let mut chosen: Vec<usize> = Vec::new();
    let column = |j: Option<usize>| -> Vec<Rational> {
        points
            .iter()
            .map(|p| j.map_or_else(Rational::one, |j| p[j].clone()))
            .collect()
    };
    let mut basis = vec![column(None)];
    for j in 0..dim {
        basis.push(column(Some(j)));
        if super::linalg::rank(&basis) == basis.len() {
            chosen.push(j);
        } else {
            basis.pop();
        }
    }
    chosen
}
