//! Regular subdivisions: maximal cells are the vertices of the dual polyhedron
//! `{(a, b) : a·v + b <= w(v) for all v}`; each vertex's tight set is a cell.
//!
//! Vertices are found by walking the polyhedron's graph. Edge directions at a
//! (possibly degenerate) vertex are the extreme rays of its tangent cone, from
//! double description; a ratio test along each finds the neighbour.

use std::collections::{BTreeSet, HashSet, VecDeque};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::dd::extreme_rays;
use super::linalg::{dot, null_vector, rank, solve, Vector};
use super::polytope::{affine_coordinates, face_margin, is_face};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Upper bound on configuration size (tight sets are 128-bit masks).
pub const MAX_POINTS: usize = 128;

/// `x ↦ a·x + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineFunctional {
    #[serde(with = "rational::serde_vec")]
    pub a: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
}

impl AffineFunctional {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.a, x) + &self.b
    }
}

/// Points in `Q^k` with a weight each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub points: Vec<Vec<Rational>>,
    pub weights: Vec<Rational>,
}

impl PointConfig {
    pub fn new(points: Vec<Vec<Rational>>, weights: Vec<Rational>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("empty point configuration"));
        }
        if points.len() != weights.len() {
            return Err(Error::domain("one weight per point required"));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::Budget(format!("{} points exceed the supported {MAX_POINTS}", points.len())));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::domain("points of mixed dimension"));
        }
        if points.iter().collect::<HashSet<_>>().len() != points.len() {
            return Err(Error::domain("repeated point"));
        }
        Ok(PointConfig { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// A maximal cell: point indices (ascending) and a functional equal to the
/// weight exactly there and strictly below it elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub functional: AffineFunctional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    /// Maximal cells, ordered by their vertex lists.
    pub cells: Vec<Cell>,
}

impl Subdivision {
    /// Edges of all maximal cells, each computed as a polytope of its own.
    pub fn cell_edges(&self, cfg: &PointConfig) -> Result<BTreeSet<(usize, usize)>> {
        let mut out = BTreeSet::new();
        for cell in &self.cells {
            let pts: Vec<Vec<Rational>> = cell.vertices.iter().map(|&i| cfg.points[i].clone()).collect();
            for (i, j) in super::polytope::edges_of_polytope(&pts)? {
                out.insert((cell.vertices[i], cell.vertices[j]));
            }
        }
        Ok(out)
    }

    /// True iff every point lies in some cell.
    pub fn covers(&self, n_points: usize) -> bool {
        let mut seen = vec![false; n_points];
        for c in &self.cells {
            for &v in &c.vertices {
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First pair of cells whose common vertex set is not a face of both.
    pub fn non_face_intersection(&self, cfg: &PointConfig) -> Result<Option<(usize, usize)>> {
        for (i, j) in (0..self.cells.len()).tuple_combinations() {
            let (a, b) = (&self.cells[i].vertices, &self.cells[j].vertices);
            let common: Vec<usize> = a.iter().filter(|v| b.contains(v)).copied().collect();
            if common.is_empty() {
                continue;
            }
            for cell in [a, b] {
                let pts: Vec<Vec<Rational>> = cell.iter().map(|&v| cfg.points[v].clone()).collect();
                let mask: Vec<bool> = cell.iter().map(|v| common.contains(v)).collect();
                if !is_face(&pts, &mask)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }
}

/// Dual polyhedron data in affinely reduced coordinates.
struct Dual {
    /// Kept coordinate indices of the original space.
    coords: Vec<usize>,
    /// Row per point: reduced coordinates followed by 1.
    rows: Vec<Vector>,
    weights: Vec<Rational>,
    original_dim: usize,
}

impl Dual {
    fn new(cfg: &PointConfig) -> Self {
        let coords = affine_coordinates(&cfg.points);
        let rows = cfg
            .points
            .iter()
            .map(|p| {
                let mut r: Vector = coords.iter().map(|&j| p[j].clone()).collect();
                r.push(Rational::from_integer(1.into()));
                r
            })
            .collect();
        Dual {
            coords,
            rows,
            weights: cfg.weights.clone(),
            original_dim: cfg.dim(),
        }
    }

    fn dim(&self) -> usize {
        self.coords.len() + 1
    }

    fn slack(&self, y: &[Rational], i: usize) -> Rational {
        &self.weights[i] - dot(&self.rows[i], y)
    }

    fn tight(&self, y: &[Rational]) -> u128 {
        (0..self.rows.len())
            .filter(|&i| self.slack(y, i).is_zero())
            .fold(0u128, |acc, i| acc | (1u128 << i))
    }

    fn tight_rows(&self, mask: u128) -> Vec<Vector> {
        (0..self.rows.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.rows[i].clone())
            .collect()
    }

    /// Largest step along `d` keeping feasibility; `None` if unbounded.
    fn step(&self, y: &[Rational], d: &[Rational]) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let rate = dot(row, d);
            if rate.is_positive() {
                let t = self.slack(y, i) / rate;
                if best.as_ref().is_none_or(|b| &t < b) {
                    best = Some(t);
                }
            }
        }
        best
    }

    /// Some vertex: start at `a = 0, b = min w` and move inside null spaces of
    /// the tight rows until they have full rank.
    fn initial_vertex(&self) -> Result<Vector> {
        let d = self.dim();
        let mut y = vec![Rational::zero(); d];
        y[d - 1] = self.weights.iter().min().cloned().expect("nonempty");
        loop {
            let tight = self.tight_rows(self.tight(&y));
            if rank(&tight) == d {
                return Ok(y);
            }
            let dir = null_vector(&tight, d).expect("rank deficient");
            let (dir, t) = match self.step(&y, &dir) {
                Some(t) => (dir, t),
                None => {
                    let neg: Vector = dir.iter().map(|v| -v).collect();
                    let t = self
                        .step(&y, &neg)
                        .ok_or_else(|| Error::domain("dual polyhedron contains a line"))?;
                    (neg, t)
                }
            };
            for (yi, di) in y.iter_mut().zip(&dir) {
                *yi += &t * di;
            }
        }
    }

    fn lift(&self, y: &[Rational]) -> AffineFunctional {
        let mut a = vec![Rational::zero(); self.original_dim];
        for (k, &j) in self.coords.iter().enumerate() {
            a[j] = y[k].clone();
        }
        AffineFunctional {
            a,
            b: y[self.coords.len()].clone(),
        }
    }
}

fn mask_members(mask: u128) -> Vec<usize> {
    (0..128).filter(|i| mask >> i & 1 == 1).collect()
}

fn finish(dual: &Dual, found: Vec<(Vector, u128)>) -> Subdivision {
    let mut cells: Vec<Cell> = found
        .into_iter()
        .map(|(y, mask)| Cell {
            vertices: mask_members(mask),
            functional: dual.lift(&y),
        })
        .collect();
    cells.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Subdivision { cells }
}

/// Maximal cells of the regular subdivision of `cfg`, by a graph walk over
/// the dual polyhedron's vertices.
pub fn point_subdivision(cfg: &PointConfig) -> Result<Subdivision> {
    let dual = Dual::new(cfg);
    let start = dual.initial_vertex()?;
    let start_mask = dual.tight(&start);
    let mut seen: HashSet<u128> = HashSet::from([start_mask]);
    let mut queue = VecDeque::from([(start, start_mask)]);
    let mut found = Vec::new();
    while let Some((y, mask)) = queue.pop_front() {
        let tight = dual.tight_rows(mask);
        // tangent cone {d : tight · d <= 0}
        for ray in extreme_rays(&tight)? {
            let Some(t) = dual.step(&y, &ray) else {
                continue;
            };
            let next: Vector = y.iter().zip(&ray).map(|(yi, di)| yi + &t * di).collect();
            let next_mask = dual.tight(&next);
            if seen.insert(next_mask) {
                queue.push_back((next, next_mask));
            }
        }
        found.push((y, mask));
    }
    Ok(finish(&dual, found))
}

/// Same cells by brute force over every full-rank square subsystem. Only
/// practical for a few dozen points in low dimension; used as an oracle.
pub fn point_subdivision_brute(cfg: &PointConfig) -> Result<Subdivision> {
    let dual = Dual::new(cfg);
    let d = dual.dim();
    let mut found: Vec<(Vector, u128)> = Vec::new();
    let mut seen = HashSet::new();
    for combo in (0..dual.rows.len()).combinations(d) {
        let a: Vec<Vector> = combo.iter().map(|&i| dual.rows[i].clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&i| dual.weights[i].clone()).collect();
        let Some(y) = solve(&a, &b) else { continue };
        if (0..dual.rows.len()).any(|i| dual.slack(&y, i).is_negative()) {
            continue;
        }
        if seen.insert(y.clone()) {
            let mask = dual.tight(&y);
            found.push((y, mask));
        }
    }
    Ok(finish(&dual, found))
}

/// Pairs `(i, j)` that are edges of the subdivision: the margin LP tight on
/// the pair and strictly below the weights elsewhere has positive optimum.
pub fn point_subdivision_edges(cfg: &PointConfig) -> Result<BTreeSet<(usize, usize)>> {
    let mut out = BTreeSet::new();
    let mut mask = vec![false; cfg.len()];
    for (i, j) in (0..cfg.len()).tuple_combinations() {
        mask[i] = true;
        mask[j] = true;
        if face_margin(&cfg.points, &cfg.weights, &mask)?.is_some_and(|m| m.is_positive()) {
            out.insert((i, j));
        }
        mask[i] = false;
        mask[j] = false;
    }
    Ok(out)
}
