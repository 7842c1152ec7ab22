//! Exact polyhedral engine on weight polytopes: conv of two hypersimplex
//! layers, regular subdivisions induced by Plücker weights, and face/edge tests.

mod dd;
mod delta;
mod linalg;
mod lp;
mod polytope;
mod subdivision;

pub use delta::{
    delta_edges, delta_vertices, face_st, p_m_config, pn_antipodal_edges_lp, pn_edge_profile, pn_transform, cross_polytope_map,
    Delta, FaceSt,
    PnImage, PnTransform,
};
pub use lp::{lp_max, Constraint, LpSolution, LpStatus, Relation};
pub use polytope::{edges_of_polytope, face_margin, is_face, weighted_edges};
pub use subdivision::{
    point_subdivision, point_subdivision_brute, point_subdivision_edges, AffineFunctional, Cell, PointConfig,
    Subdivision, MAX_POINTS,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::subset::Subset;
use crate::tropical::{check_incidence, check_plucker, FlagInstance, PluckerVector};

/// The 0/1 point `e_I` of a hypersimplex layer; its layer is `|I|`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeVertex {
    pub subset: Subset,
}

impl LatticeVertex {
    pub fn new(subset: Subset) -> Self {
        LatticeVertex { subset }
    }

    pub fn layer(&self) -> usize {
        self.subset.len()
    }

    pub fn coordinates(&self) -> Vec<Rational> {
        self.subset.indicator().into_iter().map(rat).collect()
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.subset.fmt(f)
    }
}

impl fmt::Debug for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.subset)
    }
}

/// Hypersimplex layers lifted by Plücker weights: either one layer `Δ(d, n)`
/// or two layers of sizes `p < q` spanning `Δ(p, q; n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedConfig {
    layers: Vec<PluckerVector>,
    vertices: Vec<LatticeVertex>,
    weights: Vec<Rational>,
}

impl WeightedConfig {
    pub fn from_pair(x: &PluckerVector, y: &PluckerVector) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::domain(format!("ground sets differ: {} vs {}", x.n(), y.n())));
        }
        if x.d() >= y.d() {
            return Err(Error::domain(format!("layer sizes must satisfy p < q, got {} and {}", x.d(), y.d())));
        }
        Self::build(vec![x.clone(), y.clone()])
    }

    /// The single-layer configuration on `Δ(d, n)`.
    pub fn single_layer(x: &PluckerVector) -> Result<Self> {
        Self::build(vec![x.clone()])
    }

    /// One- or two-layer flag instances.
    pub fn from_flag(flag: &FlagInstance) -> Result<Self> {
        match flag.layers() {
            [x] => Self::single_layer(x),
            [x, y] => Self::from_pair(x, y),
            other => Err(Error::domain(format!("expected one or two layers, got {}", other.len()))),
        }
    }

    fn build(layers: Vec<PluckerVector>) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut weights = Vec::new();
        for layer in &layers {
            for (s, w) in layer.iter() {
                vertices.push(LatticeVertex::new(s));
                weights.push(w.clone());
            }
        }
        if vertices.len() > MAX_POINTS {
            return Err(Error::Budget(format!("{} vertices exceed the supported {MAX_POINTS}", vertices.len())));
        }
        Ok(WeightedConfig { layers, vertices, weights })
    }

    pub fn n(&self) -> usize {
        self.layers[0].n()
    }

    pub fn layers(&self) -> &[PluckerVector] {
        &self.layers
    }

    /// Layer sizes, ascending.
    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.d()).collect()
    }

    pub fn vertices(&self) -> &[LatticeVertex] {
        &self.vertices
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        self.vertices.iter().position(|v| v.subset == *s)
    }

    pub fn point_config(&self) -> PointConfig {
        PointConfig {
            points: self.vertices.iter().map(|v| v.coordinates()).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Plücker relations on every layer and, for two layers, the incidence relations.
    pub fn relations_hold(&self) -> bool {
        self.layers.iter().all(|l| check_plucker(l).is_empty())
            && match &self.layers[..] {
                [x, y] => check_incidence(x, y).expect("validated at construction").is_empty(),
                _ => true,
            }
    }

    /// The unweighted polytope this configuration subdivides.
    pub fn delta(&self) -> Result<Delta> {
        match self.sizes()[..] {
            [d] => Delta::single(d, self.n()),
            [p, q] => Delta::new(p, q, self.n()),
            _ => unreachable!(),
        }
    }
}

/// Maximal cells of the regular subdivision induced by the weights.
pub fn subdivision_cells(cfg: &WeightedConfig) -> Result<Subdivision> {
    point_subdivision(&cfg.point_config())
}

/// Edges of the induced subdivision, as vertex index pairs, by one margin LP per pair.
pub fn subdivision_edges(cfg: &WeightedConfig) -> Result<BTreeSet<(usize, usize)>> {
    point_subdivision_edges(&cfg.point_config())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonComparison {
    pub equal: bool,
    /// Subdivision edges that are not edges of the polytope.
    pub new_edges: Vec<(LatticeVertex, LatticeVertex)>,
}

/// Compares the subdivision's 1-skeleton with the polytope's.
pub fn skeleton_equal(cfg: &WeightedConfig) -> Result<SkeletonComparison> {
    skeleton_equal_with(cfg, &cfg.delta()?)
}

/// As [`skeleton_equal`], reusing a precomputed polytope.
pub fn skeleton_equal_with(cfg: &WeightedConfig, delta: &Delta) -> Result<SkeletonComparison> {
    if delta.vertices() != cfg.vertices() {
        return Err(Error::domain("polytope does not match the configuration"));
    }
    let edges = subdivision_edges(cfg)?;
    let new_edges: Vec<_> = edges
        .difference(delta.edges())
        .map(|&(i, j)| (cfg.vertices[i], cfg.vertices[j]))
        .collect();
    Ok(SkeletonComparison {
        equal: new_edges.is_empty(),
        new_edges,
    })
}
