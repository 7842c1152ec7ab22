//! The weight polytope, its faces `Δ_{S,T}`, and the cross-polytope `P_m`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::linalg::rank;
use super::polytope::{face_margin, is_face};
use super::subdivision::{AffineFunctional, PointConfig};
use super::LatticeVertex;
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::subset::{enumerate_subsets, Subset};

/// Vertices of `Δ(p, q; n)`: layer `p` then layer `q`, each lexicographic.
pub fn delta_vertices(p: usize, q: usize, n: usize) -> Result<Vec<LatticeVertex>> {
    if !(1 <= p && p < q && q < n) {
        return Err(Error::domain(format!("need 1 <= p < q <= n-1, got p={p}, q={q}, n={n}")));
    }
    let mut out: Vec<LatticeVertex> = enumerate_subsets(n, p)?.into_iter().map(LatticeVertex::new).collect();
    out.extend(enumerate_subsets(n, q)?.into_iter().map(LatticeVertex::new));
    Ok(out)
}

fn single_vertices(d: usize, n: usize) -> Result<Vec<LatticeVertex>> {
    if !(1 <= d && d < n) {
        return Err(Error::domain(format!("need 1 <= d <= n-1, got d={d}, n={n}")));
    }
    Ok(enumerate_subsets(n, d)?.into_iter().map(LatticeVertex::new).collect())
}

/// A hypersimplex `Δ(d, n)` or weight polytope `Δ(p, q; n)` with its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    n: usize,
    sizes: Vec<usize>,
    vertices: Vec<LatticeVertex>,
    edges: BTreeSet<(usize, usize)>,
}

impl Delta {
    /// `Δ(p, q; n)`. Mixed edges are the containment pairs; same-layer edges
    /// come from the face LP. The LP verdict on every mixed pair is checked
    /// against containment and any disagreement is an error.
    pub fn new(p: usize, q: usize, n: usize) -> Result<Self> {
        let vertices = delta_vertices(p, q, n)?;
        let points: Vec<Vec<Rational>> = vertices.iter().map(|v| v.coordinates()).collect();
        let mut edges = BTreeSet::new();
        let mut mask = vec![false; vertices.len()];
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                mask[i] = true;
                mask[j] = true;
                let lp = is_face(&points, &mask)?;
                mask[i] = false;
                mask[j] = false;
                let (a, b) = (vertices[i].subset, vertices[j].subset);
                if a.len() != b.len() {
                    let contained = a.is_subset(&b);
                    if contained != lp {
                        return Err(Error::domain(format!(
                            "mixed pair ({a}, {b}): containment says {contained}, face LP says {lp}"
                        )));
                    }
                }
                if lp {
                    edges.insert((i, j));
                }
            }
        }
        Ok(Delta {
            n,
            sizes: vec![p, q],
            vertices,
            edges,
        })
    }

    /// The hypersimplex `Δ(d, n)`, edges by face LP.
    pub fn single(d: usize, n: usize) -> Result<Self> {
        let vertices = single_vertices(d, n)?;
        let points: Vec<Vec<Rational>> = vertices.iter().map(|v| v.coordinates()).collect();
        let edges = super::polytope::edges_of_polytope(&points)?.into_iter().collect();
        Ok(Delta {
            n,
            sizes: vec![d],
            vertices,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn vertices(&self) -> &[LatticeVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.vertices.iter().map(|v| v.coordinates()).collect()
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        self.vertices.iter().position(|v| v.subset == *s)
    }

    pub fn edge_pairs(&self) -> Vec<(LatticeVertex, LatticeVertex)> {
        self.edges.iter().map(|&(i, j)| (self.vertices[i], self.vertices[j])).collect()
    }

    pub fn mixed_edges(&self) -> Vec<(LatticeVertex, LatticeVertex)> {
        self.edge_pairs().into_iter().filter(|(a, b)| a.layer() != b.layer()).collect()
    }

    pub fn layer_edges(&self, d: usize) -> Vec<(LatticeVertex, LatticeVertex)> {
        self.edge_pairs()
            .into_iter()
            .filter(|(a, b)| a.layer() == d && b.layer() == d)
            .collect()
    }
}

/// Edge set of `Δ(p, q; n)`.
pub fn delta_edges(p: usize, q: usize, n: usize) -> Result<Delta> {
    Delta::new(p, q, n)
}

/// `Δ_{S,T}` with the linear functional `L = Σ_{i∈S} x_i − Σ_{j∉T} x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceSt {
    pub s: Subset,
    pub t: Subset,
    /// `e_{S∪i}` then `e_{T∖i}` for `i ∈ T ∖ S` ascending.
    pub vertices: Vec<LatticeVertex>,
    pub certificate: AffineFunctional,
    /// `|S ∩ T|`, the value of `L` on the listed vertices.
    #[serde(with = "crate::rational::serde_str")]
    pub tight_value: Rational,
    /// `L` attains `tight_value` exactly on the listed vertices among all of
    /// Δ's and is strictly smaller on the rest.
    pub certified: bool,
    /// The listed vertices form a face of Δ at all (face LP).
    pub is_face: bool,
}

pub fn face_st(s: &Subset, t: &Subset, p: usize, q: usize, n: usize) -> Result<FaceSt> {
    if s.ground() != n || t.ground() != n {
        return Err(Error::domain("S and T must live on [n]"));
    }
    if s.len() + 1 != p || t.len() != q + 1 {
        return Err(Error::domain(format!(
            "need |S| = p-1 = {} and |T| = q+1 = {}, got {} and {}",
            p as isize - 1,
            q + 1,
            s.len(),
            t.len()
        )));
    }
    let delta = delta_vertices(p, q, n)?;
    let diff = t.difference(s);
    let mut vertices: Vec<LatticeVertex> = diff.members().map(|i| LatticeVertex::new(s.with(i))).collect();
    vertices.extend(diff.members().map(|i| LatticeVertex::new(t.without(i))));

    let a: Vec<Rational> = (1..=n)
        .map(|j| rat(s.contains(j) as i64 - !t.contains(j) as i64))
        .collect();
    let certificate = AffineFunctional { a, b: Rational::zero() };
    let tight_value = rat(s.intersection(t).len() as i64);
    let certified = delta.iter().all(|v| {
        let value = certificate.eval(&v.coordinates());
        if vertices.contains(v) {
            value == tight_value
        } else {
            value < tight_value
        }
    });
    let points: Vec<Vec<Rational>> = delta.iter().map(|v| v.coordinates()).collect();
    let mask: Vec<bool> = delta.iter().map(|v| vertices.contains(v)).collect();
    let face = is_face(&points, &mask)?;
    Ok(FaceSt {
        s: *s,
        t: *t,
        vertices,
        certificate,
        tight_value,
        certified,
        is_face: face,
    })
}

/// The map `x ↦ A x + b` on `R^m` with `A e_i = e_i − (Σ e_j)/(m−2)` and
/// `b = (Σ e_j)/(m−2)`, sending `e_i ↦ e_i` and `e_{[m]∖i} ↦ −e_i`. `m >= 3`.
pub fn cross_polytope_map(m: usize) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    if m < 3 {
        return Err(Error::domain(format!("the map divides by m-2; need m >= 3, got {m}")));
    }
    let k = Rational::new(1.into(), ((m - 2) as i64).into());
    let a = (0..m)
        .map(|r| (0..m).map(|c| if r == c { Rational::one() - &k } else { -k.clone() }).collect())
        .collect();
    Ok((a, vec![k; m]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PnImage {
    pub vertex: LatticeVertex,
    #[serde(with = "crate::rational::serde_vec")]
    pub image: Vec<Rational>,
}

/// Vertex bijection `Δ_{S,T} → P_m`, `m = |T ∖ S|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PnTransform {
    pub m: usize,
    /// `T ∖ S` ascending; element `k` is relabelled `k + 1`.
    pub labels: Vec<usize>,
    /// Each vertex of `Δ_{S,T}` with its image in `R^m`.
    pub images: Vec<PnImage>,
    /// Images are exactly `±e_r` as prescribed and some affine map realizes them.
    pub verified: bool,
    /// The vertices span an affine space of the same dimension as their images,
    /// so the map is an affine isomorphism onto `P_m`.
    pub isomorphic: bool,
}

/// `e_{S∪i} ↦ e_{r(i)}` and `e_{T∖i} ↦ −e_{r(i)}` via the coordinate
/// projection onto `T ∖ S` followed by [`cross_polytope_map`].
pub fn pn_transform(s: &Subset, t: &Subset) -> Result<PnTransform> {
    if s.ground() != t.ground() {
        return Err(Error::domain("S and T on different ground sets"));
    }
    let labels: Vec<usize> = t.difference(s).to_vec();
    let m = labels.len();
    // |T ∖ S| >= |T| - |S| = q - p + 2, so m = 2 needs p = q; then S ∪ i and T ∖ j coincide
    // pairwise: the four listed vertices are only two points
    if m < 3 {
        return Err(Error::domain(format!("|T ∖ S| = {m}: degenerate, need at least 3")));
    }
    let unit = |r: usize, sign: i64| -> Vec<Rational> { (0..m).map(|k| rat(if k == r { sign } else { 0 })).collect() };
    let mut images: Vec<(LatticeVertex, Option<Vec<Rational>>)> = Vec::new();
    let mut expected = Vec::new();
    for (r, &i) in labels.iter().enumerate() {
        images.push((LatticeVertex::new(s.with(i)), None));
        expected.push(unit(r, 1));
    }
    for (r, &i) in labels.iter().enumerate() {
        images.push((LatticeVertex::new(t.without(i)), None));
        expected.push(unit(r, -1));
    }
    // zero the S coordinates, keep T ∖ S, then apply the m-dimensional map
    let (a, b) = cross_polytope_map(m)?;
    let images: Vec<(LatticeVertex, Vec<Rational>)> = images
        .into_iter()
        .map(|(v, _)| {
            let x: Vec<Rational> = labels.iter().map(|&j| rat(v.subset.contains(j) as i64)).collect();
            let y = a
                .iter()
                .zip(&b)
                .map(|(row, bi)| super::linalg::dot(row, &x) + bi)
                .collect();
            (v, y)
        })
        .collect();
    let sources: Vec<Vec<Rational>> = images.iter().map(|(v, _)| v.coordinates()).collect();
    let targets: Vec<Vec<Rational>> = images.iter().map(|(_, y)| y.clone()).collect();
    let verified = targets == expected && affine_map_exists(&sources, &targets);
    let isomorphic = rank(&lift(&sources)) == rank(&lift(&targets));
    Ok(PnTransform {
        m,
        labels,
        images: images.into_iter().map(|(vertex, image)| PnImage { vertex, image }).collect(),
        verified,
        isomorphic,
    })
}

fn lift(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|s| {
            let mut r = s.clone();
            r.push(Rational::one());
            r
        })
        .collect()
}

/// True iff some affine map sends each `src[k]` to `dst[k]`.
fn affine_map_exists(src: &[Vec<Rational>], dst: &[Vec<Rational>]) -> bool {
    let lifted = lift(src);
    let base = rank(&lifted);
    (0..dst[0].len()).all(|c| {
        let aug: Vec<Vec<Rational>> = lifted
            .iter()
            .zip(dst)
            .map(|(row, t)| {
                let mut r = row.clone();
                r.push(t[c].clone());
                r
            })
            .collect();
        rank(&aug) == base
    })
}

/// `P_m = conv{±e_i}` lifted by `ψ`; points `e_1..e_m` then `−e_1..−e_m`.
pub fn p_m_config(psi_plus: &[Rational], psi_minus: &[Rational]) -> Result<PointConfig> {
    let m = psi_plus.len();
    if psi_minus.len() != m || m < 2 {
        return Err(Error::domain("need m >= 2 weights on each of e_i and -e_i"));
    }
    let mut points = Vec::with_capacity(2 * m);
    for sign in [1i64, -1] {
        for r in 0..m {
            points.push((0..m).map(|k| rat(if k == r { sign } else { 0 })).collect());
        }
    }
    PointConfig::new(points, psi_plus.iter().chain(psi_minus).cloned().collect())
}

/// 1-based indices `i` whose antipodal pair `(e_i, −e_i)` is an edge of the
/// subdivision of `P_m` induced by `ψ`: those where `w_i = ψ⁺_i + ψ⁻_i` is
/// the unique minimum.
pub fn pn_edge_profile(psi_plus: &[Rational], psi_minus: &[Rational]) -> Result<BTreeSet<usize>> {
    if psi_plus.len() != psi_minus.len() || psi_plus.len() < 2 {
        return Err(Error::domain("need m >= 2 weights on each of e_i and -e_i"));
    }
    let w: Vec<Rational> = psi_plus.iter().zip(psi_minus).map(|(a, b)| a + b).collect();
    let min = w.iter().min().unwrap();
    let at_min: Vec<usize> = (0..w.len()).filter(|&i| &w[i] == min).collect();
    Ok(if at_min.len() == 1 {
        BTreeSet::from([at_min[0] + 1])
    } else {
        BTreeSet::new()
    })
}

/// Same set, decided by the margin LP on the lifted cross-polytope.
pub fn pn_antipodal_edges_lp(psi_plus: &[Rational], psi_minus: &[Rational]) -> Result<BTreeSet<usize>> {
    let cfg = p_m_config(psi_plus, psi_minus)?;
    let m = psi_plus.len();
    let mut out = BTreeSet::new();
    for i in 0..m {
        let mask: Vec<bool> = (0..2 * m).map(|k| k == i || k == m + i).collect();
        if face_margin(&cfg.points, &cfg.weights, &mask)?.is_some_and(|v| v > Rational::zero()) {
            out.insert(i + 1);
        }
    }
    Ok(out)
}
