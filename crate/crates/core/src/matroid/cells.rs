use serde::{Serialize, Serializer};

use super::{
    exchange_violation, is_quotient, is_quotient_via_flats, ExchangeWitness, Matroid, QuotientCheck, QuotientWitness,
};
use crate::error::{Error, Result};
use crate::geometry::{edges_of_polytope, subdivision_cells, AffineFunctional, Delta, LatticeVertex, WeightedConfig};
use crate::rational::Rational;
use crate::subset::Subset;

fn na<S: Serializer>(value: &Option<bool>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(b) => s.serialize_bool(*b),
        None => s.serialize_str("n/a"),
    }
}

/// One maximal cell read as a pair of basis families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellAnalysis {
    pub cell: usize,
    pub vertices: Vec<LatticeVertex>,
    pub functional: AffineFunctional,
    pub p: usize,
    pub bases_p: Vec<Subset>,
    /// `None` when the cell has no vertex in layer `p`.
    #[serde(serialize_with = "na")]
    pub is_matroidal_p: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exchange_witness_p: Option<ExchangeWitness>,
    /// Absent for single-layer configurations.
    pub q: Option<usize>,
    pub bases_q: Vec<Subset>,
    #[serde(serialize_with = "na")]
    pub is_matroidal_q: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exchange_witness_q: Option<ExchangeWitness>,
    /// Set only when both layers are nonempty and matroidal.
    #[serde(serialize_with = "na")]
    pub is_concordant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_witness: Option<QuotientWitness>,
    /// The flats-containment verdict on the same pair, for comparison.
    #[serde(serialize_with = "na")]
    pub concordant_via_flats: Option<bool>,
    pub internal_edges: Vec<(LatticeVertex, LatticeVertex)>,
}

impl CellAnalysis {
    pub fn is_mixed(&self) -> bool {
        !self.bases_p.is_empty() && !self.bases_q.is_empty()
    }

    pub fn both_matroidal(&self) -> bool {
        self.is_matroidal_p == Some(true) && self.is_matroidal_q == Some(true)
    }
}

fn layer_matroid(n: usize, d: usize, family: &[Subset]) -> Result<Matroid> {
    if family.is_empty() {
        return Err(Error::Layer {
            layer: d,
            reason: "no vertices in this layer".into(),
        });
    }
    Matroid::new(n, d, family).map_err(|e| Error::Layer {
        layer: d,
        reason: e.to_string(),
    })
}

fn split_layers(vertices: &[Subset]) -> Result<(usize, Vec<Subset>, Vec<Subset>)> {
    let n = vertices.first().ok_or_else(|| Error::domain("empty vertex set"))?.ground();
    let mut sizes: Vec<usize> = vertices.iter().map(|s| s.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    match sizes[..] {
        [p, q] => {
            let pick = |d: usize| vertices.iter().filter(|s| s.len() == d).copied().collect();
            Ok((n, pick(p), pick(q)))
        }
        [d] => Err(Error::Layer {
            layer: d,
            reason: "the second layer is empty".into(),
        }),
        _ => Err(Error::domain(format!("vertices span {} layers, expected 2", sizes.len()))),
    }
}

/// Both layers must be matroids; the answer is whether the smaller is a quotient of the larger.
pub fn is_concordant_polytope(vertices: &[Subset]) -> Result<QuotientCheck> {
    let (n, low, high) = split_layers(vertices)?;
    let p = low[0].len();
    let q = high[0].len();
    is_quotient(&layer_matroid(n, p, &low)?, &layer_matroid(n, q, &high)?)
}

/// Edges of `Conv(vertices)` that are not edges of `delta`.
pub fn internal_edges_with(vertices: &[Subset], delta: &Delta) -> Result<Vec<(LatticeVertex, LatticeVertex)>> {
    let mut indexed = Vec::with_capacity(vertices.len());
    for s in vertices {
        let i = delta
            .index_of(s)
            .ok_or_else(|| Error::domain(format!("{s} is not a vertex of the polytope")))?;
        indexed.push(i);
    }
    let points: Vec<Vec<Rational>> = vertices.iter().map(|s| LatticeVertex::new(*s).coordinates()).collect();
    let mut out = Vec::new();
    for (a, b) in edges_of_polytope(&points)? {
        let (i, j) = (indexed[a].min(indexed[b]), indexed[a].max(indexed[b]));
        if !delta.edges().contains(&(i, j)) {
            out.push((delta.vertices()[i], delta.vertices()[j]));
        }
    }
    out.sort();
    Ok(out)
}

/// As [`internal_edges_with`] against `Δ(p, q; n)`.
pub fn internal_edges(vertices: &[Subset], p: usize, q: usize, n: usize) -> Result<Vec<(LatticeVertex, LatticeVertex)>> {
    internal_edges_with(vertices, &Delta::new(p, q, n)?)
}

pub fn analyze_cells(cfg: &WeightedConfig) -> Result<Vec<CellAnalysis>> {
    analyze_cells_with(cfg, &cfg.delta()?)
}

/// As [`analyze_cells`], reusing a precomputed polytope.
pub fn analyze_cells_with(cfg: &WeightedConfig, delta: &Delta) -> Result<Vec<CellAnalysis>> {
    let sizes = cfg.sizes();
    let n = cfg.n();
    let subdivision = subdivision_cells(cfg)?;
    let mut out = Vec::with_capacity(subdivision.cells.len());
    for (idx, cell) in subdivision.cells.into_iter().enumerate() {
        let vertices: Vec<LatticeVertex> = cell.vertices.iter().map(|&i| cfg.vertices()[i]).collect();
        let family = |d: usize| -> Vec<Subset> {
            vertices.iter().filter(|v| v.layer() == d).map(|v| v.subset).collect()
        };
        let check = |bases: &[Subset]| -> (Option<bool>, Option<ExchangeWitness>) {
            if bases.is_empty() {
                return (None, None);
            }
            let w = exchange_violation(bases);
            (Some(w.is_none()), w)
        };
        let p = sizes[0];
        let q = sizes.get(1).copied();
        let bases_p = family(p);
        let bases_q = q.map(family).unwrap_or_default();
        let (is_matroidal_p, exchange_witness_p) = check(&bases_p);
        let (is_matroidal_q, exchange_witness_q) = check(&bases_q);
        let (mut is_concordant, mut quotient_witness, mut concordant_via_flats) = (None, None, None);
        if let (Some(true), Some(true), Some(q)) = (is_matroidal_p, is_matroidal_q, q) {
            let low = Matroid::new(n, p, &bases_p)?;
            let high = Matroid::new(n, q, &bases_q)?;
            let check = is_quotient(&low, &high)?;
            is_concordant = Some(check.is_quotient);
            quotient_witness = check.witness;
            concordant_via_flats = Some(is_quotient_via_flats(&low, &high)?);
        }
        let subsets: Vec<Subset> = vertices.iter().map(|v| v.subset).collect();
        out.push(CellAnalysis {
            cell: idx,
            internal_edges: internal_edges_with(&subsets, delta)?,
            vertices,
            functional: cell.functional,
            p,
            bases_p,
            is_matroidal_p,
            exchange_witness_p,
            q,
            bases_q,
            is_matroidal_q,
            exchange_witness_q,
            is_concordant,
            quotient_witness,
            concordant_via_flats,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::realization::random_flag_matrix;
    use crate::tropical::PluckerVector;

    fn subsets(n: usize, raw: &[&str]) -> Vec<Subset> {
        raw.iter().map(|s| Subset::parse(s, n).unwrap()).collect()
    }

    const SQUARE_AND_TRIANGLE: [&str; 7] = ["12", "13", "24", "34", "123", "124", "134"];

    fn det3(m: [[i64; 3]; 3]) -> i64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// The vertices with `x_k = 1` span a face (every coordinate is at most 1);
    /// if they are four affinely independent points it is a tetrahedron and
    /// every pair among them is an edge.
    fn tetrahedral_face(v: &[Subset], k: usize) -> Option<Vec<Subset>> {
        let face: Vec<Subset> = v.iter().filter(|s| s.contains(k)).copied().collect();
        if face.len() != 4 {
            return None;
        }
        let ind: Vec<Vec<i64>> = face.iter().map(|s| s.indicator()).collect();
        let rows: Vec<[i64; 3]> = (1..4)
            .map(|r| {
                let diff: Vec<i64> = (0..4).filter(|&c| c != k - 1).map(|c| ind[r][c] - ind[0][c]).collect();
                [diff[0], diff[1], diff[2]]
            })
            .collect();
        (det3([rows[0], rows[1], rows[2]]) != 0).then_some(face)
    }

    #[test]
    fn square_and_triangle_polytope() {
        let v = subsets(4, &SQUARE_AND_TRIANGLE);
        let check = is_concordant_polytope(&v).unwrap();
        assert!(!check.is_quotient);
        let mut with23 = v.clone();
        with23.push(Subset::parse("23", 4).unwrap());
        assert!(is_concordant_polytope(&with23).unwrap().is_quotient);

        let pts: Vec<Vec<Rational>> = v.iter().map(|s| LatticeVertex::new(*s).coordinates()).collect();
        let edges: Vec<(String, String)> = edges_of_polytope(&pts)
            .unwrap()
            .into_iter()
            .map(|(i, j)| (v[i].to_string(), v[j].to_string()))
            .collect();
        // the 13 segments of the usual 3D drawing: square, triangle, containments
        let drawn = [
            ("12", "13"), ("13", "34"), ("24", "34"), ("12", "24"),
            ("123", "124"), ("124", "134"), ("123", "134"),
            ("12", "123"), ("13", "123"), ("13", "134"), ("34", "134"), ("24", "124"), ("12", "124"),
        ];
        for (a, b) in drawn {
            assert!(edges.iter().any(|e| (e.0.as_str(), e.1.as_str()) == (a, b) || (e.0.as_str(), e.1.as_str()) == (b, a)), "{a}-{b}");
        }
        // the polytope is 4-dimensional; the faces x2 = 1 and x3 = 1 are tetrahedra,
        // which contribute 24-123 and 34-123 as well
        let t2 = tetrahedral_face(&v, 2).unwrap();
        let t3 = tetrahedral_face(&v, 3).unwrap();
        assert!(t2.contains(&Subset::parse("24", 4).unwrap()) && t2.contains(&Subset::parse("123", 4).unwrap()));
        assert!(t3.contains(&Subset::parse("34", 4).unwrap()) && t3.contains(&Subset::parse("123", 4).unwrap()));
        assert_eq!(edges.len(), 15);
        let internal: Vec<(String, String)> = internal_edges(&v, 2, 3, 4)
            .unwrap()
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(internal, vec![("24".into(), "123".into()), ("34".into(), "123".into())]);
    }

    #[test]
    fn concordance_errors_name_the_layer() {
        let single = subsets(4, &["12", "13"]);
        assert!(matches!(is_concordant_polytope(&single), Err(Error::Layer { layer: 2, .. })));
        let bad = subsets(4, &["12", "34", "123"]);
        assert!(matches!(is_concordant_polytope(&bad), Err(Error::Layer { layer: 2, .. })));
    }

    #[test]
    fn internal_edge_examples() {
        let pair = subsets(4, &["24", "123"]);
        let e = internal_edges(&pair, 2, 3, 4).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].0.to_string(), e[0].1.to_string()), ("24".into(), "123".into()));
        let delta = Delta::new(2, 3, 4).unwrap();
        let all: Vec<Subset> = delta.vertices().iter().map(|v| v.subset).collect();
        assert!(internal_edges_with(&all, &delta).unwrap().is_empty());
    }

    #[test]
    fn zero_weights_give_one_uniform_cell() {
        let cfg = WeightedConfig::from_pair(&PluckerVector::zeros(4, 2).unwrap(), &PluckerVector::zeros(4, 3).unwrap())
            .unwrap();
        let cells = analyze_cells(&cfg).unwrap();
        assert_eq!(cells.len(), 1);
        let c = &cells[0];
        assert_eq!((c.bases_p.len(), c.bases_q.len()), (6, 4));
        assert_eq!((c.is_matroidal_p, c.is_matroidal_q, c.is_concordant), (Some(true), Some(true), Some(true)));
        assert!(c.internal_edges.is_empty());
    }

    #[test]
    fn repaired_example_cells_are_concordant() {
        let flag = crate::builtin::builtin("paper-ex1-x23").unwrap();
        let cells = analyze_cells(&WeightedConfig::from_flag(&flag).unwrap()).unwrap();
        assert!(cells.len() > 1);
        for c in &cells {
            if c.is_mixed() {
                assert_eq!(c.is_concordant, Some(true), "cell {c:?}");
            }
            assert!(c.internal_edges.is_empty());
        }
    }

    #[test]
    fn single_layer_cells_are_not_applicable() {
        let x = PluckerVector::from_fn(4, 2, |s| if ["12", "34"].contains(&s.to_string().as_str()) { rat(1) } else { rat(0) })
            .unwrap();
        let cells = analyze_cells(&WeightedConfig::single_layer(&x).unwrap()).unwrap();
        assert_eq!(cells.len(), 2);
        for c in &cells {
            assert_eq!((c.q, c.is_concordant, c.is_matroidal_p), (None, None, Some(true)));
            let json = serde_json::to_value(c).unwrap();
            assert_eq!(json["is_concordant"], "n/a");
        }
    }

    #[test]
    fn realizable_cells_are_concordant() {
        let flag = random_flag_matrix(5, &[2, 3], 1, 3).unwrap().tropicalize().unwrap();
        let cells = analyze_cells(&WeightedConfig::from_flag(&flag).unwrap()).unwrap();
        for c in cells.iter().filter(|c| c.is_mixed()) {
            assert!(c.both_matroidal());
            assert_eq!(c.is_concordant, Some(true));
            assert_eq!(c.concordant_via_flats, Some(true));
        }
    }
}
