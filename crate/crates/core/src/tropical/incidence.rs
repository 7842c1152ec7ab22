use serde::Serialize;

use super::{check_plucker, finite_vanishes, PluckerVector, RelationKind, RelationViolation};
use crate::error::{Error, Result};
use crate::rational::ExtRational;
use crate::subset::enumerate_subsets;

/// Incidence relations between `x` (size `p`) and `y` (size `q >= p`): for
/// every `|S| = p - 1` and `|T| = q + 1`, the terms `x(S ∪ i) + y(T ∖ i)`
/// over `i ∈ T ∖ S` must attain their minimum twice.
pub fn check_incidence(x: &PluckerVector, y: &PluckerVector) -> Result<Vec<RelationViolation>> {
    if x.n() != y.n() {
        return Err(Error::domain(format!("ground sets differ: {} vs {}", x.n(), y.n())));
    }
    let (n, p, q) = (x.n(), x.d(), y.d());
    if p > q {
        return Err(Error::domain(format!("incidence needs p <= q, got p={p}, q={q}")));
    }
    let small = enumerate_subsets(n, p - 1)?;
    let big = enumerate_subsets(n, q + 1)?;
    let mut out = Vec::new();
    for s in &small {
        for t in &big {
            let terms: Vec<_> = t
                .difference(s)
                .members()
                .map(|i| x.get(&s.with(i)) + y.get(&t.without(i)))
                .collect();
            if !finite_vanishes(&terms) {
                out.push(RelationViolation {
                    kind: RelationKind::Incidence,
                    s: *s,
                    t: Some(*t),
                    indices: None,
                    terms: terms.into_iter().map(ExtRational::Finite).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// A candidate point of a flag Dressian: layers of strictly increasing size
/// on a common ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagInstance {
    layers: Vec<PluckerVector>,
}

impl FlagInstance {
    pub fn new(layers: Vec<PluckerVector>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(Error::domain("a flag needs at least one layer"));
        };
        let n = first.n();
        for (i, layer) in layers.iter().enumerate() {
            if layer.n() != n {
                return Err(Error::Layer {
                    layer: i,
                    reason: format!("ground set {} differs from {n}", layer.n()),
                });
            }
            if i > 0 && layer.d() <= layers[i - 1].d() {
                return Err(Error::Layer {
                    layer: i,
                    reason: format!("sizes must strictly increase ({} after {})", layer.d(), layers[i - 1].d()),
                });
            }
        }
        Ok(FlagInstance { layers })
    }

    pub fn n(&self) -> usize {
        self.layers[0].n()
    }

    pub fn layers(&self) -> &[PluckerVector] {
        &self.layers
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.d()).collect()
    }

    pub fn into_layers(self) -> Vec<PluckerVector> {
        self.layers
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub d: usize,
    pub violations: Vec<RelationViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub p: usize,
    pub q: usize,
    pub violations: Vec<RelationViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagReport {
    pub plucker: Vec<LayerReport>,
    pub incidence: Vec<PairReport>,
    /// Incidence over every pair of layers, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_pairs: Option<Vec<PairReport>>,
}

impl FlagReport {
    /// True iff every Plücker relation and every consecutive incidence relation holds.
    pub fn is_valid(&self) -> bool {
        self.plucker.iter().all(|l| l.violations.is_empty())
            && self.incidence.iter().all(|p| p.violations.is_empty())
    }

    pub fn all_pairs_valid(&self) -> Option<bool> {
        self.all_pairs
            .as_ref()
            .map(|pairs| pairs.iter().all(|p| p.violations.is_empty()))
    }

    pub fn violation_count(&self) -> usize {
        self.plucker.iter().map(|l| l.violations.len()).sum::<usize>()
            + self.incidence.iter().map(|p| p.violations.len()).sum::<usize>()
    }
}

/// Checks every layer's Plücker relations and every consecutive pair's
/// incidence relations; with `all_pairs` also every non-consecutive pair.
pub fn check_flag(flag: &FlagInstance, all_pairs: bool) -> FlagReport {
    let layers = flag.layers();
    let plucker = layers
        .iter()
        .map(|l| LayerReport {
            d: l.d(),
            violations: check_plucker(l),
        })
        .collect();
    let pair = |a: &PluckerVector, b: &PluckerVector| PairReport {
        p: a.d(),
        q: b.d(),
        violations: check_incidence(a, b).expect("flag layers validated at construction"),
    };
    let incidence = layers.windows(2).map(|w| pair(&w[0], &w[1])).collect();
    let all = all_pairs.then(|| {
        let mut out = Vec::new();
        for i in 0..layers.len() {
            for j in i + 1..layers.len() {
                out.push(pair(&layers[i], &layers[j]));
            }
        }
        out
    });
    FlagReport {
        plucker,
        incidence,
        all_pairs: all,
    }
}
