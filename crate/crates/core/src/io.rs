//! JSON file formats: weight instances and flag matrices.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational, RationalValue};
use crate::realization::{FlagMatrix, LaurentPoly, PolyMatrix};
use crate::subset::Subset;
use crate::tropical::{FlagInstance, PluckerVector};

/// Subset-keyed weights in file order. Repeated keys are rejected while parsing.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightMap(pub Vec<(String, Rational)>);

impl Serialize for WeightMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &format_rational(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for WeightMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct MapVisitor;
        impl<'de> Visitor<'de> for MapVisitor {
            type Value = WeightMap;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from subset keys to rationals")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<WeightMap, A::Error> {
                let mut out: Vec<(String, Rational)> = Vec::new();
                while let Some(key) = access.next_key::<String>()? {
                    if out.iter().any(|(k, _)| *k == key) {
                        return Err(de::Error::custom(format!("duplicate subset key {key:?}")));
                    }
                    let value: RationalValue = access.next_value()?;
                    out.push((key, value.0));
                }
                Ok(WeightMap(out))
            }
        }
        d.deserialize_map(MapVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerFile {
    pub d: usize,
    pub weights: WeightMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// A flag of weight vectors as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub layers: Vec<LayerFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    /// Canonical form: layers in order, weights in lexicographic subset order.
    pub fn from_flag(flag: &FlagInstance, metadata: Option<Metadata>) -> Self {
        InstanceFile {
            n: flag.n(),
            layers: flag
                .layers()
                .iter()
                .map(|l| LayerFile {
                    d: l.d(),
                    weights: WeightMap(l.iter().map(|(s, w)| (s.to_string(), w.clone())).collect()),
                })
                .collect(),
            metadata,
        }
    }

    /// Validates keys, totality, and layer order.
    pub fn to_flag(&self) -> Result<FlagInstance> {
        if self.layers.is_empty() {
            return Err(Error::domain("instance has no layers"));
        }
        let mut layers = Vec::with_capacity(self.layers.len());
        for (idx, layer) in self.layers.iter().enumerate() {
            let fail = |reason: String| Error::Layer { layer: idx, reason };
            if layer.d == 0 || layer.d >= self.n {
                return Err(fail(format!("d = {} must lie in 1..={}", layer.d, self.n.saturating_sub(1))));
            }
            let mut map: BTreeMap<Subset, Rational> = BTreeMap::new();
            for (key, value) in &layer.weights.0 {
                let s = Subset::parse(key, self.n).map_err(|e| fail(format!("key {key:?}: {e}")))?;
                if s.len() != layer.d {
                    return Err(fail(format!("key {key:?} has {} elements, expected {}", s.len(), layer.d)));
                }
                if map.insert(s, value.clone()).is_some() {
                    return Err(fail(format!("key {key:?} repeats subset {s}")));
                }
            }
            layers.push(PluckerVector::from_map(self.n, layer.d, &map).map_err(|e| fail(e.to_string()))?);
        }
        FlagInstance::new(layers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// A polynomial matrix whose leading row blocks realize a flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub dims: Vec<usize>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn from_flag_matrix(m: &FlagMatrix) -> Self {
        let a = m.matrix();
        MatrixFile {
            n: m.n(),
            dims: m.dims().to_vec(),
            entries: (0..a.rows()).map(|r| (0..a.cols()).map(|c| a.get(r, c).to_string()).collect()).collect(),
        }
    }

    pub fn to_flag_matrix(&self) -> Result<FlagMatrix> {
        if let Some((r, row)) = self.entries.iter().enumerate().find(|(_, row)| row.len() != self.n) {
            return Err(Error::domain(format!("row {r} has {} entries, expected n = {}", row.len(), self.n)));
        }
        let rows = self
            .entries
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, text)| {
                        LaurentPoly::parse(text).map_err(|e| Error::domain(format!("entry ({r}, {c}): {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FlagMatrix::new(self.dims.clone(), PolyMatrix::from_rows(rows)?)
    }
}
