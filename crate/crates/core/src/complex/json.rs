use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Complex2, Edge, Triangle};
use crate::error::{Error, Result};

/// On-disk form of a complex:
/// `{"n_vertices": N, "triangles": [[i,j,k],...], "extra_edges": [[i,j],...]}`,
/// every tuple strictly increasing and no tuple repeated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub n_vertices: usize,
    pub triangles: Vec<[u32; 3]>,
    #[serde(default)]
    pub extra_edges: Vec<[u32; 2]>,
}

impl From<&Complex2> for ComplexJson {
    fn from(c: &Complex2) -> Self {
        ComplexJson {
            n_vertices: c.n_vertices(),
            triangles: c.triangles().iter().map(Triangle::vertices).collect(),
            extra_edges: c.extra_edges().iter().map(Edge::vertices).collect(),
        }
    }
}

impl TryFrom<ComplexJson> for Complex2 {
    type Error = Error;

    fn try_from(j: ComplexJson) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &j.triangles {
            if !(t[0] < t[1] && t[1] < t[2]) {
                return Err(Error::Malformed(format!("triangle {t:?} is not strictly increasing")));
            }
            if !seen.insert(t.to_vec()) {
                return Err(Error::Malformed(format!("duplicate triangle {t:?}")));
            }
        }
        for e in &j.extra_edges {
            if e[0] >= e[1] {
                return Err(Error::Malformed(format!("edge {e:?} is not strictly increasing")));
            }
            if !seen.insert(e.to_vec()) {
                return Err(Error::Malformed(format!("duplicate edge {e:?}")));
            }
        }
        Complex2::from_triangles(j.n_vertices, j.triangles, j.extra_edges)
    }
}

impl Serialize for Complex2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ComplexJson::deserialize(d)?;
        Complex2::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Complex2 {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ComplexJson = serde_json::from_str(s)?;
        Complex2::try_from(j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&ComplexJson::from(self)).expect("complex serializes")
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }
}
