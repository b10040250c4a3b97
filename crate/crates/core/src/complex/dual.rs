use std::collections::{BTreeMap, VecDeque};

use super::{Complex2, ExtNat, Incidence, Triangle};
use crate::error::{Error, Result};

/// Breadth-first distances from one triangle in the dual graph, where two triangles are
/// adjacent when they share an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMetric {
    pub source: Triangle,
    pub distances: BTreeMap<Triangle, ExtNat>,
}

impl DualMetric {
    pub fn new(c: &Complex2, source: Triangle) -> Result<Self> {
        let tris = c.triangles();
        let s = tris
            .binary_search(&source)
            .map_err(|_| Error::MissingTriangle(source))?;
        let inc = Incidence::new(tris);
        let dist = bfs(tris, &inc, s);
        let distances = tris
            .iter()
            .zip(dist)
            .map(|(t, d)| (*t, d.map_or(ExtNat::Infinite, ExtNat::Finite)))
            .collect();
        Ok(DualMetric { source, distances })
    }

    pub fn distance(&self, to: &Triangle) -> Result<ExtNat> {
        self.distances.get(to).copied().ok_or(Error::MissingTriangle(*to))
    }

    /// Largest distance from the source.
    pub fn eccentricity(&self) -> ExtNat {
        self.distances.values().copied().max().unwrap_or(ExtNat::Finite(0))
    }
}

pub(crate) fn bfs(tris: &[Triangle], inc: &Incidence, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; tris.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(i) = queue.pop_front() {
        let d = dist[i].unwrap();
        for e in tris[i].edges() {
            for &j in inc.triangles_on(e) {
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    dist
}

pub fn dual_distance(c: &Complex2, sigma: Triangle, tau: Triangle) -> Result<ExtNat> {
    if !c.contains_triangle(&tau) {
        return Err(Error::MissingTriangle(tau));
    }
    DualMetric::new(c, sigma)?.distance(&tau)
}

/// Maximum dual distance over all pairs of triangles.
pub fn diameter(c: &Complex2) -> Result<ExtNat> {
    let tris = c.triangles();
    if tris.is_empty() {
        return Err(Error::NoTriangles);
    }
    let inc = Incidence::new(tris);
    let mut best = 0;
    for s in 0..tris.len() {
        for d in bfs(tris, &inc, s) {
            match d {
                Some(d) => best = best.max(d),
                None => return Ok(ExtNat::Infinite),
            }
        }
    }
    Ok(ExtNat::Finite(best))
}

/// Whether the dual graph is connected. A complex without triangles is not.
pub fn is_strongly_connected(c: &Complex2) -> bool {
    let tris = c.triangles();
    if tris.is_empty() {
        return false;
    }
    let inc = Incidence::new(tris);
    bfs(tris, &inc, 0).iter().all(Option::is_some)
}
