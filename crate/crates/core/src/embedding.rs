//! Simplicial embeddings of a pure pattern complex into a host complex.
//!
//! An embedding is an injective map on the pattern's vertices sending every pattern
//! triangle to a host triangle. Hosts are compared on their pure parts only: host
//! edges outside triangles never constrain anything.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::catalog::PseudoSurface;
use crate::complex::{Complex2, Edge, Incidence, Triangle};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingWitness {
    pub vertex_map: BTreeMap<u32, u32>,
}

impl EmbeddingWitness {
    /// Injective, and every pattern triangle lands on a host triangle.
    pub fn is_valid(&self, pattern: &Complex2, host: &Complex2) -> bool {
        let images: HashSet<u32> = self.vertex_map.values().copied().collect();
        images.len() == self.vertex_map.len()
            && pattern.triangles().iter().all(|t| {
                t.vertices().iter().all(|v| self.vertex_map.contains_key(v))
                    && t.map(|v| self.vertex_map[&v]).is_ok_and(|img| host.contains_triangle(&img))
            })
    }
}

/// Lookup tables over the triangles of a host.
pub struct HostIndex {
    triangles: HashSet<Triangle>,
    edges: HashSet<Edge>,
    apexes: HashMap<Edge, Vec<u32>>,
    neighbors: HashMap<u32, Vec<u32>>,
    incidence: HashMap<u32, usize>,
    vertices: Vec<u32>,
}

impl HostIndex {
    pub fn new(host: &Complex2) -> Self {
        let tris = host.triangles();
        let inc = Incidence::new(tris);
        let mut apexes: HashMap<Edge, Vec<u32>> = HashMap::new();
        let mut incidence: HashMap<u32, usize> = HashMap::new();
        for t in tris {
            for e in t.edges() {
                apexes.entry(e).or_default().push(t.apex(e).unwrap());
            }
            for v in t.vertices() {
                *incidence.entry(v).or_default() += 1;
            }
        }
        let mut neighbors: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut edges = HashSet::new();
        for (e, _) in inc.edges() {
            let [a, b] = e.vertices();
            edges.insert(*e);
            neighbors.entry(a).or_default().push(b);
            neighbors.entry(b).or_default().push(a);
        }
        for ns in neighbors.values_mut() {
            ns.sort_unstable();
        }
        let mut vertices: Vec<u32> = incidence.keys().copied().collect();
        vertices.sort_unstable();
        HostIndex {
            triangles: tris.iter().copied().collect(),
            edges,
            apexes,
            neighbors,
            incidence,
            vertices,
        }
    }
}

/// How candidates for one pattern vertex are generated.
enum Source {
    /// Apexes over the image of a mapped pattern edge.
    Edge(u32, u32),
    /// Neighbors of the image of a mapped pattern vertex.
    Vertex(u32),
    Any,
}

struct Step {
    vertex: u32,
    incidence: usize,
    source: Source,
    /// Earlier pattern vertices adjacent to `vertex`.
    earlier_neighbors: Vec<u32>,
    /// Pattern triangles whose last vertex in the order is `vertex`.
    closing: Vec<Triangle>,
}

fn plan(pattern: &Complex2) -> Vec<Step> {
    let tris = pattern.triangles();
    let mut incidence: HashMap<u32, usize> = HashMap::new();
    let mut adjacent: HashMap<u32, HashSet<u32>> = HashMap::new();
    for t in tris {
        let [a, b, c] = t.vertices();
        for v in [a, b, c] {
            *incidence.entry(v).or_default() += 1;
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            adjacent.entry(x).or_default().insert(y);
            adjacent.entry(y).or_default().insert(x);
        }
    }
    let rank = |v: &u32| (std::cmp::Reverse(incidence[v]), *v);
    let mut order: Vec<u32> = Vec::new();
    let mut placed: HashSet<u32> = HashSet::new();
    while order.len() < incidence.len() {
        let frontier = order
            .iter()
            .flat_map(|v| adjacent[v].iter())
            .filter(|v| !placed.contains(*v))
            .min_by_key(|v| rank(v))
            .copied();
        let next = frontier.unwrap_or_else(|| {
            *incidence
                .keys()
                .filter(|v| !placed.contains(*v))
                .min_by_key(|v| rank(v))
                .unwrap()
        });
        placed.insert(next);
        order.push(next);
    }
    let pos: HashMap<u32, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let closing: Vec<Triangle> = tris
                .iter()
                .filter(|t| t.vertices().iter().map(|x| pos[x]).max() == Some(i))
                .copied()
                .collect();
            let mut earlier_neighbors: Vec<u32> =
                adjacent[&v].iter().copied().filter(|u| pos[u] < i).collect();
            earlier_neighbors.sort_unstable_by_key(|u| pos[u]);
            let source = match closing.first() {
                Some(t) => {
                    let others: Vec<u32> = t.vertices().into_iter().filter(|x| *x != v).collect();
                    Source::Edge(others[0], others[1])
                }
                None => match earlier_neighbors.first() {
                    Some(&u) => Source::Vertex(u),
                    None => Source::Any,
                },
            };
            Step {
                vertex: v,
                incidence: incidence[&v],
                source,
                earlier_neighbors,
                closing,
            }
        })
        .collect()
}

/// Searches for an embedding of `pattern` into `host`.
pub fn embeds(pattern: &Complex2, host: &Complex2) -> Result<Option<EmbeddingWitness>> {
    check_pattern(pattern)?;
    Ok(embed_planned(&plan(pattern), &HostIndex::new(host)))
}

fn check_pattern(pattern: &Complex2) -> Result<()> {
    let extras = pattern.extra_edges().len();
    if extras > 0 {
        return Err(Error::NonPurePattern(extras));
    }
    if pattern.num_triangles() == 0 {
        return Err(Error::NoTriangles);
    }
    Ok(())
}

fn embed_planned(steps: &[Step], host: &HostIndex) -> Option<EmbeddingWitness> {
    if steps.len() > host.vertices.len() {
        return None;
    }
    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut used: HashSet<u32> = HashSet::new();
    extend(steps, host, 0, &mut map, &mut used).then(|| EmbeddingWitness {
        vertex_map: map.into_iter().collect(),
    })
}

fn extend(
    steps: &[Step],
    host: &HostIndex,
    depth: usize,
    map: &mut HashMap<u32, u32>,
    used: &mut HashSet<u32>,
) -> bool {
    let Some(step) = steps.get(depth) else {
        return true;
    };
    let candidates: &[u32] = match step.source {
        Source::Edge(a, b) => {
            let e = Edge::from_distinct(map[&a], map[&b]);
            host.apexes.get(&e).map(Vec::as_slice).unwrap_or(&[])
        }
        Source::Vertex(u) => host.neighbors.get(&map[&u]).map(Vec::as_slice).unwrap_or(&[]),
        Source::Any => &host.vertices,
    };
    for &w in candidates {
        if used.contains(&w) || host.incidence.get(&w).copied().unwrap_or(0) < step.incidence {
            continue;
        }
        let edges_ok = step
            .earlier_neighbors
            .iter()
            .all(|u| host.edges.contains(&Edge::from_distinct(map[u], w)));
        if !edges_ok {
            continue;
        }
        let image = |x: u32| if x == step.vertex { w } else { map[&x] };
        let closes = step.closing.iter().all(|t| {
            let [a, b, c] = t.vertices();
            host.triangles
                .contains(&Triangle::from_distinct(image(a), image(b), image(c)))
        });
        if !closes {
            continue;
        }
        map.insert(step.vertex, w);
        used.insert(w);
        if extend(steps, host, depth + 1, map, used) {
            return true;
        }
        map.remove(&step.vertex);
        used.remove(&w);
    }
    false
}

/// Precomputed search plans for a list of patterns, tried in increasing face count.
pub struct PatternSet {
    plans: Vec<(usize, Vec<Step>)>,
}

impl PatternSet {
    pub fn new(patterns: &[Complex2]) -> Result<Self> {
        let mut plans = Vec::with_capacity(patterns.len());
        for (i, p) in patterns.iter().enumerate() {
            check_pattern(p)?;
            plans.push((i, plan(p)));
        }
        // stable: catalog order among equal face counts
        plans.sort_by_key(|(i, _)| patterns[*i].num_triangles());
        Ok(PatternSet { plans })
    }

    pub fn from_catalog(catalog: &[PseudoSurface]) -> Result<Self> {
        let complexes: Vec<Complex2> = catalog.iter().map(|m| m.complex.clone()).collect();
        Self::new(&complexes)
    }

    /// First pattern (smallest face count, then list order) that embeds, with a witness.
    pub fn first_match(&self, host: &Complex2) -> Option<(usize, EmbeddingWitness)> {
        let index = HostIndex::new(host);
        self.plans
            .iter()
            .find_map(|(i, steps)| embed_planned(steps, &index).map(|w| (*i, w)))
    }
}

/// The first catalog member that embeds into `host`.
pub fn contains_any(host: &Complex2, catalog: &[PseudoSurface]) -> Result<Option<(usize, EmbeddingWitness)>> {
    Ok(PatternSet::from_catalog(catalog)?.first_match(host))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{enumerate_l, s_k, CatalogLimits};

    fn tetrahedron() -> Complex2 {
        Complex2::pure(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn triangle_embeds_anywhere() {
        let tri = Complex2::pure(3, [[0, 1, 2]]).unwrap();
        let host = Complex2::pure(7, [[3, 5, 6]]).unwrap();
        let w = embeds(&tri, &host).unwrap().unwrap();
        assert!(w.is_valid(&tri, &host));
        assert!(embeds(&tri, &Complex2::from_triangles(3, [], [[0, 1]]).unwrap()).unwrap().is_none());
    }

    #[test]
    fn tetrahedron_into_full_simplex() {
        let w = embeds(&tetrahedron(), &tetrahedron()).unwrap().unwrap();
        assert!(w.is_valid(&tetrahedron(), &tetrahedron()));
    }

    #[test]
    fn pigeonhole() {
        assert!(embeds(&s_k(1).complex, &tetrahedron()).unwrap().is_none());
    }

    #[test]
    fn rejects_non_pure_patterns() {
        let p = Complex2::from_triangles(4, [[0, 1, 2]], [[2, 3]]).unwrap();
        assert!(matches!(embeds(&p, &tetrahedron()), Err(Error::NonPurePattern(1))));
    }

    #[test]
    fn extra_host_edges_do_not_matter() {
        let host = Complex2::with_full_skeleton(8, s_k(1).complex.triangles().to_vec());
        let s1 = s_k(1).complex;
        assert!(embeds(&s1, &host).unwrap().is_some());
    }

    #[test]
    fn catalog_containment() {
        let cat = enumerate_l(1, 2, CatalogLimits::derived(1, 2)).unwrap();
        let s1 = s_k(1).complex;
        let (i, w) = contains_any(&s1, &cat.members).unwrap().unwrap();
        assert!(w.is_valid(&cat.members[i].complex, &s1));
        assert_eq!(cat.members[i].num_vertices(), 6);
        let tri = Complex2::pure(3, [[0, 1, 2]]).unwrap();
        assert!(contains_any(&tri, &cat.members).unwrap().is_none());
    }
}
