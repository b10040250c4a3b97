//! Isomorphism of the pure parts of two complexes.
//!
//! Cheap invariants (face count, vertex incidence and edge degree multisets) reject most
//! pairs; the rest go through a backtracking search over vertex maps that extends the map
//! along triangle adjacency and checks every completed triangle.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Complex2, Edge, Incidence, Triangle};
use crate::error::{Error, Result};

/// A vertex bijection between the incident vertices of two complexes.
pub type VertexMap = BTreeMap<u32, u32>;

struct Side<'a> {
    tris: &'a [Triangle],
    tri_set: HashSet<Triangle>,
    edges: HashSet<Edge>,
    /// Per-vertex invariant: (triangle incidence, sorted degrees of incident edges).
    signature: HashMap<u32, (usize, Vec<usize>)>,
    neighbors: HashMap<u32, Vec<u32>>,
}

impl<'a> Side<'a> {
    fn new(c: &'a Complex2) -> Self {
        let tris = c.triangles();
        let inc = Incidence::new(tris);
        let mut incidence: HashMap<u32, usize> = HashMap::new();
        for t in tris {
            for v in t.vertices() {
                *incidence.entry(v).or_default() += 1;
            }
        }
        let mut edge_degrees: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut neighbors: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut edges = HashSet::new();
        for (e, ts) in inc.edges() {
            let [a, b] = e.vertices();
            edges.insert(*e);
            edge_degrees.entry(a).or_default().push(ts.len());
            edge_degrees.entry(b).or_default().push(ts.len());
            neighbors.entry(a).or_default().push(b);
            neighbors.entry(b).or_default().push(a);
        }
        let signature = incidence
            .into_iter()
            .map(|(v, k)| {
                let mut d = edge_degrees.remove(&v).unwrap_or_default();
                d.sort_unstable();
                (v, (k, d))
            })
            .collect();
        for ns in neighbors.values_mut() {
            ns.sort_unstable();
        }
        Side {
            tris,
            tri_set: tris.iter().copied().collect(),
            edges,
            signature,
            neighbors,
        }
    }

    fn signature_multiset(&self) -> Vec<&(usize, Vec<usize>)> {
        let mut s: Vec<_> = self.signature.values().collect();
        s.sort();
        s
    }
}

/// Finds a bijection between the triangle-incident vertices of `a` and `b` that carries
/// triangles onto triangles. With `anchor = Some((ta, tb))` the map must also send `ta`
/// onto `tb`. Extra edges and isolated vertices are ignored.
pub fn are_isomorphic(
    a: &Complex2,
    b: &Complex2,
    anchor: Option<(Triangle, Triangle)>,
) -> Result<Option<VertexMap>> {
    if let Some((ta, tb)) = anchor {
        if !a.contains_triangle(&ta) {
            return Err(Error::MissingTriangle(ta));
        }
        if !b.contains_triangle(&tb) {
            return Err(Error::MissingTriangle(tb));
        }
    }
    if a.num_triangles() != b.num_triangles() {
        return Ok(None);
    }
    let sa = Side::new(a);
    let sb = Side::new(b);
    if sa.signature.len() != sb.signature.len()
        || sa.edges.len() != sb.edges.len()
        || sa.signature_multiset() != sb.signature_multiset()
    {
        return Ok(None);
    }
    if let Some((ta, tb)) = anchor {
        let mut x: Vec<_> = ta.vertices().iter().map(|v| &sa.signature[v]).collect();
        let mut y: Vec<_> = tb.vertices().iter().map(|v| &sb.signature[v]).collect();
        x.sort();
        y.sort();
        if x != y {
            return Ok(None);
        }
    }

    let order = search_order(&sa, anchor.map(|(ta, _)| ta));
    // triangles of `a` that become fully mapped at each position of the order
    let pos: HashMap<u32, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut closing: Vec<Vec<Triangle>> = vec![Vec::new(); order.len()];
    for t in sa.tris {
        let last = t.vertices().iter().map(|v| pos[v]).max().unwrap();
        closing[last].push(*t);
    }
    let mut search = Search {
        a: &sa,
        b: &sb,
        order: &order,
        closing: &closing,
        anchor_b: anchor.map(|(ta, tb)| (ta, tb.vertices())),
        map: HashMap::new(),
        used: HashSet::new(),
    };
    Ok(search.extend(0).then(|| search.map.into_iter().collect()))
}

/// Vertices of `a`: anchor vertices first, then breadth-first along edges, restarting
/// from the highest-incidence unvisited vertex for each new component.
fn search_order(a: &Side, anchor: Option<Triangle>) -> Vec<u32> {
    let mut remaining: Vec<u32> = a.signature.keys().copied().collect();
    remaining.sort_by_key(|v| (std::cmp::Reverse(a.signature[v].0), *v));
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    if let Some(t) = anchor {
        for v in t.vertices() {
            seen.insert(v);
            order.push(v);
            queue.push_back(v);
        }
    }
    let mut next_root = remaining.iter();
    loop {
        while let Some(v) = queue.pop_front() {
            for &w in &a.neighbors[&v] {
                if seen.insert(w) {
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        match next_root.by_ref().find(|v| !seen.contains(v)) {
            Some(&r) => {
                seen.insert(r);
                order.push(r);
                queue.push_back(r);
            }
            None => break,
        }
    }
    order
}

struct Search<'s, 'a> {
    a: &'s Side<'a>,
    b: &'s Side<'a>,
    order: &'s [u32],
    closing: &'s [Vec<Triangle>],
    anchor_b: Option<(Triangle, [u32; 3])>,
    map: HashMap<u32, u32>,
    used: HashSet<u32>,
}

impl Search<'_, '_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in self.candidates(v) {
            if !self.consistent(v, w, depth) {
                continue;
            }
            self.map.insert(v, w);
            self.used.insert(w);
            if self.extend(depth + 1) {
                return true;
            }
            self.map.remove(&v);
            self.used.remove(&w);
        }
        false
    }

    fn candidates(&self, v: u32) -> Vec<u32> {
        if let Some((ta, tb)) = self.anchor_b {
            if ta.contains_vertex(v) {
                return tb.to_vec();
            }
        }
        let mapped: Vec<u32> = self.a.neighbors[&v]
            .iter()
            .filter_map(|n| self.map.get(n).copied())
            .collect();
        match mapped.first() {
            Some(&m) => self.b.neighbors[&m].clone(),
            None => {
                let mut all: Vec<u32> = self.b.signature.keys().copied().collect();
                all.sort_unstable();
                all
            }
        }
    }

    fn consistent(&self, v: u32, w: u32, depth: usize) -> bool {
        if self.used.contains(&w) || self.a.signature[&v] != self.b.signature[&w] {
            return false;
        }
        if let Some((ta, tb)) = self.anchor_b {
            if ta.contains_vertex(v) != tb.contains(&w) {
                return false;
            }
        }
        for n in &self.a.neighbors[&v] {
            if let Some(&m) = self.map.get(n) {
                if !self.b.edges.contains(&Edge::from_distinct(w, m)) {
                    return false;
                }
            }
        }
        let image = |x: u32| if x == v { w } else { self.map[&x] };
        self.closing[depth].iter().all(|t| {
            let [x, y, z] = t.vertices();
            self.b
                .tri_set
                .contains(&Triangle::from_distinct(image(x), image(y), image(z)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> Complex2 {
        Complex2::pure(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    fn validate(a: &Complex2, b: &Complex2, map: &VertexMap) {
        let images: HashSet<u32> = map.values().copied().collect();
        assert_eq!(images.len(), map.len());
        for t in a.triangles() {
            let img = t.map(|v| map[&v]).unwrap();
            assert!(b.contains_triangle(&img), "{t} -> {img}");
        }
    }

    #[test]
    fn relabeled_tetrahedron() {
        let relabeled = Complex2::pure(7, [[2, 4, 6], [2, 4, 5], [2, 5, 6], [4, 5, 6]]).unwrap();
        let map = are_isomorphic(&tetrahedron(), &relabeled, None).unwrap().unwrap();
        validate(&tetrahedron(), &relabeled, &map);
    }

    #[test]
    fn different_vertex_counts() {
        let s1 = Complex2::pure(6, [[0, 1, 2], [0, 1, 3], [1, 2, 4], [0, 2, 5]]).unwrap();
        assert!(are_isomorphic(&tetrahedron(), &s1, None).unwrap().is_none());
    }

    #[test]
    fn five_vertex_pair() {
        let a = Complex2::pure(5, [[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 4]]).unwrap();
        let b = Complex2::pure(5, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 4]]).unwrap();
        // both are a tetrahedron with one face replaced by a face on a new vertex
        let map = are_isomorphic(&a, &b, None).unwrap().unwrap();
        validate(&a, &b, &map);
    }

    #[test]
    fn anchor_must_be_preserved() {
        let a = Complex2::pure(5, [[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 4]]).unwrap();
        let center = Triangle::from_distinct(0, 1, 2);
        // (0,2,4) has two free edges while (0,1,2) has none
        let other = Triangle::from_distinct(0, 2, 4);
        assert!(are_isomorphic(&a, &a, Some((center, center))).unwrap().is_some());
        assert!(are_isomorphic(&a, &a, Some((center, other))).unwrap().is_none());
        assert!(matches!(
            are_isomorphic(&a, &a, Some((Triangle::from_distinct(0, 3, 4), center))),
            Err(Error::MissingTriangle(_))
        ));
    }

    #[test]
    fn ignores_extras_and_isolated_vertices() {
        let a = Complex2::from_triangles(6, [[0, 1, 2]], [[3, 4]]).unwrap();
        let b = Complex2::pure(3, [[0, 1, 2]]).unwrap();
        assert!(are_isomorphic(&a, &b, None).unwrap().is_some());
    }

    #[test]
    fn disconnected_complexes() {
        let a = Complex2::pure(6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let b = Complex2::pure(7, [[0, 5, 6], [1, 2, 3]]).unwrap();
        let c = Complex2::pure(5, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert!(are_isomorphic(&a, &b, None).unwrap().is_some());
        assert!(are_isomorphic(&a, &c, None).unwrap().is_none());
    }
}
