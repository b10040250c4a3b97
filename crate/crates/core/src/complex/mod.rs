//! Finite 2-dimensional simplicial complexes.
//!
//! A [`Complex2`] is a vertex range `0..n_vertices`, a set of triangles and a set of
//! extra edges that are not faces of any triangle. Edges that are faces of a triangle
//! are never stored; they are derived from the triangle set. Complexes sampled from
//! the random model carry the full 1-skeleton implicitly, see
//! [`Complex2::with_full_skeleton`].

pub(crate) mod dual;
mod homology;
mod iso;
mod json;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

pub use dual::{diameter, dual_distance, is_strongly_connected, DualMetric};
pub use homology::{h2_rank_mod2, minimal_cycle_mod2};
pub use iso::{are_isomorphic, VertexMap};
pub use json::ComplexJson;

use crate::error::{Error, Result};

/// A 2-simplex, stored with strictly increasing vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triangle([u32; 3]);

/// A 1-simplex, stored with strictly increasing vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge([u32; 2]);

impl Triangle {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::Degenerate(vec![a, b, c]));
        }
        Ok(Triangle(v))
    }

    /// Builds a triangle from three distinct vertices. Panics on a repeated vertex.
    pub fn from_distinct(a: u32, b: u32, c: u32) -> Self {
        Self::new(a, b, c).expect("triangle vertices must be distinct")
    }

    pub fn vertices(&self) -> [u32; 3] {
        self.0
    }

    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge([a, b]), Edge([a, c]), Edge([b, c])]
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.contains_vertex(e.0[0]) && self.contains_vertex(e.0[1])
    }

    /// The vertex of `self` opposite to `e`, if `e` is an edge of `self`.
    pub fn apex(&self, e: Edge) -> Option<u32> {
        if !self.contains_edge(e) {
            return None;
        }
        self.0.iter().copied().find(|&v| !e.contains(v))
    }

    /// The common edge of two distinct triangles, if they are adjacent.
    pub fn shared_edge(&self, other: &Triangle) -> Option<Edge> {
        if self == other {
            return None;
        }
        let common: Vec<u32> = self
            .0
            .iter()
            .copied()
            .filter(|&v| other.contains_vertex(v))
            .collect();
        (common.len() == 2).then(|| Edge([common[0], common[1]]))
    }

    pub fn map(&self, f: impl Fn(u32) -> u32) -> Result<Triangle> {
        Triangle::new(f(self.0[0]), f(self.0[1]), f(self.0[2]))
    }
}

impl Edge {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge([a, b])),
            std::cmp::Ordering::Greater => Ok(Edge([b, a])),
            std::cmp::Ordering::Equal => Err(Error::Degenerate(vec![a, b])),
        }
    }

    pub fn from_distinct(a: u32, b: u32) -> Self {
        Self::new(a, b).expect("edge endpoints must be distinct")
    }

    pub fn vertices(&self) -> [u32; 2] {
        self.0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0[0] == v || self.0[1] == v
    }

    /// The triangle spanned by `self` and `apex`.
    pub fn join(&self, apex: u32) -> Result<Triangle> {
        Triangle::new(self.0[0], self.0[1], apex)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0[0], self.0[1])
    }
}

/// A nonnegative integer or infinity. `Finite(_) < Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Finite(usize),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            ExtNat::Finite(k) => Some(k),
            ExtNat::Infinite => None,
        }
    }

    /// `self + 1`, with `∞ + 1 = ∞`.
    pub fn succ(self) -> ExtNat {
        match self {
            ExtNat::Finite(k) => ExtNat::Finite(k + 1),
            ExtNat::Infinite => ExtNat::Infinite,
        }
    }
}

impl From<usize> for ExtNat {
    fn from(k: usize) -> Self {
        ExtNat::Finite(k)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(k) => write!(f, "{k}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite simplicial complex of dimension at most 2 on the vertices `0..n_vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex2 {
    n_vertices: usize,
    triangles: Vec<Triangle>,
    extra_edges: Vec<Edge>,
    full_skeleton: bool,
}

impl Complex2 {
    /// Builds a normalized complex. Extra edges that are faces of a triangle are dropped.
    pub fn from_triangles<T, E>(n_vertices: usize, triangles: T, extra_edges: E) -> Result<Self>
    where
        T: IntoIterator<Item = [u32; 3]>,
        E: IntoIterator<Item = [u32; 2]>,
    {
        let check = |v: u32| {
            if (v as usize) < n_vertices {
                Ok(v)
            } else {
                Err(Error::VertexOutOfRange { vertex: v, n_vertices })
            }
        };
        let mut tris = Vec::new();
        for [a, b, c] in triangles {
            tris.push(Triangle::new(check(a)?, check(b)?, check(c)?)?);
        }
        let mut extras = Vec::new();
        for [a, b] in extra_edges {
            extras.push(Edge::new(check(a)?, check(b)?)?);
        }
        Ok(Self::from_simplices(n_vertices, tris, extras))
    }

    /// A pure complex given by its triangles.
    pub fn pure<T: IntoIterator<Item = [u32; 3]>>(n_vertices: usize, triangles: T) -> Result<Self> {
        Self::from_triangles(n_vertices, triangles, [])
    }

    /// Normalizes already-validated simplices. Vertex indices must be `< n_vertices`.
    pub fn from_simplices(n_vertices: usize, mut triangles: Vec<Triangle>, extras: Vec<Edge>) -> Self {
        triangles.sort_unstable();
        triangles.dedup();
        debug_assert!(triangles.iter().all(|t| (t.0[2] as usize) < n_vertices));
        let induced: BTreeSet<Edge> = triangles.iter().flat_map(|t| t.edges()).collect();
        let extra_edges: BTreeSet<Edge> = extras.into_iter().filter(|e| !induced.contains(e)).collect();
        Complex2 {
            n_vertices,
            triangles,
            extra_edges: extra_edges.into_iter().collect(),
            full_skeleton: false,
        }
    }

    /// A complex containing every edge on `0..n_vertices` together with `triangles`.
    /// The 1-skeleton is kept implicit.
    pub fn with_full_skeleton(n_vertices: usize, mut triangles: Vec<Triangle>) -> Self {
        triangles.sort_unstable();
        triangles.dedup();
        Complex2 {
            n_vertices,
            triangles,
            extra_edges: Vec::new(),
            full_skeleton: true,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// The triangles, sorted.
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Number of faces `f`.
    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn has_full_skeleton(&self) -> bool {
        self.full_skeleton
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        self.triangles.binary_search(t).is_ok()
    }

    /// Edges not contained in any triangle, sorted. Synthesized when the 1-skeleton is implicit.
    pub fn extra_edges(&self) -> Vec<Edge> {
        if !self.full_skeleton {
            return self.extra_edges.clone();
        }
        let induced = self.induced_edges();
        let induced: BTreeSet<Edge> = induced.into_iter().collect();
        all_pairs(self.n_vertices)
            .filter(|e| !induced.contains(e))
            .collect()
    }

    /// Edges that are faces of some triangle, sorted.
    pub fn induced_edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = self.triangles.iter().flat_map(|t| t.edges()).collect();
        set.into_iter().collect()
    }

    /// All edges of the complex, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        if self.full_skeleton {
            return all_pairs(self.n_vertices).collect();
        }
        let mut set: BTreeSet<Edge> = self.triangles.iter().flat_map(|t| t.edges()).collect();
        set.extend(self.extra_edges.iter().copied());
        set.into_iter().collect()
    }

    pub fn num_edges(&self) -> usize {
        if self.full_skeleton {
            self.n_vertices * self.n_vertices.saturating_sub(1) / 2
        } else {
            self.induced_edges().len() + self.extra_edges.len()
        }
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        if self.full_skeleton {
            return (e.0[1] as usize) < self.n_vertices;
        }
        self.extra_edges.binary_search(&e).is_ok() || self.triangles.iter().any(|t| t.contains_edge(e))
    }

    /// Number of triangles containing `e`.
    pub fn edge_degree(&self, e: Edge) -> Result<usize> {
        if !self.contains_edge(e) {
            return Err(Error::MissingEdge(e));
        }
        Ok(self.triangles.iter().filter(|t| t.contains_edge(e)).count())
    }

    /// The free edges: edges contained in exactly one triangle.
    pub fn boundary(&self) -> Vec<Edge> {
        Incidence::new(&self.triangles).boundary()
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().is_empty()
    }

    /// Largest edge degree; 0 for a complex without triangles.
    pub fn max_degree(&self) -> usize {
        Incidence::new(&self.triangles).max_degree()
    }

    /// The union of the triangles. Vertex labels (and `n_vertices`) are kept.
    pub fn pure_part(&self) -> Complex2 {
        Complex2 {
            n_vertices: self.n_vertices,
            triangles: self.triangles.clone(),
            extra_edges: Vec::new(),
            full_skeleton: false,
        }
    }

    /// Every maximal simplex is a triangle: no extra edges and no isolated vertices.
    pub fn is_pure(&self) -> bool {
        if self.full_skeleton {
            return self.num_edges() == self.induced_edges().len()
                && self.incident_vertices().len() == self.n_vertices;
        }
        self.extra_edges.is_empty() && self.incident_vertices().len() == self.n_vertices
    }

    /// Vertices lying in at least one triangle, sorted.
    pub fn incident_vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.triangles.iter().flat_map(|t| t.0).collect();
        set.into_iter().collect()
    }

    /// `v - e + f` over the whole complex, isolated vertices included.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.num_edges() as i64 + self.triangles.len() as i64
    }

    /// The pure subcomplex spanned by `triangles`, on the same vertex labels.
    pub fn subcomplex<'a, I: IntoIterator<Item = &'a Triangle>>(&self, triangles: I) -> Complex2 {
        let tris: Vec<Triangle> = triangles.into_iter().copied().collect();
        Complex2::from_simplices(self.n_vertices, tris, Vec::new())
    }

    /// Relabels the vertices incident to triangles as `0..v` in increasing order and
    /// drops everything else. Returns the relabeled complex and the old label of each
    /// new vertex.
    pub fn compact(&self) -> (Complex2, Vec<u32>) {
        let old = self.incident_vertices();
        let mut new_of = vec![u32::MAX; self.n_vertices];
        for (i, &v) in old.iter().enumerate() {
            new_of[v as usize] = i as u32;
        }
        let tris = self
            .triangles
            .iter()
            .map(|t| t.map(|v| new_of[v as usize]).expect("relabeling is injective"))
            .collect();
        (Complex2::from_simplices(old.len(), tris, Vec::new()), old)
    }
}

impl Complex2 {
    /// Pure, strongly connected, and every edge lies in at most `r` triangles.
    pub fn is_pseudo_surface(&self, r: usize) -> bool {
        self.is_pure() && is_strongly_connected(self) && self.max_degree() <= r
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = Edge> {
    let n = n as u32;
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| Edge([a, b])))
}

/// Edge-to-triangle incidence for a fixed triangle list. Triangles are referred to by
/// their index in that list.
#[derive(Clone, Debug, Default)]
pub struct Incidence {
    edge_triangles: HashMap<Edge, Vec<usize>>,
}

impl Incidence {
    pub fn new(triangles: &[Triangle]) -> Self {
        let mut edge_triangles: HashMap<Edge, Vec<usize>> = HashMap::with_capacity(triangles.len() * 2);
        for (i, t) in triangles.iter().enumerate() {
            for e in t.edges() {
                edge_triangles.entry(e).or_default().push(i);
            }
        }
        Incidence { edge_triangles }
    }

    /// Indices of the triangles containing `e`.
    pub fn triangles_on(&self, e: Edge) -> &[usize] {
        self.edge_triangles.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, e: Edge) -> usize {
        self.triangles_on(e).len()
    }

    pub fn boundary(&self) -> Vec<Edge> {
        let mut b: Vec<Edge> = self
            .edge_triangles
            .iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| *e)
            .collect();
        b.sort_unstable();
        b
    }

    pub fn max_degree(&self) -> usize {
        self.edge_triangles.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Edge, &Vec<usize>)> {
        self.edge_triangles.iter()
    }

    /// Triangles sharing an edge with `triangles[i]`, sorted and deduplicated.
    pub fn neighbors(&self, triangles: &[Triangle], i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = triangles[i]
            .edges()
            .iter()
            .flat_map(|e| self.triangles_on(*e).iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
