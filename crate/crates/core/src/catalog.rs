//! Centered pseudo-surfaces: the `S_k` family and the forbidden catalogs `L(k, r)`.
//!
//! `L(k, r)` holds the isomorphism types of centered `r`-pseudo-surfaces `S` such that
//! every triangle lies within dual distance `k` of the center and, when `S` has a
//! boundary, the center has collapse depth exactly `k`.
//!
//! The enumerator grows complexes from the center one triangle at a time. Any member can
//! be built by adding its triangles in order of distance from the center, and along such
//! an order every intermediate complex already has degree at most `r` and radius at most
//! `k`. Pruning on those two conditions therefore loses nothing. States are deduplicated
//! by a center-preserving canonical form.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::collapse::Levels;
use crate::complex::{
    dual::bfs, is_strongly_connected, Complex2, DualMetric, Edge, ExtNat, Incidence, Triangle,
};
use crate::embedding::embeds;
use crate::error::{Error, Result};

/// A complex with a distinguished center triangle, claimed to belong to `L(k, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoSurface {
    pub complex: Complex2,
    pub center: Triangle,
    pub k: usize,
    pub r: usize,
}

/// The first condition a claimed catalog member violates.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MembershipFailure {
    #[error("center {0} is not a triangle of the complex")]
    MissingCenter(Triangle),
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not strongly connected")]
    NotStronglyConnected,
    #[error("edge degree {max_degree} exceeds r = {r}")]
    DegreeExceeded { max_degree: usize, r: usize },
    #[error("triangle {triangle} is at distance {distance} > k = {k} from the center")]
    TooFar {
        triangle: Triangle,
        distance: ExtNat,
        k: usize,
    },
    #[error("boundary is nonempty but the center has depth {depth}, not {k}")]
    CenterDepth { depth: ExtNat, k: usize },
}

impl PseudoSurface {
    /// Re-checks every membership condition from scratch.
    pub fn verify_membership(&self) -> Result<(), MembershipFailure> {
        let c = &self.complex;
        if !c.contains_triangle(&self.center) {
            return Err(MembershipFailure::MissingCenter(self.center));
        }
        if !c.is_pure() {
            return Err(MembershipFailure::NotPure);
        }
        if !is_strongly_connected(c) {
            return Err(MembershipFailure::NotStronglyConnected);
        }
        let max_degree = c.max_degree();
        if max_degree > self.r {
            return Err(MembershipFailure::DegreeExceeded { max_degree, r: self.r });
        }
        let metric = DualMetric::new(c, self.center).expect("center is present");
        if let Some((t, d)) = metric
            .distances
            .iter()
            .find(|(_, d)| **d > ExtNat::Finite(self.k))
        {
            return Err(MembershipFailure::TooFar {
                triangle: *t,
                distance: *d,
                k: self.k,
            });
        }
        if !c.is_closed() {
            let depth = Levels::of(c).depth_of(self.center).expect("center is present");
            if depth != ExtNat::Finite(self.k) {
                return Err(MembershipFailure::CenterDepth { depth, k: self.k });
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.complex.incident_vertices().len()
    }
}

/// `S_k`: a triangle, grown `k` times by attaching a triangle with a fresh apex to every
/// boundary edge. The center is `(0,1,2)`; the member is declared with `(k, 2)`.
pub fn s_k(k: usize) -> PseudoSurface {
    let center = Triangle::from_distinct(0, 1, 2);
    let mut tris = vec![center];
    let mut next = 3u32;
    for _ in 0..k {
        let boundary = Incidence::new(&tris).boundary();
        for e in boundary {
            tris.push(e.join(next).expect("fresh apex"));
            next += 1;
        }
    }
    PseudoSurface {
        complex: Complex2::from_simplices(next as usize, tris, Vec::new()),
        center,
        k,
        r: 2,
    }
}

/// Upper bound on the face count of a member of `L(k, r)`: one center, at most `3(r-1)`
/// triangles at distance 1, and each triangle at distance `d ≥ 1` has two outward edges
/// carrying at most `r-1` further triangles each.
pub fn face_bound(k: usize, r: usize) -> usize {
    let branch = 2 * (r - 1);
    let mut layer = 3 * (r - 1);
    let mut total = 1;
    for _ in 0..k {
        total += layer;
        layer *= branch;
    }
    total
}

/// `(k, r)` pairs whose catalogs enumerate quickly with the derived bounds.
pub fn is_supported(k: usize, r: usize) -> bool {
    r >= 2 && (k == 0 || (k <= 2 && r == 2) || (k <= 1 && r <= 4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogLimits {
    pub max_faces: usize,
    pub max_vertices: usize,
}

impl CatalogLimits {
    /// Limits that can never truncate: the derived face bound and `f + 2` vertices.
    pub fn derived(k: usize, r: usize) -> Self {
        let f = face_bound(k, r);
        CatalogLimits {
            max_faces: f,
            max_vertices: f + 2,
        }
    }
}

/// An enumerated catalog, members in canonical labeling with center `(0,1,2)`.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub k: usize,
    pub r: usize,
    pub members: Vec<PseudoSurface>,
    /// A state was skipped because it exceeded the limits.
    pub truncated: bool,
    /// Number of distinct anchored states visited.
    pub states: usize,
}

impl Catalog {
    pub fn complexes(&self) -> Vec<Complex2> {
        self.members.iter().map(|m| m.complex.clone()).collect()
    }

    /// Number of types when the center is forgotten.
    pub fn unanchored_count(&self) -> usize {
        self.members
            .iter()
            .map(|m| canonical_form(m.complex.triangles(), None))
            .collect::<HashSet<_>>()
            .len()
    }

    /// Indices of members into which no member with fewer faces embeds.
    pub fn minimal_members(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| {
                let host = &self.members[i].complex;
                !self.members.iter().any(|m| {
                    m.complex.num_triangles() < host.num_triangles()
                        && embeds(&m.complex, host).expect("members are pure").is_some()
                })
            })
            .collect()
    }

    /// Anchored canonical forms of the members.
    pub fn keys(&self) -> BTreeSet<Vec<Triangle>> {
        self.members
            .iter()
            .map(|m| canonical_form(m.complex.triangles(), Some(m.center)))
            .collect()
    }
}

/// Enumerates `L(k, r)` up to center-preserving isomorphism.
pub fn enumerate_l(k: usize, r: usize, limits: CatalogLimits) -> Result<Catalog> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let center = Triangle::from_distinct(0, 1, 2);
    let start = vec![center];
    let mut seen: HashSet<Vec<Triangle>> = HashSet::from([start.clone()]);
    let mut layer = vec![start];
    let mut members = Vec::new();
    let mut truncated = false;
    while !layer.is_empty() {
        let mut next_layer = Vec::new();
        for state in &layer {
            if is_member(state, center, k) {
                let n = state.iter().map(|t| t.vertices()[2]).max().unwrap() as usize + 1;
                members.push(PseudoSurface {
                    complex: Complex2::from_simplices(n, state.clone(), Vec::new()),
                    center,
                    k,
                    r,
                });
            }
            for child in children(state, center, k, r) {
                let faces = child.len();
                let verts = child.iter().map(|t| t.vertices()[2]).max().unwrap() as usize + 1;
                if faces > limits.max_faces || verts > limits.max_vertices {
                    truncated = true;
                    continue;
                }
                let key = canonical_form(&child, Some(center));
                if seen.insert(key.clone()) {
                    next_layer.push(key);
                }
            }
        }
        next_layer.sort();
        layer = next_layer;
    }
    members.sort_by(|a, b| {
        (a.complex.num_triangles(), a.num_vertices(), a.complex.triangles()).cmp(&(
            b.complex.num_triangles(),
            b.num_vertices(),
            b.complex.triangles(),
        ))
    });
    Ok(Catalog {
        k,
        r,
        members,
        truncated,
        states: seen.len(),
    })
}

fn is_member(tris: &[Triangle], center: Triangle, k: usize) -> bool {
    let levels = Levels::new(tris);
    if levels.incidence.boundary().is_empty() {
        return true;
    }
    levels.depth_of(center).expect("center present") == ExtNat::Finite(k)
}

/// One-triangle extensions that keep degree `≤ r` and put the new triangle within
/// distance `k` of the center.
fn children(tris: &[Triangle], center: Triangle, k: usize, r: usize) -> Vec<Vec<Triangle>> {
    let inc = Incidence::new(tris);
    let c = tris.binary_search(&center).expect("center present");
    let dist = bfs(tris, &inc, c);
    let n = tris.iter().map(|t| t.vertices()[2]).max().unwrap() + 1;
    let present: HashSet<Triangle> = tris.iter().copied().collect();
    let mut edges: Vec<Edge> = inc.edges().map(|(e, _)| *e).collect();
    edges.sort_unstable();
    let mut out = Vec::new();
    for e in edges {
        if inc.degree(e) >= r {
            continue;
        }
        let [a, b] = e.vertices();
        for w in (0..=n).filter(|w| !e.contains(*w)) {
            let t = Triangle::from_distinct(a, b, w);
            if present.contains(&t) {
                continue;
            }
            let sides = [Edge::from_distinct(a, w), Edge::from_distinct(b, w)];
            if sides.iter().any(|s| inc.degree(*s) >= r) {
                continue;
            }
            let nearest = t
                .edges()
                .iter()
                .flat_map(|s| inc.triangles_on(*s).iter())
                .filter_map(|&j| dist[j])
                .min()
                .expect("attached along an existing edge");
            if nearest + 1 > k {
                continue;
            }
            let mut child = tris.to_vec();
            child.push(t);
            child.sort_unstable();
            out.push(child);
        }
    }
    out
}

/// Canonical relabeling of a strongly connected pure complex, optionally preserving an
/// anchor triangle (which then becomes `(0,1,2)`). Two complexes get the same form iff
/// they are isomorphic (with anchors matched).
///
/// Labels are handed out one vertex at a time: after the three anchor vertices, the next
/// label goes to an unlabeled apex over the lexicographically smallest labeled edge that
/// has one. Ties between apexes are branched on; the smallest resulting triangle list
/// wins.
pub fn canonical_form(tris: &[Triangle], anchor: Option<Triangle>) -> Vec<Triangle> {
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
    let ctx = Canon {
        tris,
        apexes,
        incidence,
        n_vertices: inc_vertex_count(tris),
    };
    let roots: Vec<Triangle> = match anchor {
        Some(t) => vec![t],
        None => tris.to_vec(),
    };
    let mut best: Option<Vec<Triangle>> = None;
    for root in roots {
        let [a, b, c] = root.vertices();
        for order in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            let mut labels = HashMap::new();
            for (i, v) in order.iter().enumerate() {
                labels.insert(*v, i as u32);
            }
            let mut by_label = order.to_vec();
            ctx.search(&mut labels, &mut by_label, &mut best);
        }
    }
    best.unwrap_or_default()
}

fn inc_vertex_count(tris: &[Triangle]) -> usize {
    tris.iter().flat_map(|t| t.vertices()).collect::<HashSet<_>>().len()
}

struct Canon<'a> {
    tris: &'a [Triangle],
    apexes: HashMap<Edge, Vec<u32>>,
    incidence: HashMap<u32, usize>,
    n_vertices: usize,
}

impl Canon<'_> {
    fn search(
        &self,
        labels: &mut HashMap<u32, u32>,
        by_label: &mut Vec<u32>,
        best: &mut Option<Vec<Triangle>>,
    ) {
        if by_label.len() == self.n_vertices {
            let mut form: Vec<Triangle> = self
                .tris
                .iter()
                .map(|t| t.map(|v| labels[&v]).unwrap())
                .collect();
            form.sort_unstable();
            if best.as_ref().is_none_or(|b| form < *b) {
                *best = Some(form);
            }
            return;
        }
        let Some(candidates) = self.next_candidates(labels, by_label) else {
            // not strongly connected: no canonical extension exists
            return;
        };
        for v in candidates {
            labels.insert(v, by_label.len() as u32);
            by_label.push(v);
            self.search(labels, by_label, best);
            by_label.pop();
            labels.remove(&v);
        }
    }

    fn next_candidates(&self, labels: &HashMap<u32, u32>, by_label: &[u32]) -> Option<Vec<u32>> {
        for i in 0..by_label.len() {
            for j in i + 1..by_label.len() {
                let e = Edge::from_distinct(by_label[i], by_label[j]);
                let Some(ap) = self.apexes.get(&e) else {
                    continue;
                };
                let fresh: Vec<u32> = ap.iter().copied().filter(|v| !labels.contains_key(v)).collect();
                if fresh.is_empty() {
                    continue;
                }
                let least = fresh.iter().map(|v| self.incidence[v]).min().unwrap();
                let mut out: Vec<u32> = fresh.into_iter().filter(|v| self.incidence[v] == least).collect();
                out.sort_unstable();
                out.dedup();
                return Some(out);
            }
        }
        None
    }
}
