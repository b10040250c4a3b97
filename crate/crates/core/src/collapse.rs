//! Iterated simplicial collapse of 2-complexes.
//!
//! One collapse step removes *every* free triangle at once (a triangle is free when one
//! of its edges lies in no other triangle). Only the triangles matter for the dynamics,
//! so the step functions work on pure parts; [`collapse_step_full`] additionally keeps
//! the 1-skeleton, deleting one free edge per collapsed triangle.
//!
//! The depth `D(σ)` of a triangle is the index of the last stage containing it, or
//! infinity when it survives into a closed residue.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{Complex2, Edge, ExtNat, Incidence, Triangle};
use crate::error::{Error, Result};

/// Default cap on the number of collapsing paths enumerated per query.
pub const DEFAULT_PATH_LIMIT: usize = 1_000_000;

/// How the collapse sequence ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    /// No triangles remain after `steps` steps.
    Graph { steps: usize },
    /// Stage `at_step` is nonempty, closed, and stable.
    ClosedResidue { at_step: usize },
}

/// The full history of a collapse sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseTrace {
    /// Triangle sets of the pure parts of `Y⁽⁰⁾ ⊋ Y⁽¹⁾ ⊋ … ⊋ Y⁽ᵐ⁾`. The last one is empty
    /// or the closed residue.
    pub stages: Vec<Vec<Triangle>>,
    pub d_values: BTreeMap<Triangle, ExtNat>,
    pub terminal: Terminal,
}

impl CollapseTrace {
    /// `min { k : Y⁽ᵏ⁾ has no triangles }`, infinite when a closed residue remains.
    pub fn collapse_number(&self) -> ExtNat {
        match self.terminal {
            Terminal::Graph { steps } => ExtNat::Finite(steps),
            Terminal::ClosedResidue { .. } => ExtNat::Infinite,
        }
    }
}

/// Depth of every triangle of a fixed triangle list, plus the edge incidence used to
/// compute it.
#[derive(Clone, Debug)]
pub struct Levels<'a> {
    pub triangles: &'a [Triangle],
    pub incidence: Incidence,
    pub depth: Vec<ExtNat>,
    pub terminal: Terminal,
}

impl<'a> Levels<'a> {
    pub fn new(triangles: &'a [Triangle]) -> Self {
        let incidence = Incidence::new(triangles);
        let (depth, terminal) = compute_depths(triangles, &incidence);
        Levels {
            triangles,
            incidence,
            depth,
            terminal,
        }
    }

    pub fn of(c: &'a Complex2) -> Self {
        Self::new(c.triangles())
    }

    fn index(&self, t: Triangle) -> Result<usize> {
        self.triangles.binary_search(&t).map_err(|_| Error::MissingTriangle(t))
    }

    pub fn depth_of(&self, t: Triangle) -> Result<ExtNat> {
        Ok(self.depth[self.index(t)?])
    }

    /// Neighbors of triangle `i` exactly one level below it.
    fn predecessors(&self, i: usize) -> Vec<usize> {
        let ExtNat::Finite(k) = self.depth[i] else {
            return Vec::new();
        };
        if k == 0 {
            return Vec::new();
        }
        self.incidence
            .neighbors(self.triangles, i)
            .into_iter()
            .filter(|&j| self.depth[j] == ExtNat::Finite(k - 1))
            .collect()
    }

    /// Level-0 triangles reachable from `start` by repeatedly stepping one level down
    /// to an adjacent triangle.
    fn reachable_free(&self, start: &[usize]) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = start.iter().copied().collect();
        let mut stack: Vec<usize> = start.to_vec();
        let mut free = BTreeSet::new();
        while let Some(i) = stack.pop() {
            if self.depth[i] == ExtNat::Finite(0) {
                free.insert(i);
            }
            for j in self.predecessors(i) {
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        free
    }

    fn boundary_edges_of(&self, free: &BTreeSet<usize>) -> Vec<Edge> {
        let set: BTreeSet<Edge> = free
            .iter()
            .flat_map(|&i| self.triangles[i].edges())
            .filter(|e| self.incidence.degree(*e) == 1)
            .collect();
        set.into_iter().collect()
    }
}

fn compute_depths(tris: &[Triangle], inc: &Incidence) -> (Vec<ExtNat>, Terminal) {
    let mut depth = vec![ExtNat::Infinite; tris.len()];
    let mut degree: HashMap<Edge, usize> = inc.edges().map(|(e, ts)| (*e, ts.len())).collect();
    let mut alive = vec![true; tris.len()];
    let mut frontier: Vec<usize> = (0..tris.len())
        .filter(|&i| tris[i].edges().iter().any(|e| degree[e] == 1))
        .collect();
    let mut level = 0;
    let mut remaining = tris.len();
    while !frontier.is_empty() {
        let mut touched = Vec::new();
        for &i in &frontier {
            depth[i] = ExtNat::Finite(level);
            alive[i] = false;
            remaining -= 1;
        }
        for &i in &frontier {
            for e in tris[i].edges() {
                let d = degree.get_mut(&e).unwrap();
                *d -= 1;
                touched.push(e);
            }
        }
        let mut next = Vec::new();
        let mut queued = BTreeSet::new();
        for e in touched {
            if degree[&e] != 1 {
                continue;
            }
            let j = inc
                .triangles_on(e)
                .iter()
                .copied()
                .find(|&j| alive[j])
                .expect("an edge of degree 1 has one live triangle");
            if queued.insert(j) {
                next.push(j);
            }
        }
        frontier = next;
        level += 1;
    }
    let terminal = if remaining == 0 {
        Terminal::Graph { steps: level }
    } else {
        Terminal::ClosedResidue { at_step: level }
    };
    (depth, terminal)
}

/// One collapse step on the pure part: removes every free triangle simultaneously.
pub fn collapse_step(c: &Complex2) -> Complex2 {
    let tris = c.triangles();
    let inc = Incidence::new(tris);
    let kept: Vec<Triangle> = tris
        .iter()
        .copied()
        .filter(|t| t.edges().iter().all(|e| inc.degree(*e) != 1))
        .collect();
    Complex2::from_simplices(c.n_vertices(), kept, Vec::new())
}

/// One collapse step keeping the 1-skeleton. Each free triangle is removed together with
/// its lexicographically smallest free edge.
pub fn collapse_step_full(c: &Complex2) -> Complex2 {
    let tris = c.triangles();
    let inc = Incidence::new(tris);
    let mut kept = Vec::new();
    let mut removed_edges = BTreeSet::new();
    for t in tris {
        match t.edges().into_iter().filter(|e| inc.degree(*e) == 1).min() {
            Some(e) => {
                removed_edges.insert(e);
            }
            None => kept.push(*t),
        }
    }
    let edges: Vec<Edge> = c
        .edges()
        .into_iter()
        .filter(|e| !removed_edges.contains(e))
        .collect();
    Complex2::from_simplices(c.n_vertices(), kept, edges)
}

/// Runs collapse steps until no triangles remain or the triangle set is stable.
pub fn collapse_sequence(c: &Complex2) -> CollapseTrace {
    let levels = Levels::of(c);
    let last = match levels.terminal {
        Terminal::Graph { steps } => steps,
        Terminal::ClosedResidue { at_step } => at_step,
    };
    let stages = (0..=last)
        .map(|i| {
            levels
                .triangles
                .iter()
                .zip(&levels.depth)
                .filter(|(_, d)| **d >= ExtNat::Finite(i))
                .map(|(t, _)| *t)
                .collect()
        })
        .collect();
    let d_values = levels
        .triangles
        .iter()
        .copied()
        .zip(levels.depth.iter().copied())
        .collect();
    CollapseTrace {
        stages,
        d_values,
        terminal: levels.terminal,
    }
}

/// `D(σ) = sup { i : σ ∈ Y⁽ⁱ⁾ }`.
pub fn d_value(c: &Complex2, sigma: Triangle) -> Result<ExtNat> {
    Levels::of(c).depth_of(sigma)
}

pub fn collapse_number(c: &Complex2) -> ExtNat {
    match Levels::of(c).terminal {
        Terminal::Graph { steps } => ExtNat::Finite(steps),
        Terminal::ClosedResidue { .. } => ExtNat::Infinite,
    }
}

/// Whether `Y⁽ᵏ⁾` has no triangles.
pub fn is_collapsible(c: &Complex2, k: usize) -> bool {
    collapse_number(c) <= ExtNat::Finite(k)
}

/// A sequence `σ₀, …, σ_k` of pairwise adjacent triangles with `D(σᵢ) = i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapsingPath {
    pub simplices: Vec<Triangle>,
}

impl CollapsingPath {
    pub fn start(&self) -> Triangle {
        self.simplices[0]
    }

    pub fn end(&self) -> Triangle {
        *self.simplices.last().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<CollapsingPath>,
    /// The limit stopped the enumeration before all paths were produced.
    pub truncated: bool,
}

/// Collapsing paths ending at `sigma`, at most `limit` of them, in lexicographic order
/// of their reversed triangle sequences.
pub fn collapsing_paths(c: &Complex2, sigma: Triangle, limit: usize) -> Result<PathSet> {
    if limit == 0 {
        return Err(Error::InvalidParameter("path limit must be at least 1".into()));
    }
    let levels = Levels::of(c);
    let s = levels.index(sigma)?;
    if !levels.depth[s].is_finite() {
        return Err(Error::InfiniteDepth(sigma));
    }
    let mut paths = Vec::new();
    let mut truncated = false;
    let mut stack = vec![s];
    walk_down(&levels, &mut stack, &mut paths, limit, &mut truncated);
    Ok(PathSet { paths, truncated })
}

fn walk_down(
    levels: &Levels,
    stack: &mut Vec<usize>,
    out: &mut Vec<CollapsingPath>,
    limit: usize,
    truncated: &mut bool,
) {
    let top = *stack.last().unwrap();
    if levels.depth[top] == ExtNat::Finite(0) {
        if out.len() == limit {
            *truncated = true;
            return;
        }
        out.push(CollapsingPath {
            simplices: stack.iter().rev().map(|&i| levels.triangles[i]).collect(),
        });
        return;
    }
    for j in levels.predecessors(top) {
        if *truncated {
            return;
        }
        stack.push(j);
        walk_down(levels, stack, out, limit, truncated);
        stack.pop();
    }
}

/// `A(σ)`: boundary edges of the initial triangles of all collapsing paths ending at
/// `sigma`. Empty when `D(σ)` is infinite.
pub fn accessible_boundary(c: &Complex2, sigma: Triangle) -> Result<Vec<Edge>> {
    let levels = Levels::of(c);
    let s = levels.index(sigma)?;
    if !levels.depth[s].is_finite() {
        return Ok(Vec::new());
    }
    Ok(levels.boundary_edges_of(&levels.reachable_free(&[s])))
}

/// `A(σ, e)`: like [`accessible_boundary`], restricted to paths whose last step enters
/// `sigma` through the edge `e`. Requires `D(σ) ≥ 1`.
pub fn accessible_boundary_via(c: &Complex2, sigma: Triangle, e: Edge) -> Result<Vec<Edge>> {
    if !sigma.contains_edge(e) {
        return Err(Error::EdgeNotInTriangle { edge: e, triangle: sigma });
    }
    let levels = Levels::of(c);
    let s = levels.index(sigma)?;
    let k = match levels.depth[s] {
        ExtNat::Finite(0) => return Err(Error::FreeTriangle(sigma)),
        ExtNat::Finite(k) => k,
        ExtNat::Infinite => return Ok(Vec::new()),
    };
    let start: Vec<usize> = levels
        .incidence
        .triangles_on(e)
        .iter()
        .copied()
        .filter(|&j| j != s && levels.depth[j] == ExtNat::Finite(k - 1))
        .collect();
    Ok(levels.boundary_edges_of(&levels.reachable_free(&start)))
}

/// JSON form of a trace: `{"stages": [...], "d_values": {"i,j,k": d | "inf"}, "terminal": ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    pub stages: Vec<Vec<[u32; 3]>>,
    pub d_values: BTreeMap<String, serde_json::Value>,
    pub terminal: Terminal,
}

impl From<&CollapseTrace> for TraceJson {
    fn from(t: &CollapseTrace) -> Self {
        TraceJson {
            stages: t
                .stages
                .iter()
                .map(|s| s.iter().map(Triangle::vertices).collect())
                .collect(),
            d_values: t
                .d_values
                .iter()
                .map(|(tri, d)| {
                    let [a, b, c] = tri.vertices();
                    let v = match d {
                        ExtNat::Finite(k) => serde_json::Value::from(*k),
                        ExtNat::Infinite => serde_json::Value::from("inf"),
                    };
                    (format!("{a},{b},{c}"), v)
                })
                .collect(),
            terminal: t.terminal,
        }
    }
}
