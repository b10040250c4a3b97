//! Generators and brute-force oracles shared by the integration tests. The oracles work
//! on raw vertex triples and do not call into the algorithms they check.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricollapse::{Complex2, Triangle};

pub type Tri = [u32; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn all_triples(n: u32) -> Vec<Tri> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub fn raw(c: &Complex2) -> Vec<Tri> {
    c.triangles().iter().map(|t| t.vertices()).collect()
}

pub fn pure(n: u32, tris: &[Tri]) -> Complex2 {
    Complex2::from_triangles(n as usize, tris.iter().copied(), Vec::<[u32; 2]>::new()).unwrap()
}

/// Each triple on `n` vertices kept independently with probability `p`.
pub fn random_complex(rng: &mut impl Rng, n: u32, p: f64) -> Complex2 {
    let tris: Vec<Tri> = all_triples(n).into_iter().filter(|_| rng.random_bool(p)).collect();
    pure(n, &tris)
}

/// Triples added in random order while every edge stays in at most `r` of them; stops
/// after a random number of attempts.
pub fn capped_complex(rng: &mut impl Rng, n: u32, r: usize) -> Complex2 {
    let mut triples = all_triples(n);
    triples.shuffle(rng);
    let attempts = rng.random_range(1..=triples.len());
    let mut degree: HashMap<[u32; 2], usize> = HashMap::new();
    let mut tris = Vec::new();
    for t in triples.into_iter().take(attempts) {
        let edges = edges_of(t);
        if edges.iter().all(|e| degree.get(e).copied().unwrap_or(0) < r) {
            for e in edges {
                *degree.entry(e).or_insert(0) += 1;
            }
            tris.push(t);
        }
    }
    pure(n, &tris)
}

/// A random subset of the triangles of `c`, keeping each with probability `keep`.
pub fn random_sub(rng: &mut impl Rng, c: &Complex2, keep: f64) -> Complex2 {
    let tris: Vec<Tri> = raw(c).into_iter().filter(|_| rng.random_bool(keep)).collect();
    pure(c.n_vertices() as u32, &tris)
}

pub fn edges_of(t: Tri) -> [[u32; 2]; 3] {
    [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
}

pub fn degrees(tris: &[Tri]) -> HashMap<[u32; 2], usize> {
    let mut d = HashMap::new();
    for &t in tris {
        for e in edges_of(t) {
            *d.entry(e).or_insert(0) += 1;
        }
    }
    d
}

/// Depth of every triangle by literal simulation of the collapse steps; `None` marks
/// triangles that are never removed.
pub fn naive_depths(tris: &[Tri]) -> HashMap<Tri, Option<usize>> {
    let mut out = HashMap::new();
    let mut alive: Vec<Tri> = tris.to_vec();
    let mut step = 0;
    loop {
        let d = degrees(&alive);
        let (free, rest): (Vec<Tri>, Vec<Tri>) =
            alive.iter().partition(|t| edges_of(**t).iter().any(|e| d[e] == 1));
        if free.is_empty() {
            for t in rest {
                out.insert(t, None);
            }
            return out;
        }
        for t in free {
            out.insert(t, Some(step));
        }
        alive = rest;
        step += 1;
    }
}

/// Number of steps until no triangle remains, `None` when a closed residue survives.
pub fn naive_collapse_number(tris: &[Tri]) -> Option<usize> {
    let depths = naive_depths(tris);
    if depths.values().any(Option::is_none) {
        return None;
    }
    Some(depths.values().map(|d| d.unwrap() + 1).max().unwrap_or(0))
}

fn vertex_set(tris: &[Tri]) -> Vec<u32> {
    let s: BTreeSet<u32> = tris.iter().flatten().copied().collect();
    s.into_iter().collect()
}

fn sorted(mut t: Tri) -> Tri {
    t.sort_unstable();
    t
}

/// Searches injective maps from `0..k` into `0..m`, slot by slot. `ok` sees each partial
/// map after its last slot is filled and prunes when it returns false.
fn injections(k: usize, m: usize, ok: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(k: usize, m: usize, used: &mut [bool], cur: &mut Vec<usize>, ok: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return true;
        }
        for x in 0..m {
            if used[x] {
                continue;
            }
            used[x] = true;
            cur.push(x);
            let hit = ok(cur) && rec(k, m, used, cur, ok);
            cur.pop();
            used[x] = false;
            if hit {
                return true;
            }
        }
        false
    }
    rec(k, m, &mut vec![false; m], &mut Vec::with_capacity(k), ok)
}

/// Whether every triangle of `tris` whose vertices (as indices into `verts`) all lie in
/// the partial map `img` lands in `target`, checking only triangles completed by the last
/// slot.
fn partial_ok(tris: &[Tri], verts: &[u32], target_verts: &[u32], img: &[usize], target: &BTreeSet<Tri>) -> bool {
    let last = img.len() - 1;
    let index = |v: u32| verts.binary_search(&v).unwrap();
    tris.iter().all(|t| {
        let idx = t.map(index);
        if idx.iter().any(|&i| i > last) || !idx.contains(&last) {
            return true;
        }
        target.contains(&sorted(idx.map(|i| target_verts[img[i]])))
    })
}

/// Whether some injective vertex map sends every triangle of `pattern` to a triangle of
/// `host`.
pub fn brute_embeds(pattern: &[Tri], host: &[Tri]) -> bool {
    let pv = vertex_set(pattern);
    let hv = vertex_set(host);
    if pv.len() > hv.len() {
        return false;
    }
    let host_set: BTreeSet<Tri> = host.iter().copied().collect();
    injections(pv.len(), hv.len(), &mut |img| partial_ok(pattern, &pv, &hv, img, &host_set))
}

/// Isomorphism of pure parts by searching bijections; with an anchor, the bijection must
/// carry the first anchor triangle onto the second.
pub fn brute_isomorphic(a: &[Tri], b: &[Tri], anchor: Option<(Tri, Tri)>) -> bool {
    let av = vertex_set(a);
    let bv = vertex_set(b);
    if av.len() != bv.len() || a.len() != b.len() {
        return false;
    }
    let b_set: BTreeSet<Tri> = b.iter().copied().collect();
    let anchor_a: Vec<Tri> = anchor.map(|(x, _)| vec![x]).unwrap_or_default();
    let anchor_b: BTreeSet<Tri> = anchor.map(|(_, y)| y).into_iter().collect();
    // same face count and an injective triangle map make the map onto
    injections(av.len(), bv.len(), &mut |img| {
        partial_ok(a, &av, &bv, img, &b_set) && partial_ok(&anchor_a, &av, &bv, img, &anchor_b)
    })
}

/// `min |V(F)|/|F|` over nonempty face subsets, as `(v, f)` in lowest terms.
pub fn brute_mu_tilde(tris: &[Tri]) -> (u64, u64) {
    assert!(!tris.is_empty() && tris.len() <= 20);
    let mut best = (u64::MAX, 1u64);
    for mask in 1u32..(1 << tris.len()) {
        let chosen: Vec<Tri> = (0..tris.len()).filter(|i| mask >> i & 1 == 1).map(|i| tris[i]).collect();
        let v = vertex_set(&chosen).len() as u64;
        let f = chosen.len() as u64;
        if best.0 == u64::MAX || v * best.1 < best.0 * f {
            best = (v, f);
        }
    }
    let g = gcd(best.0, best.1);
    (best.0 / g, best.1 / g)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Breadth-first dual distances from `source`; `None` when unreachable.
pub fn naive_dual_distances(tris: &[Tri], source: usize) -> Vec<Option<usize>> {
    let shares_edge = |x: Tri, y: Tri| x.iter().filter(|v| y.contains(v)).count() == 2;
    let mut dist = vec![None; tris.len()];
    dist[source] = Some(0);
    let mut frontier = vec![source];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for j in 0..tris.len() {
                if dist[j].is_none() && shares_edge(tris[i], tris[j]) {
                    dist[j] = Some(d);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Every isomorphism type (center-preserving) of complexes satisfying the catalog
/// conditions for `k ≤ 1`, found by listing all vertex-labeled complexes with center
/// `(0,1,2)` whose other triangles each share an edge with the center.
pub fn oracle_catalog(k: usize, r: usize) -> Vec<Vec<Tri>> {
    assert!(k <= 1 && r >= 2);
    let center = [0, 1, 2];
    if k == 0 {
        return vec![vec![center]];
    }
    // at most r-1 extra triangles per center edge, each adding at most one vertex
    let n = 3 + 3 * (r as u32 - 1);
    let per_edge: Vec<Vec<Tri>> = edges_of(center)
        .iter()
        .map(|&[a, b]| (3..n).map(|x| sorted([a, b, x])).collect())
        .collect();
    let mut choices: Vec<Vec<Vec<Tri>>> = Vec::new();
    for list in &per_edge {
        let mut subsets = Vec::new();
        for mask in 0u32..(1 << list.len()) {
            if (mask.count_ones() as usize) < r {
                subsets.push((0..list.len()).filter(|i| mask >> i & 1 == 1).map(|i| list[i]).collect());
            }
        }
        choices.push(subsets);
    }
    let mut types: Vec<Vec<Tri>> = Vec::new();
    for s0 in &choices[0] {
        for s1 in &choices[1] {
            for s2 in &choices[2] {
                let mut tris = vec![center];
                tris.extend(s0.iter().chain(s1).chain(s2));
                if !is_member_k1(&tris, r) {
                    continue;
                }
                // canonical labels: vertices used must be exactly 0..v
                let verts = vertex_set(&tris);
                if verts.last().copied() != Some(verts.len() as u32 - 1) {
                    continue;
                }
                if !types.iter().any(|t| brute_isomorphic(t, &tris, Some((center, center)))) {
                    types.push(tris);
                }
            }
        }
    }
    types
}

fn is_member_k1(tris: &[Tri], r: usize) -> bool {
    let d = degrees(tris);
    if d.values().any(|&x| x > r) {
        return false;
    }
    let boundary = d.values().any(|&x| x == 1);
    if boundary {
        let depths = naive_depths(tris);
        depths[&[0, 1, 2]] == Some(1)
    } else {
        true
    }
}

pub fn triangle(t: Tri) -> Triangle {
    Triangle::new(t[0], t[1], t[2]).unwrap()
}
