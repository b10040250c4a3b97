//! The density invariants `μ(S) = v/f` and `μ̃(S) = min μ(S')` over nonempty
//! subcomplexes.
//!
//! The minimum is attained on a set of triangles together with the vertices they span
//! (isolated vertices only raise the ratio), so `μ̃` is a search over nonempty face
//! subsets. Small complexes are searched exhaustively in Gray-code order; larger ones by
//! branch-and-bound. All comparisons are exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::complex::{Complex2, Incidence, Triangle};
use crate::error::{Error, Result};

/// Largest face count searched exhaustively by [`mu_tilde`].
pub const EXHAUSTIVE_MAX_FACES: usize = 22;

/// An exact rational number in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 1)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::ops::Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMethod {
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuResult {
    pub value: Rational,
    /// A nonempty set of triangles attaining `value`, sorted.
    pub witness: Vec<Triangle>,
    pub method: MuMethod,
}

/// `v/f`, counting every vertex of the complex (isolated ones included).
pub fn mu(c: &Complex2) -> Result<Rational> {
    let f = c.num_triangles();
    if f == 0 {
        return Err(Error::NoTriangles);
    }
    Ok(Rational::new(c.n_vertices() as i64, f as i64))
}

/// `v/f` of the pure subcomplex spanned by `triangles`.
pub fn mu_of_faces(triangles: &[Triangle]) -> Result<Rational> {
    if triangles.is_empty() {
        return Err(Error::NoTriangles);
    }
    let mut verts: Vec<u32> = triangles.iter().flat_map(|t| t.vertices()).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut tris = triangles.to_vec();
    tris.sort_unstable();
    tris.dedup();
    Ok(Rational::new(verts.len() as i64, tris.len() as i64))
}

/// `μ̃`: exhaustive up to [`EXHAUSTIVE_MAX_FACES`] faces, branch-and-bound beyond.
pub fn mu_tilde(c: &Complex2) -> Result<MuResult> {
    if c.num_triangles() <= EXHAUSTIVE_MAX_FACES {
        mu_tilde_exhaustive(c)
    } else {
        mu_tilde_branch_and_bound(c)
    }
}

pub fn is_balanced(c: &Complex2) -> Result<bool> {
    Ok(mu_tilde(c)?.value == mu(c)?)
}

/// `max μ̃` over a catalog.
pub fn mu_tilde_max<'a, I: IntoIterator<Item = &'a Complex2>>(catalog: I) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for c in catalog {
        let v = mu_tilde(c)?.value;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptyCatalog)
}

/// Triangles as bitmasks over a compact vertex numbering.
struct FaceSystem {
    faces: Vec<[usize; 3]>,
    n_vertices: usize,
}

impl FaceSystem {
    fn new(tris: &[Triangle]) -> Self {
        let mut verts: Vec<u32> = tris.iter().flat_map(|t| t.vertices()).collect();
        verts.sort_unstable();
        verts.dedup();
        let idx = |v: u32| verts.binary_search(&v).unwrap();
        FaceSystem {
            faces: tris
                .iter()
                .map(|t| {
                    let [a, b, c] = t.vertices();
                    [idx(a), idx(b), idx(c)]
                })
                .collect(),
            n_vertices: verts.len(),
        }
    }
}

/// `v₁/f₁ < v₂/f₂` for positive denominators.
fn ratio_lt(v1: u64, f1: u64, v2: u64, f2: u64) -> bool {
    v1 * f2 < v2 * f1
}

/// Whether the sorted index list of `a` precedes that of `b` lexicographically.
fn lex_lt(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let d = diff.trailing_zeros();
    let above = if d == 63 { 0 } else { u64::MAX << (d + 1) };
    if a >> d & 1 == 1 {
        // a has the smaller element at the first difference unless b already ended
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Exhaustive search over all `2^f − 1` nonempty face subsets. Ties are broken towards
/// the lexicographically smallest sorted index list.
pub fn mu_tilde_exhaustive(c: &Complex2) -> Result<MuResult> {
    let tris = c.triangles();
    let f = tris.len();
    if f == 0 {
        return Err(Error::NoTriangles);
    }
    if f > 30 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search over {f} faces is not supported"
        )));
    }
    let sys = FaceSystem::new(tris);
    let mut count = vec![0u32; sys.n_vertices];
    let (mut v, mut nf, mut mask) = (0u64, 0u64, 0u64);
    let (mut best_v, mut best_f, mut best_mask) = (u64::MAX, 1u64, 0u64);
    for i in 1u64..(1 << f) {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask >> bit & 1 == 1 {
            nf += 1;
            for &w in &sys.faces[bit] {
                count[w] += 1;
                if count[w] == 1 {
                    v += 1;
                }
            }
        } else {
            nf -= 1;
            for &w in &sys.faces[bit] {
                count[w] -= 1;
                if count[w] == 0 {
                    v -= 1;
                }
            }
        }
        let better = best_v == u64::MAX
            || ratio_lt(v, nf, best_v, best_f)
            || (v * best_f == best_v * nf && lex_lt(mask, best_mask));
        if better {
            (best_v, best_f, best_mask) = (v, nf, mask);
        }
    }
    let witness = (0..f).filter(|i| best_mask >> i & 1 == 1).map(|i| tris[i]).collect();
    Ok(MuResult {
        value: Rational::new(best_v as i64, best_f as i64),
        witness,
        method: MuMethod::Exhaustive,
    })
}

/// Fixed-point scale for the fractional vertex costs of the lower bound.
const SCALE: u64 = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq)]
enum FaceState {
    Open,
    In,
    Out,
}

struct Bnb {
    faces: Vec<[usize; 3]>,
    order: Vec<usize>,
    state: Vec<FaceState>,
    in_count: Vec<u32>,
    open_count: Vec<u32>,
    v_in: u64,
    f_in: u64,
    best_v: u64,
    best_f: u64,
    best_set: Vec<usize>,
    nodes: u64,
}

impl Bnb {
    fn include(&mut self, t: usize) {
        self.state[t] = FaceState::In;
        self.f_in += 1;
        for &w in &self.faces[t] {
            self.open_count[w] -= 1;
            self.in_count[w] += 1;
            if self.in_count[w] == 1 {
                self.v_in += 1;
            }
        }
    }

    fn exclude(&mut self, t: usize) {
        self.state[t] = FaceState::Out;
        for &w in &self.faces[t] {
            self.open_count[w] -= 1;
        }
    }

    fn reopen(&mut self, t: usize) {
        if self.state[t] == FaceState::In {
            self.f_in -= 1;
            for &w in &self.faces[t] {
                self.in_count[w] -= 1;
                if self.in_count[w] == 0 {
                    self.v_in -= 1;
                }
            }
        }
        for &w in &self.faces[t] {
            self.open_count[w] += 1;
        }
        self.state[t] = FaceState::Open;
    }

    fn record(&mut self) {
        if self.f_in > 0 && ratio_lt(self.v_in, self.f_in, self.best_v, self.best_f) {
            self.best_v = self.v_in;
            self.best_f = self.f_in;
            self.best_set = (0..self.faces.len())
                .filter(|&t| self.state[t] == FaceState::In)
                .collect();
        }
    }

    /// Whether some completion could beat the incumbent. Each vertex not yet covered
    /// costs 1, spread evenly over the open faces containing it; a completion's vertex
    /// count is at least the included count plus the costs of its added faces.
    fn promising(&self) -> bool {
        let mut costs: Vec<u64> = (0..self.faces.len())
            .filter(|&t| self.state[t] == FaceState::Open)
            .map(|t| {
                self.faces[t]
                    .iter()
                    .filter(|&&w| self.in_count[w] == 0)
                    .map(|&w| SCALE / self.open_count[w] as u64)
                    .sum()
            })
            .collect();
        costs.sort_unstable();
        let mut num = self.v_in * SCALE;
        let mut den = self.f_in;
        for c in costs {
            if den == 0 || c * den < num {
                num += c;
                den += 1;
            } else {
                break;
            }
        }
        // bound < best  <=>  num / (SCALE * den) < best_v / best_f
        den > 0 && (num as u128) * (self.best_f as u128) < (self.best_v as u128) * (SCALE as u128) * (den as u128)
    }

    fn search(&mut self, pos: usize) {
        self.nodes += 1;
        self.record();
        if pos == self.order.len() || !self.promising() {
            return;
        }
        let t = self.order[pos];
        let covered = self.faces[t].iter().all(|&w| self.in_count[w] > 0);
        self.include(t);
        self.search(pos + 1);
        self.reopen(t);
        // a face whose vertices are all covered only lowers the ratio
        if !covered {
            self.exclude(t);
            self.search(pos + 1);
            self.reopen(t);
        }
    }
}

/// Branch-and-bound over face subsets. Faces are decided in breadth-first dual order;
/// the incumbent starts from a greedy peeling of the whole complex.
pub fn mu_tilde_branch_and_bound(c: &Complex2) -> Result<MuResult> {
    let tris = c.triangles();
    if tris.is_empty() {
        return Err(Error::NoTriangles);
    }
    let sys = FaceSystem::new(tris);
    let order = dual_order(tris);
    let mut open_count = vec![0u32; sys.n_vertices];
    for f in &sys.faces {
        for &w in f {
            open_count[w] += 1;
        }
    }
    let (best_v, best_f, best_set) = greedy_peel(&sys);
    let mut bnb = Bnb {
        state: vec![FaceState::Open; sys.faces.len()],
        in_count: vec![0; sys.n_vertices],
        open_count,
        faces: sys.faces,
        order,
        v_in: 0,
        f_in: 0,
        best_v,
        best_f,
        best_set,
        nodes: 0,
    };
    bnb.search(0);
    let mut witness: Vec<Triangle> = bnb.best_set.iter().map(|&i| tris[i]).collect();
    witness.sort_unstable();
    Ok(MuResult {
        value: Rational::new(bnb.best_v as i64, bnb.best_f as i64),
        witness,
        method: MuMethod::BranchAndBound,
    })
}

/// Breadth-first order of the triangles in the dual graph, component by component.
fn dual_order(tris: &[Triangle]) -> Vec<usize> {
    let inc = Incidence::new(tris);
    let mut seen = vec![false; tris.len()];
    let mut order = Vec::with_capacity(tris.len());
    for root in 0..tris.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in inc.neighbors(tris, i) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    order
}

/// Repeatedly drops the face whose removal gives the smallest ratio, remembering the best
/// set seen. Returns `(v, f, faces)`.
fn greedy_peel(sys: &FaceSystem) -> (u64, u64, Vec<usize>) {
    let mut alive: Vec<usize> = (0..sys.faces.len()).collect();
    let mut count = vec![0u32; sys.n_vertices];
    for f in &sys.faces {
        for &w in f {
            count[w] += 1;
        }
    }
    let mut v = count.iter().filter(|&&c| c > 0).count() as u64;
    let mut best = (v, alive.len() as u64, alive.clone());
    while alive.len() > 1 {
        // removing a face frees the vertices only it covers
        let (pos, freed) = alive
            .iter()
            .enumerate()
            .map(|(p, &t)| (p, sys.faces[t].iter().filter(|&&w| count[w] == 1).count() as u64))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .unwrap();
        let t = alive.remove(pos);
        for &w in &sys.faces[t] {
            count[w] -= 1;
        }
        v -= freed;
        let f = alive.len() as u64;
        if ratio_lt(v, f, best.0, best.1) {
            best = (v, f, alive.clone());
        }
    }
    best
}

impl MuResult {
    pub fn cmp_value(&self, other: &MuResult) -> Ordering {
        self.value.cmp(&other.value)
    }
}
