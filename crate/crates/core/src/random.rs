//! The Linial–Meshulam random 2-complex `Y ~ G(Δ_n^(2), p)` and the statistics of its
//! edge degrees.
//!
//! Triangle `(i,j,k)` with colex rank `ρ` is included iff the `ρ`-th 64-bit word of a
//! ChaCha8 stream keyed by the seed falls below `p·2^64`. The decision for a triple is a
//! function of `(seed, ρ)` alone.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::complex::{Complex2, Edge, Triangle};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        let params = ModelParams { n, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter(format!("n must be at least 3, got {}", self.n)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0,1], got {}", self.p)));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {} is too large", self.n)));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d1_049b_b133_111b);
    z ^ (z >> 31)
}

/// Seed of one trial, derived from a base seed and a sequence of indices.
pub fn derive_seed(seed: u64, indices: &[u64]) -> u64 {
    indices.iter().fold(mix64(seed), |h, &i| mix64(h ^ mix64(i)))
}

/// Colex rank of the triple `i < j < k`: `C(k,3) + C(j,2) + i`.
pub fn colex_rank(t: Triangle) -> u64 {
    let [i, j, k] = t.vertices().map(u64::from);
    k * (k - 1) * (k - 2) / 6 + j * (j - 1) / 2 + i
}

/// Inclusion threshold on a uniform 64-bit word, or `None` when every triple is kept.
fn threshold(p: f64) -> Option<u64> {
    if p >= 1.0 {
        None
    } else {
        // p < 1, so the product is below 2^64
        Some((p * 18_446_744_073_709_551_616.0) as u64)
    }
}

fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The random word assigned to the triple of colex rank `rank`.
pub fn triple_word(seed: u64, rank: u64) -> u64 {
    let mut rng = stream(seed);
    rng.set_word_pos(2 * rank as u128);
    rng.next_u64()
}

/// Whether the triple is present in the sample with parameters `params`.
pub fn triple_included(params: &ModelParams, t: Triangle) -> bool {
    match threshold(params.p) {
        None => true,
        Some(th) => triple_word(params.seed, colex_rank(t)) < th,
    }
}

/// Draws `Y ~ G(Δ_n^(2), p)`. The result carries the full 1-skeleton.
pub fn sample(params: &ModelParams) -> Result<Complex2> {
    params.validate()?;
    let n = params.n as u32;
    let th = threshold(params.p);
    let mut rng = stream(params.seed);
    let mut tris = Vec::new();
    // colex order: the outer vertex is the largest
    for k in 2..n {
        for j in 1..k {
            for i in 0..j {
                let word = rng.next_u64();
                if th.is_none_or(|th| word < th) {
                    tris.push(Triangle::from_distinct(i, j, k));
                }
            }
        }
    }
    Ok(Complex2::with_full_skeleton(params.n, tris))
}

/// `counts[k]` is the number of edges of degree `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeHistogram {
    pub counts: Vec<u64>,
}

impl DegreeHistogram {
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn num_edges(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ k·X_k`, which equals three times the number of triangles.
    pub fn degree_sum(&self) -> u64 {
        self.counts.iter().enumerate().map(|(k, &c)| k as u64 * c).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

/// Degree counts over all edges of `c`. With a full skeleton, every pair of vertices is
/// counted; the histogram then has `n − 1` slots (degrees `0..=n−2`).
pub fn degree_histogram(c: &Complex2) -> DegreeHistogram {
    let mut degree: HashMap<Edge, usize> = HashMap::new();
    for t in c.triangles() {
        for e in t.edges() {
            *degree.entry(e).or_insert(0) += 1;
        }
    }
    let len = if c.has_full_skeleton() {
        c.n_vertices().saturating_sub(1).max(1)
    } else {
        degree.values().max().map_or(1, |&m| m + 1)
    };
    let mut counts = vec![0u64; len];
    for &d in degree.values() {
        counts[d] += 1;
    }
    let n_edges = c.num_edges() as u64;
    counts[0] += n_edges - degree.len() as u64;
    DegreeHistogram { counts }
}

/// `𝔼 X_k = C(n,2)·C(n−2,k)·p^k·(1−p)^(n−2−k)`, evaluated in log space.
pub fn expected_degree_count(n: usize, p: f64, k: usize) -> Result<f64> {
    if n < 2 || k > n - 2 {
        return Err(Error::InvalidParameter(format!("degree {k} out of range for n = {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0,1], got {p}")));
    }
    let m = (n - 2) as u64;
    let k64 = k as u64;
    let pairs = ln_binomial(n as u64, 2);
    // 0^0 = 1 at the endpoints
    let ln_p = if k == 0 { 0.0 } else { (k as f64) * p.ln() };
    let ln_q = if k64 == m { 0.0 } else { ((m - k64) as f64) * (1.0 - p).ln() };
    Ok((pairs + ln_binomial(m, k64) + ln_p + ln_q).exp())
}

/// First-moment bound `n^(2+r)·p^r / (1 − pn)` on the expected number of edges of degree
/// at least `r`.
pub fn high_degree_bound(n: usize, p: f64, r: usize) -> Result<f64> {
    let pn = p * n as f64;
    if !(0.0..=1.0).contains(&p) || pn >= 1.0 {
        return Err(Error::InvalidParameter(format!("the bound needs p·n < 1, got {pn}")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let n = n as f64;
    let ln = (2.0 + r as f64) * n.ln() + r as f64 * p.ln() - (1.0 - pn).ln();
    Ok(ln.exp())
}
