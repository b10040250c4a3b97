//! For complexes whose edges lie in at most `r` triangles, failing to collapse in `k`
//! steps is the same as containing a member of `L(k, r)`.

mod common;

use common::*;
use rand::Rng;
use tricollapse::catalog::{enumerate_l, CatalogLimits};
use tricollapse::collapse::is_collapsible;
use tricollapse::embedding::PatternSet;
use tricollapse::random::{sample, ModelParams};
use tricollapse::Complex2;

/// Hosts on at most 9 vertices with maximal edge degree at most `r`: half built greedily
/// under the cap, half sampled from the random model and filtered.
fn hosts(seed: u64, r: usize, count: usize) -> Vec<Complex2> {
    let mut g = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0u64;
    while out.len() < count {
        let n = g.random_range(4..=9u32);
        let c = if out.len() % 2 == 0 {
            capped_complex(&mut g, n, r)
        } else {
            draws += 1;
            let p = g.random_range(0.05..0.3);
            sample(&ModelParams::new(n as usize, p, seed ^ draws).unwrap()).unwrap()
        };
        if c.max_degree() <= r {
            out.push(c);
        }
    }
    out
}

fn check(k: usize, r: usize, count: usize, seed: u64) -> (usize, usize) {
    let cat = enumerate_l(k, r, CatalogLimits::derived(k, r)).unwrap();
    assert!(!cat.truncated);
    let patterns = PatternSet::from_catalog(&cat.members).unwrap();
    let mut blocked = 0;
    for y in hosts(seed, r, count) {
        let stuck = !is_collapsible(&y, k);
        let hit = patterns.first_match(&y);
        assert_eq!(stuck, hit.is_some(), "k={k} r={r} host {:?}", raw(&y));
        blocked += stuck as usize;
    }
    (blocked, count)
}

#[test]
fn k0() {
    for r in [2, 3] {
        let (blocked, n) = check(0, r, 500, 1);
        assert!(blocked > 0 && blocked < n);
    }
}

#[test]
fn k1_r2() {
    let (blocked, n) = check(1, 2, 1000, 2);
    assert!(blocked > 50 && blocked < n - 50, "{blocked}/{n}");
}

#[test]
fn k1_r3() {
    let (blocked, n) = check(1, 3, 600, 3);
    assert!(blocked > 30 && blocked < n - 30, "{blocked}/{n}");
}

#[test]
fn k1_r4() {
    check(1, 4, 300, 4);
}

#[test]
fn k2_r2() {
    let (blocked, n) = check(2, 2, 600, 5);
    assert!(blocked > 0 && blocked < n, "{blocked}/{n}");
}
