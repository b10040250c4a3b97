mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use tricollapse::collapse::{
    accessible_boundary, accessible_boundary_via, collapse_number, collapse_sequence, collapse_step,
    collapsing_paths, d_value, is_collapsible, Terminal,
};
use tricollapse::{Complex2, Edge, ExtNat};

fn complex() -> impl Strategy<Value = Complex2> {
    (4u32..=9, any::<u64>(), 0.05f64..0.5).prop_map(|(n, seed, p)| random_complex(&mut rng(seed), n, p))
}

fn capped() -> impl Strategy<Value = Complex2> {
    (5u32..=9, any::<u64>(), 2usize..=3).prop_map(|(n, seed, r)| capped_complex(&mut rng(seed), n, r))
}

fn either() -> impl Strategy<Value = Complex2> {
    prop_oneof![complex(), capped()]
}

fn oracle_depth(d: Option<usize>) -> ExtNat {
    d.map_or(ExtNat::Infinite, ExtNat::Finite)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn depths_match_simulation(c in either()) {
        let oracle = naive_depths(&raw(&c));
        let trace = collapse_sequence(&c);
        for t in c.triangles() {
            prop_assert_eq!(trace.d_values[t], oracle_depth(oracle[&t.vertices()]));
            prop_assert_eq!(d_value(&c, *t).unwrap(), trace.d_values[t]);
        }
        prop_assert_eq!(collapse_number(&c), oracle_depth(naive_collapse_number(&raw(&c))));
    }

    #[test]
    fn trace_invariants(c in either()) {
        let trace = collapse_sequence(&c);
        for (i, stage) in trace.stages.iter().enumerate() {
            for t in c.triangles() {
                prop_assert_eq!(stage.contains(t), trace.d_values[t] >= ExtNat::Finite(i));
            }
        }
        for t in c.triangles() {
            let free = t.edges().iter().any(|e| c.edge_degree(*e).unwrap() == 1);
            prop_assert_eq!(free, trace.d_values[t] == ExtNat::Finite(0));
        }
        match trace.terminal {
            Terminal::Graph { steps } => {
                prop_assert!(trace.stages.last().unwrap().is_empty());
                prop_assert_eq!(trace.stages.len(), steps + 1);
            }
            Terminal::ClosedResidue { at_step } => {
                let last = trace.stages.last().unwrap();
                prop_assert_eq!(trace.stages.len(), at_step + 1);
                prop_assert!(!last.is_empty());
                prop_assert!(c.subcomplex(last).is_closed());
            }
        }
    }

    #[test]
    fn step_removes_exactly_the_free_triangles(c in either()) {
        let next = collapse_step(&c);
        let d = degrees(&raw(&c));
        let expected: Vec<Tri> = raw(&c)
            .into_iter()
            .filter(|t| edges_of(*t).iter().all(|e| d[e] >= 2))
            .collect();
        prop_assert_eq!(raw(&next), expected);
        prop_assert_eq!(collapse_step(&c), next);
    }

    #[test]
    fn collapsible_iff_depths_bounded(c in either(), k in 0usize..5) {
        let trace = collapse_sequence(&c);
        let bounded = trace.d_values.values().all(|d| *d <= ExtNat::Finite(k));
        prop_assert_eq!(is_collapsible(&c, k + 1), bounded);
        prop_assert_eq!(is_collapsible(&c, 0), c.num_triangles() == 0);
    }

    #[test]
    fn depth_is_monotone_under_subcomplexes(c in either(), seed in any::<u64>()) {
        let z = random_sub(&mut rng(seed), &c, 0.7);
        for t in z.triangles() {
            prop_assert!(d_value(&z, *t).unwrap() <= d_value(&c, *t).unwrap());
        }
    }

    #[test]
    fn collapsibility_passes_to_subcomplexes(c in either(), seed in any::<u64>(), k in 0usize..4) {
        let z = random_sub(&mut rng(seed), &c, 0.6);
        if is_collapsible(&c, k) {
            prop_assert!(is_collapsible(&z, k));
        }
    }

    #[test]
    fn free_edge_structure(c in either()) {
        // a triangle at finite positive depth k has an edge whose other triangles all lie
        // strictly below k, one of them exactly at k - 1
        let trace = collapse_sequence(&c);
        for t in c.triangles() {
            let ExtNat::Finite(k) = trace.d_values[t] else { continue };
            if k == 0 {
                continue;
            }
            let witnessed = t.edges().iter().any(|e| {
                let others: Vec<ExtNat> = c
                    .triangles()
                    .iter()
                    .filter(|s| *s != t && s.contains_edge(*e))
                    .map(|s| trace.d_values[s])
                    .collect();
                others.iter().all(|d| *d < ExtNat::Finite(k)) && others.contains(&ExtNat::Finite(k - 1))
            });
            prop_assert!(witnessed, "triangle {t} at depth {k}");
        }
    }

    #[test]
    fn paths_are_collapsing_paths(c in either()) {
        let trace = collapse_sequence(&c);
        for t in c.triangles() {
            let d = trace.d_values[t];
            let Some(k) = d.finite() else {
                prop_assert!(collapsing_paths(&c, *t, 1000).is_err());
                prop_assert!(accessible_boundary(&c, *t).unwrap().is_empty());
                continue;
            };
            let set = collapsing_paths(&c, *t, 100_000).unwrap();
            prop_assert!(!set.paths.is_empty());
            let mut starts = BTreeSet::new();
            for path in &set.paths {
                prop_assert_eq!(path.simplices.len(), k + 1);
                prop_assert_eq!(path.end(), *t);
                for (i, s) in path.simplices.iter().enumerate() {
                    prop_assert_eq!(trace.d_values[s], ExtNat::Finite(i));
                }
                for w in path.simplices.windows(2) {
                    prop_assert!(w[0].shared_edge(&w[1]).is_some());
                }
                starts.insert(path.start());
            }
            if !set.truncated {
                let expected: BTreeSet<Edge> = starts
                    .iter()
                    .flat_map(|s| s.edges())
                    .filter(|e| c.edge_degree(*e).unwrap() == 1)
                    .collect();
                let got: BTreeSet<Edge> = accessible_boundary(&c, *t).unwrap().into_iter().collect();
                prop_assert!(!got.is_empty());
                prop_assert_eq!(got, expected);
            }
            if k >= 1 {
                let union: BTreeSet<Edge> = t
                    .edges()
                    .iter()
                    .flat_map(|e| accessible_boundary_via(&c, *t, *e).unwrap())
                    .collect();
                let whole: BTreeSet<Edge> = accessible_boundary(&c, *t).unwrap().into_iter().collect();
                prop_assert_eq!(union, whole);
            } else {
                prop_assert!(accessible_boundary_via(&c, *t, t.edges()[0]).is_err());
            }
        }
    }

    #[test]
    fn covering_the_accessible_boundary_deepens(z in capped(), seed in any::<u64>(), extra in 0usize..3) {
        // Y is Z with a fresh triangle glued on every accessible boundary edge of sigma,
        // plus a few random triangles on the old vertices
        prop_assume!(z.num_triangles() > 0);
        let mut r = rng(seed);
        let sigma = z.triangles()[r.random_range(0..z.num_triangles())];
        let access = accessible_boundary(&z, sigma).unwrap();
        let n0 = z.n_vertices() as u32;
        let mut tris = raw(&z);
        for (i, e) in access.iter().enumerate() {
            let [a, b] = e.vertices();
            tris.push([a, b, n0 + i as u32]);
        }
        let all = all_triples(n0);
        for _ in 0..extra {
            tris.push(all[r.random_range(0..all.len())]);
        }
        tris.sort_unstable();
        tris.dedup();
        let y = pure(n0 + access.len() as u32, &tris);
        prop_assert!(access.iter().all(|e| y.edge_degree(*e).unwrap() != 1));
        let (dz, dy) = (d_value(&z, sigma).unwrap(), d_value(&y, sigma).unwrap());
        prop_assert!(dz.succ() <= dy, "D_Z = {dz}, D_Y = {dy}");
    }

    #[test]
    fn boundary_cover_on_random_pairs(y in either(), seed in any::<u64>()) {
        // whenever the hypothesis happens to hold for a random sub-pair, so does the claim
        let z = random_sub(&mut rng(seed), &y, 0.75);
        for sigma in z.triangles() {
            let access = accessible_boundary(&z, *sigma).unwrap();
            if access.iter().all(|e| y.edge_degree(*e).unwrap() != 1) {
                prop_assert!(d_value(&z, *sigma).unwrap().succ() <= d_value(&y, *sigma).unwrap());
            }
        }
    }
}
