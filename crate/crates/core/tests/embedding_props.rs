mod common;

use common::*;
use proptest::prelude::*;
use tricollapse::catalog::{enumerate_l, s_k, CatalogLimits};
use tricollapse::embedding::{contains_any, embeds};
use tricollapse::random::{sample, ModelParams};
use tricollapse::Complex2;

/// A connected-or-not pure pattern on at most 6 vertices.
fn pattern() -> impl Strategy<Value = Complex2> {
    (3u32..=6).prop_flat_map(|n| {
        let triples = all_triples(n);
        let cap = triples.len().min(6);
        prop::sample::subsequence(triples, 1..=cap).prop_map(move |t| pure(n, &t))
    })
}

fn host() -> impl Strategy<Value = Complex2> {
    (4u32..=9, any::<u64>(), 0.1f64..0.6).prop_map(|(n, seed, p)| random_complex(&mut rng(seed), n, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn matches_exhaustive_search(p in pattern(), h in host()) {
        let got = embeds(&p, &h).unwrap();
        prop_assert_eq!(got.is_some(), brute_embeds(&raw(&p), &raw(&h)));
        if let Some(w) = got {
            prop_assert!(w.is_valid(&p, &h));
        }
    }

    #[test]
    fn host_subcomplexes_embed(h in host(), seed in any::<u64>()) {
        let z = random_sub(&mut rng(seed), &h, 0.5);
        prop_assume!(z.num_triangles() > 0);
        let w = embeds(&z, &h).unwrap();
        prop_assert!(w.is_some());
        prop_assert!(w.unwrap().is_valid(&z, &h));
    }

    #[test]
    fn containment_is_hereditary(h in host(), seed in any::<u64>()) {
        let catalog = enumerate_l(1, 2, CatalogLimits::derived(1, 2)).unwrap().members;
        let z = random_sub(&mut rng(seed), &h, 0.5);
        if contains_any(&z, &catalog).unwrap().is_some() {
            prop_assert!(contains_any(&h, &catalog).unwrap().is_some());
        }
    }
}

#[test]
fn small_examples() {
    let tri = pure(3, &[[0, 1, 2]]);
    let tet = pure(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
    let s1 = s_k(1).complex;
    assert!(embeds(&tri, &s1).unwrap().is_some());
    assert!(embeds(&tet, &tet).unwrap().is_some());
    assert!(embeds(&s1, &tet).unwrap().is_none());
    let catalog = enumerate_l(1, 2, CatalogLimits::derived(1, 2)).unwrap().members;
    let (i, w) = contains_any(&s1, &catalog).unwrap().unwrap();
    assert!(w.is_valid(&catalog[i].complex, &s1));
    assert!(contains_any(&tri, &catalog).unwrap().is_none());
}

#[test]
fn catalog_containment_on_a_dense_host() {
    let catalog = enumerate_l(1, 2, CatalogLimits::derived(1, 2)).unwrap().members;
    let y = sample(&ModelParams::new(8, 0.5, 17).unwrap()).unwrap();
    let expected = catalog.iter().any(|m| brute_embeds(&raw(&m.complex), &raw(&y)));
    assert_eq!(contains_any(&y, &catalog).unwrap().is_some(), expected);
}
