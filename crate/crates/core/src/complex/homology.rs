//! Mod-2 boundary matrix of the triangles: rank, second homology, minimal 2-cycles.

use std::collections::HashMap;

use super::{Complex2, Edge, Triangle};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[cfg(test)]
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn first_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// Row-reduces the boundary rows of `tris`. Returns the rank and a basis of the kernel,
/// each kernel vector given as a set of indices into `tris`.
fn reduce(tris: &[Triangle]) -> (usize, Vec<Vec<usize>>) {
    let mut edge_index: HashMap<Edge, usize> = HashMap::new();
    for t in tris {
        for e in t.edges() {
            let next = edge_index.len();
            edge_index.entry(e).or_insert(next);
        }
    }
    let n_edges = edge_index.len();
    // pivot column -> (row, combination of triangles producing it)
    let mut pivots: HashMap<usize, (Bits, Bits)> = HashMap::new();
    let mut kernel = Vec::new();
    for (i, t) in tris.iter().enumerate() {
        let mut row = Bits::zeros(n_edges);
        for e in t.edges() {
            row.set(edge_index[&e]);
        }
        let mut combo = Bits::zeros(tris.len());
        combo.set(i);
        while let Some(col) = row.first_one() {
            match pivots.get(&col) {
                Some((prow, pcombo)) => {
                    row.xor(prow);
                    combo.xor(pcombo);
                }
                None => break,
            }
        }
        match row.first_one() {
            Some(col) => {
                pivots.insert(col, (row, combo));
            }
            None => kernel.push(combo.ones().collect()),
        }
    }
    (pivots.len(), kernel)
}

/// Rank of H₂(c; Z/2), i.e. `f - rank₂(∂₂)`.
pub fn h2_rank_mod2(c: &Complex2) -> usize {
    reduce(c.triangles()).1.len()
}

/// An inclusion-minimal nonzero mod-2 2-cycle, as a sorted list of triangles, or `None`
/// when H₂(c; Z/2) vanishes.
pub fn minimal_cycle_mod2(c: &Complex2) -> Option<Vec<Triangle>> {
    let (_, kernel) = reduce(c.triangles());
    let mut support: Vec<Triangle> = kernel.first()?.iter().map(|&i| c.triangles()[i]).collect();
    loop {
        let (_, sub) = reduce(&support);
        if sub.len() == 1 {
            // the unique cycle on this support is the support itself
            support.sort_unstable();
            return Some(support);
        }
        let smaller = sub
            .into_iter()
            .find(|k| k.len() < support.len())
            .expect("two independent cycles cannot both fill the support");
        support = smaller.into_iter().map(|i| support[i]).collect();
    }
}
