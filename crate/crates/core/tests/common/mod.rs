//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the stabiliser chain or the refinement search.

#![allow(dead_code)]

use distinguish::colouring::PartialColouring;
use distinguish::{Graph, Permutation};
use itertools::Itertools;
use proptest::prelude::*;

/// All `n!` permutations of `0..n`.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (0..n)
        .permutations(n)
        .map(|images| Permutation::from_images(images).unwrap())
        .collect()
}

pub fn preserves_edges(g: &Graph, p: &Permutation) -> bool {
    g.edges().all(|(u, v)| g.has_edge(p.image(u), p.image(v)))
}

/// Automorphisms by testing every permutation; only for `n <= 8`.
pub fn brute_automorphisms(g: &Graph) -> Vec<Permutation> {
    assert!(
        g.vertex_count() <= 8,
        "brute force is limited to 8 vertices"
    );
    all_permutations(g.vertex_count())
        .into_iter()
        .filter(|p| preserves_edges(g, p))
        .collect()
}

/// `c(γ s) = c(s)` for all `s`.
pub fn preserves_colours(colours: &[u32], p: &Permutation) -> bool {
    (0..colours.len()).all(|s| colours[p.image(s)] == colours[s])
}

/// Every colouring of `0..n` with colours `0..k`, vertex 0 varying fastest.
pub fn all_colourings(n: usize, k: u32) -> Vec<Vec<u32>> {
    let total = (k as u64).pow(n as u32);
    (0..total)
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let d = (i % k as u64) as u32;
                    i /= k as u64;
                    d
                })
                .collect()
        })
        .collect()
}

/// Random simple graph on `n` vertices from an edge bitmask.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let edges: Vec<(usize, usize)> = pairs
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, mask)| graph_from_mask(n, mask))
}

/// Two-extension criterion by brute force: some total colourings `c1, c2`
/// extending `c'` satisfy `c1 γ = c2`. Colours outside the used range are
/// interchangeable, so one spare colour suffices for the free points.
pub fn two_extension_oracle(p: &Permutation, c: &PartialColouring) -> bool {
    let n = p.degree();
    let k = c.colours.iter().max().map_or(1, |m| m + 2);
    let table = c.table(n).unwrap();
    let free: Vec<usize> = (0..n).filter(|&v| table[v].is_none()).collect();
    (0..free.len())
        .map(|_| 0..k)
        .multi_cartesian_product()
        .chain(free.is_empty().then(Vec::new))
        .any(|vals| {
            let mut c1: Vec<u32> = table.iter().map(|x| x.unwrap_or(0)).collect();
            for (&v, &x) in free.iter().zip(&vals) {
                c1[v] = x;
            }
            // c2 = c1 γ must extend c'.
            c.domain
                .iter()
                .zip(&c.colours)
                .all(|(&s, &col)| c1[p.image(s)] == col)
        })
}
