mod common;

use common::*;
use distinguish::colouring::{
    distinguishing_probability_exact, find_tree_automorphism, preserves_partial,
    russel_sundaram_bound, Colouring, PartialColouring, SeededRng,
};
use distinguish::exact::ratio;
use distinguish::graph::named::{corpus, cycle, path, star};
use distinguish::Caps;
use itertools::Itertools;

#[test]
fn partial_preservation_matches_extension_oracle() {
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.vertex_count() <= 6) {
        let n = g.vertex_count();
        let autos = brute_automorphisms(&g);
        for size in 0..=4.min(n) {
            for domain in (0..n).combinations(size) {
                for colours in all_colourings(size, 2) {
                    let c = PartialColouring::new(domain.clone(), colours).unwrap();
                    for p in &autos {
                        assert_eq!(
                            preserves_partial(p, &c).unwrap(),
                            two_extension_oracle(p, &c),
                            "{name} {c:?} {p}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn exact_probability_matches_enumeration() {
    let caps = Caps::default();
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.vertex_count() <= 7) {
        let autos = brute_automorphisms(&g);
        let n = g.vertex_count();
        let good = all_colourings(n, 2)
            .iter()
            .filter(|c| autos.iter().filter(|p| preserves_colours(c, p)).count() == 1)
            .count();
        let p = distinguishing_probability_exact(&g, 2, &caps).unwrap();
        assert_eq!(p.probability, ratio(good as u64, 1u64 << n), "{name}");
    }
}

#[test]
fn union_bound_holds_on_corpus() {
    let caps = Caps::default();
    for (name, g) in corpus() {
        let p = distinguishing_probability_exact(&g, 2, &caps).unwrap();
        let failure = ratio(1, 1) - p.probability;
        let r = russel_sundaram_bound(&g, 0, 0, &caps).unwrap();
        assert!(
            r.bound.dominates(&failure),
            "{name}: {failure} > {}",
            r.bound
        );
    }
    for g in [path(4), path(2)] {
        let p = distinguishing_probability_exact(&g, 2, &caps).unwrap();
        let r = russel_sundaram_bound(&g, 0, 0, &caps).unwrap();
        assert!(r.bound.equals(&(ratio(1, 1) - p.probability)));
    }
}

#[test]
fn tree_automorphism_on_small_trees() {
    // Star with three leaves: a swap exists unless all leaves differ, which
    // two colours cannot achieve.
    let s = star(3);
    for colours in all_colourings(4, 2) {
        let c = Colouring::new(colours, 2).unwrap();
        let p = find_tree_automorphism(&s, 0, &c).unwrap().unwrap();
        assert!(preserves_colours(&c.colours, &p));
        assert_eq!(p.image(0), 0);
    }
    // Path rooted at its centre: a swap exists exactly when the colouring is
    // symmetric.
    let p5 = path(5);
    for colours in all_colourings(5, 2) {
        let symmetric = colours[0] == colours[4] && colours[1] == colours[3];
        let c = Colouring::new(colours, 2).unwrap();
        assert_eq!(
            find_tree_automorphism(&p5, 2, &c).unwrap().is_some(),
            symmetric
        );
    }
    assert!(find_tree_automorphism(&cycle(5), 0, &Colouring::constant(5, 2)).is_err());
}

#[test]
fn seeded_streams_are_reproducible() {
    let a: Vec<u32> = {
        let mut r = SeededRng::new(5, 9);
        (0..64).map(|_| r.below(2)).collect()
    };
    let b: Vec<u32> = {
        let mut r = SeededRng::new(5, 9);
        (0..64).map(|_| r.below(2)).collect()
    };
    let c: Vec<u32> = {
        let mut r = SeededRng::new(5, 10);
        (0..64).map(|_| r.below(2)).collect()
    };
    assert_eq!(a, b);
    assert_ne!(a, c);
}
