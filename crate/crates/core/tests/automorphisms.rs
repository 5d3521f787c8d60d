mod common;

use std::collections::HashSet;

use common::*;
use distinguish::colouring::{colouring_stabiliser, Colouring, SeededRng};
use distinguish::graph::named::corpus;
use distinguish::permgroup::{automorphism_group, motion, motion_backtrack};
use distinguish::Permutation;
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn corpus_groups_match_brute_force() {
    for (name, g) in corpus() {
        let brute = brute_automorphisms(&g);
        let group = automorphism_group(&g, None).unwrap();
        assert_eq!(group.order(), BigUint::from(brute.len()), "{name}");
        assert!(brute.iter().all(|p| group.contains(p)), "{name}");
        let listed: HashSet<Permutation> = group.elements(1 << 20).unwrap().collect();
        assert_eq!(listed, brute.into_iter().collect(), "{name}");
    }
}

#[test]
fn corpus_motion_by_both_methods() {
    for (name, g) in corpus() {
        let brute = brute_automorphisms(&g);
        let expected = brute
            .iter()
            .filter(|p| !p.is_identity())
            .map(Permutation::motion)
            .min();
        let group = automorphism_group(&g, None).unwrap();
        assert_eq!(motion(&group, 1 << 20).motion, expected, "{name}");
        assert_eq!(motion_backtrack(&group).motion, expected, "{name}");
    }
}

#[test]
fn colouring_stabilisers_match_filtering() {
    for (name, g) in corpus() {
        let brute = brute_automorphisms(&g);
        for stream in 0..20 {
            let mut rng = SeededRng::new(99, stream);
            let colours: Vec<u32> = (0..g.vertex_count()).map(|_| rng.below(2)).collect();
            let c = Colouring::new(colours.clone(), 2).unwrap();
            let stab = colouring_stabiliser(&g, &c).unwrap();
            let expected = brute
                .iter()
                .filter(|p| preserves_colours(&colours, p))
                .count();
            assert_eq!(stab.order(), BigUint::from(expected), "{name} {c}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graphs_match_brute_force(g in small_graph(7)) {
        let brute = brute_automorphisms(&g);
        let group = automorphism_group(&g, None).unwrap();
        prop_assert_eq!(group.order(), BigUint::from(brute.len()));
        for p in &brute {
            prop_assert!(group.contains(p));
        }
        for p in group.strong_generators() {
            prop_assert!(preserves_edges(&g, &p));
        }
    }

    #[test]
    fn orbits_are_symmetric(g in small_graph(7)) {
        let group = automorphism_group(&g, None).unwrap();
        for s in 0..g.vertex_count() {
            for t in group.orbit(s).unwrap() {
                prop_assert!(group.orbit(t).unwrap().contains(&s));
                let phi = group.transporter(s, t).unwrap().unwrap();
                prop_assert_eq!(phi.image(s), t);
            }
        }
    }

    #[test]
    fn motion_methods_agree(g in small_graph(7)) {
        let group = automorphism_group(&g, None).unwrap();
        let a = motion(&group, 1 << 20);
        let b = motion_backtrack(&group);
        prop_assert_eq!(a.motion, b.motion);
        if let Some(w) = b.witness {
            prop_assert!(group.contains(&w));
            prop_assert!(!w.is_identity());
        }
    }

    #[test]
    fn coloured_groups_match_brute_force(g in small_graph(6), seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed, 0);
        let colours: Vec<u32> = (0..g.vertex_count()).map(|_| rng.below(3)).collect();
        let group = automorphism_group(&g, Some(&colours)).unwrap();
        let expected = brute_automorphisms(&g)
            .into_iter()
            .filter(|p| preserves_colours(&colours, p))
            .count();
        prop_assert_eq!(group.order(), BigUint::from(expected));
    }
}
