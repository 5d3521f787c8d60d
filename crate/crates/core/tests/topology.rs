mod common;

use std::collections::HashSet;

use common::*;
use distinguish::exact::ratio;
use distinguish::graph::named::{corpus, cycle, hypercube};
use distinguish::permgroup::automorphism_group;
use distinguish::topology::{
    ball_decomposition, conf, delta, expected_stabiliser_measure, haar_fraction, Confluent,
    ExhaustionSequence,
};
use distinguish::{Caps, Permutation};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

fn agree_on(a: &Permutation, b: &Permutation, set: &[usize]) -> bool {
    set.iter().all(|&s| a.image(s) == b.image(s))
}

/// Confluent from its definition: the largest `i` such that
/// `γ1 γ2⁻¹` fixes `S_i` pointwise.
fn conf_oracle(a: &Permutation, b: &Permutation, seq: &ExhaustionSequence) -> Confluent {
    if a == b {
        return Confluent::Equal;
    }
    let d = a.compose(&b.inverse()).unwrap();
    let mut i = 0;
    while i < seq.len() && seq.set(i + 1).iter().all(|&s| d.image(s) == s) {
        i += 1;
    }
    Confluent::Level(i)
}

fn sequences(n: usize) -> Vec<ExhaustionSequence> {
    let g = cycle(n);
    vec![
        ExhaustionSequence::balls(&g, 0).unwrap(),
        ExhaustionSequence::prefixes(n).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conf_matches_definition(i in 0usize..16, j in 0usize..16) {
        let g = cycle(8);
        let elems: Vec<Permutation> = automorphism_group(&g, None).unwrap().elements(100).unwrap().collect();
        let (a, b) = (&elems[i], &elems[j]);
        for seq in sequences(8) {
            prop_assert_eq!(conf(a, b, &seq).unwrap(), conf_oracle(a, b, &seq));
        }
    }

    #[test]
    fn delta_is_right_invariant(i in 0usize..48, j in 0usize..48, k in 0usize..48) {
        let group = automorphism_group(&hypercube(3), None).unwrap();
        let elems: Vec<Permutation> = group.elements(100).unwrap().collect();
        let seq = ExhaustionSequence::balls(&hypercube(3), 0).unwrap();
        let (a, b, s) = (&elems[i], &elems[j], &elems[k]);
        let right = delta(&a.compose(s).unwrap(), &b.compose(s).unwrap(), &seq).unwrap();
        prop_assert_eq!(right, delta(a, b, &seq).unwrap());
        prop_assert_eq!(delta(a, b, &seq).unwrap(), delta(b, a, &seq).unwrap());
    }
}

#[test]
fn delta_is_not_left_invariant() {
    let g = cycle(8);
    let seq = ExhaustionSequence::balls(&g, 0).unwrap();
    let id = Permutation::identity(8);
    let refl = Permutation::from_images((0..8).map(|i| (8 - i) % 8).collect()).unwrap();
    let rot = Permutation::from_images((0..8).map(|i| (i + 1) % 8).collect()).unwrap();
    // δ(refl, id) = 1/2, but conjugating the reflection away from the root
    // through a left translation gives distance 1.
    let left = delta(&rot.compose(&refl).unwrap(), &rot, &seq).unwrap();
    assert_eq!(delta(&refl, &id, &seq).unwrap().to_rational(), ratio(1, 2));
    assert_eq!(left.to_rational(), ratio(1, 1));
}

#[test]
fn ultrametric_on_random_triples() {
    for (graph, seqs) in [
        (cycle(8), sequences(8)),
        (
            hypercube(3),
            vec![
                ExhaustionSequence::balls(&hypercube(3), 0).unwrap(),
                ExhaustionSequence::prefixes(8).unwrap(),
            ],
        ),
    ] {
        let elems: Vec<Permutation> = automorphism_group(&graph, None)
            .unwrap()
            .elements(100)
            .unwrap()
            .collect();
        let mut rng = distinguish::colouring::SeededRng::new(2024, 0);
        for seq in &seqs {
            for _ in 0..2000 {
                let pick = |rng: &mut distinguish::colouring::SeededRng| {
                    &elems[rng.below(elems.len() as u32) as usize]
                };
                let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let ac = delta(a, c, seq).unwrap();
                let bound = delta(a, b, seq).unwrap().max(delta(b, c, seq).unwrap());
                assert!(ac <= bound);
            }
        }
    }
}

#[test]
fn balls_partition_the_group() {
    for (name, g) in corpus() {
        let group = automorphism_group(&g, None).unwrap();
        let order = group.order();
        let all: HashSet<Permutation> = group.elements(1 << 20).unwrap().collect();
        let seq = ExhaustionSequence::balls(&g, 0).unwrap();
        for level in 0..=seq.len() {
            let dec = ball_decomposition(&group, &seq, level, None, 1 << 20).unwrap();
            let mut seen = HashSet::new();
            for ball in &dec.balls {
                let members = ball.members.as_ref().unwrap();
                assert!((&order % &ball.size).is_zero(), "{name}");
                for m in members {
                    assert!(seen.insert(m.clone()), "{name}: balls overlap");
                    // Every member is within the radius of the representative,
                    // i.e. the inverses agree on S_level.
                    assert!(agree_on(
                        &m.inverse(),
                        &ball.representative.inverse(),
                        seq.set(level)
                    ));
                }
            }
            assert_eq!(seen, all, "{name}: balls do not cover the group");
        }
    }
}

#[test]
fn c4_has_four_balls_of_size_two() {
    let g = cycle(4);
    let group = automorphism_group(&g, None).unwrap();
    let seq = ExhaustionSequence::new(4, vec![vec![0], vec![0, 1, 3], vec![0, 1, 2, 3]]).unwrap();
    let dec = ball_decomposition(&group, &seq, 1, None, 100).unwrap();
    assert_eq!(dec.balls.len(), 4);
    assert!(dec.balls.iter().all(|b| b.size == BigUint::from(2u32)));
}

#[test]
fn haar_fraction_of_balls() {
    let g = hypercube(3);
    let group = automorphism_group(&g, None).unwrap();
    let seq = ExhaustionSequence::balls(&g, 0).unwrap();
    let dec = ball_decomposition(&group, &seq, 1, None, 100).unwrap();
    for ball in &dec.balls {
        let f = haar_fraction(ball.members.as_ref().unwrap(), &group).unwrap();
        assert_eq!(f, ratio(1, 8));
    }
}

#[test]
fn measure_routes_agree_with_brute_force() {
    let caps = Caps::default();
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.vertex_count() <= 6) {
        let brute = brute_automorphisms(&g);
        let n = g.vertex_count();
        let fixed: usize = all_colourings(n, 2)
            .iter()
            .map(|c| brute.iter().filter(|p| preserves_colours(c, p)).count())
            .sum();
        let expected = ratio(fixed as u64, (brute.len() as u64) << n);
        let m = expected_stabiliser_measure(&g, 2, &caps).unwrap();
        assert_eq!(m.colour_first, expected, "{name}");
        assert_eq!(m.group_first, expected, "{name}");
    }
}
