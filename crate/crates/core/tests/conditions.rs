mod common;

use std::collections::HashMap;

use distinguish::conditions::{
    dsc_check, gamma_classes, gamma_refinement_iterate, match_probability, sphere_classes,
    PairStatus, SphereParams, Truncation,
};
use distinguish::exact::{binomial, from_biguint, ratio};
use distinguish::graph::named::corpus;
use distinguish::graph::{generate_family, FamilySpec, Label};
use distinguish::permgroup::automorphism_group;
use num_bigint::BigUint;

/// For nested truncations, every comparison that is safe at the smaller
/// radius gives the same verdict at the larger one.
#[test]
fn dsc_safe_comparisons_survive_larger_truncations() {
    let specs: Vec<Box<dyn Fn(u32) -> FamilySpec>> = vec![
        Box::new(|r| FamilySpec::regular_tree(3, r)),
        Box::new(FamilySpec::double_ray),
        Box::new(|r| FamilySpec::grid(2, r)),
        Box::new(FamilySpec::ladder),
    ];
    for spec in specs {
        let (small, large) = (
            generate_family(&spec(4)).unwrap(),
            generate_family(&spec(6)).unwrap(),
        );
        let a = dsc_check(&small, Truncation { root: 0, radius: 4 }).unwrap();
        let b = dsc_check(&large, Truncation { root: 0, radius: 6 }).unwrap();
        let key = |g: &distinguish::Graph, x: usize, y: usize| {
            let (lx, ly) = (g.label(x), g.label(y));
            if lx <= ly {
                (lx, ly)
            } else {
                (ly, lx)
            }
        };
        let large_pairs: HashMap<(Label, Label), Option<u32>> = b
            .pairs
            .iter()
            .map(|p| (key(&large, p.x, p.y), p.first_separating_n))
            .collect();
        for p in a.pairs.iter().filter(|p| p.status != PairStatus::Horizon) {
            let there = large_pairs[&key(&small, p.x, p.y)];
            match p.first_separating_n {
                Some(n) => assert_eq!(there, Some(n)),
                // Not separated up to safe_max_n at the small radius: the
                // larger truncation must not separate earlier.
                None => assert!(there.is_none_or(|n| n > p.safe_max_n)),
            }
        }
    }
}

#[test]
fn match_probability_properties() {
    let mut prev = ratio(1, 1);
    for n in 1..=64u64 {
        let m = match_probability(n).probability;
        assert!(m <= ratio(1, 2));
        assert!(m < prev);
        let closed = from_biguint(&binomial(2 * n, n), &(BigUint::from(1u32) << (2 * n)));
        assert_eq!(m, closed);
        prev = m;
    }
}

#[test]
fn gamma_classes_refine_as_budget_shrinks() {
    for (name, g) in corpus() {
        let group = automorphism_group(&g, None).unwrap();
        let n = g.vertex_count();
        let mut coarser = gamma_classes(&group, n, 1 << 20).unwrap();
        for budget in (0..n).rev() {
            let finer = gamma_classes(&group, budget, 1 << 20).unwrap();
            for class in &finer.classes {
                assert!(
                    coarser
                        .classes
                        .iter()
                        .any(|c| class.iter().all(|v| c.contains(v))),
                    "{name} budget {budget}"
                );
            }
            coarser = finer;
        }
    }
}

#[test]
fn refinement_chain_decreases_to_a_fixpoint() {
    for (name, g) in corpus() {
        let group = automorphism_group(&g, None).unwrap();
        let it = gamma_refinement_iterate(&group, 0, 32, 1 << 20).unwrap();
        assert!(it.fixpoint, "{name}");
        for w in it.levels.windows(2) {
            assert!(w[1].order <= w[0].order);
            assert!((&w[0].order % &w[1].order) == BigUint::from(0u32));
        }
    }
}

#[test]
fn sphere_relation_closure_never_fires_on_families() {
    for spec in [
        FamilySpec::double_ray(6),
        FamilySpec::ladder(4),
        FamilySpec::regular_tree(3, 3),
    ] {
        let g = generate_family(&spec).unwrap();
        let params = SphereParams {
            truncation: Some(Truncation {
                root: 0,
                radius: spec.radius.unwrap(),
            }),
            n0_max: u32::MAX,
            horizon: None,
        };
        let classes = sphere_classes(&g, &params).unwrap();
        assert_eq!(classes.closure_added_pairs, 0);
    }
}
