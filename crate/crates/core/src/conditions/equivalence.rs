use num_bigint::BigUint;
use serde::Serialize;

use super::{distance_table, EquivalenceClasses, EquivalenceParams, Truncation};
use crate::error::{Error, Result};
use crate::exact::biguint_str;
use crate::graph::Graph;
use crate::permgroup::{automorphism_group, PermGroup};

/// Parameters of the sphere relation.
///
/// With a truncation, spheres around `u` are trusted up to
/// `radius - d(root, u)`; without one the graph is taken as it is and
/// spheres are compared up to the larger eccentricity of the two vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereParams {
    pub truncation: Option<Truncation>,
    pub n0_max: u32,
    pub horizon: Option<u32>,
}

impl SphereParams {
    pub fn finite(n0_max: u32) -> Self {
        SphereParams {
            truncation: None,
            n0_max,
            horizon: None,
        }
    }
}

struct SphereContext {
    dist: Vec<Vec<u32>>,
    root_d: Option<Vec<u32>>,
    orbit_of: Vec<usize>,
}

impl SphereContext {
    fn new(g: &Graph, params: &SphereParams) -> Result<Self> {
        let root_d = params.truncation.map(|t| t.root_distances(g)).transpose()?;
        let group = automorphism_group(g, None)?;
        let mut orbit_of = vec![0; g.vertex_count()];
        for (i, orbit) in group.orbits().into_iter().enumerate() {
            for v in orbit {
                orbit_of[v] = i;
            }
        }
        Ok(SphereContext {
            dist: distance_table(g),
            root_d,
            orbit_of,
        })
    }

    fn safe_horizon(&self, params: &SphereParams, u: usize, v: usize) -> u32 {
        match (params.truncation, &self.root_d) {
            (Some(t), Some(d)) => t.safe_horizon(d[u].max(d[v])),
            _ => {
                let ecc = |x: usize| {
                    self.dist[x]
                        .iter()
                        .copied()
                        .filter(|&d| d != u32::MAX)
                        .max()
                        .unwrap_or(0)
                };
                ecc(u).max(ecc(v))
            }
        }
    }

    /// Least `n0 <= horizon` with `S_u(n) = S_v(n)` for `n0 <= n <= horizon`.
    fn agreement_start(&self, u: usize, v: usize, horizon: u32) -> Option<u32> {
        let (du, dv) = (&self.dist[u], &self.dist[v]);
        let last_diff = (0..du.len())
            .filter(|&w| du[w] != dv[w])
            .flat_map(|w| [du[w], dv[w]])
            .filter(|&m| m <= horizon)
            .max();
        match last_diff {
            None => Some(0),
            Some(m) if m < horizon => Some(m + 1),
            Some(_) => None,
        }
    }

    fn related(&self, params: &SphereParams, u: usize, v: usize, strict: bool) -> Result<bool> {
        let safe = self.safe_horizon(params, u, v);
        let horizon = match params.horizon {
            Some(h) if h > safe && strict => {
                return Err(Error::InvalidParameter(format!(
                    "horizon {h} exceeds the safe range {safe} for vertices {u} and {v}"
                )))
            }
            Some(h) => h.min(safe),
            None => safe,
        };
        if self.orbit_of[u] != self.orbit_of[v] {
            return Ok(false);
        }
        Ok(self
            .agreement_start(u, v, horizon)
            .is_some_and(|n0| n0 <= params.n0_max))
    }
}

/// `u ~_S v`: some automorphism maps `u` to `v`, and some `n0 <= n0_max`
/// (and not beyond the horizon) has `S_u(n) = S_v(n)` for every `n` from
/// `n0` up to the horizon.
///
/// Orbits are those of the automorphism group of `g` itself; for a
/// truncation this is the group of the ball, not of the infinite graph.
pub fn sphere_equivalence(g: &Graph, u: usize, v: usize, params: &SphereParams) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    SphereContext::new(g, params)?.related(params, u, v, true)
}

/// Classes of `~_S` over all vertices. A requested horizon is clipped to
/// each pair's safe range.
pub fn sphere_classes(g: &Graph, params: &SphereParams) -> Result<EquivalenceClasses> {
    let ctx = SphereContext::new(g, params)?;
    EquivalenceClasses::from_relation(
        g.vertex_count(),
        EquivalenceParams::Sphere {
            truncation: params.truncation,
            n0_max: params.n0_max,
            horizon: params.horizon,
        },
        |u, v| ctx.related(params, u, v, false),
    )
}

/// Number of points `x` with `Γ_s x ≠ φ(Γ_s x)` for any `φ` with
/// `φ s = t`, or `None` when `t` is not in the orbit of `s`.
///
/// The count does not depend on the choice of `φ`: another choice is
/// `φ h` with `h ∈ Γ_s`, and `h` maps each suborbit onto itself. This is
/// checked for `φ` composed with every generator of `Γ_s`.
pub fn gamma_exceptions(group: &PermGroup, s: usize, t: usize) -> Result<Option<usize>> {
    let Some(phi) = group.transporter(s, t)? else {
        return Ok(None);
    };
    let subs = group.suborbits(s)?;
    let count_for = |phi: &crate::Permutation| -> usize {
        subs.iter()
            .filter(|c| {
                let mut img: Vec<usize> = c.iter().map(|&x| phi.image(x)).collect();
                img.sort_unstable();
                img != **c
            })
            .map(Vec::len)
            .sum()
    };
    let count = count_for(&phi);
    let stab = group.pointwise_stabiliser(&[s])?;
    for h in stab.generators() {
        if count_for(&phi.compose(h)?) != count {
            return Err(Error::Consistency(format!(
                "exception count for {s} -> {t} depends on the chosen automorphism"
            )));
        }
    }
    Ok(Some(count))
}

/// `s ~_Γ t` with at most `budget` exceptional points.
pub fn gamma_equivalence(group: &PermGroup, s: usize, t: usize, budget: usize) -> Result<bool> {
    Ok(gamma_exceptions(group, s, t)?.is_some_and(|c| c <= budget))
}

fn gamma_classes_at(group: &PermGroup, budget: usize, level: usize) -> Result<EquivalenceClasses> {
    EquivalenceClasses::from_relation(
        group.degree(),
        EquivalenceParams::Suborbit { budget, level },
        |s, t| gamma_equivalence(group, s, t, budget),
    )
}

/// Classes of `~_Γ` over all points. Fails when the group order exceeds
/// `cap`.
pub fn gamma_classes(group: &PermGroup, budget: usize, cap: u64) -> Result<EquivalenceClasses> {
    group.check_cap("suborbit equivalence", cap)?;
    gamma_classes_at(group, budget, 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementLevel {
    pub level: usize,
    #[serde(with = "biguint_str")]
    pub order: BigUint,
    pub classes: EquivalenceClasses,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaIteration {
    pub budget: usize,
    pub levels: Vec<RefinementLevel>,
    /// Set when the last level's group equals the one before it.
    pub fixpoint: bool,
}

/// `Γ^0 = group`, `Γ^(i+1)` the intersection of the setwise stabilisers in
/// `Γ^i` of the `~_Γ` classes of `Γ^i`. Stops at a fixpoint or after
/// `max_levels` refinements.
pub fn gamma_refinement_iterate(
    group: &PermGroup,
    budget: usize,
    max_levels: usize,
    cap: u64,
) -> Result<GammaIteration> {
    group.check_cap("suborbit refinement", cap)?;
    let mut current = group.clone();
    let mut levels = Vec::new();
    let mut fixpoint = false;
    for level in 0..=max_levels {
        let classes = gamma_classes_at(&current, budget, level)?;
        let order = current.order();
        levels.push(RefinementLevel {
            level,
            order: order.clone(),
            classes: classes.clone(),
        });
        if level == max_levels {
            break;
        }
        let next = current.partition_stabiliser(&classes.classes)?;
        if next.order() == order {
            fixpoint = true;
            break;
        }
        current = next;
    }
    Ok(GammaIteration {
        budget,
        levels,
        fixpoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::graph::{generate_family, FamilySpec, Label};

    #[test]
    fn sphere_examples() {
        let c6 = cycle(6);
        let p = SphereParams::finite(10);
        assert!(sphere_equivalence(&c6, 2, 2, &p).unwrap());
        assert!(!sphere_equivalence(&c6, 0, 3, &p).unwrap());

        let ladder = generate_family(&FamilySpec::ladder(5)).unwrap();
        let u = ladder.find_label(&Label::Coord(vec![0, 0])).unwrap();
        let v = ladder.find_label(&Label::Coord(vec![0, 1])).unwrap();
        let params = SphereParams {
            truncation: Some(Truncation { root: 0, radius: 5 }),
            n0_max: 4,
            horizon: None,
        };
        assert!(!sphere_equivalence(&ladder, u, v, &params).unwrap());
        let far = ladder.find_label(&Label::Coord(vec![2, 0])).unwrap();
        let d = ladder.bfs_distances(far).unwrap();
        assert_eq!((d[u], d[v]), (2, 3));
    }

    #[test]
    fn sphere_horizon_errors() {
        let params = SphereParams {
            truncation: Some(Truncation { root: 0, radius: 3 }),
            n0_max: 1,
            horizon: Some(5),
        };
        let g = generate_family(&FamilySpec::double_ray(3)).unwrap();
        assert!(sphere_equivalence(&g, 0, 0, &params).is_err());
        assert!(sphere_classes(&g, &params).is_ok());
    }

    #[test]
    fn sphere_classes_on_corpus_need_no_closure() {
        for (name, g) in corpus() {
            let classes =
                sphere_classes(&g, &SphereParams::finite(g.vertex_count() as u32)).unwrap();
            assert_eq!(classes.closure_added_pairs, 0, "{name}");
        }
    }

    #[test]
    fn gamma_examples_on_c6() {
        let group = automorphism_group(&cycle(6), None).unwrap();
        assert!(gamma_equivalence(&group, 3, 3, 0).unwrap());
        // Rotation by one moves every suborbit of Γ_0.
        assert_eq!(gamma_exceptions(&group, 0, 1).unwrap(), Some(6));
        assert!(!gamma_equivalence(&group, 0, 1, 0).unwrap());
        assert!(gamma_equivalence(&group, 0, 1, 6).unwrap());
        assert_eq!(gamma_exceptions(&group, 0, 3).unwrap(), Some(6));
        assert_eq!(gamma_exceptions(&group, 1, 1).unwrap(), Some(0));
    }

    #[test]
    fn full_budget_gives_orbits() {
        for (name, g) in corpus() {
            let group = automorphism_group(&g, None).unwrap();
            let classes = gamma_classes(&group, g.vertex_count(), 1_000_000).unwrap();
            assert_eq!(classes.classes, group.orbits(), "{name}");
        }
    }

    #[test]
    fn iteration_reaches_fixpoint() {
        for (name, g) in corpus() {
            let group = automorphism_group(&g, None).unwrap();
            let it = gamma_refinement_iterate(&group, 0, 10, 1_000_000).unwrap();
            assert!(it.fixpoint, "{name}");
            assert!(it.levels.windows(2).all(|w| w[1].order <= w[0].order));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let group = automorphism_group(&complete(5), None).unwrap();
        assert!(gamma_classes(&group, 0, 100).unwrap_err().is_cap_exceeded());
    }
}
