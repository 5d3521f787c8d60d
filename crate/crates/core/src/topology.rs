//! The confluent ultrametric on a permutation group and its coset balls.
//!
//! For an exhaustion `S_1 ⊂ S_2 ⊂ ... ⊂ S_k = V`, the confluent of two
//! permutations is `min{i : γ1 γ2⁻¹ moves a point of S_i} - 1`, and
//! `δ(γ1, γ2) = 2^(-conf)` (zero for equal permutations). Because the
//! formula only sees `γ1 γ2⁻¹`, δ is invariant under right multiplication,
//! `δ(γ1 σ, γ2 σ) = δ(γ1, γ2)`, but in general not under left
//! multiplication. Equivalently, `conf(γ1, γ2) >= i` exactly when the
//! inverses `γ1⁻¹` and `γ2⁻¹` agree on `S_i`, so the closed ball of radius
//! `2^(-i)` around `γ` is the right coset `Γ_(S_i) γ` of the pointwise
//! stabiliser.
//!
//! All values are exact: distances are dyadic and measures are rationals.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::exact::{self, biguint_str, rational_str};
use crate::graph::Graph;
use crate::permgroup::{automorphism_group, PermGroup, Permutation};
use crate::Caps;

/// Strictly nested point sets ending in the full point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustionSequence {
    sets: Vec<Vec<usize>>,
    /// 1-based index of the first set containing each point.
    #[serde(skip)]
    level_of: Vec<usize>,
}

impl ExhaustionSequence {
    pub fn new(degree: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut level_of = vec![0usize; degree];
        let mut prev: Option<HashSet<usize>> = None;
        let mut normalised = Vec::with_capacity(sets.len());
        for (i, set) in sets.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&s| s >= degree) {
                return Err(Error::InvalidVertex {
                    vertex: bad,
                    vertex_count: degree,
                });
            }
            let cur: HashSet<usize> = set.iter().copied().collect();
            if let Some(p) = &prev {
                if !p.is_subset(&cur) || p.len() == cur.len() {
                    return Err(Error::InvalidParameter(format!(
                        "exhaustion set {} does not strictly contain set {}",
                        i + 1,
                        i
                    )));
                }
            }
            for &s in &set {
                if level_of[s] == 0 {
                    level_of[s] = i + 1;
                }
            }
            prev = Some(cur);
            normalised.push(set);
        }
        if prev.map_or(degree > 0, |p| p.len() != degree) {
            return Err(Error::InvalidParameter(
                "the last exhaustion set must contain every point".into(),
            ));
        }
        Ok(ExhaustionSequence {
            sets: normalised,
            level_of,
        })
    }

    /// `S_i = B_root(i - 1)` for `i = 1..=ecc + 1`, followed by the whole
    /// vertex set if the graph is disconnected.
    pub fn balls(g: &Graph, root: usize) -> Result<Self> {
        let d = g.bfs_distances(root)?;
        let ecc = g.eccentricity(root)?;
        let mut sets: Vec<Vec<usize>> = (0..=ecc)
            .map(|r| (0..d.len()).filter(|&v| d[v] <= r).collect())
            .collect();
        if sets.last().map(Vec::len) != Some(g.vertex_count()) {
            sets.push((0..g.vertex_count()).collect());
        }
        ExhaustionSequence::new(g.vertex_count(), sets)
    }

    /// `S_i = {0, ..., i-1}`.
    pub fn prefixes(degree: usize) -> Result<Self> {
        ExhaustionSequence::new(degree, (1..=degree).map(|i| (0..i).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.level_of.len()
    }

    /// `S_i`, 1-based; `S_0` is empty.
    pub fn set(&self, i: usize) -> &[usize] {
        if i == 0 {
            &[]
        } else {
            &self.sets[i - 1]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confluent {
    Level(usize),
    Equal,
}

/// A distance `0` or `2^(-exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic(Option<u32>);

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic(None);

    pub fn pow2_neg(exponent: u32) -> Self {
        Dyadic(Some(exponent))
    }

    pub fn to_rational(self) -> BigRational {
        match self.0 {
            None => BigRational::zero(),
            Some(e) => exact::pow_rational(2, -(e as i64)),
        }
    }

    pub fn exponent(self) -> Option<u32> {
        self.0
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.0, other.0) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            // Larger exponent means smaller distance.
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&exact::rational_to_string(&self.to_rational()))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_pair(a: &Permutation, b: &Permutation, seq: &ExhaustionSequence) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    if a.degree() != seq.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: seq.degree(),
        });
    }
    Ok(())
}

pub fn conf(a: &Permutation, b: &Permutation, seq: &ExhaustionSequence) -> Result<Confluent> {
    check_pair(a, b, seq)?;
    let d = a.after(&b.inverse());
    match d.support().into_iter().map(|s| seq.level_of[s]).min() {
        None => Ok(Confluent::Equal),
        Some(first) => Ok(Confluent::Level(first - 1)),
    }
}

pub fn delta(a: &Permutation, b: &Permutation, seq: &ExhaustionSequence) -> Result<Dyadic> {
    Ok(match conf(a, b, seq)? {
        Confluent::Equal => Dyadic::ZERO,
        Confluent::Level(i) => Dyadic::pow2_neg(i as u32),
    })
}

/// The closed ball `{γ : δ(γ, centre) <= 2^(-level)}`.
#[derive(Clone, Debug, Serialize)]
pub struct Ball {
    /// Least element of the ball (by image array) when members are listed,
    /// otherwise some element of it.
    pub representative: Permutation,
    #[serde(with = "biguint_str")]
    pub size: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Permutation>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallDecomposition {
    pub level: usize,
    pub radius: Dyadic,
    #[serde(with = "biguint_str")]
    pub ball_count: BigUint,
    pub balls: Vec<Ball>,
}

/// Images of `S_level` under `γ⁻¹`: two elements share a ball at this level
/// exactly when these agree.
fn ball_key(g: &Permutation, set: &[usize]) -> Vec<usize> {
    let inv = g.inverse();
    set.iter().map(|&s| inv.image(s)).collect()
}

fn in_ball(g: &Permutation, centre: &Permutation, level: usize, seq: &ExhaustionSequence) -> bool {
    match conf(g, centre, seq) {
        Ok(Confluent::Equal) => true,
        Ok(Confluent::Level(c)) => c >= level,
        Err(_) => false,
    }
}

/// Balls of radius `2^(-level)` partitioning `group`, or partitioning the
/// ball `within = (parent_level, centre)` when given.
///
/// When `order <= cap` every ball lists its members. Above the cap only
/// representatives and sizes are produced, which still requires the number
/// of balls to be within the cap.
pub fn ball_decomposition(
    group: &PermGroup,
    seq: &ExhaustionSequence,
    level: usize,
    within: Option<(usize, &Permutation)>,
    cap: u64,
) -> Result<BallDecomposition> {
    if level > seq.len() {
        return Err(Error::InvalidParameter(format!(
            "level {level} beyond exhaustion length {}",
            seq.len()
        )));
    }
    if group.degree() != seq.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: seq.degree(),
        });
    }
    if let Some((parent, centre)) = within {
        if parent > level {
            return Err(Error::InvalidParameter(format!(
                "parent level {parent} is finer than level {level}"
            )));
        }
        if !group.contains(centre) {
            return Err(Error::NotInGroup);
        }
    }
    let set = seq.set(level);
    let keep = |g: &Permutation| within.is_none_or(|(pl, c)| in_ball(g, c, pl, seq));

    if group.elements(cap).is_ok() {
        let mut by_key: BTreeMap<Vec<usize>, Vec<Permutation>> = BTreeMap::new();
        for g in group.elements(cap)?.filter(|g| keep(g)) {
            by_key.entry(ball_key(&g, set)).or_default().push(g);
        }
        let mut balls: Vec<Ball> = by_key
            .into_values()
            .map(|mut members| {
                members.sort();
                Ball {
                    representative: members[0].clone(),
                    size: BigUint::from(members.len()),
                    members: Some(members),
                }
            })
            .collect();
        balls.sort_by(|a, b| a.representative.cmp(&b.representative));
        return Ok(BallDecomposition {
            level,
            radius: Dyadic::pow2_neg(level as u32),
            ball_count: BigUint::from(balls.len()),
            balls,
        });
    }

    // Above the cap: left coset representatives of Γ_(S_level) come from
    // the chain levels of a base starting with S_level; inverting them gives
    // one element per right coset, i.e. per ball.
    let chain = PermGroup::with_base_prefix(group.degree(), group.generators(), set)?;
    let depth = chain.base().iter().take_while(|b| set.contains(b)).count();
    let sizes = chain.transversal_sizes();
    let count: BigUint = sizes[..depth].iter().map(|&s| BigUint::from(s)).product();
    if count > BigUint::from(cap) {
        return Err(Error::cap(
            "ball decomposition",
            format!("{count} balls"),
            cap,
        ));
    }
    let stab_size: BigUint = sizes[depth..].iter().map(|&s| BigUint::from(s)).product();
    let mut reps = vec![chain.identity()];
    for i in 0..depth {
        let trans = chain.transversal(i);
        reps = reps
            .iter()
            .flat_map(|r| trans.iter().map(move |(_, u)| r.after(u)))
            .collect();
    }
    let mut balls: Vec<Ball> = reps
        .into_iter()
        .map(|r| r.inverse())
        .filter(|r| keep(r))
        .map(|representative| Ball {
            representative,
            size: stab_size.clone(),
            members: None,
        })
        .collect();
    balls.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(BallDecomposition {
        level,
        radius: Dyadic::pow2_neg(level as u32),
        ball_count: BigUint::from(balls.len()),
        balls,
    })
}

/// Indented coset tree from level 0 down to `max_level`, one line per ball.
pub fn coset_tree_report(
    group: &PermGroup,
    seq: &ExhaustionSequence,
    max_level: usize,
    cap: u64,
) -> Result<String> {
    fn walk(
        group: &PermGroup,
        seq: &ExhaustionSequence,
        level: usize,
        centre: &Permutation,
        max_level: usize,
        cap: u64,
        out: &mut String,
    ) -> Result<()> {
        if level > max_level {
            return Ok(());
        }
        let dec = ball_decomposition(
            group,
            seq,
            level,
            Some((level.saturating_sub(1), centre)),
            cap,
        )?;
        for ball in &dec.balls {
            out.push_str(&format!(
                "{}level {} radius {} size {} rep {}\n",
                "  ".repeat(level),
                level,
                dec.radius,
                ball.size,
                ball.representative
            ));
            walk(
                group,
                seq,
                level + 1,
                &ball.representative,
                max_level,
                cap,
                out,
            )?;
        }
        Ok(())
    }
    let mut out = String::new();
    let max_level = max_level.min(seq.len());
    walk(group, seq, 0, &group.identity(), max_level, cap, &mut out)?;
    Ok(out)
}

/// `|subset| / |group|`, counting distinct elements.
pub fn haar_fraction(subset: &[Permutation], group: &PermGroup) -> Result<BigRational> {
    let mut distinct = HashSet::new();
    for g in subset {
        if !group.contains(g) {
            return Err(Error::NotInGroup);
        }
        distinct.insert(g);
    }
    Ok(exact::from_biguint(
        &BigUint::from(distinct.len()),
        &group.order(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabiliserMeasure {
    /// Average over all colourings of `|Γ_c| / |Γ|`.
    #[serde(with = "rational_str")]
    pub colour_first: BigRational,
    /// `(1/|Γ|) Σ_γ k^(cyc(γ) - n)`.
    #[serde(with = "rational_str")]
    pub group_first: BigRational,
    pub k: u32,
}

/// Expected uniform measure of the stabiliser of a random `k`-colouring,
/// computed by summing over colourings first and over group elements first.
/// The two sums are the same double count in either order and must agree
/// exactly; disagreement is reported as an error.
pub fn expected_stabiliser_measure(g: &Graph, k: u32, caps: &Caps) -> Result<StabiliserMeasure> {
    let n = g.vertex_count();
    if n > caps.exhaustive_vertices {
        return Err(Error::cap(
            "exhaustive colour-first measure",
            format!("{n} vertices"),
            caps.exhaustive_vertices as u64,
        ));
    }
    let colourings = BigUint::from(k).pow(n as u32);
    let total = match colourings.to_u64() {
        Some(t) if t <= caps.colour_exhaustion => t,
        _ => {
            return Err(Error::cap(
                "exhaustive colour-first measure",
                format!("{colourings} colourings"),
                caps.colour_exhaustion,
            ))
        }
    };
    let group = automorphism_group(g, None)?;
    let elements: Vec<Permutation> = group.elements(caps.enumeration)?.collect();
    let order = BigUint::from(elements.len());

    let fixed_pairs: u64 = (0..total)
        .into_par_iter()
        .map(|i| {
            let c = Colouring::from_index(i, n, k);
            elements.iter().filter(|p| c.is_preserved_by(p)).count() as u64
        })
        .sum();
    let colour_first = exact::from_biguint(&BigUint::from(fixed_pairs), &(&order * &colourings));

    let group_first = elements
        .iter()
        .map(|p| crate::colouring::fix_probability(p, k))
        .fold(BigRational::zero(), |acc, x| acc + x)
        / exact::from_biguint(&order, &BigUint::one());

    if colour_first != group_first {
        return Err(Error::Consistency(format!(
            "colour-first {colour_first} differs from group-first {group_first}"
        )));
    }
    Ok(StabiliserMeasure {
        colour_first,
        group_first,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::graph::named::*;

    fn rotation(n: usize, by: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (i + by) % n).collect()).unwrap()
    }

    fn reflection(n: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).unwrap()
    }

    #[test]
    fn confluent_examples_on_c8() {
        let c8 = cycle(8);
        let seq = ExhaustionSequence::balls(&c8, 0).unwrap();
        assert_eq!(seq.set(1), &[0]);
        assert_eq!(seq.set(2), &[0, 1, 7]);
        let id = Permutation::identity(8);
        let r = rotation(8, 1);
        let s = reflection(8);
        assert_eq!(conf(&r, &r, &seq).unwrap(), Confluent::Equal);
        assert_eq!(conf(&r, &id, &seq).unwrap(), Confluent::Level(0));
        assert_eq!(conf(&s, &id, &seq).unwrap(), Confluent::Level(1));
        assert_eq!(delta(&r, &r, &seq).unwrap().to_rational(), ratio(0, 1));
        assert_eq!(delta(&r, &id, &seq).unwrap().to_rational(), ratio(1, 1));
        assert_eq!(delta(&s, &id, &seq).unwrap().to_rational(), ratio(1, 2));
        assert!(conf(&id, &Permutation::identity(3), &seq).is_err());
    }

    #[test]
    fn exhaustion_validation() {
        assert!(ExhaustionSequence::new(3, vec![vec![0], vec![0]]).is_err());
        assert!(ExhaustionSequence::new(3, vec![vec![0], vec![1, 2]]).is_err());
        assert!(ExhaustionSequence::new(3, vec![vec![0], vec![0, 1]]).is_err());
        assert!(ExhaustionSequence::new(3, vec![vec![0], vec![0, 1, 2]]).is_ok());
        assert_eq!(ExhaustionSequence::prefixes(4).unwrap().len(), 4);
    }

    #[test]
    fn c4_balls() {
        let c4 = cycle(4);
        let group = automorphism_group(&c4, None).unwrap();
        let seq = ExhaustionSequence::balls(&c4, 0).unwrap();
        let dec = ball_decomposition(&group, &seq, 1, None, 1000).unwrap();
        assert_eq!(dec.balls.len(), 4);
        assert!(dec.balls.iter().all(|b| b.size == BigUint::from(2u32)));
        assert_eq!(dec.radius.to_rational(), ratio(1, 2));

        let full = ball_decomposition(&group, &seq, seq.len(), None, 1000).unwrap();
        assert_eq!(full.balls.len(), 8);

        let parent = &dec.balls[0];
        let sub =
            ball_decomposition(&group, &seq, 2, Some((1, &parent.representative)), 1000).unwrap();
        let mut union: Vec<Permutation> = sub
            .balls
            .iter()
            .flat_map(|b| b.members.clone().unwrap())
            .collect();
        union.sort();
        assert_eq!(&union, parent.members.as_ref().unwrap());
    }

    #[test]
    fn capped_decomposition_counts_match() {
        let c6 = cycle(6);
        let group = automorphism_group(&c6, None).unwrap();
        let seq = ExhaustionSequence::balls(&c6, 0).unwrap();
        for level in 0..=seq.len() {
            let full = ball_decomposition(&group, &seq, level, None, 1000).unwrap();
            let reps = match ball_decomposition(&group, &seq, level, None, 11) {
                Err(e) if full.ball_count > BigUint::from(11u32) => {
                    assert!(e.is_cap_exceeded());
                    continue;
                }
                r => r.unwrap(),
            };
            assert_eq!(full.ball_count, reps.ball_count);
            assert!(reps.balls.iter().all(|b| b.members.is_none()));
            // Every representative lands in a distinct ball.
            let mut keys: Vec<Vec<usize>> = reps
                .balls
                .iter()
                .map(|b| ball_key(&b.representative, seq.set(level)))
                .collect();
            keys.sort();
            keys.dedup();
            assert_eq!(BigUint::from(keys.len()), full.ball_count);
        }
    }

    #[test]
    fn haar_examples() {
        let group = automorphism_group(&cycle(4), None).unwrap();
        let all: Vec<Permutation> = group.elements(100).unwrap().collect();
        assert_eq!(haar_fraction(&all, &group).unwrap(), ratio(1, 1));
        assert_eq!(
            haar_fraction(&[Permutation::identity(4)], &group).unwrap(),
            ratio(1, 8)
        );
        let stab: Vec<Permutation> = group
            .pointwise_stabiliser(&[0])
            .unwrap()
            .elements(100)
            .unwrap()
            .collect();
        assert_eq!(haar_fraction(&stab, &group).unwrap(), ratio(1, 4));
        let bad = Permutation::from_images(vec![1, 0, 2, 3]).unwrap();
        assert!(matches!(
            haar_fraction(&[bad], &group),
            Err(Error::NotInGroup)
        ));
    }

    #[test]
    fn stabiliser_measure_examples() {
        let caps = Caps::default();
        let m = |g: &Graph| expected_stabiliser_measure(g, 2, &caps).unwrap();
        assert_eq!(m(&path(1)).group_first, ratio(1, 1));
        assert_eq!(m(&cycle(4)).colour_first, ratio(3, 8));
        assert_eq!(m(&path(4)).group_first, ratio(5, 8));
    }

    #[test]
    fn coset_tree_text() {
        let group = automorphism_group(&cycle(4), None).unwrap();
        let seq = ExhaustionSequence::balls(&cycle(4), 0).unwrap();
        let report = coset_tree_report(&group, &seq, 2, 100).unwrap();
        let lines: Vec<&str> = report.lines().collect();
        // 1 root ball, 4 balls at level 1, 8 singletons at level 2.
        assert_eq!(lines.len(), 13);
        assert!(lines[0].starts_with("level 0 radius 1 size 8"));
        assert!(lines[1].starts_with("  level 1 radius 1/2 size 2"));
    }
}
