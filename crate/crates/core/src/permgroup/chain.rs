//! Stabiliser chains: base, strong generating set, and transversals.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};
use crate::exact::biguint_str;

/// One level of the chain: the stabiliser of all earlier base points acting
/// on the orbit of `point`.
#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub point: usize,
    /// Strong generators fixing every earlier base point.
    pub gens: Vec<Permutation>,
    /// Orbit of `point` in discovery order.
    pub orbit: Vec<usize>,
    /// `reps[b]` maps `point` to `b`; `None` off the orbit.
    pub reps: Vec<Option<Permutation>>,
    pub inv_reps: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, point: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level {
            point,
            gens,
            orbit: Vec::new(),
            reps: Vec::new(),
            inv_reps: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let mut reps: Vec<Option<Permutation>> = vec![None; degree];
        reps[self.point] = Some(Permutation::identity(degree));
        let mut orbit = vec![self.point];
        let mut i = 0;
        while i < orbit.len() {
            let b = orbit[i];
            for x in &self.gens {
                let c = x.image(b);
                if reps[c].is_none() {
                    let u = x.after(reps[b].as_ref().unwrap());
                    reps[c] = Some(u);
                    orbit.push(c);
                }
            }
            i += 1;
        }
        self.inv_reps = reps
            .iter()
            .map(|r| r.as_ref().map(Permutation::inverse))
            .collect();
        self.reps = reps;
        self.orbit = orbit;
    }
}

/// A permutation group given by generators together with a stabiliser chain.
///
/// Immutable once built; order, membership, and enumeration are all answered
/// from the chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    pub(crate) levels: Vec<Level>,
}

/// Serialized summary `{degree, generators, order}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    #[serde(with = "biguint_str")]
    pub order: BigUint,
    pub base: Vec<usize>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Runs Schreier–Sims on `generators`.
    pub fn from_generators(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Runs Schreier–Sims with the base starting with `prefix` (repeated
    /// points are dropped).
    pub fn with_base_prefix(
        degree: usize,
        generators: &[Permutation],
        prefix: &[usize],
    ) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut base = Vec::new();
        for &p in prefix {
            if p >= degree {
                return Err(Error::InvalidVertex {
                    vertex: p,
                    vertex_count: degree,
                });
            }
            if !base.contains(&p) {
                base.push(p);
            }
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let levels = schreier_sims(degree, &gens, base);
        Ok(PermGroup {
            degree,
            generators: gens,
            levels,
        })
    }

    /// Builds the chain from a base and strong generating set known to be
    /// correct, e.g. from the automorphism search. Level `i` uses the
    /// generators fixing `base[..i]`.
    pub(crate) fn from_bsgs(degree: usize, base: Vec<usize>, strong: Vec<Permutation>) -> Self {
        let levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let gens = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&c| g.image(c) == c))
                    .cloned()
                    .collect();
                Level::new(degree, b, gens)
            })
            .collect();
        PermGroup {
            degree,
            generators: strong,
            levels,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Union of the per-level strong generators.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Basic orbit lengths along the base.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// The coset representatives at base level `i`, keyed by image point.
    pub fn transversal(&self, i: usize) -> Vec<(usize, Permutation)> {
        let l = &self.levels[i];
        l.orbit
            .iter()
            .map(|&b| (b, l.reps[b].clone().unwrap()))
            .collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// The order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Strips `g` through the chain from level `start`; returns the residue
    /// and the level at which it dropped out (`levels.len()` if it passed).
    pub(crate) fn sift_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        sift(&self.levels, g.clone(), start)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.sift_from(g, 0);
        level == self.levels.len() && residue.is_identity()
    }

    /// Every element exactly once, or a cap error when `order > cap`.
    pub fn elements(&self, cap: u64) -> Result<Elements<'_>> {
        self.check_cap("group enumeration", cap)?;
        Ok(Elements::new(self))
    }

    pub(crate) fn check_cap(&self, what: &'static str, cap: u64) -> Result<()> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::cap(what, format!("group order {order}"), cap));
        }
        Ok(())
    }

    /// Orbit of `s`, ascending.
    fn check_point(&self, s: usize) -> Result<()> {
        if s >= self.degree {
            return Err(Error::InvalidVertex {
                vertex: s,
                vertex_count: self.degree,
            });
        }
        Ok(())
    }

    pub fn orbit(&self, s: usize) -> Result<Vec<usize>> {
        self.check_point(s)?;
        Ok(orbit_under(self.degree, &self.generators, s))
    }

    /// All orbits, each ascending, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_under(self.degree, &self.generators)
    }

    /// An element mapping `s` to `t`, if one exists.
    pub fn transporter(&self, s: usize, t: usize) -> Result<Option<Permutation>> {
        self.check_point(s)?;
        self.check_point(t)?;
        if let Some(first) = self.levels.first().filter(|l| l.point == s) {
            return Ok(first.reps[t].clone());
        }
        let g = PermGroup::with_base_prefix(self.degree, &self.generators, &[s])?;
        Ok(g.levels
            .first()
            .and_then(|l| l.reps[t].clone())
            .or_else(|| {
                // Trivial chain: only the identity exists.
                (s == t).then(|| self.identity())
            }))
    }

    /// Pointwise stabiliser of `points`.
    pub fn pointwise_stabiliser(&self, points: &[usize]) -> Result<PermGroup> {
        for &p in points {
            self.check_point(p)?;
        }
        if self
            .generators
            .iter()
            .all(|g| points.iter().all(|&p| g.image(p) == p))
        {
            return Ok(self.clone());
        }
        // Reuse the chain when the base already starts with these points.
        let prefix = self
            .levels
            .iter()
            .take_while(|l| points.contains(&l.point))
            .count();
        let rest_fixed = self.levels[prefix..].first().is_none_or(|l| {
            l.gens
                .iter()
                .all(|g| points.iter().all(|&p| g.image(p) == p))
        });
        if prefix > 0 && rest_fixed {
            let levels = self.levels[prefix..].to_vec();
            return Ok(PermGroup {
                degree: self.degree,
                generators: levels.first().map(|l| l.gens.clone()).unwrap_or_default(),
                levels,
            });
        }
        let g = PermGroup::with_base_prefix(self.degree, &self.generators, points)?;
        let depth = g
            .levels
            .iter()
            .take_while(|l| points.contains(&l.point))
            .count();
        let levels: Vec<Level> = g.levels[depth..].to_vec();
        let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        Ok(PermGroup {
            degree: self.degree,
            generators,
            levels,
        })
    }

    /// Orbits of the point stabiliser of `s`.
    pub fn suborbits(&self, s: usize) -> Result<Vec<Vec<usize>>> {
        Ok(self.pointwise_stabiliser(&[s])?.orbits())
    }

    /// Is this group a subgroup of `other`?
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            degree: self.degree,
            generators: self.generators.clone(),
            order: self.order(),
            base: self.base(),
        }
    }
}

fn sift(levels: &[Level], mut g: Permutation, start: usize) -> (Permutation, usize) {
    for (i, level) in levels.iter().enumerate().skip(start) {
        let b = g.image(level.point);
        match &level.inv_reps[b] {
            Some(inv) => g = inv.after(&g),
            None => return (g, i),
        }
    }
    (g, levels.len())
}

fn schreier_sims(degree: usize, gens: &[Permutation], mut base: Vec<usize>) -> Vec<Level> {
    for g in gens {
        if base.iter().all(|&b| g.image(b) == b) {
            base.push(g.first_moved().expect("identity generators are removed"));
        }
    }
    let fixes_prefix =
        |g: &Permutation, k: usize, base: &[usize]| base[..k].iter().all(|&b| g.image(b) == b);
    let mut levels: Vec<Level> = (0..base.len())
        .map(|i| {
            let level_gens = gens
                .iter()
                .filter(|g| fixes_prefix(g, i, &base))
                .cloned()
                .collect();
            Level::new(degree, base[i], level_gens)
        })
        .collect();

    let mut i = levels.len();
    while i > 0 {
        let cur = i - 1;
        let mut restart = None;
        'check: for oi in 0..levels[cur].orbit.len() {
            let b = levels[cur].orbit[oi];
            for gi in 0..levels[cur].gens.len() {
                let x = &levels[cur].gens[gi];
                let xb = x.image(b);
                // Schreier generator u_{x b}^{-1} x u_b fixes the level's point.
                let h = levels[cur].inv_reps[xb]
                    .as_ref()
                    .unwrap()
                    .after(&x.after(levels[cur].reps[b].as_ref().unwrap()));
                if h.is_identity() {
                    continue;
                }
                let (residue, drop) = sift(&levels, h, cur + 1);
                if drop == levels.len() && residue.is_identity() {
                    continue;
                }
                if drop == levels.len() {
                    let p = residue.first_moved().unwrap();
                    levels.push(Level::new(degree, p, Vec::new()));
                }
                for level in &mut levels[cur + 1..=drop] {
                    level.gens.push(residue.clone());
                    level.rebuild(degree);
                }
                restart = Some(drop + 1);
                break 'check;
            }
        }
        match restart {
            Some(next) => i = next,
            None => i -= 1,
        }
    }
    levels
}

pub(crate) fn orbit_under(degree: usize, gens: &[Permutation], s: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[s] = true;
    let mut orbit = vec![s];
    let mut i = 0;
    while i < orbit.len() {
        let b = orbit[i];
        for g in gens {
            let c = g.image(b);
            if !seen[c] {
                seen[c] = true;
                orbit.push(c);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

pub(crate) fn orbits_under(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for s in 0..degree {
        if !seen[s] {
            let orbit = orbit_under(degree, gens, s);
            for &t in &orbit {
                seen[t] = true;
            }
            out.push(orbit);
        }
    }
    out
}

/// Odometer over the transversals; yields `u_0 ∘ u_1 ∘ ... ∘ u_k`.
pub struct Elements<'a> {
    group: &'a PermGroup,
    counters: Vec<usize>,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(group: &'a PermGroup) -> Self {
        Elements {
            group,
            counters: vec![0; group.levels.len()],
            done: false,
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let levels = &self.group.levels;
        let mut g = self.group.identity();
        for (l, &c) in levels.iter().zip(&self.counters) {
            let u = l.reps[l.orbit[c]].as_ref().unwrap();
            g = g.after(u);
        }
        // Advance the odometer, last level fastest.
        let mut i = levels.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counters[i] += 1;
            if self.counters[i] < levels[i].orbit.len() {
                break;
            }
            self.counters[i] = 0;
        }
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    fn dihedral(n: usize) -> Vec<Permutation> {
        let rot = perm(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
        let refl = perm(&(0..n).map(|i| (n - i) % n).collect::<Vec<_>>());
        vec![rot, refl]
    }

    #[test]
    fn trivial_and_empty() {
        let g = PermGroup::from_generators(5, &[]).unwrap();
        assert_eq!(g.order(), BigUint::one());
        assert_eq!(g.elements(10).unwrap().count(), 1);
        assert!(g.contains(&Permutation::identity(5)));
    }

    #[test]
    fn dihedral_orders() {
        for n in 3..10 {
            let g = PermGroup::from_generators(n, &dihedral(n)).unwrap();
            assert_eq!(g.order(), BigUint::from(2 * n));
            let elems: HashSet<_> = g.elements(1000).unwrap().collect();
            assert_eq!(elems.len(), 2 * n);
            assert!(elems.iter().all(|e| g.contains(e)));
        }
    }

    #[test]
    fn symmetric_group_from_two_generators() {
        let n = 7;
        let cyc = perm(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
        let swap = Permutation::transposition(n, 0, 1).unwrap();
        let g = PermGroup::from_generators(n, &[cyc, swap]).unwrap();
        assert_eq!(g.order(), BigUint::from(5040u32));
        assert!(g.elements(100).is_err());
    }

    #[test]
    fn alternating_group_membership() {
        let n = 5;
        let a = Permutation::from_cycles(n, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(n, &[&[0, 1, 2, 3, 4]]).unwrap();
        let g = PermGroup::from_generators(n, &[a, b]).unwrap();
        assert_eq!(g.order(), BigUint::from(60u32));
        assert!(!g.contains(&Permutation::transposition(n, 0, 1).unwrap()));
        assert!(g.contains(&Permutation::from_cycles(n, &[&[0, 1], &[2, 3]]).unwrap()));
    }

    #[test]
    fn base_prefix_and_stabilisers() {
        let g = PermGroup::from_generators(4, &dihedral(4)).unwrap();
        let st = g.pointwise_stabiliser(&[0]).unwrap();
        assert_eq!(st.order(), BigUint::from(2u32));
        assert_eq!(g.pointwise_stabiliser(&[]).unwrap().order(), g.order());
        let g6 = PermGroup::from_generators(6, &dihedral(6)).unwrap();
        assert_eq!(
            g6.suborbits(0).unwrap(),
            vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]
        );
        assert_eq!(g6.orbit(2).unwrap(), (0..6).collect::<Vec<_>>());
        let t = g6.transporter(1, 4).unwrap().unwrap();
        assert_eq!(t.image(1), 4);
        assert!(g6.contains(&t));
    }
}
