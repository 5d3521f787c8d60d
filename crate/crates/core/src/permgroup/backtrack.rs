//! Backtrack searches over a stabiliser chain.
//!
//! An element of the group is `u_0 ∘ u_1 ∘ ... ∘ u_k` with `u_i` taken from
//! the transversal at level `i`; once `u_0..u_i` are chosen, the image of
//! base point `b_i` is fixed. Both searches here walk that tree.

use super::chain::orbit_under;
use super::{PermGroup, Permutation};
use crate::error::Result;

/// Subgroup of `group` whose elements satisfy `accept`, where `admissible`
/// is a necessary condition on single base images, used for pruning.
///
/// The chain is rebuilt with `base_prefix` first so that strongly
/// constraining points are decided early.
pub(crate) fn subgroup_search(
    group: &PermGroup,
    base_prefix: &[usize],
    admissible: &dyn Fn(usize, usize) -> bool,
    accept: &dyn Fn(&Permutation) -> bool,
) -> Result<PermGroup> {
    let g = PermGroup::with_base_prefix(group.degree(), group.generators(), base_prefix)?;
    let base = g.base();
    let k = base.len();
    let mut found: Vec<Permutation> = Vec::new();

    fn dfs(
        g: &PermGroup,
        level: usize,
        current: Permutation,
        admissible: &dyn Fn(usize, usize) -> bool,
        accept: &dyn Fn(&Permutation) -> bool,
    ) -> Option<Permutation> {
        let Some(l) = g.levels.get(level) else {
            return accept(&current).then_some(current);
        };
        for &b in &l.orbit {
            let image = current.image(b);
            if !admissible(l.point, image) {
                continue;
            }
            let next = current.after(l.reps[b].as_ref().unwrap());
            if let Some(p) = dfs(g, level + 1, next, admissible, accept) {
                return Some(p);
            }
        }
        None
    }

    for level in (0..k).rev() {
        let l = &g.levels[level];
        let mut orbit = orbit_under(g.degree(), &found, l.point);
        let mut targets = l.orbit.clone();
        targets.sort_unstable();
        for b in targets {
            if orbit.binary_search(&b).is_ok() || !admissible(l.point, b) {
                continue;
            }
            let start = l.reps[b].clone().unwrap();
            if let Some(p) = dfs(&g, level + 1, start, admissible, accept) {
                found.push(p);
                orbit = orbit_under(g.degree(), &found, l.point);
            }
        }
    }
    Ok(PermGroup::from_bsgs(g.degree(), base, found))
}

/// Minimum support over non-identity elements, with a witness.
///
/// The number of base points an element moves is a lower bound on its
/// support, so branches already moving at least as many base points as the
/// best known support are cut.
pub(crate) fn min_support_backtrack(group: &PermGroup) -> Option<Permutation> {
    let mut best: Option<Permutation> = None;
    let consider = |p: &Permutation, best: &mut Option<Permutation>| {
        if !p.is_identity() && best.as_ref().is_none_or(|b| p.motion() < b.motion()) {
            *best = Some(p.clone());
        }
    };
    for l in &group.levels {
        for g in &l.gens {
            consider(g, &mut best);
        }
        for &b in &l.orbit {
            consider(l.reps[b].as_ref().unwrap(), &mut best);
        }
    }
    best.as_ref()?;

    fn dfs(
        group: &PermGroup,
        level: usize,
        current: Permutation,
        moved: usize,
        nontrivial: bool,
        best: &mut Option<Permutation>,
    ) {
        let bound = best.as_ref().map_or(usize::MAX, Permutation::motion);
        if moved >= bound {
            return;
        }
        let Some(l) = group.levels.get(level) else {
            if nontrivial && current.motion() < bound {
                *best = Some(current);
            }
            return;
        };
        for &b in &l.orbit {
            let image = current.image(b);
            let next = current.after(l.reps[b].as_ref().unwrap());
            let moves_here = usize::from(image != l.point);
            dfs(
                group,
                level + 1,
                next,
                moved + moves_here,
                nontrivial || b != l.point,
                best,
            );
        }
    }

    dfs(group, 0, group.identity(), 0, false, &mut best);
    best
}
