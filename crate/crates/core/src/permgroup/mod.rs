//! Permutations, stabiliser chains, automorphism groups, and motion.

mod backtrack;
mod chain;
mod perm;
mod search;

pub use chain::{Elements, GroupSummary, PermGroup};
pub use perm::Permutation;
pub use search::automorphism_group;
pub(crate) use search::is_automorphism;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

impl PermGroup {
    /// Elements preserving the vertex colouring `colours` (a partition of the
    /// points into colour classes).
    pub fn colour_stabiliser(&self, colours: &[u32]) -> Result<PermGroup> {
        if colours.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: colours.len(),
            });
        }
        // Decide points of rare colours first.
        let mut freq = std::collections::HashMap::new();
        for &c in colours {
            *freq.entry(c).or_insert(0usize) += 1;
        }
        let mut prefix: Vec<usize> = (0..self.degree()).collect();
        prefix.sort_by_key(|&v| (freq[&colours[v]], colours[v], v));
        let admissible = |b: usize, image: usize| colours[b] == colours[image];
        let accept = |p: &Permutation| (0..p.degree()).all(|v| colours[p.image(v)] == colours[v]);
        backtrack::subgroup_search(self, &prefix, &admissible, &accept)
    }

    /// Elements mapping `set` onto itself.
    pub fn setwise_stabiliser(&self, set: &[usize]) -> Result<PermGroup> {
        let mut colours = vec![0u32; self.degree()];
        for &s in set {
            if s >= self.degree() {
                return Err(Error::InvalidVertex {
                    vertex: s,
                    vertex_count: self.degree(),
                });
            }
            colours[s] = 1;
        }
        self.colour_stabiliser(&colours)
    }

    /// Intersection with the setwise stabilisers of every class of a
    /// partition of the points.
    pub fn partition_stabiliser(&self, classes: &[Vec<usize>]) -> Result<PermGroup> {
        let mut colours = vec![u32::MAX; self.degree()];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                colours[v] = i as u32;
            }
        }
        self.colour_stabiliser(&colours)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionMethod {
    Enumeration,
    Backtrack,
}

/// Minimal number of moved points over non-identity elements. `motion` is
/// `None` for the trivial group, which has no non-identity element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionReport {
    pub motion: Option<usize>,
    pub witness: Option<Permutation>,
    pub method: MotionMethod,
}

/// Motion of `group`: by enumeration when `order <= cap`, otherwise by a
/// pruned backtrack over the stabiliser chain. Both are exact.
pub fn motion(group: &PermGroup, cap: u64) -> MotionReport {
    let (witness, method) = match group.elements(cap) {
        Ok(elems) => (
            elems
                .filter(|p| !p.is_identity())
                .min_by_key(Permutation::motion),
            MotionMethod::Enumeration,
        ),
        Err(_) => (
            backtrack::min_support_backtrack(group),
            MotionMethod::Backtrack,
        ),
    };
    MotionReport {
        motion: witness.as_ref().map(Permutation::motion),
        witness,
        method,
    }
}

/// Motion by backtrack regardless of the group order.
pub fn motion_backtrack(group: &PermGroup) -> MotionReport {
    let witness = backtrack::min_support_backtrack(group);
    MotionReport {
        motion: witness.as_ref().map(Permutation::motion),
        witness,
        method: MotionMethod::Backtrack,
    }
}
