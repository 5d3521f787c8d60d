//! Structural sufficient conditions for random colourings to be
//! distinguishing, evaluated on finite graphs and finite truncations.
//!
//! * [`dsc_check`]: distinct spheres around a root, with a safe horizon for
//!   truncations.
//! * [`sphere_equivalence`] and [`sphere_classes`]: same orbit plus
//!   eventually equal spheres.
//! * [`gamma_equivalence`], [`gamma_classes`] and
//!   [`gamma_refinement_iterate`]: suborbit equivalence with an explicit
//!   exception budget.
//! * [`layer_fixing_report`]: how colour-preserving automorphisms of a
//!   product act on the layers of the first factor.
//! * [`match_probability`], [`growth_bound`] and [`growth_classifier`]:
//!   the quantitative bounds.

mod bounds;
mod dsc;
mod equivalence;
mod layers;

pub use bounds::*;
pub use dsc::*;
pub use equivalence::*;
pub use layers::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A finite ball `B_root(radius)` standing in for an infinite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub root: usize,
    pub radius: u32,
}

impl Truncation {
    /// Root distances, after checking that every vertex lies within
    /// `radius` of `root`.
    pub fn root_distances(&self, g: &Graph) -> Result<Vec<u32>> {
        let d = g.bfs_distances(self.root)?;
        if let Some(v) = (0..d.len()).find(|&v| d[v] > self.radius) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} lies outside the ball of radius {} around {}; \
                 the graph is not a truncation with this root",
                self.radius, self.root
            )));
        }
        Ok(d)
    }

    /// Largest `n` for which spheres around a vertex at root distance `d`
    /// are the same in the truncation as in the infinite graph.
    pub fn safe_horizon(&self, d: u32) -> u32 {
        self.radius.saturating_sub(d)
    }
}

/// Distances from every vertex, row `v` holding the BFS distances from `v`.
pub(crate) fn distance_table(g: &Graph) -> Vec<Vec<u32>> {
    use rayon::prelude::*;
    (0..g.vertex_count())
        .into_par_iter()
        .map(|v| g.bfs_distances(v).expect("vertex in range"))
        .collect()
}

/// Aligned text table with a header row.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum EquivalenceParams {
    Sphere {
        truncation: Option<Truncation>,
        n0_max: u32,
        horizon: Option<u32>,
    },
    Suborbit {
        budget: usize,
        level: usize,
    },
}

/// A partition of the vertices induced by a pairwise relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceClasses {
    pub parameters: EquivalenceParams,
    /// Sorted classes, ordered by least element.
    pub classes: Vec<Vec<usize>>,
    /// Pairs placed in a common class only by transitive closure.
    pub closure_added_pairs: usize,
    pub warning: Option<String>,
}

impl EquivalenceClasses {
    /// Builds classes from `related` over all pairs `u < v`, closing
    /// transitively and recording how many pairs the closure added.
    pub(crate) fn from_relation(
        n: usize,
        parameters: EquivalenceParams,
        related: impl Fn(usize, usize) -> Result<bool> + Sync,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let verdicts: Vec<bool> = pairs
            .par_iter()
            .map(|&(u, v)| related(u, v))
            .collect::<Result<_>>()?;

        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (&(u, v), &ok) in pairs.iter().zip(&verdicts) {
            if ok {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; n];
        for (v, &r) in roots.iter().enumerate() {
            if index[r] == usize::MAX {
                index[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[index[r]].push(v);
        }
        let closure_added_pairs = pairs
            .iter()
            .zip(&verdicts)
            .filter(|&(&(u, v), &ok)| !ok && roots[u] == roots[v])
            .count();
        let warning = (closure_added_pairs > 0)
            .then(|| format!("transitive closure merged {closure_added_pairs} unrelated pairs"));
        Ok(EquivalenceClasses {
            parameters,
            classes,
            closure_added_pairs,
            warning,
        })
    }

    pub fn class_of(&self, v: usize) -> Option<&[usize]> {
        self.classes
            .iter()
            .find(|c| c.contains(&v))
            .map(Vec::as_slice)
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let members: Vec<String> = c.iter().map(usize::to_string).collect();
                vec![i.to_string(), c.len().to_string(), members.join(" ")]
            })
            .collect();
        let mut out = format!(
            "parameters: {}\n",
            serde_json::to_string(&self.parameters).unwrap_or_default()
        );
        if let Some(w) = &self.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
        out + &render_table(&["class", "size", "members"], &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_counted() {
        // 0~1 and 1~2 but not 0~2.
        let params = EquivalenceParams::Suborbit {
            budget: 0,
            level: 0,
        };
        let classes =
            EquivalenceClasses::from_relation(4, params, |u, v| Ok(v == u + 1 && v < 3)).unwrap();
        assert_eq!(classes.classes, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(classes.closure_added_pairs, 1);
        assert!(classes.warning.is_some());
        assert_eq!(classes.class_of(2), Some(&[0, 1, 2][..]));
    }

    #[test]
    fn table_alignment() {
        let t = render_table(&["a", "long"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    long\nxyz  1\n");
    }
}
