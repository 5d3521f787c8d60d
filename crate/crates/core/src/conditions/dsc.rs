use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_table, render_table, Truncation};
use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    /// Spheres differ at some safe `n >= 1`.
    Separated,
    /// Safe radii exist but the spheres agree at all of them.
    Violation,
    /// No safe radius `n >= 1` exists for this pair; nothing can be
    /// concluded from the truncation.
    Horizon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DscPair {
    pub x: usize,
    pub y: usize,
    pub x_label: String,
    pub y_label: String,
    pub distance: u32,
    pub safe_max_n: u32,
    pub first_separating_n: Option<u32>,
    pub status: PairStatus,
}

/// Result of the distinct spheres check on a truncation.
///
/// Violations and horizon pairs are evidence limited by the truncation, not
/// a refutation of the condition on the infinite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DscReport {
    pub root: usize,
    pub radius: u32,
    pub horizon_rule: String,
    pub checked_pairs: usize,
    pub separated: usize,
    pub violations: usize,
    pub horizon_pairs: usize,
    pub pairs: Vec<DscPair>,
}

impl DscReport {
    pub fn violating_pairs(&self) -> impl Iterator<Item = &DscPair> {
        self.pairs
            .iter()
            .filter(|p| p.status == PairStatus::Violation)
    }

    pub fn horizon_limited_pairs(&self) -> impl Iterator<Item = &DscPair> {
        self.pairs
            .iter()
            .filter(|p| p.status == PairStatus::Horizon)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("x,y,x_label,y_label,distance,safe_max_n,first_separating_n,status\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{},{},\"{}\",\"{}\",{},{},{},{}\n",
                p.x,
                p.y,
                p.x_label,
                p.y_label,
                p.distance,
                p.safe_max_n,
                p.first_separating_n
                    .map_or(String::new(), |n| n.to_string()),
                status_name(p.status)
            ));
        }
        out
    }

    /// Summary plus one row per pair that was not separated.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "root {} radius {}\nrule: {}\nchecked {}  separated {}  violations {}  horizon-limited {}\n",
            self.root,
            self.radius,
            self.horizon_rule,
            self.checked_pairs,
            self.separated,
            self.violations,
            self.horizon_pairs
        );
        let rows: Vec<Vec<String>> = self
            .pairs
            .iter()
            .filter(|p| p.status != PairStatus::Separated)
            .map(|p| {
                vec![
                    p.x_label.clone(),
                    p.y_label.clone(),
                    p.distance.to_string(),
                    p.safe_max_n.to_string(),
                    status_name(p.status).to_string(),
                ]
            })
            .collect();
        if !rows.is_empty() {
            out.push_str(&render_table(
                &["x", "y", "distance", "safe_max_n", "status"],
                &rows,
            ));
        }
        out
    }
}

fn status_name(s: PairStatus) -> &'static str {
    match s {
        PairStatus::Separated => "separated",
        PairStatus::Violation => "violation",
        PairStatus::Horizon => "horizon",
    }
}

/// Compares `S_x(n)` and `S_y(n)` for every pair of distinct vertices at
/// equal distance from the root, for `1 <= n <= radius - d(root, x)`.
///
/// Within that range a shortest path from `x` never leaves the ball, so the
/// truncated spheres coincide with the spheres of the infinite graph.
pub fn dsc_check(g: &Graph, trunc: Truncation) -> Result<DscReport> {
    let root_d = trunc.root_distances(g)?;
    let dist = distance_table(g);
    let n = g.vertex_count();
    let mut by_layer: Vec<Vec<usize>> = vec![Vec::new(); trunc.radius as usize + 1];
    for v in 0..n {
        by_layer[root_d[v] as usize].push(v);
    }
    let pairs: Vec<(usize, usize)> = by_layer
        .iter()
        .flat_map(|layer| {
            layer
                .iter()
                .enumerate()
                .flat_map(move |(i, &x)| layer[i + 1..].iter().map(move |&y| (x, y)))
        })
        .collect();

    let pairs: Vec<DscPair> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let d = root_d[x];
            let safe = trunc.safe_horizon(d);
            // S_x(m) and S_y(m) differ exactly at the radii m = d(x, w) or
            // d(y, w) for some w with d(x, w) != d(y, w).
            let first = (0..n)
                .filter(|&w| dist[x][w] != dist[y][w])
                .flat_map(|w| [dist[x][w], dist[y][w]])
                .filter(|&m| m >= 1 && m <= safe)
                .min();
            let status = match (first, safe) {
                (Some(_), _) => PairStatus::Separated,
                (None, 0) => PairStatus::Horizon,
                (None, _) => PairStatus::Violation,
            };
            DscPair {
                x,
                y,
                x_label: g.label(x).to_string(),
                y_label: g.label(y).to_string(),
                distance: d,
                safe_max_n: safe,
                first_separating_n: first,
                status,
            }
        })
        .collect();

    let count = |s| pairs.iter().filter(|p| p.status == s).count();
    Ok(DscReport {
        root: trunc.root,
        radius: trunc.radius,
        horizon_rule: "spheres compared for 1 <= n <= radius - d(root, x)".into(),
        checked_pairs: pairs.len(),
        separated: count(PairStatus::Separated),
        violations: count(PairStatus::Violation),
        horizon_pairs: count(PairStatus::Horizon),
        pairs,
    })
}
