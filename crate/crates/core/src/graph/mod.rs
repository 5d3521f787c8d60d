//! Finite simple undirected graphs with BFS distance services.
//!
//! Vertices are dense indices `0..n`. Anything that identifies a vertex inside
//! a larger structure (a tree path, a grid coordinate, a product pair) lives in
//! the optional per-vertex [`Label`], never in the index itself.

mod family;
mod io;
pub mod named;

pub use family::{generate_family, FamilyKind, FamilySpec};
pub use io::{parse_graph_text, GraphJson};

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance value used for vertices in a different component.
pub const UNREACHABLE: u32 = u32::MAX;

/// Above this many vertices the full distance matrix is not cached.
pub const DEFAULT_DISTANCE_CACHE_CAP: usize = 4096;

/// Opaque per-vertex label carrying family coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Coord(Vec<i64>),
    Pair { left: Box<Label>, right: Box<Label> },
    Text(String),
}

impl Label {
    pub fn pair(left: Label, right: Label) -> Self {
        Label::Pair {
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Coord(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Label::Pair { left, right } => write!(f, "({left},{right})"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<Label>>,
    distance_cache_cap: usize,
    distances: OnceLock<Option<Vec<u32>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an undirected edge list, rejecting loops and
    /// repeated edges.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge {v}-{}", w[0])));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        Graph {
            adj,
            labels: None,
            distance_cache_cap: DEFAULT_DISTANCE_CACHE_CAP,
            distances: OnceLock::new(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_distance_cache_cap(mut self, cap: usize) -> Self {
        self.distance_cache_cap = cap;
        self.distances = OnceLock::new();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// The label of `v`, or its index as an integer label when unlabelled.
    pub fn label(&self, v: usize) -> Label {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => Label::Int(v as i64),
        }
    }

    pub fn find_label(&self, label: &Label) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => match label {
                Label::Int(i) if (*i as usize) < self.vertex_count() && *i >= 0 => {
                    Some(*i as usize)
                }
                _ => None,
            },
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    fn bfs_uncached(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn distance_matrix(&self) -> Option<&[u32]> {
        self.distances
            .get_or_init(|| {
                let n = self.vertex_count();
                if n > self.distance_cache_cap {
                    return None;
                }
                let mut m = Vec::with_capacity(n * n);
                for v in 0..n {
                    m.extend(self.bfs_uncached(v));
                }
                Some(m)
            })
            .as_deref()
    }

    /// Hop distances from `v` to every vertex; [`UNREACHABLE`] marks other
    /// components.
    pub fn bfs_distances(&self, v: usize) -> Result<Vec<u32>> {
        self.check_vertex(v)?;
        let n = self.vertex_count();
        Ok(match self.distance_matrix() {
            Some(m) => m[v * n..(v + 1) * n].to_vec(),
            None => self.bfs_uncached(v),
        })
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<u32> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let n = self.vertex_count();
        Ok(match self.distance_matrix() {
            Some(m) => m[u * n + v],
            None => self.bfs_uncached(u)[v],
        })
    }

    /// Vertices at distance exactly `n` from `v`, ascending.
    pub fn sphere(&self, v: usize, n: u32) -> Result<Vec<usize>> {
        let d = self.bfs_distances(v)?;
        Ok((0..d.len()).filter(|&u| d[u] == n).collect())
    }

    /// Largest finite distance from `v`.
    pub fn eccentricity(&self, v: usize) -> Result<u32> {
        let d = self.bfs_distances(v)?;
        Ok(d.into_iter()
            .filter(|&x| x != UNREACHABLE)
            .max()
            .unwrap_or(0))
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_uncached(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is
    /// `vertices[i]`. Labels are carried over.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if index[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!("vertex {v} listed twice")));
            }
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut ns: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        let mut g = Graph::from_sorted_adjacency(adj);
        g.distance_cache_cap = self.distance_cache_cap;
        if let Some(labels) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok(g)
    }

    /// Sphere and ball sizes around `v0` for radii `0..=radius`.
    pub fn growth_sequence(&self, v0: usize, radius: u32) -> Result<GrowthProfile> {
        let d = self.bfs_distances(v0)?;
        let mut sphere_sizes = vec![0u64; radius as usize + 1];
        for &x in &d {
            if x <= radius {
                sphere_sizes[x as usize] += 1;
            }
        }
        let ball_sizes = sphere_sizes
            .iter()
            .scan(0u64, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        let ecc = d
            .iter()
            .copied()
            .filter(|&x| x != UNREACHABLE)
            .max()
            .unwrap_or(0);
        Ok(GrowthProfile {
            root: v0,
            ball_sizes,
            sphere_sizes,
            eccentricity: ecc,
            exceeds_eccentricity: radius > ecc,
        })
    }
}

/// Exact sphere and ball cardinalities around a root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub root: usize,
    pub ball_sizes: Vec<u64>,
    pub sphere_sizes: Vec<u64>,
    pub eccentricity: u32,
    /// Set when the requested radius runs past the root's eccentricity; the
    /// trailing sphere sizes are then zero.
    pub exceeds_eccentricity: bool,
}

/// Cartesian product `g1 □ g2`. Vertex `(a, b)` gets index `a * |g2| + b`
/// and a pair label built from the factor labels.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Result<Graph> {
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let n = n1.checked_mul(n2).ok_or_else(|| {
        Error::InvalidParameter(format!("product of {n1} and {n2} vertices overflows"))
    })?;
    let mut adj = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for a in 0..n1 {
        for b in 0..n2 {
            let mut ns: Vec<usize> = g1.neighbours(a).iter().map(|&a2| a2 * n2 + b).collect();
            ns.extend(g2.neighbours(b).iter().map(|&b2| a * n2 + b2));
            ns.sort_unstable();
            adj.push(ns);
            labels.push(Label::pair(g1.label(a), g2.label(b)));
        }
    }
    let mut g = Graph::from_sorted_adjacency(adj);
    g.labels = Some(labels);
    Ok(g)
}
