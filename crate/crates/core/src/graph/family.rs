//! Finite truncations of infinite graph families.
//!
//! Every family is described implicitly by a root label and a neighbour
//! function on labels. [`generate_family`] runs a BFS from the root, visiting
//! neighbours in ascending label order, and keeps the ball of the requested
//! radius. Indices are assigned in discovery order, so the root is vertex 0
//! and the radius-`R` graph is the induced subgraph of the radius-`R+1` graph
//! on its first `|B(R)|` vertices.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Graph, GraphJson, Label};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FamilyKind {
    RegularTree {
        degree: usize,
    },
    DoubleRay,
    Grid {
        dimension: usize,
    },
    /// The double ray times `K2`; labels are `(i, side)`.
    Ladder,
    CartesianProduct {
        left: Box<FamilySpec>,
        right: Box<FamilySpec>,
    },
    /// A finite graph read from a file or given inline, rooted at `root`.
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<GraphJson>,
        #[serde(default)]
        root: usize,
    },
}

/// JSON shape: `{"kind": ..., "params": {...}, "radius": R}`. The radius may
/// be omitted only for finite families, meaning "the whole graph".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, radius: u32) -> Self {
        FamilySpec {
            kind,
            radius: Some(radius),
        }
    }

    pub fn regular_tree(degree: usize, radius: u32) -> Self {
        Self::new(FamilyKind::RegularTree { degree }, radius)
    }

    pub fn double_ray(radius: u32) -> Self {
        Self::new(FamilyKind::DoubleRay, radius)
    }

    pub fn grid(dimension: usize, radius: u32) -> Self {
        Self::new(FamilyKind::Grid { dimension }, radius)
    }

    pub fn ladder(radius: u32) -> Self {
        Self::new(FamilyKind::Ladder, radius)
    }

    pub fn product(left: FamilySpec, right: FamilySpec, radius: u32) -> Self {
        Self::new(
            FamilyKind::CartesianProduct {
                left: Box::new(left),
                right: Box::new(right),
            },
            radius,
        )
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Family(e.to_string()))
    }
}

enum Implicit {
    Tree(usize),
    DoubleRay,
    Grid(usize),
    Ladder,
    Product(Box<Implicit>, Box<Implicit>),
    Finite { graph: Graph, root: usize },
}

impl Implicit {
    fn build(kind: &FamilyKind) -> Result<Self> {
        Ok(match kind {
            FamilyKind::RegularTree { degree } => {
                if *degree < 3 {
                    return Err(Error::Family(format!("regular tree degree {degree} < 3")));
                }
                Implicit::Tree(*degree)
            }
            FamilyKind::DoubleRay => Implicit::DoubleRay,
            FamilyKind::Grid { dimension } => {
                if *dimension == 0 {
                    return Err(Error::Family("grid dimension must be at least 1".into()));
                }
                Implicit::Grid(*dimension)
            }
            FamilyKind::Ladder => Implicit::Ladder,
            FamilyKind::CartesianProduct { left, right } => Implicit::Product(
                Box::new(Implicit::build(&left.kind)?),
                Box::new(Implicit::build(&right.kind)?),
            ),
            FamilyKind::Custom { path, graph, root } => {
                let g = match (path, graph) {
                    (Some(p), None) => Graph::load(p)
                        .map_err(|e| Error::Family(format!("cannot read {p}: {e}")))?,
                    (None, Some(j)) => Graph::from_json(j)?,
                    _ => {
                        return Err(Error::Family(
                            "custom family needs exactly one of `path` or `graph`".into(),
                        ))
                    }
                };
                g.check_vertex(*root)?;
                Implicit::Finite {
                    graph: g,
                    root: *root,
                }
            }
        })
    }

    fn is_finite(&self) -> bool {
        match self {
            Implicit::Finite { .. } => true,
            Implicit::Product(a, b) => a.is_finite() && b.is_finite(),
            _ => false,
        }
    }

    fn root(&self) -> Label {
        match self {
            Implicit::Tree(_) => Label::Coord(vec![]),
            Implicit::DoubleRay => Label::Int(0),
            Implicit::Grid(k) => Label::Coord(vec![0; *k]),
            Implicit::Ladder => Label::Coord(vec![0, 0]),
            Implicit::Product(a, b) => Label::pair(a.root(), b.root()),
            Implicit::Finite { root, .. } => Label::Int(*root as i64),
        }
    }

    fn neighbours(&self, v: &Label) -> Vec<Label> {
        let mut out = match (self, v) {
            (Implicit::Tree(d), Label::Coord(p)) => {
                let mut out = Vec::new();
                let branching = if p.is_empty() { *d } else { d - 1 };
                if !p.is_empty() {
                    out.push(Label::Coord(p[..p.len() - 1].to_vec()));
                }
                for c in 0..branching as i64 {
                    let mut q = p.clone();
                    q.push(c);
                    out.push(Label::Coord(q));
                }
                out
            }
            (Implicit::DoubleRay, Label::Int(i)) => vec![Label::Int(i - 1), Label::Int(i + 1)],
            (Implicit::Grid(_), Label::Coord(x)) => {
                let mut out = Vec::new();
                for axis in 0..x.len() {
                    for step in [-1, 1] {
                        let mut y = x.clone();
                        y[axis] += step;
                        out.push(Label::Coord(y));
                    }
                }
                out
            }
            (Implicit::Ladder, Label::Coord(x)) => vec![
                Label::Coord(vec![x[0] - 1, x[1]]),
                Label::Coord(vec![x[0] + 1, x[1]]),
                Label::Coord(vec![x[0], 1 - x[1]]),
            ],
            (Implicit::Product(a, b), Label::Pair { left, right }) => {
                let mut out: Vec<Label> = a
                    .neighbours(left)
                    .into_iter()
                    .map(|l| Label::pair(l, (**right).clone()))
                    .collect();
                out.extend(
                    b.neighbours(right)
                        .into_iter()
                        .map(|r| Label::pair((**left).clone(), r)),
                );
                out
            }
            (Implicit::Finite { graph, .. }, Label::Int(i)) => graph
                .neighbours(*i as usize)
                .iter()
                .map(|&w| Label::Int(w as i64))
                .collect(),
            _ => unreachable!("label shape is fixed by the family"),
        };
        out.sort();
        out
    }

    /// Replaces internal traversal labels of finite factors by the labels
    /// the factor graph carries, if any.
    fn display_label(&self, v: &Label) -> Label {
        match (self, v) {
            (Implicit::Finite { graph, .. }, Label::Int(i)) => graph.label(*i as usize),
            (Implicit::Product(a, b), Label::Pair { left, right }) => {
                Label::pair(a.display_label(left), b.display_label(right))
            }
            _ => v.clone(),
        }
    }
}

/// Ball of radius `spec.radius` around the family's root, root at index 0.
pub fn generate_family(spec: &FamilySpec) -> Result<Graph> {
    let family = Implicit::build(&spec.kind)?;
    let radius = match spec.radius {
        Some(r) => r,
        None if family.is_finite() => u32::MAX,
        None => {
            return Err(Error::Family(
                "radius is required for infinite families".into(),
            ))
        }
    };

    let root = family.root();
    let mut index: HashMap<Label, usize> = HashMap::new();
    let mut order = vec![root.clone()];
    let mut depth = vec![0u32];
    index.insert(root, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        for w in family.neighbours(&order[i]) {
            if !index.contains_key(&w) {
                index.insert(w.clone(), order.len());
                queue.push_back(order.len());
                order.push(w);
                depth.push(depth[i] + 1);
            }
        }
    }

    let adj = order
        .iter()
        .map(|v| {
            let mut ns: Vec<usize> = family
                .neighbours(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect();
            ns.sort_unstable();
            ns
        })
        .collect();
    let labels = order.iter().map(|v| family.display_label(v)).collect();
    Graph::from_sorted_adjacency(adj).with_labels(labels)
}
