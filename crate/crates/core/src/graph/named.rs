//! Small named graphs used in tests, examples, and the experiment suite.

use super::Graph;

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::from_edges(n, &edges).expect("named graph construction is valid")
}

/// Path on `n` vertices, `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)).collect())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn complete(n: usize) -> Graph {
    build(
        n,
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
    )
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(
        a + b,
        (0..a)
            .flat_map(|i| (a..a + b).map(move |j| (i, j)))
            .collect(),
    )
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

/// Hypercube `Q_d` on bit strings; `u ~ v` when they differ in one bit.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    build(
        n,
        (0..n)
            .flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b))))
            .filter(|&(u, v)| u < v)
            .collect(),
    )
}

/// Complete rooted tree: root 0, every internal vertex has `branching`
/// children, leaves at `depth`. Vertices are numbered level by level.
pub fn rooted_tree(branching: usize, depth: u32) -> Graph {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next_id = 1;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..branching {
                edges.push((p, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        level = next;
    }
    build(next_id, edges)
}

/// The finite test corpus: `P2..P8, C3..C8, K2..K5, K_{2,3}, K_{3,3}, K_{1,4}, Q3`.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("P{n}"), path(n)));
    }
    for n in 3..=8 {
        out.push((format!("C{n}"), cycle(n)));
    }
    for n in 2..=5 {
        out.push((format!("K{n}"), complete(n)));
    }
    out.push(("K2,3".into(), complete_bipartite(2, 3)));
    out.push(("K3,3".into(), complete_bipartite(3, 3)));
    out.push(("K1,4".into(), star(4)));
    out.push(("Q3".into(), hypercube(3)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(hypercube(3).edge_count(), 12);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(star(4).degree(0), 4);
        assert_eq!(corpus().len(), 21);
        let t = rooted_tree(6, 3);
        assert_eq!((t.vertex_count(), t.edge_count()), (259, 258));
    }
}
