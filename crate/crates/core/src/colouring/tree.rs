use std::collections::HashMap;

use super::Colouring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::permgroup::{is_automorphism, Permutation};

struct RootedTree {
    children: Vec<Vec<usize>>,
    /// BFS order from the root.
    order: Vec<usize>,
}

fn root_tree(g: &Graph, root: usize) -> Result<RootedTree> {
    g.check_vertex(root)?;
    let n = g.vertex_count();
    if g.edge_count() + 1 != n || !g.is_connected() {
        return Err(Error::NotATree(format!(
            "{n} vertices, {} edges, connected: {}",
            g.edge_count(),
            g.is_connected()
        )));
    }
    let mut parent = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in g.neighbours(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                children[v].push(w);
                order.push(w);
            }
        }
        i += 1;
    }
    Ok(RootedTree { children, order })
}

/// A non-identity automorphism of the tree `g` that fixes `root` and
/// preserves `c`, or `None` when no such automorphism exists.
///
/// Coloured rooted subtrees are given canonical codes bottom-up. A vertex
/// with two children of equal code admits the swap of those two subtrees;
/// if no vertex has such a pair, the root-fixing colour stabiliser is
/// trivial. The first such vertex in BFS order and its two least-indexed
/// matching children are used.
pub fn find_tree_automorphism(
    g: &Graph,
    root: usize,
    c: &Colouring,
) -> Result<Option<Permutation>> {
    let tree = root_tree(g, root)?;
    let n = g.vertex_count();
    if c.len() != n {
        return Err(Error::InvalidParameter(
            "colouring length does not match the tree".into(),
        ));
    }

    let mut code = vec![0usize; n];
    let mut intern: HashMap<(u32, Vec<usize>), usize> = HashMap::new();
    for &v in tree.order.iter().rev() {
        let mut kids: Vec<usize> = tree.children[v].iter().map(|&w| code[w]).collect();
        kids.sort_unstable();
        let next = intern.len();
        code[v] = *intern.entry((c.colours[v], kids)).or_insert(next);
    }

    for &v in &tree.order {
        let mut kids = tree.children[v].clone();
        kids.sort_unstable();
        let pair = kids.iter().enumerate().find_map(|(i, &a)| {
            kids[i + 1..]
                .iter()
                .find(|&&b| code[b] == code[a])
                .map(|&b| (a, b))
        });
        if let Some((a, b)) = pair {
            let mut images: Vec<usize> = (0..n).collect();
            let mut stack = vec![(a, b)];
            while let Some((x, y)) = stack.pop() {
                images[x] = y;
                images[y] = x;
                let mut xs = tree.children[x].clone();
                let mut ys = tree.children[y].clone();
                xs.sort_unstable_by_key(|&w| (code[w], w));
                ys.sort_unstable_by_key(|&w| (code[w], w));
                stack.extend(xs.into_iter().zip(ys));
            }
            let p = Permutation::from_images(images)?;
            if !is_automorphism(g, Some(&c.colours), &p) || p.image(root) != root {
                return Err(Error::Consistency(
                    "subtree swap is not an automorphism".into(),
                ));
            }
            return Ok(Some(p));
        }
    }
    Ok(None)
}
