//! Automorphism search by colour refinement and individualisation.
//!
//! The first path of the search tree individualises, at each node, the least
//! vertex of the first non-singleton cell. Walking back up that path, every
//! other vertex of the target cell that is not already in the orbit of the
//! known automorphisms gets a subtree search for a leaf equivalent to the
//! first leaf. The automorphisms found form a strong generating set relative
//! to the individualised vertices, so no Schreier–Sims pass is needed.

use super::{chain::orbit_under, PermGroup, Permutation};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered partition stored flat: cell `i` is `elems[start..start + len]`
/// for `cells[i] = (start, len)`, kept sorted within each cell.
#[derive(Clone, Debug)]
struct Partition {
    elems: Vec<usize>,
    cells: Vec<(usize, usize)>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut p = Partition {
            elems: Vec::with_capacity(n),
            cells: Vec::with_capacity(cells.len()),
            cell_of: vec![0; n],
        };
        for (i, c) in cells.into_iter().enumerate() {
            p.cells.push((p.elems.len(), c.len()));
            for v in c {
                p.cell_of[v] = i;
                p.elems.push(v);
            }
        }
        p
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    fn cell(&self, i: usize) -> &[usize] {
        let (start, len) = self.cells[i];
        &self.elems[start..start + len]
    }

    fn first_non_singleton(&self) -> Option<usize> {
        self.cells.iter().position(|&(_, len)| len > 1)
    }

    /// Equitable refinement driven by a queue of splitter cells. A cell hit
    /// by a splitter is divided by neighbour count into the splitter; the
    /// part with the smallest count keeps the cell's index and the others
    /// are appended in ascending count order. All choices depend only on
    /// counts and cell indices, so the result is invariant under
    /// isomorphisms.
    fn refine(&mut self, g: &Graph, splitters: &[usize]) {
        let n = g.vertex_count();
        let mut in_queue = vec![false; self.cells.len()];
        let mut queue = std::collections::VecDeque::new();
        for &s in splitters {
            if !in_queue[s] {
                in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let mut count = vec![0usize; n];
        let mut touched_vertices = Vec::new();
        let mut keyed: Vec<(usize, usize)> = Vec::new();
        while let Some(s) = queue.pop_front() {
            in_queue[s] = false;
            for &u in self.cell(s) {
                for &w in g.neighbours(u) {
                    if count[w] == 0 {
                        touched_vertices.push(w);
                    }
                    count[w] += 1;
                }
            }
            let mut touched_cells: Vec<usize> =
                touched_vertices.iter().map(|&w| self.cell_of[w]).collect();
            touched_cells.sort_unstable();
            touched_cells.dedup();
            for c in touched_cells {
                let (start, len) = self.cells[c];
                if len == 1 {
                    continue;
                }
                let members = &self.elems[start..start + len];
                let first = count[members[0]];
                if members.iter().all(|&v| count[v] == first) {
                    continue;
                }
                keyed.clear();
                keyed.extend(members.iter().map(|&v| (count[v], v)));
                keyed.sort_unstable();
                for (slot, &(_, v)) in self.elems[start..start + len].iter_mut().zip(&keyed) {
                    *slot = v;
                }
                let mut from = 0;
                let mut first_part = true;
                for i in 1..=len {
                    if i < len && keyed[i].0 == keyed[from].0 {
                        continue;
                    }
                    if first_part {
                        self.cells[c] = (start, i - from);
                        if !in_queue[c] {
                            in_queue[c] = true;
                            queue.push_back(c);
                        }
                        first_part = false;
                    } else {
                        let idx = self.cells.len();
                        for &(_, v) in &keyed[from..i] {
                            self.cell_of[v] = idx;
                        }
                        self.cells.push((start + from, i - from));
                        in_queue.push(true);
                        queue.push_back(idx);
                    }
                    from = i;
                }
            }
            for w in touched_vertices.drain(..) {
                count[w] = 0;
            }
        }
    }

    /// Moves `v` out of cell `cell` into a new singleton cell at the end and
    /// refines with that singleton as the splitter.
    fn individualise(&self, g: &Graph, cell: usize, v: usize) -> Partition {
        let mut out = self.clone();
        let (start, len) = out.cells[cell];
        let pos = start + out.cell(cell).iter().position(|&w| w == v).unwrap();
        out.elems[pos..start + len].rotate_left(1);
        out.cells[cell] = (start, len - 1);
        let idx = out.cells.len();
        out.cells.push((start + len - 1, 1));
        out.cell_of[v] = idx;
        out.refine(g, &[idx]);
        out
    }

    /// Cell sizes and, for each cell, the cells of a member's neighbours.
    /// Well defined because refined partitions are equitable, and invariant
    /// because cell indices are.
    fn quotient(&self, g: &Graph) -> Vec<usize> {
        let mut out = Vec::new();
        let mut row = Vec::new();
        for i in 0..self.cells.len() {
            self.quotient_row(g, i, &mut row);
            out.extend_from_slice(&row);
        }
        out
    }

    fn quotient_row(&self, g: &Graph, i: usize, row: &mut Vec<usize>) {
        let c = self.cell(i);
        let nbrs = g.neighbours(c[0]);
        row.clear();
        row.push(c.len());
        row.push(nbrs.len());
        row.extend(nbrs.iter().map(|&w| self.cell_of[w]));
        row[2..].sort_unstable();
    }

    /// `self.quotient(g) == target`, stopping at the first difference.
    fn quotient_matches(&self, g: &Graph, target: &[usize]) -> bool {
        let mut row = Vec::new();
        let mut at = 0;
        for i in 0..self.cells.len() {
            self.quotient_row(g, i, &mut row);
            if target.get(at..at + row.len()) != Some(&row[..]) {
                return false;
            }
            at += row.len();
        }
        at == target.len()
    }
}

fn initial_partition(g: &Graph, colours: Option<&[u32]>) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    match colours {
        None => vec![(0..n).collect()],
        Some(c) => {
            let mut keys: Vec<u32> = c.to_vec();
            keys.sort_unstable();
            keys.dedup();
            keys.iter()
                .map(|&k| (0..n).filter(|&v| c[v] == k).collect())
                .collect()
        }
    }
}

pub(crate) fn is_automorphism(g: &Graph, colours: Option<&[u32]>, p: &Permutation) -> bool {
    if p.degree() != g.vertex_count() {
        return false;
    }
    if let Some(c) = colours {
        if (0..p.degree()).any(|v| c[p.image(v)] != c[v]) {
            return false;
        }
    }
    g.edges().all(|(u, v)| g.has_edge(p.image(u), p.image(v)))
}

struct Search<'a> {
    graph: &'a Graph,
    colours: Option<&'a [u32]>,
    /// Nodes of the first path, root first; the last is discrete.
    path: Vec<Partition>,
    quotients: Vec<Vec<usize>>,
    /// (cell index, vertex) individualised at each non-leaf path node.
    choices: Vec<(usize, usize)>,
    first_leaf: Vec<usize>,
}

impl Search<'_> {
    fn leaf_map(&self, leaf: &Partition) -> Permutation {
        let mut images = vec![0; self.first_leaf.len()];
        for i in 0..leaf.len() {
            images[self.first_leaf[i]] = leaf.cell(i)[0];
        }
        Permutation::from_images_unchecked(images)
    }

    /// Depth-first search below `node` (at `depth` on the path) for a leaf
    /// giving an automorphism.
    fn descend(&self, node: Partition, depth: usize) -> Option<Permutation> {
        if node.len() != self.path[depth].len()
            || !node.quotient_matches(self.graph, &self.quotients[depth])
        {
            return None;
        }
        if depth == self.choices.len() {
            let p = self.leaf_map(&node);
            return is_automorphism(self.graph, self.colours, &p).then_some(p);
        }
        let (cell, _) = self.choices[depth];
        for &u in node.cell(cell) {
            let child = node.individualise(self.graph, cell, u);
            if let Some(p) = self.descend(child, depth + 1) {
                return Some(p);
            }
        }
        None
    }
}

/// Full automorphism group of `g`, restricted to colour-preserving maps
/// when `colours` is given.
pub fn automorphism_group(g: &Graph, colours: Option<&[u32]>) -> Result<PermGroup> {
    let n = g.vertex_count();
    if let Some(c) = colours {
        if c.len() != n {
            return Err(Error::InvalidParameter(format!(
                "colouring has {} entries for {n} vertices",
                c.len()
            )));
        }
    }
    if n == 0 {
        return Ok(PermGroup::trivial(0));
    }

    let mut root = Partition::from_cells(n, initial_partition(g, colours));
    let all: Vec<usize> = (0..root.len()).collect();
    root.refine(g, &all);
    let mut path = vec![root];
    let mut choices = Vec::new();
    loop {
        let node = path.last().unwrap();
        let Some(cell) = node.first_non_singleton() else {
            break;
        };
        let v = node.cell(cell)[0];
        choices.push((cell, v));
        let child = node.individualise(g, cell, v);
        path.push(child);
    }
    let leaf = path.last().unwrap();
    let first_leaf: Vec<usize> = (0..leaf.len()).map(|i| leaf.cell(i)[0]).collect();
    let quotients = path.iter().map(|p| p.quotient(g)).collect();
    let search = Search {
        graph: g,
        colours,
        path,
        quotients,
        choices,
        first_leaf,
    };

    let mut found: Vec<Permutation> = Vec::new();
    for level in (0..search.choices.len()).rev() {
        let (cell, v) = search.choices[level];
        let mut orbit = orbit_under(n, &found, v);
        let targets = search.path[level].cell(cell).to_vec();
        for w in targets {
            if orbit.binary_search(&w).is_ok() {
                continue;
            }
            let child = search.path[level].individualise(g, cell, w);
            if let Some(p) = search.descend(child, level + 1) {
                found.push(p);
                orbit = orbit_under(n, &found, v);
            }
        }
    }
    let base = search.choices.iter().map(|&(_, v)| v).collect();
    Ok(PermGroup::from_bsgs(n, base, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use num_bigint::BigUint;

    #[test]
    fn small_orders() {
        let order = |g: &Graph| automorphism_group(g, None).unwrap().order();
        assert_eq!(order(&cycle(6)), BigUint::from(12u32));
        assert_eq!(order(&path(4)), BigUint::from(2u32));
        assert_eq!(order(&hypercube(3)), BigUint::from(48u32));
        assert_eq!(order(&complete(5)), BigUint::from(120u32));
        assert_eq!(order(&complete_bipartite(3, 3)), BigUint::from(72u32));
        assert_eq!(order(&path(1)), BigUint::from(1u32));
        assert_eq!(
            order(&Graph::from_edges(3, &[]).unwrap()),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn coloured_c4() {
        let g = automorphism_group(&cycle(4), Some(&[0, 1, 0, 1])).unwrap();
        assert_eq!(g.order(), BigUint::from(4u32));
        for p in g.elements(100).unwrap() {
            assert!(is_automorphism(&cycle(4), Some(&[0, 1, 0, 1]), &p));
        }
    }

    #[test]
    fn large_tree_group() {
        // Root has 3 children with 2 grandchildren each: (2!)^3 * 3! = 48.
        let t =
            crate::graph::generate_family(&crate::graph::FamilySpec::regular_tree(3, 2)).unwrap();
        assert_eq!(
            automorphism_group(&t, None).unwrap().order(),
            BigUint::from(48u32)
        );
        let big = rooted_tree(6, 3);
        // S6 wr S6 wr S6 has order 720^(1 + 6 + 36).
        let expected = num_traits::pow(BigUint::from(720u32), 43);
        assert_eq!(automorphism_group(&big, None).unwrap().order(), expected);
    }
}
