//! Small graph utilities shared by the solvers.

use std::collections::VecDeque;

use crate::instance::Vertex;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Vertices reachable from `start` moving only through vertices where
/// `allowed` holds. `start` itself is always included.
pub fn reachable_from(
    adjacency: &[Vec<Vertex>],
    start: Vertex,
    allowed: impl Fn(Vertex) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v] && allowed(v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// A tree given by its edge list, rooted at `root`, with parent links.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: Vertex,
    /// `parent[v]` for tree vertices other than the root.
    pub parent: Vec<Option<Vertex>>,
    pub children: Vec<Vec<Vertex>>,
    pub in_tree: Vec<bool>,
    /// Tree vertices in breadth-first order from the root.
    pub order: Vec<Vertex>,
    pub depth: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    OutOfRange(Vertex, Vertex, usize),
    #[error("edges contain a cycle through ({0}, {1})")]
    Cycle(Vertex, Vertex),
    #[error("edges do not form a single tree containing the root {0}")]
    Disconnected(Vertex),
}

impl RootedTree {
    pub fn from_edges(
        n: usize,
        edges: &[(Vertex, Vertex)],
        root: Vertex,
    ) -> Result<Self, TreeError> {
        if root >= n {
            return Err(TreeError::OutOfRange(root, root, n));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        let mut touched = vec![false; n];
        touched[root] = true;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(TreeError::OutOfRange(u, v, n));
            }
            if !uf.union(u, v) {
                return Err(TreeError::Cycle(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            touched[u] = true;
            touched[v] = true;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let in_tree = reachable_from(&adjacency, root, |_| true);
        if (0..n).any(|v| touched[v] && !in_tree[v]) {
            return Err(TreeError::Disconnected(root));
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &adjacency[u] {
                if v != root && parent[v].is_none() {
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    children[u].push(v);
                    order.push(v);
                }
            }
        }
        Ok(RootedTree {
            root,
            parent,
            children,
            in_tree,
            order,
            depth,
        })
    }

    /// Path from the root down to `v`, inclusive.
    pub fn path_from_root(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Edges as `(parent, child)` pairs in breadth-first order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.order
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (p, v)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_joins() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert!(!uf.union(1, 0));
        assert!(!uf.same(0, 3));
        assert!(uf.union(1, 3));
        assert!(uf.same(0, 2));
    }

    #[test]
    fn rooted_tree_rejects_cycles_and_forests() {
        assert_eq!(
            RootedTree::from_edges(3, &[(0, 1), (1, 2), (2, 0)], 0).unwrap_err(),
            TreeError::Cycle(2, 0)
        );
        assert_eq!(
            RootedTree::from_edges(4, &[(0, 1), (2, 3)], 0).unwrap_err(),
            TreeError::Disconnected(0)
        );
        let t = RootedTree::from_edges(4, &[(0, 1), (1, 2)], 2).unwrap();
        assert_eq!(t.path_from_root(0), vec![2, 1, 0]);
        assert!(!t.in_tree[3]);
    }
}
