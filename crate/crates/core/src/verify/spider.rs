use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{RootedTree, TreeError};
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};

use super::grt::first_rise;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpiderError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("root {0} is not in M")]
    RootNotInM(Vertex),
    #[error("vertex {0} of M is not in the tree")]
    MOutsideTree(Vertex),
    #[error("M has {0} vertices; at least two are needed")]
    TooFewMarked(usize),
    #[error("assignment has {found} entries for {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("tree is not grade-respecting at vertex {0}")]
    NotGrt(Vertex),
    #[error("tree is not M-optimized at vertex {0}")]
    NotOptimized(Vertex),
}

struct Prepared {
    tree: RootedTree,
    marked: Vec<bool>,
}

fn prepare(
    instance: &Instance,
    tree_edges: &[(Vertex, Vertex)],
    y: &GradeAssignment,
    root: Vertex,
    m: &BTreeSet<Vertex>,
) -> Result<Prepared, SpiderError> {
    let n = instance.num_vertices();
    if y.len() != n {
        return Err(SpiderError::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let tree = RootedTree::from_edges(n, tree_edges, root)?;
    if !m.contains(&root) {
        return Err(SpiderError::RootNotInM(root));
    }
    let mut marked = vec![false; n];
    for &v in m {
        if v >= n || !tree.in_tree[v] {
            return Err(SpiderError::MOutsideTree(v));
        }
        marked[v] = true;
    }
    Ok(Prepared { tree, marked })
}

/// Prunes `alive` to the vertices whose subtree holds a marked vertex and
/// lowers every unmarked survivor to the highest marked grade below it.
fn optimize_in_place(tree: &RootedTree, marked: &[bool], alive: &mut [bool], y: &mut [Grade]) {
    let mut best: Vec<Option<Grade>> = vec![None; alive.len()];
    for &v in tree.order.iter().rev() {
        if !alive[v] {
            continue;
        }
        if marked[v] {
            best[v] = Some(best[v].map_or(y[v], |b| b.max(y[v])));
        }
        match best[v] {
            None => {
                alive[v] = false;
                y[v] = 0;
            }
            Some(b) => {
                if !marked[v] {
                    y[v] = b;
                }
                if let Some(p) = tree.parent[v] {
                    best[p] = Some(best[p].map_or(b, |q| q.max(b)));
                }
            }
        }
    }
}

/// The M-optimized subtree: branches without vertices of M are pruned and
/// each other vertex outside M drops to the highest grade in M below it.
/// Returns the kept `(parent, child)` edges and the new grades, zero off
/// the tree.
pub fn m_optimize(
    instance: &Instance,
    tree_edges: &[(Vertex, Vertex)],
    y: &GradeAssignment,
    root: Vertex,
    m: &BTreeSet<Vertex>,
) -> Result<(Vec<(Vertex, Vertex)>, GradeAssignment), SpiderError> {
    let Prepared { tree, marked } = prepare(instance, tree_edges, y, root, m)?;
    if let Some(v) = first_rise(&tree, y.as_slice()) {
        return Err(SpiderError::NotGrt(v));
    }
    let mut alive = tree.in_tree.clone();
    let mut grades: Vec<Grade> = (0..y.len())
        .map(|v| if alive[v] { y[v] } else { 0 })
        .collect();
    optimize_in_place(&tree, &marked, &mut alive, &mut grades);
    let edges = tree
        .order
        .iter()
        .filter(|&&v| alive[v])
        .filter_map(|&v| tree.parent[v].map(|p| (p, v)))
        .collect();
    Ok((edges, GradeAssignment::new(grades)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedSpider {
    pub root: Vertex,
    pub center: Vertex,
    /// Path from the root to the center, both included.
    pub root_path: Vec<Vertex>,
    /// Disjoint paths leaving the center, center excluded.
    pub legs: Vec<Vec<Vertex>>,
    /// Vertices of M in the spider other than its root.
    pub members: Vec<Vertex>,
}

impl RootedSpider {
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.root_path
            .iter()
            .chain(self.legs.iter().flatten())
            .copied()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiderDecomposition {
    pub spiders: Vec<RootedSpider>,
    /// Grades after the demotions made while peeling spiders off; the
    /// spiders are grade-respecting under these.
    pub grades: GradeAssignment,
}

/// Decomposes an M-optimized grade-respecting tree into vertex-disjoint
/// rooted spiders covering M.
///
/// Repeatedly takes the deepest vertex `v` (smallest id on ties) whose
/// subtree holds two vertices of M. Its subtree is a spider centred at `v`,
/// rooted at `v` if `v` is in M and otherwise at the smallest vertex of M
/// below with the same grade. If only the tree root would remain in M, the
/// root joins this last spider through the path down to `v`.
pub fn spider_decompose(
    instance: &Instance,
    tree_edges: &[(Vertex, Vertex)],
    y: &GradeAssignment,
    root: Vertex,
    m: &BTreeSet<Vertex>,
) -> Result<SpiderDecomposition, SpiderError> {
    if m.len() < 2 {
        return Err(SpiderError::TooFewMarked(m.len()));
    }
    let Prepared { tree, mut marked } = prepare(instance, tree_edges, y, root, m)?;
    if let Some(v) = first_rise(&tree, y.as_slice()) {
        return Err(SpiderError::NotGrt(v));
    }
    let n = y.len();
    let mut alive = tree.in_tree.clone();
    let mut grades: Vec<Grade> = y.as_slice().to_vec();
    {
        let (mut check_alive, mut check) = (alive.clone(), grades.clone());
        optimize_in_place(&tree, &marked, &mut check_alive, &mut check);
        if let Some(v) = (0..n).find(|&v| alive[v] && (!check_alive[v] || check[v] != grades[v])) {
            return Err(SpiderError::NotOptimized(v));
        }
    }
    let original = marked.clone();
    let mut spiders = Vec::new();
    let mut remaining = m.len();
    loop {
        let mut count = vec![0usize; n];
        for &v in tree.order.iter().rev() {
            if !alive[v] {
                continue;
            }
            if marked[v] {
                count[v] += 1;
            }
            if let Some(p) = tree.parent[v] {
                count[p] += count[v];
            }
        }
        let v = tree
            .order
            .iter()
            .copied()
            .filter(|&v| alive[v] && count[v] >= 2)
            .max_by_key(|&v| (tree.depth[v], std::cmp::Reverse(v)))
            .expect("root subtree holds at least two vertices of M");

        // Every live child subtree is a path ending at its only vertex of M.
        let legs: Vec<Vec<Vertex>> = tree.children[v]
            .iter()
            .filter(|&&c| alive[c])
            .map(|&c| {
                let mut leg = vec![c];
                let mut cur = c;
                while let Some(&next) = tree.children[cur].iter().find(|&&d| alive[d]) {
                    leg.push(next);
                    cur = next;
                }
                leg
            })
            .collect();
        let in_subtree: Vec<Vertex> = legs
            .iter()
            .flatten()
            .copied()
            .chain([v])
            .filter(|&u| marked[u])
            .collect();
        let left = remaining - in_subtree.len();

        let spider = if v != root && left == 1 {
            // Only the root is left: it joins this spider from above.
            let mut members = in_subtree.clone();
            members.sort_unstable();
            RootedSpider {
                root,
                center: v,
                root_path: tree.path_from_root(v),
                legs,
                members,
            }
        } else if marked[v] || v == root {
            let mut members: Vec<Vertex> = in_subtree.iter().copied().filter(|&u| u != v).collect();
            members.sort_unstable();
            RootedSpider {
                root: v,
                center: v,
                root_path: vec![v],
                legs,
                members,
            }
        } else {
            let top = grades[v];
            let (idx, end) = legs
                .iter()
                .enumerate()
                .map(|(i, leg)| (i, *leg.last().expect("legs are non-empty")))
                .filter(|&(_, end)| grades[end] == top)
                .min_by_key(|&(_, end)| end)
                .expect("an M-optimized center has an equal-grade vertex of M below");
            let mut legs = legs;
            let mut root_path = legs.remove(idx);
            root_path.reverse();
            root_path.push(v);
            let mut members: Vec<Vertex> =
                in_subtree.iter().copied().filter(|&u| u != end).collect();
            members.sort_unstable();
            RootedSpider {
                root: end,
                center: v,
                root_path,
                legs,
                members,
            }
        };
        let done = v == root || left <= 1;
        for u in spider.vertices() {
            alive[u] = false;
            marked[u] = false;
        }
        spiders.push(spider);
        if done {
            break;
        }
        remaining = left;
        optimize_in_place(&tree, &marked, &mut alive, &mut grades);
    }
    for (v, g) in grades.iter_mut().enumerate() {
        if !tree.in_tree[v] {
            *g = 0;
        }
    }
    debug_assert!(
        spiders.iter().map(|s| 1 + s.members.len()).sum::<usize>()
            == original.iter().filter(|&&b| b).count()
    );
    Ok(SpiderDecomposition {
        spiders,
        grades: GradeAssignment::new(grades),
    })
}

/// Checks every property a decomposition must have; returns a description
/// of the first failure.
pub fn check_decomposition(
    tree_edges: &[(Vertex, Vertex)],
    m: &BTreeSet<Vertex>,
    decomposition: &SpiderDecomposition,
) -> Result<(), String> {
    let y = decomposition.grades.as_slice();
    let edges: BTreeSet<(Vertex, Vertex)> = tree_edges
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let adjacent = |a: Vertex, b: Vertex| edges.contains(&(a.min(b), a.max(b)));
    let mut seen = BTreeSet::new();
    let mut covered = BTreeSet::new();
    let mut total = 0;
    for (j, s) in decomposition.spiders.iter().enumerate() {
        let vertices = s.vertices();
        let size = s.root_path.len() + s.legs.iter().map(Vec::len).sum::<usize>();
        if vertices.len() != size {
            return Err(format!("spider {j}: legs and root path overlap"));
        }
        if let Some(v) = vertices.iter().find(|v| !seen.insert(**v)) {
            return Err(format!("spider {j}: vertex {v} already used"));
        }
        if s.root_path.first() != Some(&s.root) || s.root_path.last() != Some(&s.center) {
            return Err(format!(
                "spider {j}: root path does not run from root to center"
            ));
        }
        if !m.contains(&s.root) {
            return Err(format!("spider {j}: root {} is not in M", s.root));
        }
        if s.legs
            .iter()
            .any(|leg| leg.is_empty() || !m.contains(leg.last().unwrap()))
        {
            return Err(format!("spider {j}: a leg does not end in M"));
        }
        let expected: Vec<Vertex> = vertices
            .iter()
            .copied()
            .filter(|v| m.contains(v) && *v != s.root)
            .collect();
        if expected != s.members {
            return Err(format!(
                "spider {j}: members {:?} differ from {:?}",
                s.members, expected
            ));
        }
        if s.root_path
            .windows(2)
            .any(|w| !adjacent(w[0], w[1]) || y[w[1]] > y[w[0]])
        {
            return Err(format!(
                "spider {j}: root path leaves the tree or rises in grade"
            ));
        }
        for leg in &s.legs {
            let path: Vec<Vertex> = std::iter::once(s.center)
                .chain(leg.iter().copied())
                .collect();
            if path
                .windows(2)
                .any(|w| !adjacent(w[0], w[1]) || y[w[1]] > y[w[0]])
            {
                return Err(format!(
                    "spider {j}: a leg leaves the tree or rises in grade"
                ));
            }
        }
        covered.insert(s.root);
        covered.extend(s.members.iter().copied());
        total += 1 + s.members.len();
    }
    if covered != *m {
        return Err(format!(
            "M is not covered: {:?}",
            m.difference(&covered).collect::<Vec<_>>()
        ));
    }
    if total != m.len() {
        return Err(format!(
            "spider count sum {total} differs from |M| = {}",
            m.len()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;

    /// The 13-vertex grade-respecting tree with seven marked vertices;
    /// vertex `k - 1` is the drawing's `N_k`.
    fn fig4() -> (
        Instance,
        Vec<(Vertex, Vertex)>,
        GradeAssignment,
        BTreeSet<Vertex>,
    ) {
        let edges = vec![
            (9, 4),
            (6, 5),
            (7, 5),
            (5, 0),
            (3, 2),
            (4, 8),
            (0, 4),
            (0, 2),
            (0, 1),
            (10, 7),
            (11, 7),
            (7, 12),
        ];
        let y = GradeAssignment::new(vec![4, 3, 3, 2, 3, 2, 2, 2, 1, 2, 2, 1, 2]);
        let m = BTreeSet::from([0, 2, 7, 8, 9, 10, 11]);
        let inst = Instance::new(
            13,
            4,
            edges.clone(),
            [(0, 4)],
            vec![vec![Cost::ZERO; 4]; 13],
        )
        .unwrap();
        (inst, edges, y, m)
    }

    #[test]
    fn fig4_optimization() {
        let (inst, edges, y, m) = fig4();
        let (kept, grades) = m_optimize(&inst, &edges, &y, 0, &m).unwrap();
        assert_eq!(kept.len(), 8);
        assert_eq!(grades.as_slice(), &[4, 0, 3, 0, 2, 2, 0, 2, 1, 2, 2, 1, 0]);
        let again = m_optimize(&inst, &kept, &grades, 0, &m).unwrap();
        assert_eq!(again, (kept, grades));
    }

    #[test]
    fn fig4_decomposition() {
        let (inst, edges, y, m) = fig4();
        let (kept, grades) = m_optimize(&inst, &edges, &y, 0, &m).unwrap();
        let d = spider_decompose(&inst, &kept, &grades, 0, &m).unwrap();
        let summary: Vec<(Vertex, Vertex, Vec<Vertex>)> = d
            .spiders
            .iter()
            .map(|s| (s.root, s.center, s.members.clone()))
            .collect();
        assert_eq!(
            summary,
            vec![(7, 7, vec![10, 11]), (9, 4, vec![8]), (0, 0, vec![2])]
        );
        check_decomposition(&kept, &m, &d).unwrap();
    }

    #[test]
    fn two_marked_vertices_give_one_path() {
        let inst = Instance::new(
            4,
            1,
            vec![(0, 1), (1, 2), (2, 3)],
            [(0, 1)],
            vec![vec![Cost::ZERO]; 4],
        )
        .unwrap();
        let edges = [(0, 1), (1, 2)];
        let y = GradeAssignment::new(vec![1, 1, 1, 0]);
        let m = BTreeSet::from([0, 2]);
        let d = spider_decompose(&inst, &edges, &y, 0, &m).unwrap();
        assert_eq!(d.spiders.len(), 1);
        assert_eq!(d.spiders[0].legs, vec![vec![1, 2]]);
    }

    #[test]
    fn star_rooted_at_center() {
        let inst = Instance::new(
            4,
            1,
            vec![(0, 1), (0, 2), (0, 3)],
            [(0, 1)],
            vec![vec![Cost::ZERO]; 4],
        )
        .unwrap();
        let edges = [(0, 1), (0, 2), (0, 3)];
        let y = GradeAssignment::new(vec![1; 4]);
        let m = BTreeSet::from([0, 1, 2, 3]);
        let d = spider_decompose(&inst, &edges, &y, 0, &m).unwrap();
        assert_eq!(d.spiders.len(), 1);
        assert_eq!((d.spiders[0].root, d.spiders[0].center), (0, 0));
    }

    #[test]
    fn root_joins_the_last_spider() {
        // 0 - 1 - {2, 3} with 1 unmarked: one spider rooted at 0 centred at 1.
        let inst = Instance::new(
            4,
            2,
            vec![(0, 1), (1, 2), (1, 3)],
            [(0, 2)],
            vec![vec![Cost::ZERO; 2]; 4],
        )
        .unwrap();
        let edges = [(0, 1), (1, 2), (1, 3)];
        let y = GradeAssignment::new(vec![2, 2, 2, 1]);
        let m = BTreeSet::from([0, 2, 3]);
        let d = spider_decompose(&inst, &edges, &y, 0, &m).unwrap();
        assert_eq!(d.spiders.len(), 1);
        assert_eq!((d.spiders[0].root, d.spiders[0].center), (0, 1));
        assert_eq!(d.spiders[0].members, vec![2, 3]);
        check_decomposition(&edges, &m, &d).unwrap();
    }

    #[test]
    fn preconditions_are_checked() {
        let (inst, edges, y, m) = fig4();
        assert_eq!(
            spider_decompose(&inst, &edges, &y, 0, &BTreeSet::from([0])),
            Err(SpiderError::TooFewMarked(1))
        );
        assert_eq!(
            m_optimize(&inst, &edges, &y, 1, &m),
            Err(SpiderError::RootNotInM(1))
        );
        assert!(matches!(
            spider_decompose(&inst, &edges, &y, 0, &m),
            Err(SpiderError::NotOptimized(_))
        ));
    }
}
