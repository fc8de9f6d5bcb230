use crate::graph::{RootedTree, TreeError};
use crate::instance::{GradeAssignment, Instance, Vertex};

/// Checks that grades never increase along any path leading away from
/// `root`. Returns `None` when they do not, or the root-to-vertex path
/// ending at the first vertex (breadth-first) whose grade exceeds its
/// parent's.
pub fn check_grt(
    instance: &Instance,
    tree_edges: &[(Vertex, Vertex)],
    y: &GradeAssignment,
    root: Vertex,
) -> Result<Option<Vec<Vertex>>, TreeError> {
    let tree = RootedTree::from_edges(instance.num_vertices(), tree_edges, root)?;
    Ok(first_rise(&tree, y.as_slice()).map(|v| tree.path_from_root(v)))
}

pub(crate) fn first_rise(tree: &RootedTree, y: &[usize]) -> Option<Vertex> {
    tree.order
        .iter()
        .copied()
        .find(|&v| tree.parent[v].is_some_and(|p| y[v] > y[p]))
}
