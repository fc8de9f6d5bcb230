use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::Cost;
use crate::instance::{Grade, Vertex};
use crate::parallel::{map_slice, Parallelism};

use super::forest::GrtForest;

/// Single-source shortest paths under the vertex weights `w_grade`. The
/// distance to `v` counts only interior vertices of the path: neither the
/// source nor `v` itself is charged.
#[derive(Debug, Clone)]
pub struct DistanceRow {
    pub source: Vertex,
    pub grade: Grade,
    pub dist: Vec<Cost>,
    pub pred: Vec<Option<Vertex>>,
}

impl DistanceRow {
    /// Vertices of the recorded shortest path from the source to `target`,
    /// both included.
    pub fn path_to(&self, target: Vertex) -> Vec<Vertex> {
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        debug_assert_eq!(cur, self.source);
        path.reverse();
        path
    }
}

/// Dijkstra from `source` with vertex weights `weight(v)`, paid when a path
/// passes through `v`. Ties keep the first predecessor found, scanning
/// vertices in (distance, id) order and neighbours ascending.
pub fn shortest_paths(
    adjacency: &[Vec<Vertex>],
    source: Vertex,
    weight: impl Fn(Vertex) -> Cost,
) -> (Vec<Cost>, Vec<Option<Vertex>>) {
    let n = adjacency.len();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(Cost::ZERO);
    heap.push(Reverse((Cost::ZERO, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        let through = if u == source { d } else { d + weight(u) };
        for &v in &adjacency[u] {
            if done[v] {
                continue;
            }
            if dist[v].is_none_or(|old| through < old) {
                dist[v] = Some(through);
                pred[v] = Some(u);
                heap.push(Reverse((through, v)));
            }
        }
    }
    let dist = dist
        .into_iter()
        .map(|d| d.expect("graph is connected"))
        .collect();
    (dist, pred)
}

/// `d_grade(source, ·)` under the forest's current incremental weights.
pub fn graded_shortest_paths(forest: &GrtForest<'_>, source: Vertex, grade: Grade) -> DistanceRow {
    let (dist, pred) = shortest_paths(forest.instance().adjacency(), source, |v| {
        forest.weight(v, grade)
    });
    DistanceRow {
        source,
        grade,
        dist,
        pred,
    }
}

/// Distance rows for one selection round: from every tree root `r` under
/// every grade `1..=R(r)`.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    /// `rows[t][g - 1]` for tree index `t` and grade `g`.
    rows: Vec<Vec<DistanceRow>>,
}

impl DistanceTable {
    pub fn compute(forest: &GrtForest<'_>, mode: Parallelism) -> Self {
        let jobs: Vec<(usize, Vertex, Grade)> = forest
            .trees()
            .iter()
            .enumerate()
            .flat_map(|(t, tree)| (1..=tree.required).map(move |g| (t, tree.root, g)))
            .collect();
        let computed = map_slice(mode, &jobs, |&(_, root, g)| {
            graded_shortest_paths(forest, root, g)
        });
        let mut rows: Vec<Vec<DistanceRow>> = forest.trees().iter().map(|_| Vec::new()).collect();
        for ((t, _, _), row) in jobs.into_iter().zip(computed) {
            rows[t].push(row);
        }
        DistanceTable { rows }
    }

    /// Row for tree index `tree` at `grade`; `grade` must not exceed the
    /// requirement of the tree's root.
    pub fn row(&self, tree: usize, grade: Grade) -> &DistanceRow {
        &self.rows[tree][grade - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_free() {
        // path 0 - 1 - 2 - 3 with weights 5, 7 on the middle vertices
        let adjacency = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        let w = [100, 5, 7, 100].map(Cost::from_units);
        let (dist, pred) = shortest_paths(&adjacency, 0, |v| w[v]);
        assert_eq!(dist, [0, 0, 5, 12].map(Cost::from_units).to_vec());
        assert_eq!(pred, vec![None, Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn picks_cheaper_interior() {
        // 0 - {1, 2} - 3
        let adjacency = vec![vec![1, 2], vec![0, 3], vec![0, 3], vec![1, 2]];
        let w = [0, 4, 3, 0].map(Cost::from_units);
        let (dist, pred) = shortest_paths(&adjacency, 0, |v| w[v]);
        assert_eq!(dist[3], Cost::from_units(3));
        assert_eq!(pred[3], Some(2));
    }
}
