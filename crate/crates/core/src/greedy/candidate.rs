use std::cmp::{Ordering, Reverse};

use crate::cost::{Cost, Ratio};
use crate::instance::{Grade, Vertex};
use crate::parallel::{map_range, Parallelism};

use super::distances::DistanceTable;
use super::forest::{GrtForest, MergeCandidate};

/// A scored merge before its paths are materialised. Trees are referred
/// to by index into the forest.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Scored {
    gamma: Ratio,
    grade: Grade,
    center: Vertex,
    root: Vertex,
    root_tree: usize,
    subset: Vec<usize>,
}

impl Scored {
    /// Selection order: smallest ratio, then smallest grade, center and
    /// root, then the larger subset.
    fn order_key(&self) -> (Ratio, Grade, Vertex, Vertex, Reverse<usize>) {
        (
            self.gamma,
            self.grade,
            self.center,
            self.root,
            Reverse(self.subset.len()),
        )
    }

    fn better_than(&self, other: &Scored) -> bool {
        self.order_key().cmp(&other.order_key()) == Ordering::Less
    }
}

fn keep_best(best: &mut Option<Scored>, cand: Scored) {
    if best.as_ref().is_none_or(|b| cand.better_than(b)) {
        *best = Some(cand);
    }
}

/// Trees eligible at `grade` sorted by `(d_{R(r)}(r, center), r)`: the
/// entries are `(key, tree index)`.
fn sorted_keys(
    forest: &GrtForest<'_>,
    table: &DistanceTable,
    center: Vertex,
) -> Vec<(Cost, usize)> {
    let mut keys: Vec<(Cost, usize)> = forest
        .trees()
        .iter()
        .enumerate()
        .map(|(t, tree)| (table.row(t, tree.required).dist[center], t))
        .collect();
    // Tree indices follow root order, so this breaks ties by root.
    keys.sort_unstable();
    keys
}

fn score_center_grade(
    forest: &GrtForest<'_>,
    table: &DistanceTable,
    keys: &[(Cost, usize)],
    center: Vertex,
    grade: Grade,
) -> Option<Scored> {
    let trees = forest.trees();
    let eligible: Vec<(Cost, usize)> = keys
        .iter()
        .copied()
        .filter(|&(_, t)| trees[t].required <= grade)
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let mut prefix = vec![Cost::ZERO];
    for &(k, _) in &eligible {
        prefix.push(*prefix.last().unwrap() + k);
    }
    let w = forest.weight(center, grade);
    let mut best: Option<Scored> = None;

    // A root of higher requirement collects a prefix of eligible trees.
    let above = (0..trees.len())
        .filter(|&t| trees[t].required > grade)
        .min_by_key(|&t| (table.row(t, grade).dist[center], trees[t].root));
    if let Some(rt) = above {
        let base = table.row(rt, grade).dist[center] + w;
        let (k, gamma) = (1..=eligible.len())
            .map(|k| (k, Ratio::new(base + prefix[k], 1 + k as u64)))
            .min_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("eligible is non-empty");
        let subset: Vec<usize> = eligible[..k].iter().map(|&(_, t)| t).collect();
        let top = subset.iter().map(|&t| trees[t].required).max().unwrap_or(0);
        let (grade, gamma) = if top < grade {
            // The legs only need grade `top`, so charge the root path there.
            let base = table.row(rt, top).dist[center] + forest.weight(center, top);
            (top, Ratio::new(base + prefix[k], 1 + k as u64))
        } else {
            (grade, gamma)
        };
        keep_best(
            &mut best,
            Scored {
                gamma,
                grade,
                center,
                root: trees[rt].root,
                root_tree: rt,
                subset,
            },
        );
    }

    // Otherwise a tree of exactly this requirement acts as the root.
    if let Some(first) = eligible
        .iter()
        .position(|&(_, t)| trees[t].required == grade)
    {
        for k in 2..=eligible.len() {
            let mut chosen: Vec<usize> = if first < k {
                eligible[..k].iter().map(|&(_, t)| t).collect()
            } else {
                eligible[..k - 1]
                    .iter()
                    .map(|&(_, t)| t)
                    .chain([eligible[first].1])
                    .collect()
            };
            let sum = if first < k {
                prefix[k]
            } else {
                prefix[k - 1] + eligible[first].0
            };
            let gamma = Ratio::new(w + sum, k as u64);
            let root_tree = *chosen
                .iter()
                .filter(|&&t| trees[t].required == grade)
                .min_by_key(|&&t| trees[t].root)
                .expect("a tree of this requirement is chosen");
            chosen.retain(|&t| t != root_tree);
            keep_best(
                &mut best,
                Scored {
                    gamma,
                    grade,
                    center,
                    root: trees[root_tree].root,
                    root_tree,
                    subset: chosen,
                },
            );
        }
    }
    best
}

fn best_for_center(
    forest: &GrtForest<'_>,
    table: &DistanceTable,
    center: Vertex,
) -> Option<Scored> {
    let keys = sorted_keys(forest, table, center);
    let mut best = None;
    for grade in 1..=forest.instance().grades() {
        if let Some(s) = score_center_grade(forest, table, &keys, center, grade) {
            keep_best(&mut best, s);
        }
    }
    best
}

fn materialise(forest: &GrtForest<'_>, table: &DistanceTable, s: Scored) -> MergeCandidate {
    let trees = forest.trees();
    let root_path = table.row(s.root_tree, s.grade).path_to(s.center);
    let leg_paths = s
        .subset
        .iter()
        .map(|&t| {
            let mut p = table.row(t, trees[t].required).path_to(s.center);
            p.reverse();
            p
        })
        .collect();
    MergeCandidate {
        gamma: s.gamma,
        grade: s.grade,
        center: s.center,
        root: s.root,
        subset: s.subset.iter().map(|&t| trees[t].root).collect(),
        root_path,
        leg_paths,
        forest_version: forest.version(),
    }
}

/// The cheapest merge centred at `center` with grade `grade`, if any tree
/// can take part.
pub fn best_candidate_for(
    forest: &GrtForest<'_>,
    table: &DistanceTable,
    center: Vertex,
    grade: Grade,
) -> Option<MergeCandidate> {
    let keys = sorted_keys(forest, table, center);
    score_center_grade(forest, table, &keys, center, grade).map(|s| materialise(forest, table, s))
}

/// The cheapest merge over all centers and grades, or `None` once a single
/// tree remains.
pub fn select_global_candidate(
    forest: &GrtForest<'_>,
    table: &DistanceTable,
    mode: Parallelism,
) -> Option<MergeCandidate> {
    if forest.is_done() {
        return None;
    }
    map_range(mode, forest.instance().num_vertices(), |c| {
        best_for_center(forest, table, c)
    })
    .into_iter()
    .flatten()
    .min_by(|a, b| a.order_key().cmp(&b.order_key()))
    .map(|s| materialise(forest, table, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::fig3;

    #[test]
    fn fig3_first_choice() {
        let inst = fig3();
        let forest = GrtForest::new(&inst);
        let table = DistanceTable::compute(&forest, Parallelism::Sequential);
        let cand = select_global_candidate(&forest, &table, Parallelism::Sequential).unwrap();
        assert!(cand.gamma.equals_fraction(4, 3));
        assert_eq!((cand.center, cand.grade, cand.root), (4, 1, 5));
        assert_eq!(cand.subset, vec![2, 6]);
        assert_eq!(cand.root_path, vec![5, 7, 4]);
    }

    #[test]
    fn per_center_query_matches_global_winner() {
        let inst = fig3();
        let forest = GrtForest::new(&inst);
        let table = DistanceTable::compute(&forest, Parallelism::Sequential);
        let global = select_global_candidate(&forest, &table, Parallelism::Parallel).unwrap();
        let local = best_candidate_for(&forest, &table, 4, 1).unwrap();
        assert_eq!(global, local);
    }
}
