//! Greedy merging of grade-respecting trees.
//!
//! Every terminal starts as its own tree. Each round picks the merge with
//! the smallest cost-to-connectivity ratio: a center vertex, a grade, a
//! root tree reached from the center at that grade and a set of trees
//! attached to the center at their own requirements. The chosen paths are
//! bought, the trees merge, and weights of the merged vertices drop to the
//! incremental cost of an upgrade.

mod candidate;
mod distances;
mod forest;

use thiserror::Error;

pub use candidate::{best_candidate_for, select_global_candidate};
pub use distances::{graded_shortest_paths, shortest_paths, DistanceRow, DistanceTable};
pub use forest::{GrtForest, GrtTree, MergeCandidate};

use crate::cost::Cost;
use crate::feasibility::{extract_tree, AssignmentError};
use crate::instance::{Instance, Vertex, Violation};
use crate::parallel::Parallelism;
use crate::solution::SolutionReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("instance is not valid: {}", list(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("candidate was built for forest version {found}, forest is at {expected}")]
    StaleCandidate { expected: u64, found: u64 },
    #[error("no tree is rooted at vertex {0}")]
    UnknownTree(Vertex),
    #[error("no merge is possible with {0} trees left")]
    Stuck(usize),
    #[error("greedy output failed verification")]
    Verification(#[from] AssignmentError),
}

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyOptions {
    pub parallelism: Parallelism,
}

/// One selection and merge. Returns `None` when the forest is a single tree.
pub fn step(
    forest: &mut GrtForest<'_>,
    mode: Parallelism,
) -> Result<Option<crate::solution::IterationRecord>, GreedyError> {
    if forest.is_done() {
        return Ok(None);
    }
    let table = DistanceTable::compute(forest, mode);
    let candidate =
        select_global_candidate(forest, &table, mode).ok_or(GreedyError::Stuck(forest.len()))?;
    forest.apply_merge(&candidate).map(Some)
}

pub fn solve_greedy(instance: &Instance) -> Result<SolutionReport, GreedyError> {
    solve_greedy_with(instance, GreedyOptions::default())
}

pub fn solve_greedy_with(
    instance: &Instance,
    options: GreedyOptions,
) -> Result<SolutionReport, GreedyError> {
    let violations = instance.validate();
    if !violations.is_empty() {
        return Err(GreedyError::InvalidInstance(violations));
    }
    let mut forest = GrtForest::new(instance);
    let mut iterations = Vec::new();
    while let Some(record) = step(&mut forest, options.parallelism)? {
        iterations.push(record);
    }
    let root = forest.trees().first().map(|t| t.root);
    let assignment = forest.into_assignment();
    let tree_edges = extract_tree(instance, &assignment)?;
    let total_cost: Cost = iterations.iter().map(|r| r.incurred_cost).sum();
    Ok(SolutionReport {
        assignment,
        tree_edges,
        total_cost,
        iterations,
        root,
        per_grade_costs: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{is_feasible, solution_cost};
    use crate::generate::{fig3, fig3_solution, random_corpus};

    #[test]
    fn fig3_trace() {
        let inst = fig3();
        let report = solve_greedy(&inst).unwrap();
        assert_eq!(report.iterations.len(), 2);
        let first = &report.iterations[0];
        assert!(first.gamma.equals_fraction(4, 3));
        assert_eq!(first.incurred_cost, Cost::from_units(4));
        assert_eq!(first.merged_count, 3);
        let second = &report.iterations[1];
        assert!(second.gamma.equals_fraction(13, 1));
        assert_eq!(second.incurred_cost, Cost::from_units(26));
        assert_eq!(second.grade, 2);
        assert_eq!(report.total_cost, Cost::from_units(30));
        assert_eq!(report.assignment, fig3_solution());
    }

    #[test]
    fn fig3_second_round() {
        let inst = fig3();
        let mut forest = GrtForest::new(&inst);
        step(&mut forest, Parallelism::Sequential).unwrap();
        assert_eq!(
            (forest.weight(4, 1), forest.weight(4, 2)),
            (Cost::ZERO, Cost::from_units(3))
        );
        assert_eq!(
            graded_shortest_paths(&forest, 0, 2).dist[4],
            Cost::from_units(22)
        );
        assert_eq!(
            graded_shortest_paths(&forest, 4, 2).dist[5],
            Cost::from_units(1)
        );
        let table = DistanceTable::compute(&forest, Parallelism::Sequential);
        let cand = best_candidate_for(&forest, &table, 4, 2).unwrap();
        assert!(cand.gamma.equals_fraction(13, 1));
        assert_eq!((cand.root, cand.subset.clone()), (0, vec![5]));
    }

    #[test]
    fn no_candidate_without_eligible_trees() {
        let inst = Instance::new(
            3,
            2,
            vec![(0, 1), (1, 2)],
            [(0, 2), (2, 2)],
            vec![
                vec![Cost::ZERO; 2],
                vec![Cost::from_units(1), Cost::from_units(2)],
                vec![Cost::ZERO; 2],
            ],
        )
        .unwrap();
        let forest = GrtForest::new(&inst);
        let table = DistanceTable::compute(&forest, Parallelism::Sequential);
        assert_eq!(best_candidate_for(&forest, &table, 1, 1), None);
        assert!(best_candidate_for(&forest, &table, 1, 2).is_some());
    }

    #[test]
    fn free_paths_are_taken_first() {
        let inst = Instance::new(
            4,
            1,
            vec![(0, 1), (1, 2), (2, 3)],
            [(0, 1), (2, 1), (3, 1)],
            vec![
                vec![Cost::ZERO],
                vec![Cost::ZERO],
                vec![Cost::ZERO],
                vec![Cost::ZERO],
            ],
        )
        .unwrap();
        let report = solve_greedy(&inst).unwrap();
        assert!(report
            .iterations
            .iter()
            .all(|r| r.gamma.is_zero() && r.incurred_cost.is_zero()));
        assert_eq!(report.total_cost, Cost::ZERO);
    }

    #[test]
    fn single_terminal_returns_immediately() {
        let inst = Instance::new(
            2,
            1,
            vec![(0, 1)],
            [(0, 1)],
            vec![vec![Cost::ZERO], vec![Cost::from_units(3)]],
        )
        .unwrap();
        let report = solve_greedy(&inst).unwrap();
        assert!(report.iterations.is_empty());
        assert_eq!(report.total_cost, Cost::ZERO);
        assert_eq!(report.root, Some(0));
    }

    #[test]
    fn weights_track_assignment() {
        for inst in random_corpus(3, 40, 9, 3) {
            let mut forest = GrtForest::new(&inst);
            loop {
                for v in 0..inst.num_vertices() {
                    let y = forest.assignment()[v];
                    for j in 1..=inst.grades() {
                        let expected = inst.cost(v, j).saturating_sub(inst.cost(v, y));
                        assert_eq!(forest.weight(v, j), expected);
                    }
                }
                let Some(record) = step(&mut forest, Parallelism::Sequential).unwrap() else {
                    break;
                };
                assert!(record.incurred_cost <= record.gamma.numerator());
            }
        }
    }

    #[test]
    fn feasible_and_deterministic_across_modes() {
        for inst in random_corpus(17, 60, 10, 3) {
            let seq = solve_greedy_with(
                &inst,
                GreedyOptions {
                    parallelism: Parallelism::Sequential,
                },
            )
            .unwrap();
            let par = solve_greedy_with(
                &inst,
                GreedyOptions {
                    parallelism: Parallelism::Parallel,
                },
            )
            .unwrap();
            assert_eq!(seq, par);
            assert!(is_feasible(&inst, &seq.assignment));
            assert_eq!(seq.total_cost, solution_cost(&inst, &seq.assignment));
        }
    }

    #[test]
    fn rejects_invalid_instances() {
        let inst =
            Instance::new(2, 1, vec![], [(0, 1), (1, 1)], vec![vec![Cost::ZERO]; 2]).unwrap();
        assert!(matches!(
            solve_greedy(&inst),
            Err(GreedyError::InvalidInstance(_))
        ));
    }
}
