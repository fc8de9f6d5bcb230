//! Grade-by-grade baselines built on a plain vertex-weighted Steiner tree
//! (VST) subroutine: top-down and bottom-up.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::cost::Cost;
use crate::feasibility::{extract_tree, AssignmentError};
use crate::graph::reachable_from;
use crate::greedy::{solve_greedy, GreedyError};
use crate::instance::{Grade, GradeAssignment, Instance, InstanceError, Vertex, Violation};
use crate::oracle::{brute_force_optimum, Limits, OracleError};
use crate::solution::SolutionReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("instance is not valid: {0:?}")]
    InvalidInstance(Vec<Violation>),
    #[error("could not build the single-grade query")]
    Query(#[from] InstanceError),
    #[error("subroutine output at grade {grade} misses terminal {terminal}")]
    NotSpanning { grade: Grade, terminal: Vertex },
    #[error("subroutine output at grade {grade} is disconnected at vertex {vertex}")]
    Disconnected { grade: Grade, vertex: Vertex },
    #[error(transparent)]
    Greedy(#[from] GreedyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("heuristic output failed verification")]
    Verification(#[from] AssignmentError),
}

/// Solves a plain vertex-weighted Steiner tree problem on the graph of
/// `instance` with the given per-vertex costs. Terminal costs are treated
/// as zero. Returns the vertex set of the tree.
pub trait VstSubroutine {
    fn span(
        &self,
        instance: &Instance,
        costs: &[Cost],
        terminals: &[Vertex],
    ) -> Result<BTreeSet<Vertex>, HeuristicError>;
}

fn single_grade_query(
    instance: &Instance,
    costs: &[Cost],
    terminals: &[Vertex],
) -> Result<Instance, InstanceError> {
    let mut costs = costs.to_vec();
    for &t in terminals {
        costs[t] = Cost::ZERO;
    }
    Instance::single_grade(
        instance.num_vertices(),
        instance.edges().to_vec(),
        terminals,
        &costs,
    )
}

/// Exhaustive search; exact but limited to small graphs.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactVst {
    pub limits: Limits,
}

impl VstSubroutine for ExactVst {
    fn span(
        &self,
        instance: &Instance,
        costs: &[Cost],
        terminals: &[Vertex],
    ) -> Result<BTreeSet<Vertex>, HeuristicError> {
        let query = single_grade_query(instance, costs, terminals)?;
        let report = brute_force_optimum(&query, self.limits)?;
        Ok(report.assignment.support().collect())
    }
}

/// The greedy solver run with a single grade.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyVst;

impl VstSubroutine for GreedyVst {
    fn span(
        &self,
        instance: &Instance,
        costs: &[Cost],
        terminals: &[Vertex],
    ) -> Result<BTreeSet<Vertex>, HeuristicError> {
        let query = single_grade_query(instance, costs, terminals)?;
        greedy_as_vst(&query)
    }
}

/// Vertex set of the greedy solution on a single-grade instance.
pub fn greedy_as_vst(instance: &Instance) -> Result<BTreeSet<Vertex>, HeuristicError> {
    let report = solve_greedy(instance)?;
    Ok(report.assignment.support().collect())
}

fn check_span(
    instance: &Instance,
    span: &BTreeSet<Vertex>,
    terminals: &[Vertex],
    grade: Grade,
) -> Result<(), HeuristicError> {
    if let Some(&terminal) = terminals.iter().find(|t| !span.contains(t)) {
        return Err(HeuristicError::NotSpanning { grade, terminal });
    }
    if let Some(&start) = span.first() {
        let reached = reachable_from(instance.adjacency(), start, |v| span.contains(&v));
        if let Some(&vertex) = span.iter().find(|&&v| !reached[v]) {
            return Err(HeuristicError::Disconnected { grade, vertex });
        }
    }
    Ok(())
}

fn ensure_valid(instance: &Instance) -> Result<(), HeuristicError> {
    let violations = instance.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(HeuristicError::InvalidInstance(violations))
    }
}

/// Top-down: from the top grade down, span the terminals requiring at
/// least the current grade together with everything already bought, which
/// is free to reuse. Newly spanned vertices take the current grade.
pub fn solve_topdown(
    instance: &Instance,
    vst: &impl VstSubroutine,
) -> Result<SolutionReport, HeuristicError> {
    ensure_valid(instance)?;
    let n = instance.num_vertices();
    let mut y = GradeAssignment::zeros(n);
    let mut bought: BTreeSet<Vertex> = BTreeSet::new();
    let mut per_grade = vec![Cost::ZERO; instance.grades()];
    for grade in (1..=instance.grades()).rev() {
        let mut terminals: BTreeSet<Vertex> =
            instance.terminals_at_least(grade).into_iter().collect();
        terminals.extend(bought.iter().copied());
        let terminals: Vec<Vertex> = terminals.into_iter().collect();
        let costs: Vec<Cost> = (0..n).map(|v| instance.cost(v, grade)).collect();
        let span = vst.span(instance, &costs, &terminals)?;
        check_span(instance, &span, &terminals, grade)?;
        for &v in &span {
            if y.raise(v, grade) && !bought.contains(&v) {
                per_grade[grade - 1] += instance.cost(v, grade);
            }
        }
        bought.extend(span);
    }
    let tree_edges = extract_tree(instance, &y)?;
    let total_cost = per_grade.iter().copied().sum();
    let root = crate::solution::default_root(instance, &y);
    Ok(SolutionReport {
        assignment: y,
        tree_edges,
        total_cost,
        iterations: Vec::new(),
        root,
        per_grade_costs: Some(per_grade),
    })
}

/// Bottom-up: span all terminals under top-grade costs, then demote each
/// vertex to the highest requirement found in its subtree when rooted at a
/// top-requirement terminal. Non-terminal leaves are pruned first.
pub fn solve_bottomup(
    instance: &Instance,
    vst: &impl VstSubroutine,
) -> Result<SolutionReport, HeuristicError> {
    ensure_valid(instance)?;
    let n = instance.num_vertices();
    let top = instance.grades();
    let terminals: Vec<Vertex> = instance.terminals().map(|(t, _)| t).collect();
    let costs: Vec<Cost> = (0..n).map(|v| instance.cost(v, top)).collect();
    let span = vst.span(instance, &costs, &terminals)?;
    check_span(instance, &span, &terminals, top)?;
    let root = instance
        .terminals()
        .find(|&(_, r)| r == top)
        .map(|(t, _)| t)
        .expect("some terminal requires the top grade");

    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = vec![root];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in instance.neighbors(u) {
            if span.contains(&v) && !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    // Children before parents: the subtree maximum flows upward, and a
    // vertex whose subtree holds no terminal is dropped.
    let mut grade = vec![0; n];
    for &v in order.iter().rev() {
        grade[v] = grade[v].max(instance.required(v));
        if let Some(p) = parent[v] {
            grade[p] = grade[p].max(grade[v]);
        }
    }
    let y = GradeAssignment::new(grade);
    let tree_edges = extract_tree(instance, &y)?;
    let total_cost = crate::feasibility::solution_cost(instance, &y);
    Ok(SolutionReport {
        assignment: y,
        tree_edges,
        total_cost,
        iterations: Vec::new(),
        root: Some(root),
        per_grade_costs: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{is_feasible, solution_cost};
    use crate::generate::{fig2, fig3, random_corpus};

    fn bottomup_trap() -> Instance {
        // a (R=2) and b (R=1) joined through x = (1, 10) or z = (5, 5).
        let u = Cost::from_units;
        Instance::new(
            4,
            2,
            vec![(0, 2), (1, 2), (0, 3), (1, 3)],
            [(0, 2), (1, 1)],
            vec![
                vec![u(0), u(0)],
                vec![u(0), u(0)],
                vec![u(1), u(10)],
                vec![u(5), u(5)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn fig2_topdown_pays_one_per_grade() {
        for levels in 2..=4 {
            let inst = fig2(levels, Cost::from_micros(100_000)).unwrap();
            let report = solve_topdown(&inst, &ExactVst::default()).unwrap();
            assert_eq!(report.total_cost, Cost::from_units(levels as u64));
            assert_eq!(
                report.per_grade_costs.unwrap(),
                vec![Cost::from_units(1); levels]
            );
            assert_eq!(report.assignment[2 * levels + 1], 0, "hub avoided");
        }
    }

    #[test]
    fn greedy_vst_avoids_the_hub() {
        let inst = fig2(3, Cost::from_micros(100_000)).unwrap();
        let costs: Vec<Cost> = (0..inst.num_vertices()).map(|v| inst.cost(v, 3)).collect();
        let span = GreedyVst.span(&inst, &costs, &[0, 1]).unwrap();
        assert_eq!(span, BTreeSet::from([0, 1, 4]));
    }

    #[test]
    fn two_terminals_take_a_cheapest_path() {
        let inst = Instance::single_grade(
            4,
            vec![(0, 1), (1, 3), (0, 2), (2, 3)],
            &[0, 3],
            &[
                Cost::ZERO,
                Cost::from_units(3),
                Cost::from_units(2),
                Cost::ZERO,
            ],
        )
        .unwrap();
        assert_eq!(greedy_as_vst(&inst).unwrap(), BTreeSet::from([0, 2, 3]));
    }

    #[test]
    fn bottomup_can_be_worse_than_optimal() {
        let inst = bottomup_trap();
        let bottom = solve_bottomup(&inst, &ExactVst::default()).unwrap();
        assert_eq!(bottom.total_cost, Cost::from_units(5));
        assert_eq!(bottom.assignment.as_slice(), &[2, 1, 0, 1]);
        let greedy = solve_greedy(&inst).unwrap();
        assert_eq!(greedy.total_cost, Cost::from_units(1));
    }

    #[test]
    fn single_grade_heuristics_coincide() {
        for inst in random_corpus(23, 30, 8, 1) {
            let top = solve_topdown(&inst, &ExactVst::default()).unwrap();
            let bottom = solve_bottomup(&inst, &ExactVst::default()).unwrap();
            let costs: Vec<Cost> = (0..inst.num_vertices()).map(|v| inst.cost(v, 1)).collect();
            let terminals: Vec<Vertex> = inst.terminals().map(|(t, _)| t).collect();
            let span = ExactVst::default().span(&inst, &costs, &terminals).unwrap();
            let vst_cost: Cost = span.iter().map(|&v| costs[v]).sum();
            assert_eq!(top.total_cost, vst_cost);
            assert_eq!(bottom.total_cost, vst_cost);
        }
    }

    #[test]
    fn outputs_are_feasible_and_accounted() {
        let mut corpus = random_corpus(29, 40, 8, 3);
        corpus.push(fig3());
        for inst in corpus {
            for report in [
                solve_topdown(&inst, &ExactVst::default()).unwrap(),
                solve_topdown(&inst, &GreedyVst).unwrap(),
                solve_bottomup(&inst, &GreedyVst).unwrap(),
            ] {
                assert!(is_feasible(&inst, &report.assignment));
                assert_eq!(report.total_cost, solution_cost(&inst, &report.assignment));
                if let Some(per_grade) = &report.per_grade_costs {
                    assert_eq!(per_grade.iter().copied().sum::<Cost>(), report.total_cost);
                }
            }
        }
    }
}
