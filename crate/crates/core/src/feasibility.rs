//! Feasibility, cost and tree extraction for grade assignments.

use std::fmt;

use thiserror::Error;

use crate::cost::Cost;
use crate::graph::{reachable_from, UnionFind};
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("assignment has {found} entries but the instance has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} assigned grade {grade} above the top grade {grades}")]
    GradeOutOfRange {
        vertex: Vertex,
        grade: Grade,
        grades: Grade,
    },
    #[error("assignment is infeasible: {0}")]
    Infeasible(Witness),
    #[error("vertices with a facility do not form one connected subgraph (vertex {0} is cut off)")]
    DisconnectedSupport(Vertex),
}

/// Why an assignment is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A terminal is assigned less than its requirement.
    BelowRequirement {
        vertex: Vertex,
        required: Grade,
        assigned: Grade,
    },
    /// Two terminals requiring at least `grade` are not connected through
    /// vertices of grade `grade` or higher.
    Separated {
        grade: Grade,
        pair: (Vertex, Vertex),
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::BelowRequirement {
                vertex,
                required,
                assigned,
            } => {
                write!(
                    f,
                    "terminal {vertex} requires grade {required} but is assigned {assigned}"
                )
            }
            Witness::Separated {
                grade,
                pair: (u, v),
            } => {
                write!(
                    f,
                    "terminals {u} and {v} are not connected at grade {grade}"
                )
            }
        }
    }
}

fn check_shape(instance: &Instance, y: &GradeAssignment) -> Result<(), AssignmentError> {
    if y.len() != instance.num_vertices() {
        return Err(AssignmentError::LengthMismatch {
            expected: instance.num_vertices(),
            found: y.len(),
        });
    }
    if let Some(v) = (0..y.len()).find(|&v| y[v] > instance.grades()) {
        return Err(AssignmentError::GradeOutOfRange {
            vertex: v,
            grade: y[v],
            grades: instance.grades(),
        });
    }
    Ok(())
}

/// Checks nested connectivity: every terminal meets its requirement and,
/// for each grade `i`, all terminals requiring at least `i` share one
/// component of the subgraph induced by `{v : y(v) >= i}`.
///
/// `Ok(None)` means feasible. A requirement breach is reported for the
/// smallest such terminal; otherwise the smallest separated grade and its
/// lexicographically smallest separated terminal pair.
pub fn check_feasible(
    instance: &Instance,
    y: &GradeAssignment,
) -> Result<Option<Witness>, AssignmentError> {
    check_shape(instance, y)?;
    for (v, r) in instance.terminals() {
        if y[v] < r {
            return Ok(Some(Witness::BelowRequirement {
                vertex: v,
                required: r,
                assigned: y[v],
            }));
        }
    }
    for grade in 1..=instance.grades() {
        let terminals = instance.terminals_at_least(grade);
        if terminals.len() < 2 {
            continue;
        }
        let mut uf = UnionFind::new(instance.num_vertices());
        for &(u, v) in instance.edges() {
            if y[u] >= grade && y[v] >= grade {
                uf.union(u, v);
            }
        }
        // The smallest pair always starts at the smallest terminal: if every
        // terminal shares its component, all are connected.
        let first = terminals[0];
        if let Some(&other) = terminals[1..].iter().find(|&&t| !uf.same(first, t)) {
            return Ok(Some(Witness::Separated {
                grade,
                pair: (first, other),
            }));
        }
    }
    Ok(None)
}

pub fn is_feasible(instance: &Instance, y: &GradeAssignment) -> bool {
    matches!(check_feasible(instance, y), Ok(None))
}

/// `sum_v c_{y(v)}(v)` with `c_0 = 0`.
pub fn solution_cost(instance: &Instance, y: &GradeAssignment) -> Cost {
    (0..y.len()).map(|v| instance.cost(v, y[v])).sum()
}

/// Builds a tree spanning exactly the vertices with a facility.
///
/// Grades are processed from the top down: a spanning forest of
/// `{y >= top}` is grown by Kruskal over edges in ascending order, then
/// extended inside `{y >= top - 1}`, and so on. The tree path between any
/// two terminals therefore stays inside the level set of the smaller of
/// their requirements. Returned edges are `(min, max)` pairs in insertion
/// order.
pub fn extract_tree(
    instance: &Instance,
    y: &GradeAssignment,
) -> Result<Vec<(Vertex, Vertex)>, AssignmentError> {
    if let Some(w) = check_feasible(instance, y)? {
        return Err(AssignmentError::Infeasible(w));
    }
    let mut edges: Vec<(Vertex, Vertex)> = instance
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| u != v)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let mut uf = UnionFind::new(instance.num_vertices());
    let mut tree = Vec::new();
    for grade in (1..=instance.grades()).rev() {
        for &(u, v) in &edges {
            if y[u] >= grade && y[v] >= grade && uf.union(u, v) {
                tree.push((u, v));
            }
        }
    }
    if let Some(start) = y.support().next() {
        let reached = reachable_from(instance.adjacency(), start, |v| y[v] > 0);
        if let Some(v) = y.support().find(|&v| !reached[v]) {
            return Err(AssignmentError::DisconnectedSupport(v));
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{fig3, fig3_solution};

    #[test]
    fn fig3_solution_is_feasible_and_costs_30() {
        let inst = fig3();
        let y = fig3_solution();
        assert_eq!(check_feasible(&inst, &y), Ok(None));
        assert_eq!(solution_cost(&inst, &y), Cost::from_units(30));
    }

    #[test]
    fn dropping_b_isolates_a() {
        let inst = fig3();
        let mut y = fig3_solution();
        y.set(1, 0);
        // A's only neighbour is B, so A is already cut off at grade 1.
        assert_eq!(
            check_feasible(&inst, &y),
            Ok(Some(Witness::Separated {
                grade: 1,
                pair: (0, 2)
            }))
        );
    }

    #[test]
    fn all_zero_is_below_requirement() {
        let inst = fig3();
        let y = GradeAssignment::zeros(8);
        assert!(matches!(
            check_feasible(&inst, &y),
            Ok(Some(Witness::BelowRequirement { vertex: 0, .. }))
        ));
        assert_eq!(solution_cost(&inst, &y), Cost::ZERO);
    }

    #[test]
    fn all_top_grade_costs_44() {
        let inst = fig3();
        let y = GradeAssignment::new(vec![2; 8]);
        assert_eq!(solution_cost(&inst, &y), Cost::from_units(44));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let inst = fig3();
        assert_eq!(
            check_feasible(&inst, &GradeAssignment::zeros(3)),
            Err(AssignmentError::LengthMismatch {
                expected: 8,
                found: 3
            })
        );
    }

    #[test]
    fn extracts_fig3_tree() {
        let inst = fig3();
        let tree = extract_tree(&inst, &fig3_solution()).unwrap();
        // A-B, B-C, C-E, E-H, F-H at grade 2, then E-G at grade 1.
        assert_eq!(tree, vec![(0, 1), (1, 2), (2, 4), (4, 7), (5, 7), (4, 6)]);
    }

    #[test]
    fn single_terminal_tree_is_empty() {
        let inst = Instance::new(
            2,
            1,
            vec![(0, 1)],
            [(0, 1)],
            vec![vec![Cost::ZERO], vec![Cost::from_units(1)]],
        )
        .unwrap();
        let y = GradeAssignment::new(vec![1, 0]);
        assert_eq!(extract_tree(&inst, &y).unwrap(), vec![]);
    }

    #[test]
    fn stray_facilities_are_rejected() {
        let inst = Instance::new(
            3,
            1,
            vec![(0, 1), (1, 2)],
            [(0, 1)],
            vec![vec![Cost::ZERO]; 3],
        )
        .unwrap();
        let y = GradeAssignment::new(vec![1, 0, 1]);
        assert_eq!(
            extract_tree(&inst, &y),
            Err(AssignmentError::DisconnectedSupport(2))
        );
    }
}
