use crate::cost::{Cost, Ratio};
use crate::feasibility::{extract_tree, solution_cost, AssignmentError};
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};

/// Telemetry for one merge of the greedy solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    /// Cost-to-connectivity ratio of the chosen merge.
    pub gamma: Ratio,
    /// Number of trees merged, root tree included.
    pub merged_count: usize,
    /// Cost actually paid by the merge.
    pub incurred_cost: Cost,
    pub root: Vertex,
    pub center: Vertex,
    pub grade: Grade,
    /// Roots of the trees attached to the root tree.
    pub subset: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionReport {
    pub assignment: GradeAssignment,
    pub tree_edges: Vec<(Vertex, Vertex)>,
    pub total_cost: Cost,
    pub iterations: Vec<IterationRecord>,
    /// Vertex the tree is grade-respecting from, when the solver knows one.
    pub root: Option<Vertex>,
    /// Cost paid per grade (index 0 is grade 1), for solvers that work
    /// grade by grade.
    pub per_grade_costs: Option<Vec<Cost>>,
}

impl SolutionReport {
    /// Builds a report from a final assignment, extracting its tree.
    pub fn from_assignment(
        instance: &Instance,
        assignment: GradeAssignment,
    ) -> Result<Self, AssignmentError> {
        let tree_edges = extract_tree(instance, &assignment)?;
        let total_cost = solution_cost(instance, &assignment);
        let root = default_root(instance, &assignment);
        Ok(SolutionReport {
            assignment,
            tree_edges,
            total_cost,
            iterations: Vec::new(),
            root,
            per_grade_costs: None,
        })
    }
}

/// Smallest terminal requiring the top grade, if it holds a facility.
pub fn default_root(instance: &Instance, y: &GradeAssignment) -> Option<Vertex> {
    let top = instance.max_required();
    instance
        .terminals()
        .find(|&(v, r)| r == top && y[v] >= r)
        .map(|(v, _)| v)
}
