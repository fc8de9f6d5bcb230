//! JSON files for instances and solutions, and DOT rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;
use crate::instance::{Grade, GradeAssignment, Instance, InstanceError, Vertex};
use crate::solution::SolutionReport;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    num_vertices: usize,
    grades: Grade,
    edges: Vec<[Vertex; 2]>,
    terminals: Vec<TerminalEntry>,
    costs: Vec<Vec<Cost>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TerminalEntry {
    vertex: Vertex,
    required: Grade,
}

pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    Ok(Instance::new(
        file.num_vertices,
        file.grades,
        file.edges.into_iter().map(|[u, v]| (u, v)).collect(),
        file.terminals.into_iter().map(|t| (t.vertex, t.required)),
        file.costs,
    )?)
}

/// Pretty-printed instance JSON with a trailing newline.
pub fn instance_to_json(instance: &Instance) -> String {
    let file = InstanceFile {
        num_vertices: instance.num_vertices(),
        grades: instance.grades(),
        edges: instance.edges().iter().map(|&(u, v)| [u, v]).collect(),
        terminals: instance
            .terminals()
            .map(|(vertex, required)| TerminalEntry { vertex, required })
            .collect(),
        costs: instance.cost_ladders().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serializes");
    text.push('\n');
    text
}

/// On-disk form of a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub assignment: GradeAssignment,
    pub tree_edges: Vec<[Vertex; 2]>,
    pub cost: Cost,
    #[serde(default)]
    pub iterations: Vec<IterationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_grade_costs: Option<Vec<Cost>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationEntry {
    /// Reduced fraction such as `"4/3"`.
    pub gamma: String,
    pub merged_count: usize,
    pub incurred_cost: Cost,
    pub root: Vertex,
    pub center: Vertex,
    pub grade: Grade,
    pub subset: Vec<Vertex>,
}

impl From<&SolutionReport> for SolutionFile {
    fn from(report: &SolutionReport) -> Self {
        SolutionFile {
            assignment: report.assignment.clone(),
            tree_edges: report.tree_edges.iter().map(|&(u, v)| [u, v]).collect(),
            cost: report.total_cost,
            iterations: report
                .iterations
                .iter()
                .map(|r| IterationEntry {
                    gamma: r.gamma.to_string(),
                    merged_count: r.merged_count,
                    incurred_cost: r.incurred_cost,
                    root: r.root,
                    center: r.center,
                    grade: r.grade,
                    subset: r.subset.clone(),
                })
                .collect(),
            root: report.root,
            per_grade_costs: report.per_grade_costs.clone(),
        }
    }
}

pub fn solution_to_json(report: &SolutionReport) -> String {
    let mut text =
        serde_json::to_string_pretty(&SolutionFile::from(report)).expect("solution serializes");
    text.push('\n');
    text
}

pub fn solution_from_json(text: &str) -> Result<SolutionFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

const GRADE_COLORS: [&str; 8] = [
    "white",
    "lightblue",
    "gold",
    "orange",
    "tomato",
    "orchid",
    "lightgreen",
    "gray70",
];

fn grade_color(grade: Grade) -> &'static str {
    GRADE_COLORS[grade.min(GRADE_COLORS.len() - 1)]
}

/// Graphviz rendering. Vertices are labelled `id/c_1,...,c_L`; terminals are
/// double circles annotated with their requirement. With an assignment,
/// vertices are filled by grade and tree edges drawn bold.
pub fn to_dot(
    instance: &Instance,
    solution: Option<(&GradeAssignment, &[(Vertex, Vertex)])>,
) -> String {
    let mut out =
        String::from("graph vgsst {\n  node [shape=circle, style=filled, fillcolor=white];\n");
    for v in 0..instance.num_vertices() {
        let ladder: Vec<String> = instance.ladder(v).iter().map(Cost::to_string).collect();
        let mut attrs = vec![format!("label=\"{v}/{}\"", ladder.join(","))];
        if instance.is_terminal(v) {
            attrs.push("shape=doublecircle".into());
            attrs.push(format!("xlabel=\"R={}\"", instance.required(v)));
        }
        if let Some((y, _)) = solution {
            attrs.push(format!("fillcolor={}", grade_color(y[v])));
            attrs.push(format!("tooltip=\"grade {}\"", y[v]));
        }
        let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
    }
    let tree: std::collections::BTreeSet<(Vertex, Vertex)> = solution
        .map(|(_, edges)| edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect())
        .unwrap_or_default();
    for &(u, v) in instance.edges() {
        if tree.contains(&(u.min(v), u.max(v))) {
            let _ = writeln!(out, "  {u} -- {v} [penwidth=3];");
        } else {
            let _ = writeln!(out, "  {u} -- {v};");
        }
    }
    out.push_str("}\n");
    out
}
