//! Problem data: graph, grade count, terminal requirements and cost ladders.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;

pub type Vertex = usize;
pub type Grade = usize;

/// Structural errors that make an instance unusable at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance must have at least one grade")]
    NoGrades,
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    EdgeOutOfRange(Vertex, Vertex, usize),
    #[error("terminal {0} is outside 0..{1}")]
    TerminalOutOfRange(Vertex, usize),
    #[error("terminal {0} listed more than once")]
    DuplicateTerminal(Vertex),
    #[error("terminal {vertex} requires grade {grade}, expected 1..={grades}")]
    RequiredGradeOutOfRange {
        vertex: Vertex,
        grade: Grade,
        grades: Grade,
    },
    #[error("expected {expected} cost ladders, found {found}")]
    CostRowCount { expected: usize, found: usize },
    #[error("vertex {vertex} has {found} ladder entries, expected {expected}")]
    LadderLength {
        vertex: Vertex,
        expected: usize,
        found: usize,
    },
    #[error("instance has no terminals")]
    NoTerminals,
    #[error("instance violates: {0}")]
    Invalid(Violation),
}

/// A broken instance rule reported by [`Instance::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Disconnected {
        unreachable: Vertex,
    },
    NonMonotoneCost {
        vertex: Vertex,
        grade: Grade,
    },
    NoTerminals,
    SelfLoop {
        vertex: Vertex,
    },
    DuplicateEdge {
        u: Vertex,
        v: Vertex,
    },
    /// No terminal requires the top grade; `normalize` lowers the grade count.
    TopGradeUnused {
        max_required: Grade,
        grades: Grade,
    },
    /// A terminal pays for its own requirement; `normalize` moves that cost out.
    TerminalCost {
        vertex: Vertex,
    },
}

impl Violation {
    /// Whether `normalize` can repair this violation.
    pub fn is_normalizable(&self) -> bool {
        matches!(
            self,
            Violation::TopGradeUnused { .. } | Violation::TerminalCost { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected { unreachable } => {
                write!(f, "connectivity: vertex {unreachable} is not reachable from vertex 0")
            }
            Violation::NonMonotoneCost { vertex, grade } => write!(
                f,
                "monotonicity: vertex {vertex} has c_{}(v) < c_{grade}(v)",
                grade + 1
            ),
            Violation::NoTerminals => write!(f, "terminals: terminal set is empty"),
            Violation::SelfLoop { vertex } => write!(f, "simple graph: self-loop at vertex {vertex}"),
            Violation::DuplicateEdge { u, v } => write!(f, "simple graph: edge ({u}, {v}) repeated"),
            Violation::TopGradeUnused { max_required, grades } => write!(
                f,
                "top grade: highest requirement is {max_required} but the instance has {grades} grades"
            ),
            Violation::TerminalCost { vertex } => write!(
                f,
                "terminal cost: terminal {vertex} has a nonzero cost at or below its requirement"
            ),
        }
    }
}

/// A V-GSST instance. Vertices are `0..num_vertices`, grades `1..=grades`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_vertices: usize,
    grades: Grade,
    edges: Vec<(Vertex, Vertex)>,
    required: BTreeMap<Vertex, Grade>,
    costs: Vec<Vec<Cost>>,
    adjacency: Vec<Vec<Vertex>>,
}

impl Instance {
    /// Builds an instance, checking only that all ids, grades and ladder
    /// shapes are in range. Semantic rules are reported by [`validate`].
    ///
    /// [`validate`]: Instance::validate
    pub fn new(
        num_vertices: usize,
        grades: Grade,
        edges: Vec<(Vertex, Vertex)>,
        terminals: impl IntoIterator<Item = (Vertex, Grade)>,
        costs: Vec<Vec<Cost>>,
    ) -> Result<Self, InstanceError> {
        if grades == 0 {
            return Err(InstanceError::NoGrades);
        }
        for &(u, v) in &edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(InstanceError::EdgeOutOfRange(u, v, num_vertices));
            }
        }
        let mut required = BTreeMap::new();
        for (v, r) in terminals {
            if v >= num_vertices {
                return Err(InstanceError::TerminalOutOfRange(v, num_vertices));
            }
            if r == 0 || r > grades {
                return Err(InstanceError::RequiredGradeOutOfRange {
                    vertex: v,
                    grade: r,
                    grades,
                });
            }
            if required.insert(v, r).is_some() {
                return Err(InstanceError::DuplicateTerminal(v));
            }
        }
        if costs.len() != num_vertices {
            return Err(InstanceError::CostRowCount {
                expected: num_vertices,
                found: costs.len(),
            });
        }
        for (v, ladder) in costs.iter().enumerate() {
            if ladder.len() != grades {
                return Err(InstanceError::LadderLength {
                    vertex: v,
                    expected: grades,
                    found: ladder.len(),
                });
            }
        }
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in &edges {
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Instance {
            num_vertices,
            grades,
            edges,
            required,
            costs,
            adjacency,
        })
    }

    /// Convenience constructor for a one-grade (plain vertex-weighted
    /// Steiner tree) instance.
    pub fn single_grade(
        num_vertices: usize,
        edges: Vec<(Vertex, Vertex)>,
        terminals: &[Vertex],
        costs: &[Cost],
    ) -> Result<Self, InstanceError> {
        Instance::new(
            num_vertices,
            1,
            edges,
            terminals.iter().map(|&t| (t, 1)),
            costs.iter().map(|&c| vec![c]).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn grades(&self) -> Grade {
        self.grades
    }

    /// Edges as given, each stored with the smaller endpoint first.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Sorted neighbours of `v` (self-loops and repeats dropped).
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        &self.adjacency
    }

    pub fn terminals(&self) -> impl Iterator<Item = (Vertex, Grade)> + '_ {
        self.required.iter().map(|(&v, &r)| (v, r))
    }

    pub fn terminal_count(&self) -> usize {
        self.required.len()
    }

    /// Required grade of `v`, or 0 for non-terminals.
    pub fn required(&self, v: Vertex) -> Grade {
        self.required.get(&v).copied().unwrap_or(0)
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.required.contains_key(&v)
    }

    pub fn max_required(&self) -> Grade {
        self.required.values().copied().max().unwrap_or(0)
    }

    /// Terminals with required grade at least `grade`, ascending.
    pub fn terminals_at_least(&self, grade: Grade) -> Vec<Vertex> {
        self.terminals()
            .filter(|&(_, r)| r >= grade)
            .map(|(v, _)| v)
            .collect()
    }

    /// `c_grade(v)`, with `c_0(v) = 0`.
    pub fn cost(&self, v: Vertex, grade: Grade) -> Cost {
        if grade == 0 {
            Cost::ZERO
        } else {
            self.costs[v][grade - 1]
        }
    }

    pub fn ladder(&self, v: Vertex) -> &[Cost] {
        &self.costs[v]
    }

    pub fn cost_ladders(&self) -> &[Vec<Cost>] {
        &self.costs
    }

    /// Every broken instance rule; empty iff the instance is valid and
    /// normalized.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                out.push(Violation::SelfLoop { vertex: u });
            } else if !seen.insert((u, v)) {
                out.push(Violation::DuplicateEdge { u, v });
            }
        }
        if self.num_vertices > 0 {
            let reached = crate::graph::reachable_from(&self.adjacency, 0, |_| true);
            if let Some(v) = (0..self.num_vertices).find(|&v| !reached[v]) {
                out.push(Violation::Disconnected { unreachable: v });
            }
        }
        for v in 0..self.num_vertices {
            for g in 1..self.grades {
                if self.cost(v, g + 1) < self.cost(v, g) {
                    out.push(Violation::NonMonotoneCost {
                        vertex: v,
                        grade: g,
                    });
                }
            }
        }
        if self.required.is_empty() {
            out.push(Violation::NoTerminals);
        } else {
            let max = self.max_required();
            if max < self.grades {
                out.push(Violation::TopGradeUnused {
                    max_required: max,
                    grades: self.grades,
                });
            }
            for (v, r) in self.terminals() {
                if !self.cost(v, r).is_zero() {
                    out.push(Violation::TerminalCost { vertex: v });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Returns an equivalent instance in which every terminal has a zero
    /// cost ladder up to its requirement and some terminal requires the top
    /// grade.
    ///
    /// A terminal `v` with `c_{R(v)}(v) > 0` keeps its vertex id but becomes
    /// a non-terminal whose ladder is shifted down by `c_{R(v)}(v)`; a new
    /// zero-cost terminal `v'` with requirement `R(v)` hangs off it. The
    /// shifted amounts are returned as `offset`, so that
    /// `OPT(original) = OPT(normalized) + offset`.
    pub fn normalize(&self) -> Result<Normalized, InstanceError> {
        if self.required.is_empty() {
            return Err(InstanceError::NoTerminals);
        }
        if let Some(v) = self.validate().into_iter().find(|v| !v.is_normalizable()) {
            return Err(InstanceError::Invalid(v));
        }
        let grades = self.max_required();
        let mut costs: Vec<Vec<Cost>> = self
            .costs
            .iter()
            .map(|ladder| ladder[..grades].to_vec())
            .collect();
        let mut edges = self.edges.clone();
        let mut terminals = Vec::new();
        let mut dummies = Vec::new();
        let mut offset = Cost::ZERO;
        let mut next = self.num_vertices;
        for (v, r) in self.terminals() {
            let paid = self.cost(v, r);
            if paid.is_zero() {
                terminals.push((v, r));
                continue;
            }
            offset += paid;
            for c in costs[v].iter_mut() {
                *c = c.saturating_sub(paid);
            }
            costs.push(vec![Cost::ZERO; grades]);
            edges.push((v, next));
            terminals.push((next, r));
            dummies.push((v, next));
            next += 1;
        }
        let instance = Instance::new(next, grades, edges, terminals, costs)?;
        Ok(Normalized {
            instance,
            offset,
            dummies,
            original_vertices: self.num_vertices,
        })
    }
}

/// Result of [`Instance::normalize`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub instance: Instance,
    /// Cost moved out of the instance; add it back to normalized costs.
    pub offset: Cost,
    /// `(original terminal, its zero-cost stand-in)` pairs.
    pub dummies: Vec<(Vertex, Vertex)>,
    pub original_vertices: usize,
}

impl Normalized {
    /// Maps an assignment on the normalized instance back onto the original
    /// vertex set: stand-ins are dropped and every moved terminal is raised
    /// to at least its requirement.
    pub fn lift(&self, original: &Instance, y: &GradeAssignment) -> GradeAssignment {
        let mut lifted: Vec<Grade> = y.as_slice()[..self.original_vertices].to_vec();
        for &(v, _) in &self.dummies {
            lifted[v] = lifted[v].max(original.required(v));
        }
        GradeAssignment::new(lifted)
    }
}

/// A graph whose edges carry cost ladders as well as its vertices.
#[derive(Debug, Clone)]
pub struct EdgeWeightedGraph {
    pub num_vertices: usize,
    pub grades: Grade,
    pub edges: Vec<(Vertex, Vertex, Vec<Cost>)>,
    pub vertex_costs: Vec<Vec<Cost>>,
    pub terminals: Vec<(Vertex, Grade)>,
}

/// Subdivides every edge `uv` into `u-w-v` where the new vertex `w`
/// carries the edge's ladder. New vertices get ids from `num_vertices`
/// upward in edge order.
pub fn edge_costs_to_vertex_costs(graph: &EdgeWeightedGraph) -> Result<Instance, InstanceError> {
    let mut costs = graph.vertex_costs.clone();
    let mut edges = Vec::with_capacity(graph.edges.len() * 2);
    for (u, v, ladder) in &graph.edges {
        let w = costs.len();
        costs.push(ladder.clone());
        edges.push((*u, w));
        edges.push((w, *v));
    }
    if graph.vertex_costs.len() != graph.num_vertices {
        return Err(InstanceError::CostRowCount {
            expected: graph.num_vertices,
            found: graph.vertex_costs.len(),
        });
    }
    for (u, v, _) in &graph.edges {
        if *u >= graph.num_vertices || *v >= graph.num_vertices {
            return Err(InstanceError::EdgeOutOfRange(*u, *v, graph.num_vertices));
        }
    }
    Instance::new(
        costs.len(),
        graph.grades,
        edges,
        graph.terminals.iter().copied(),
        costs,
    )
}

/// Grade assigned to each vertex; 0 means no facility.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradeAssignment(Vec<Grade>);

impl GradeAssignment {
    pub fn new(grades: Vec<Grade>) -> Self {
        GradeAssignment(grades)
    }

    pub fn zeros(n: usize) -> Self {
        GradeAssignment(vec![0; n])
    }

    /// Every terminal at its requirement, everything else at zero.
    pub fn required_only(instance: &Instance) -> Self {
        GradeAssignment(
            (0..instance.num_vertices())
                .map(|v| instance.required(v))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Grade {
        self.0[v]
    }

    pub fn set(&mut self, v: Vertex, grade: Grade) {
        self.0[v] = grade;
    }

    /// `y(v) = max(y(v), grade)`; returns whether it changed.
    pub fn raise(&mut self, v: Vertex, grade: Grade) -> bool {
        if self.0[v] < grade {
            self.0[v] = grade;
            true
        } else {
            false
        }
    }

    pub fn as_slice(&self) -> &[Grade] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Grade> {
        self.0
    }

    /// Vertices carrying a facility.
    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &g)| g > 0)
            .map(|(v, _)| v)
    }
}

impl std::ops::Index<Vertex> for GradeAssignment {
    type Output = Grade;
    fn index(&self, v: Vertex) -> &Grade {
        &self.0[v]
    }
}
