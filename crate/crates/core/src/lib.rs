//! Vertex-weighted grade-of-service Steiner trees: exact cost arithmetic,
//! instance handling, a greedy approximation, grade-by-grade heuristics,
//! exact oracles and the reductions used to check them.

pub mod cost;
pub mod feasibility;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod solution;
pub mod verify;

pub use cost::{Cost, Ratio};
pub use feasibility::{
    check_feasible, extract_tree, is_feasible, solution_cost, AssignmentError, Witness,
};
pub use greedy::{solve_greedy, solve_greedy_with, GreedyError, GreedyOptions};
pub use instance::{Grade, GradeAssignment, Instance, InstanceError, Vertex, Violation};
pub use parallel::Parallelism;
pub use solution::{IterationRecord, SolutionReport};
