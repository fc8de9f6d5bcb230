//! Exact solvers for small instances: exhaustive search over assignments
//! and the cut-based integer program.

mod brute;
mod ilp;

use thiserror::Error;

pub use brute::{brute_force_optimum, brute_force_optimum_with, search_space, Limits};
pub use ilp::{
    build_ilp, export_lp, solve_ilp_by_enumeration, CutRow, IlpModel, IlpSolution,
    DEFAULT_ENUMERATION_CAP, DEFAULT_ILP_VERTEX_CAP,
};

use crate::feasibility::AssignmentError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vertices} vertices exceeds the cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("search space of {space} assignments exceeds the cap of {cap}")]
    SpaceTooLarge { space: u64, cap: u64 },
    #[error("{variables} binary variables exceeds the cap of {cap}")]
    TooManyVariables { variables: usize, cap: usize },
    #[error("no feasible assignment exists")]
    NoFeasibleAssignment,
    #[error("optimum failed verification: {0}")]
    Verification(AssignmentError),
}

impl OracleError {
    /// Whether the instance was simply too large to search.
    pub fn is_size_cap(&self) -> bool {
        matches!(
            self,
            OracleError::TooManyVertices { .. }
                | OracleError::SpaceTooLarge { .. }
                | OracleError::TooManyVariables { .. }
        )
    }
}
