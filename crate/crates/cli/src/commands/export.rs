use std::path::PathBuf;

use clap::{ArgGroup, Args};
use vgsst_core::io::to_dot;
use vgsst_core::oracle::{build_ilp, export_lp, DEFAULT_ILP_VERTEX_CAP};
use vgsst_core::GradeAssignment;

use crate::commands::solve::oracle_failure;
use crate::failure::{input, Outcome};
use crate::files::{emit, read_instance, read_solution};

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("format").required(true).args(["dot", "lp"])))]
pub struct ExportArgs {
    /// Instance file.
    pub input: PathBuf,
    /// Graphviz output.
    #[arg(long)]
    pub dot: bool,
    /// Cut-based integer program in LP format.
    #[arg(long)]
    pub lp: bool,
    /// Solution whose grades are drawn on the DOT output.
    #[arg(long, requires = "dot")]
    pub solution: Option<PathBuf>,
    /// Largest instance accepted for LP export.
    #[arg(long, default_value_t = DEFAULT_ILP_VERTEX_CAP)]
    pub max_vertices: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn cmd_export(args: &ExportArgs) -> Outcome {
    let instance = read_instance(&args.input)?;
    let text = if args.lp {
        export_lp(&build_ilp(&instance, args.max_vertices).map_err(oracle_failure)?)
    } else if let Some(path) = &args.solution {
        let solution = read_solution(path)?;
        let y: &GradeAssignment = &solution.assignment;
        if y.len() != instance.num_vertices() {
            return Err(input(format!(
                "solution has {} grades but the instance has {} vertices",
                y.len(),
                instance.num_vertices()
            )));
        }
        let edges: Vec<_> = solution.tree_edges.iter().map(|&[u, v]| (u, v)).collect();
        to_dot(&instance, Some((y, &edges)))
    } else {
        to_dot(&instance, None)
    };
    emit(args.output.as_deref(), &text)
}
