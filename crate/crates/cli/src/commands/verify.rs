use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;
use vgsst_core::feasibility::{check_feasible, solution_cost};
use vgsst_core::graph::RootedTree;
use vgsst_core::verify::check_grt;
use vgsst_core::Vertex;

use crate::commands::solve::{format_ratio, optimum, OracleArgs};
use crate::failure::{input, Failure, Kind, Outcome};
use crate::files::{read_instance, read_solution};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub solution: PathBuf,
    /// Skip the exact-oracle ratio even on small instances.
    #[arg(long)]
    pub no_ratio: bool,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, ok: bool, what: impl std::fmt::Display) {
        if !ok {
            self.failed += 1;
        }
        println!("{}  {what}", if ok { "PASS" } else { "FAIL" });
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let instance = read_instance(&args.input)?;
    let solution = read_solution(&args.solution)?;
    let y = &solution.assignment;
    if y.len() != instance.num_vertices() {
        return Err(input(format!(
            "solution has {} grades but the instance has {} vertices",
            y.len(),
            instance.num_vertices()
        )));
    }
    let mut report = Report { failed: 0 };

    match check_feasible(&instance, y) {
        Ok(None) => report.line(true, "feasibility"),
        Ok(Some(witness)) => report.line(false, format!("feasibility: {witness}")),
        Err(e) => report.line(false, format!("feasibility: {e}")),
    }

    let edges: Vec<(Vertex, Vertex)> = solution.tree_edges.iter().map(|&[u, v]| (u, v)).collect();
    let support: BTreeSet<Vertex> = y.support().collect();
    let graph_edges: BTreeSet<(Vertex, Vertex)> = instance
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let foreign = edges
        .iter()
        .find(|&&(u, v)| !graph_edges.contains(&(u.min(v), u.max(v))));
    let tree_root = solution.root.or_else(|| support.first().copied());
    let shape = match (foreign, tree_root) {
        (Some(&(u, v)), _) => Err(format!("edge ({u}, {v}) is not in the graph")),
        (None, None) => {
            if edges.is_empty() {
                Ok(())
            } else {
                Err("edges given for an empty assignment".to_string())
            }
        }
        (None, Some(root)) => match RootedTree::from_edges(instance.num_vertices(), &edges, root) {
            Err(e) => Err(e.to_string()),
            Ok(tree) => {
                let spanned: BTreeSet<Vertex> = (0..instance.num_vertices())
                    .filter(|&v| tree.in_tree[v])
                    .collect();
                if spanned == support {
                    Ok(())
                } else {
                    Err("tree vertices differ from the graded vertices".into())
                }
            }
        },
    };
    match shape {
        Ok(()) => report.line(
            true,
            format!(
                "tree ({} edges spanning {} vertices)",
                edges.len(),
                support.len()
            ),
        ),
        Err(why) => report.line(false, format!("tree: {why}")),
    }

    if let Some(root) = solution.root {
        match check_grt(&instance, &edges, y, root) {
            Ok(None) => report.line(true, format!("grades never rise away from root {root}")),
            Ok(Some(path)) => report.line(
                false,
                format!("grade rises along {path:?} from root {root}"),
            ),
            Err(e) => report.line(false, format!("rooted tree: {e}")),
        }
    }

    let cost = solution_cost(&instance, y);
    report.line(
        cost == solution.cost,
        format!("cost {cost} (file says {})", solution.cost),
    );

    if !args.no_ratio {
        match optimum(&instance, args.oracle.limits()) {
            Ok(opt) => println!("ratio {} (opt {opt})", format_ratio(cost, opt)),
            Err(Failure {
                kind: Kind::SizeCap,
                error,
            }) => println!("ratio skipped: {error}"),
            Err(other) => return Err(other),
        }
    }

    if report.failed == 0 {
        println!("verdict: PASS");
        Ok(())
    } else {
        println!("verdict: FAIL ({} checks)", report.failed);
        Err(Failure::new(
            Kind::Rejected,
            anyhow::anyhow!("{} verification checks failed", report.failed),
        ))
    }
}
