use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use vgsst_core::generate::{fig2, fig3, random_instance, EdgeModel, RandomParams};
use vgsst_core::io::instance_to_json;
use vgsst_core::{Cost, Grade};

use crate::failure::{input, Classify, Kind, Outcome};
use crate::files::emit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Fig3,
    Fig2,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "random"])))]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Generate a random connected instance.
    #[arg(long)]
    pub random: bool,
    /// Grade count for fig2 and random instances.
    #[arg(long, default_value_t = 3)]
    pub levels: Grade,
    /// Hub discount of the fig2 family.
    #[arg(long, default_value = "0.1")]
    pub eps: Cost,
    /// Vertex count of a random instance.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Edge probability of the G(n, p) model.
    #[arg(long, conflicts_with = "radius")]
    pub edge_prob: Option<f64>,
    /// Connection radius of the unit-square geometric model.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 0.4)]
    pub terminal_fraction: f64,
    /// Comma-separated relative weights of required grades 1..=levels.
    #[arg(long, value_delimiter = ',')]
    pub grade_weights: Vec<u32>,
    /// Random seed; VGSST_SEED takes precedence when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// `VGSST_SEED` wins over the command line.
pub fn effective_seed(flag: u64) -> Outcome<u64> {
    match std::env::var("VGSST_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            input(format!(
                "VGSST_SEED={text:?} is not a 64-bit unsigned integer"
            ))
        }),
        Err(_) => Ok(flag),
    }
}

pub fn cmd_gen(args: &GenArgs) -> Outcome {
    let instance = match args.builtin {
        Some(Builtin::Fig3) => fig3(),
        Some(Builtin::Fig2) => fig2(args.levels, args.eps).or_fail(Kind::Input)?,
        None => {
            let edge_model = match (args.edge_prob, args.radius) {
                (_, Some(r)) => EdgeModel::Geometric(r),
                (Some(p), None) => EdgeModel::Gnp(p),
                (None, None) => EdgeModel::Gnp(0.4),
            };
            let params = RandomParams {
                vertices: args.n,
                edge_model,
                grades: args.levels,
                terminal_fraction: args.terminal_fraction,
                grade_weights: args.grade_weights.clone(),
                seed: effective_seed(args.seed)?,
            };
            random_instance(&params).or_fail(Kind::Input)?
        }
    };
    emit(args.output.as_deref(), &instance_to_json(&instance))
}
