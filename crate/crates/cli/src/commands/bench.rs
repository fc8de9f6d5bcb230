use std::time::{Duration, Instant};

use clap::Args;
use vgsst_core::generate::{random_instance, EdgeModel, RandomParams};
use vgsst_core::{solve_greedy_with, Cost, Grade, GreedyOptions, Instance, Parallelism};

use crate::commands::gen::effective_seed;
use crate::commands::solve::{run, Algorithm, OracleArgs, Vst};
use crate::failure::{input, Classify, Kind, Outcome};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Vertex count of each generated instance.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub levels: Grade,
    /// Number of instances.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Average degree of the random graphs.
    #[arg(long, default_value_t = 6.0)]
    pub degree: f64,
    #[arg(long, default_value_t = 0.2)]
    pub terminal_fraction: f64,
    /// Random seed; VGSST_SEED takes precedence when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

fn timed<T>(f: impl FnOnce() -> Outcome<T>) -> Outcome<(T, Duration)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, start.elapsed()))
}

/// Times every heuristic on a seeded batch and compares sequential with
/// parallel greedy.
pub fn cmd_bench(args: &BenchArgs) -> Outcome {
    if args.count == 0 || args.n < 2 {
        return Err(input(
            "bench needs at least one instance of two or more vertices",
        ));
    }
    let seed = effective_seed(args.seed)?;
    let p = (args.degree / (args.n - 1) as f64).clamp(0.0, 1.0);
    let instances: Vec<Instance> = (0..args.count as u64)
        .map(|k| {
            let params = RandomParams {
                edge_model: EdgeModel::Gnp(p),
                terminal_fraction: args.terminal_fraction,
                ..RandomParams::new(args.n, args.levels, seed.wrapping_add(k))
            };
            random_instance(&params).or_fail(Kind::Input)
        })
        .collect::<Outcome<_>>()?;

    println!("{:<22} {:>12} {:>14}", "solver", "mean time", "mean cost");
    let solvers = [
        ("greedy", Algorithm::Greedy, Vst::Greedy),
        ("topdown (greedy vst)", Algorithm::Topdown, Vst::Greedy),
        ("bottomup (greedy vst)", Algorithm::Bottomup, Vst::Greedy),
    ];
    for (name, algorithm, vst) in solvers {
        let mut time = Duration::ZERO;
        let mut cost = Cost::ZERO;
        for inst in &instances {
            let (report, elapsed) = timed(|| run(inst, algorithm, vst, args.oracle.limits()))?;
            time += elapsed;
            cost += report.total_cost;
        }
        let mean_cost = cost.as_f64() / instances.len() as f64;
        println!(
            "{name:<22} {:>12.2?} {mean_cost:>14.3}",
            time / instances.len() as u32
        );
    }

    for parallelism in [Parallelism::Sequential, Parallelism::Parallel] {
        let mut time = Duration::ZERO;
        for inst in &instances {
            let (_, elapsed) = timed(|| {
                solve_greedy_with(inst, GreedyOptions { parallelism }).or_fail(Kind::Internal)
            })?;
            time += elapsed;
        }
        println!(
            "{:<22} {:>12.2?}",
            format!("greedy {parallelism:?}").to_lowercase(),
            time / instances.len() as u32
        );
    }
    if !Parallelism::available() {
        println!("(built without the parallel feature; both greedy modes run sequentially)");
    }
    Ok(())
}
