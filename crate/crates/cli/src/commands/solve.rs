use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use vgsst_core::feasibility::check_feasible;
use vgsst_core::greedy::GreedyError;
use vgsst_core::heuristics::{solve_bottomup, solve_topdown, ExactVst, GreedyVst, HeuristicError};
use vgsst_core::io::solution_to_json;
use vgsst_core::oracle::{brute_force_optimum, Limits, OracleError};
use vgsst_core::{solve_greedy, Cost, Instance, SolutionReport};

use crate::failure::{input, internal, Classify, Failure, Kind, Outcome};
use crate::files::{read_instance, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Topdown,
    Bottomup,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vst {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OracleArgs {
    /// Largest instance the exact oracle accepts.
    #[arg(long, default_value_t = Limits::default().max_vertices)]
    pub oracle_max_vertices: usize,
    /// Largest number of assignments the exact oracle enumerates.
    #[arg(long, default_value_t = Limits::default().max_space)]
    pub oracle_max_space: u64,
}

impl OracleArgs {
    pub fn limits(self) -> Limits {
        Limits {
            max_vertices: self.oracle_max_vertices,
            max_space: self.oracle_max_space,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "greedy")]
    pub algorithm: Algorithm,
    /// Steiner subroutine for the top-down and bottom-up heuristics.
    #[arg(long, value_enum, default_value = "greedy")]
    pub vst: Vst,
    /// Instance files; several may be given for a batch run.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Solution file, for a single input.
    #[arg(long, short, conflicts_with = "out_dir")]
    pub output: Option<PathBuf>,
    /// Directory receiving `<stem>.solution.json` for each input.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also report cost / OPT from the exact oracle.
    #[arg(long)]
    pub ratio: bool,
    /// Worker threads for batch runs.
    #[arg(long, short, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

fn greedy_failure(e: GreedyError) -> Failure {
    match e {
        GreedyError::InvalidInstance(_) => Failure::new(Kind::Input, e),
        _ => Failure::new(Kind::Internal, e),
    }
}

pub fn oracle_failure(e: OracleError) -> Failure {
    if e.is_size_cap() {
        Failure::new(Kind::SizeCap, e)
    } else {
        Failure::new(Kind::Internal, e)
    }
}

fn heuristic_failure(e: HeuristicError) -> Failure {
    match e {
        HeuristicError::InvalidInstance(_) | HeuristicError::Query(_) => {
            Failure::new(Kind::Input, e)
        }
        HeuristicError::Oracle(o) => oracle_failure(o),
        HeuristicError::Greedy(g) => greedy_failure(g),
        _ => Failure::new(Kind::Internal, e),
    }
}

/// Runs one solver on an instance that already passes validation.
fn run_normalized(
    instance: &Instance,
    algorithm: Algorithm,
    vst: Vst,
    limits: Limits,
) -> Outcome<SolutionReport> {
    match (algorithm, vst) {
        (Algorithm::Greedy, _) => solve_greedy(instance).map_err(greedy_failure),
        (Algorithm::Topdown, Vst::Greedy) => {
            solve_topdown(instance, &GreedyVst).map_err(heuristic_failure)
        }
        (Algorithm::Topdown, Vst::Exact) => {
            solve_topdown(instance, &ExactVst { limits }).map_err(heuristic_failure)
        }
        (Algorithm::Bottomup, Vst::Greedy) => {
            solve_bottomup(instance, &GreedyVst).map_err(heuristic_failure)
        }
        (Algorithm::Bottomup, Vst::Exact) => {
            solve_bottomup(instance, &ExactVst { limits }).map_err(heuristic_failure)
        }
        (Algorithm::Exact, _) => brute_force_optimum(instance, limits).map_err(oracle_failure),
    }
}

/// Runs a solver, normalizing the instance first when needed and mapping
/// the result back onto the original vertices. The output is checked for
/// feasibility before it is returned.
pub fn run(
    instance: &Instance,
    algorithm: Algorithm,
    vst: Vst,
    limits: Limits,
) -> Outcome<SolutionReport> {
    let violations = instance.validate();
    let report = if violations.is_empty() {
        run_normalized(instance, algorithm, vst, limits)?
    } else if violations.iter().all(|v| v.is_normalizable()) {
        let normalized = instance.normalize().or_fail(Kind::Input)?;
        let solved = run_normalized(&normalized.instance, algorithm, vst, limits)?;
        let lifted = normalized.lift(instance, &solved.assignment);
        let mut report =
            SolutionReport::from_assignment(instance, lifted).or_fail(Kind::Internal)?;
        report.per_grade_costs = solved.per_grade_costs;
        report
    } else {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(input(format!("invalid instance: {}", list.join("; "))));
    };
    match check_feasible(instance, &report.assignment) {
        Ok(None) => Ok(report),
        Ok(Some(witness)) => Err(internal(format!(
            "solver produced an infeasible assignment: {witness}"
        ))),
        Err(e) => Err(internal(format!(
            "solver produced a malformed assignment: {e}"
        ))),
    }
}

pub fn optimum(instance: &Instance, limits: Limits) -> Outcome<Cost> {
    Ok(run(instance, Algorithm::Exact, Vst::Exact, limits)?.total_cost)
}

/// `cost / opt` for display. With `opt = 0` the ratio is 1.0 if the cost
/// is also zero and infinite otherwise.
pub fn format_ratio(cost: Cost, opt: Cost) -> String {
    if opt.is_zero() {
        return if cost.is_zero() {
            "1.0".into()
        } else {
            "infinite".into()
        };
    }
    let text = format!("{:.4}", cost.as_f64() / opt.as_f64());
    let trimmed = text.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

fn solution_path(args: &SolveArgs, input: &Path) -> Option<PathBuf> {
    if let Some(out) = &args.output {
        return Some(out.clone());
    }
    let dir = args.out_dir.as_ref()?;
    let stem = input
        .file_stem()
        .map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
    Some(dir.join(format!("{stem}.solution.json")))
}

fn solve_one(args: &SolveArgs, path: &Path) -> Outcome<String> {
    let instance = read_instance(path)?;
    let report = run(&instance, args.algorithm, args.vst, args.oracle.limits())?;
    if let Some(out) = solution_path(args, path) {
        write_atomic(&out, &solution_to_json(&report))?;
    }
    let mut line = format!(
        "{}: cost {}, iterations {}",
        path.display(),
        report.total_cost,
        report.iterations.len()
    );
    if let Some(per_grade) = &report.per_grade_costs {
        let parts: Vec<String> = per_grade.iter().map(Cost::to_string).collect();
        line.push_str(&format!(", per-grade [{}]", parts.join(", ")));
    }
    if args.ratio {
        let opt = optimum(&instance, args.oracle.limits())?;
        line.push_str(&format!(
            ", opt {opt}, ratio {}",
            format_ratio(report.total_cost, opt)
        ));
    }
    Ok(line)
}

pub fn cmd_solve(args: &SolveArgs) -> Outcome {
    if args.output.is_some() && args.input.len() > 1 {
        return Err(input(
            "--output takes a single input; use --out-dir for batches",
        ));
    }
    if args.jobs == 0 {
        return Err(input("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .or_fail(Kind::Internal)?;
    let results: Vec<Outcome<String>> =
        pool.install(|| args.input.par_iter().map(|p| solve_one(args, p)).collect());
    let mut first_failure = None;
    for result in results {
        match result {
            Ok(line) => println!("{line}"),
            Err(failure) => {
                eprintln!("error: {failure}");
                first_failure.get_or_insert(failure);
            }
        }
    }
    first_failure.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_text() {
        assert_eq!(
            format_ratio(Cost::from_units(30), Cost::from_units(30)),
            "1.0"
        );
        assert_eq!(
            format_ratio(Cost::from_units(4), Cost::from_micros(1_100_000)),
            "3.6364"
        );
        assert_eq!(
            format_ratio(Cost::from_units(3), Cost::from_units(2)),
            "1.5"
        );
        assert_eq!(format_ratio(Cost::ZERO, Cost::ZERO), "1.0");
        assert_eq!(format_ratio(Cost::from_units(1), Cost::ZERO), "infinite");
    }
}
