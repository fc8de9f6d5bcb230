//! Built-in instances and seeded random instance families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::Cost;
use crate::graph::reachable_from;
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("unsatisfiable parameters: {0}")]
    Unsatisfiable(String),
}

/// The eight-vertex, two-grade worked example. Vertex ids 0..8 stand for
/// A..H; costs are proportional (`c_2 = 2 c_1`) except that terminals pay
/// nothing up to their requirement.
pub fn fig3() -> Instance {
    let u = Cost::from_units;
    Instance::new(
        8,
        2,
        vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (2, 4),
            (3, 5),
            (4, 6),
            (4, 7),
            (5, 7),
        ],
        [(0, 2), (2, 1), (5, 2), (6, 1)],
        vec![
            vec![u(0), u(0)],
            vec![u(7), u(14)],
            vec![u(0), u(8)],
            vec![u(4), u(8)],
            vec![u(3), u(6)],
            vec![u(0), u(0)],
            vec![u(0), u(6)],
            vec![u(1), u(2)],
        ],
    )
    .expect("fig3 is well formed")
}

/// The cost-30 assignment the greedy solver reaches on [`fig3`].
pub fn fig3_solution() -> GradeAssignment {
    GradeAssignment::new(vec![2, 2, 2, 0, 2, 2, 1, 2])
}

/// The top-down tightness family for `levels` grades.
///
/// Terminals `a_0..=a_levels` (ids `0..=levels`) form a chain through unit
/// cost connectors `u_1..=u_levels` (ids `levels+1..=2*levels`), with
/// `a_{k-1} - u_k - a_k`. A hub `v` (id `2*levels+1`) of cost `1 + eps` at
/// every grade touches every terminal. `a_0` and `a_1` require the top
/// grade and `a_k` requires `levels - k + 1` after that.
pub fn fig2(levels: Grade, eps: Cost) -> Result<Instance, GenerateError> {
    if levels == 0 {
        return Err(GenerateError::Unsatisfiable(
            "fig2 needs at least one grade".into(),
        ));
    }
    let n = 2 * levels + 2;
    let hub = 2 * levels + 1;
    let connector = |k: usize| levels + k;
    let mut edges = Vec::new();
    for k in 1..=levels {
        edges.push((k - 1, connector(k)));
        edges.push((k, connector(k)));
    }
    for a in 0..=levels {
        edges.push((a, hub));
    }
    let mut terminals = vec![(0, levels)];
    for k in 1..=levels {
        terminals.push((k, levels - k + 1));
    }
    let mut costs = vec![vec![Cost::ZERO; levels]; n];
    for k in 1..=levels {
        costs[connector(k)] = vec![Cost::from_units(1); levels];
    }
    costs[hub] = vec![Cost::from_units(1) + eps; levels];
    Instance::new(n, levels, edges, terminals, costs)
        .map_err(|e| GenerateError::Unsatisfiable(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeModel {
    /// Each pair is an edge independently with this probability.
    Gnp(f64),
    /// Vertices are uniform points in the unit square, joined when closer
    /// than this radius.
    Geometric(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub vertices: usize,
    pub edge_model: EdgeModel,
    pub grades: Grade,
    pub terminal_fraction: f64,
    /// Relative weights of required grades `1..=grades`; uniform if empty.
    pub grade_weights: Vec<u32>,
    pub seed: u64,
}

impl RandomParams {
    pub fn new(vertices: usize, grades: Grade, seed: u64) -> Self {
        RandomParams {
            vertices,
            edge_model: EdgeModel::Gnp(0.4),
            grades,
            terminal_fraction: 0.4,
            grade_weights: Vec::new(),
            seed,
        }
    }
}

const CONNECT_ATTEMPTS: usize = 10_000;

/// A connected random instance with at least two terminals (one if the
/// graph has a single vertex), normalized so that terminals are free up to
/// their requirement and some terminal requires the top grade.
///
/// Ladders are prefix sums of increments drawn from `{0, 0.1, ..., 1.0}`.
pub fn random_instance(params: &RandomParams) -> Result<Instance, GenerateError> {
    let n = params.vertices;
    if n == 0 {
        return Err(GenerateError::Unsatisfiable(
            "need at least one vertex".into(),
        ));
    }
    if params.grades == 0 {
        return Err(GenerateError::Unsatisfiable(
            "need at least one grade".into(),
        ));
    }
    if !params.grade_weights.is_empty()
        && (params.grade_weights.len() != params.grades
            || params.grade_weights.iter().all(|&w| w == 0))
    {
        return Err(GenerateError::Unsatisfiable(format!(
            "grade weights must list {} values, not all zero",
            params.grades
        )));
    }
    let probability_ok = |p: f64| (0.0..=1.0).contains(&p);
    match params.edge_model {
        EdgeModel::Gnp(p) if !probability_ok(p) || (p == 0.0 && n > 1) => {
            return Err(GenerateError::Unsatisfiable(format!(
                "edge probability {p} cannot connect {n} vertices"
            )))
        }
        EdgeModel::Geometric(r) if r <= 0.0 && n > 1 => {
            return Err(GenerateError::Unsatisfiable(format!(
                "radius {r} cannot connect {n} vertices"
            )))
        }
        _ => {}
    }
    if !(0.0..=1.0).contains(&params.terminal_fraction) {
        return Err(GenerateError::Unsatisfiable(
            "terminal fraction must lie in [0, 1]".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges = connected_edges(&mut rng, n, params.edge_model)?;

    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let wanted = (params.terminal_fraction * n as f64).round() as usize;
    let count = wanted.clamp(n.min(2), n);
    let mut terminals: Vec<(Vertex, Grade)> = order[..count]
        .iter()
        .map(|&v| (v, sample_grade(&mut rng, params)))
        .collect();
    terminals[0].1 = params.grades;

    let mut costs: Vec<Vec<Cost>> = (0..n)
        .map(|_| {
            let mut total = Cost::ZERO;
            (0..params.grades)
                .map(|_| {
                    total += Cost::from_micros(rng.random_range(0..=10u64) * 100_000);
                    total
                })
                .collect()
        })
        .collect();
    for &(v, r) in &terminals {
        let paid = costs[v][r - 1];
        for c in costs[v].iter_mut() {
            *c = c.saturating_sub(paid);
        }
    }
    terminals.sort_unstable();
    Instance::new(n, params.grades, edges, terminals, costs)
        .map_err(|e| GenerateError::Unsatisfiable(e.to_string()))
}

fn sample_grade(rng: &mut ChaCha8Rng, params: &RandomParams) -> Grade {
    if params.grade_weights.is_empty() {
        return rng.random_range(1..=params.grades);
    }
    let total: u64 = params.grade_weights.iter().map(|&w| u64::from(w)).sum();
    let mut pick = rng.random_range(0..total);
    for (i, &w) in params.grade_weights.iter().enumerate() {
        if pick < u64::from(w) {
            return i + 1;
        }
        pick -= u64::from(w);
    }
    params.grades
}

fn connected_edges(
    rng: &mut ChaCha8Rng,
    n: usize,
    model: EdgeModel,
) -> Result<Vec<(Vertex, Vertex)>, GenerateError> {
    for _ in 0..CONNECT_ATTEMPTS {
        let mut edges = Vec::new();
        match model {
            EdgeModel::Gnp(p) => {
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
            }
            EdgeModel::Geometric(radius) => {
                let points: Vec<(f64, f64)> =
                    (0..n).map(|_| (rng.random(), rng.random())).collect();
                for u in 0..n {
                    for v in u + 1..n {
                        let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
                        if dx * dx + dy * dy <= radius * radius {
                            edges.push((u, v));
                        }
                    }
                }
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        if reachable_from(&adjacency, 0, |_| true).iter().all(|&r| r) {
            return Ok(edges);
        }
    }
    Err(GenerateError::Unsatisfiable(format!(
        "no connected graph after {CONNECT_ATTEMPTS} attempts"
    )))
}

/// A reproducible mix of small sparse random instances: `max(3, max_vertices - 4)..=max_vertices`
/// vertices, `1..=max_grades` grades, both edge models, at least two
/// terminals each. Draws whose terminals are already adjacent to one
/// another are discarded, since they rarely need any purchase.
pub fn random_corpus(
    seed: u64,
    count: usize,
    max_vertices: usize,
    max_grades: Grade,
) -> Vec<Instance> {
    assert!(max_vertices >= 3 && max_grades >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(|| {
        let vertices = rng.random_range(max_vertices.saturating_sub(4).max(3)..=max_vertices);
        let edge_model = if rng.random_bool(0.75) {
            EdgeModel::Gnp(rng.random_range(0.2..0.45))
        } else {
            EdgeModel::Geometric(rng.random_range(0.35..0.6))
        };
        let params = RandomParams {
            vertices,
            edge_model,
            grades: rng.random_range(1..=max_grades),
            terminal_fraction: rng.random_range(0.3..0.6),
            grade_weights: Vec::new(),
            seed: rng.random(),
        };
        random_instance(&params).expect("corpus parameters are satisfiable")
    })
    .filter(|inst| !terminals_touch(inst))
    .take(count)
    .collect()
}

/// Whether the terminals induce a connected subgraph.
fn terminals_touch(instance: &Instance) -> bool {
    let start = instance
        .terminals()
        .next()
        .expect("at least one terminal")
        .0;
    let reached = reachable_from(instance.adjacency(), start, |v| instance.is_terminal(v));
    instance.terminals().all(|(t, _)| reached[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_shape() {
        let inst = fig2(3, Cost::from_micros(100_000)).unwrap();
        assert_eq!(inst.num_vertices(), 8);
        assert_eq!(inst.terminal_count(), 4);
        assert_eq!(inst.max_required(), 3);
        assert!(inst.is_valid());
        assert_eq!(inst.cost(7, 2), Cost::from_micros(1_100_000));
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        for seed in 0..50 {
            let mut params = RandomParams::new(9, 3, seed);
            if seed % 2 == 0 {
                params.edge_model = EdgeModel::Geometric(0.6);
            }
            let a = random_instance(&params).unwrap();
            assert_eq!(a.validate(), vec![], "seed {seed}");
            assert!(a.terminal_count() >= 2);
            assert_eq!(a, random_instance(&params).unwrap());
        }
    }

    #[test]
    fn grade_weights_are_respected() {
        let mut params = RandomParams::new(9, 3, 11);
        params.grade_weights = vec![0, 0, 1];
        params.terminal_fraction = 1.0;
        let inst = random_instance(&params).unwrap();
        assert!(inst.terminals().all(|(_, r)| r == 3));
    }

    #[test]
    fn impossible_parameters_are_rejected() {
        let mut params = RandomParams::new(5, 2, 1);
        params.edge_model = EdgeModel::Gnp(0.0);
        assert!(random_instance(&params).is_err());
        params.edge_model = EdgeModel::Gnp(0.5);
        params.grade_weights = vec![1];
        assert!(random_instance(&params).is_err());
    }
}
