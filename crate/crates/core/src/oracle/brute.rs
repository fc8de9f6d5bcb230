use crate::feasibility::extract_tree;
use crate::instance::{Grade, GradeAssignment, Instance};
use crate::parallel::{map_slice, Parallelism};
use crate::solution::{default_root, SolutionReport};

use super::OracleError;

/// Size caps for exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    /// Largest number of assignments enumerated once terminal floors are fixed.
    pub max_space: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 10,
            max_space: 10_000_000,
        }
    }
}

/// Bitmask view of an instance for fast feasibility checks (`|V| <= 64`).
#[derive(Debug, Clone)]
pub(crate) struct MaskGraph {
    pub(crate) neighbors: Vec<u64>,
    /// `terminals[i - 1]`: terminals requiring at least grade `i`.
    pub(crate) terminals: Vec<u64>,
}

impl MaskGraph {
    pub(crate) fn new(instance: &Instance) -> Self {
        let n = instance.num_vertices();
        assert!(n <= 64, "bitmask view needs at most 64 vertices");
        let neighbors = (0..n)
            .map(|v| instance.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        let terminals = (1..=instance.grades())
            .map(|g| {
                instance
                    .terminals_at_least(g)
                    .iter()
                    .fold(0u64, |m, &t| m | 1 << t)
            })
            .collect();
        MaskGraph {
            neighbors,
            terminals,
        }
    }

    /// Vertices adjacent to `set` but outside it.
    pub(crate) fn boundary(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            out |= self.neighbors[v];
            rest &= rest - 1;
        }
        out & !set
    }

    /// Component of `start` inside `allowed`.
    fn flood(&self, start: u64, allowed: u64) -> u64 {
        let mut reach = start;
        loop {
            let next = reach | (self.boundary(reach) & allowed);
            if next == reach {
                return reach;
            }
            reach = next;
        }
    }

    /// Nested connectivity, assuming terminal floors already hold.
    pub(crate) fn feasible(&self, y: &[Grade]) -> bool {
        for (idx, &terms) in self.terminals.iter().enumerate() {
            if terms.count_ones() < 2 {
                continue;
            }
            let grade = idx + 1;
            let level = y
                .iter()
                .enumerate()
                .filter(|(_, &g)| g >= grade)
                .fold(0u64, |m, (v, _)| m | 1 << v);
            let first = terms & terms.wrapping_neg();
            if self.flood(first, level) & terms != terms {
                return false;
            }
        }
        true
    }
}

/// Enumeration space size after fixing terminal floors, saturating.
pub fn search_space(instance: &Instance) -> u64 {
    (0..instance.num_vertices())
        .map(|v| (instance.grades() - instance.required(v) + 1) as u64)
        .fold(1u64, u64::saturating_mul)
}

pub(crate) fn check_limits(instance: &Instance, limits: Limits) -> Result<(), OracleError> {
    if instance.num_vertices() > limits.max_vertices.min(64) {
        return Err(OracleError::TooManyVertices {
            vertices: instance.num_vertices(),
            cap: limits.max_vertices,
        });
    }
    let space = search_space(instance);
    if space > limits.max_space {
        return Err(OracleError::SpaceTooLarge {
            space,
            cap: limits.max_space,
        });
    }
    Ok(())
}

/// Minimum-cost feasible assignment by exhaustive enumeration; among
/// optima the lexicographically smallest.
pub fn brute_force_optimum(
    instance: &Instance,
    limits: Limits,
) -> Result<SolutionReport, OracleError> {
    brute_force_optimum_with(instance, limits, Parallelism::default())
}

pub fn brute_force_optimum_with(
    instance: &Instance,
    limits: Limits,
    mode: Parallelism,
) -> Result<SolutionReport, OracleError> {
    check_limits(instance, limits)?;
    let n = instance.num_vertices();
    let top = instance.grades();
    let floors: Vec<Grade> = (0..n).map(|v| instance.required(v)).collect();
    let masks = MaskGraph::new(instance);

    // Split on the leading vertices so every chunk is a contiguous,
    // lexicographically ordered range.
    let mut split = 0;
    let mut prefixes: Vec<Vec<Grade>> = vec![Vec::new()];
    while split < n && prefixes.len() < 256 {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (floors[split]..=top).map(move |g| {
                    let mut q = p.clone();
                    q.push(g);
                    q
                })
            })
            .collect();
        split += 1;
    }

    // costs[v * (top + 1) + g] in micro-units, with grade 0 free
    let costs: Vec<u64> = (0..n)
        .flat_map(|v| (0..=top).map(move |g| instance.cost(v, g).micros()))
        .collect();

    let best = map_slice(mode, &prefixes, |prefix| {
        let mut y: Vec<Grade> = prefix.clone();
        y.extend_from_slice(&floors[split..]);
        let mut best: Option<(u64, Vec<Grade>)> = None;
        loop {
            let cost: u64 = y
                .iter()
                .enumerate()
                .map(|(v, &g)| costs[v * (top + 1) + g])
                .sum();
            // Enumeration is lexicographic, so only a strictly cheaper
            // assignment can replace the current one.
            if best.as_ref().is_none_or(|(c, _)| cost < *c) && masks.feasible(&y) {
                best = Some((cost, y.clone()));
            }
            // Odometer over the suffix, last vertex fastest.
            let mut v = n;
            loop {
                if v == split {
                    return best;
                }
                v -= 1;
                if y[v] < top {
                    y[v] += 1;
                    break;
                }
                y[v] = floors[v];
            }
        }
    })
    .into_iter()
    .flatten()
    .min();

    let (_, y) = best.ok_or(OracleError::NoFeasibleAssignment)?;
    let assignment = GradeAssignment::new(y);
    let tree_edges = extract_tree(instance, &assignment).map_err(OracleError::Verification)?;
    let total_cost = crate::feasibility::solution_cost(instance, &assignment);
    let root = default_root(instance, &assignment);
    Ok(SolutionReport {
        assignment,
        tree_edges,
        total_cost,
        iterations: Vec::new(),
        root,
        per_grade_costs: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::feasibility::is_feasible;
    use crate::generate::{fig2, fig3, fig3_solution, random_corpus};
    use proptest::prelude::*;

    #[test]
    fn fig3_optimum_is_30() {
        let report = brute_force_optimum(&fig3(), Limits::default()).unwrap();
        assert_eq!(report.total_cost, Cost::from_units(30));
        assert_eq!(report.assignment, fig3_solution());
    }

    #[test]
    fn fig2_optimum_uses_the_hub() {
        let inst = fig2(3, Cost::from_micros(100_000)).unwrap();
        let report = brute_force_optimum(&inst, Limits::default()).unwrap();
        assert_eq!(report.total_cost, Cost::from_micros(1_100_000));
        assert_eq!(report.assignment[7], 3);
    }

    #[test]
    fn connected_terminals_cost_nothing() {
        let inst = Instance::new(
            3,
            1,
            vec![(0, 1), (1, 2)],
            [(0, 1), (1, 1)],
            vec![
                vec![Cost::ZERO],
                vec![Cost::ZERO],
                vec![Cost::from_units(4)],
            ],
        )
        .unwrap();
        assert_eq!(
            brute_force_optimum(&inst, Limits::default())
                .unwrap()
                .total_cost,
            Cost::ZERO
        );
    }

    #[test]
    fn caps_are_enforced() {
        let inst = fig2(5, Cost::from_micros(100_000)).unwrap();
        assert!(matches!(
            brute_force_optimum(&inst, Limits::default()),
            Err(OracleError::TooManyVertices {
                vertices: 12,
                cap: 10
            })
        ));
        let tight = Limits {
            max_vertices: 12,
            max_space: 1000,
        };
        assert!(matches!(
            brute_force_optimum(&inst, tight),
            Err(OracleError::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn modes_agree() {
        for inst in random_corpus(5, 20, 8, 3) {
            let seq = brute_force_optimum_with(&inst, Limits::default(), Parallelism::Sequential)
                .unwrap();
            let par =
                brute_force_optimum_with(&inst, Limits::default(), Parallelism::Parallel).unwrap();
            assert_eq!(seq, par);
        }
    }

    proptest! {
        #[test]
        fn mask_check_matches_reference(seed in any::<u64>(), raw in proptest::collection::vec(0usize..4, 9)) {
            let inst = random_corpus(seed, 1, 9, 3).remove(0);
            let y: Vec<Grade> = (0..inst.num_vertices())
                .map(|v| raw[v].min(inst.grades()).max(inst.required(v)))
                .collect();
            let masks = MaskGraph::new(&inst);
            prop_assert_eq!(masks.feasible(&y), is_feasible(&inst, &GradeAssignment::new(y.clone())));
        }
    }
}
