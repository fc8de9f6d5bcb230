use std::fmt::Write as _;

use crate::cost::Cost;
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};

use super::brute::MaskGraph;
use super::OracleError;

pub const DEFAULT_ILP_VERTEX_CAP: usize = 15;
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// `sum_{v in vertices} x_v_grade >= 1` for the cut `subset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRow {
    pub grade: Grade,
    /// The side `S` as a bitmask over vertex ids.
    pub subset: u64,
    /// Boundary vertices `Γ(S)`, ascending.
    pub vertices: Vec<Vertex>,
}

/// The cut formulation with one binary per (vertex, grade). `x_v_i = 1`
/// means `v` carries grade at least `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub num_vertices: usize,
    pub grades: Grade,
    /// `objective[v][i - 1] = c_i(v) - c_{i-1}(v)`.
    pub objective: Vec<Vec<Cost>>,
    /// Ordered by grade, then subset bitmask.
    pub cuts: Vec<CutRow>,
    /// `(v, i)` rows `x_v_i - x_v_{i+1} >= 0`.
    pub ladders: Vec<(Vertex, Grade)>,
    /// Variables fixed to 1: terminals up to their requirement.
    pub fixed: Vec<(Vertex, Grade)>,
}

impl IlpModel {
    pub fn constraint_count(&self) -> usize {
        self.cuts.len() + self.ladders.len()
    }

    pub fn variable_count(&self) -> usize {
        self.num_vertices * self.grades
    }
}

pub fn build_ilp(instance: &Instance, max_vertices: usize) -> Result<IlpModel, OracleError> {
    let n = instance.num_vertices();
    if n > max_vertices.min(63) {
        return Err(OracleError::TooManyVertices {
            vertices: n,
            cap: max_vertices,
        });
    }
    let masks = MaskGraph::new(instance);
    let full = (1u64 << n) - 1;
    let mut cuts = Vec::new();
    for grade in 1..=instance.grades() {
        let terms = masks.terminals[grade - 1];
        if terms.count_ones() < 2 {
            continue;
        }
        for subset in 1..full {
            if subset & terms != 0 && subset & terms != terms {
                let boundary = masks.boundary(subset);
                let vertices = (0..n).filter(|&v| boundary >> v & 1 == 1).collect();
                cuts.push(CutRow {
                    grade,
                    subset,
                    vertices,
                });
            }
        }
    }
    let objective = (0..n)
        .map(|v| {
            (1..=instance.grades())
                .map(|i| instance.cost(v, i).saturating_sub(instance.cost(v, i - 1)))
                .collect()
        })
        .collect();
    let ladders = (0..n)
        .flat_map(|v| (1..instance.grades()).map(move |i| (v, i)))
        .collect();
    let fixed = instance
        .terminals()
        .flat_map(|(t, r)| (1..=r).map(move |i| (t, i)))
        .collect();
    Ok(IlpModel {
        num_vertices: n,
        grades: instance.grades(),
        objective,
        cuts,
        ladders,
        fixed,
    })
}

fn var(v: Vertex, i: Grade) -> String {
    format!("x_{v}_{i}")
}

/// CPLEX LP text. Byte-stable for a given model.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::from("\\ vgsst cut model\nMinimize\n obj:");
    let mut any = false;
    for v in 0..model.num_vertices {
        for i in 1..=model.grades {
            let c = model.objective[v][i - 1];
            if !c.is_zero() {
                let sep = if any { " +" } else { "" };
                let _ = write!(out, "{sep} {c} {}", var(v, i));
                any = true;
            }
        }
    }
    if !any {
        if model.num_vertices > 0 {
            let _ = write!(out, " 0 {}", var(0, 1));
        } else {
            out.push_str(" 0");
        }
    }
    out.push_str("\nSubject To\n");
    for row in &model.cuts {
        let lhs: Vec<String> = row.vertices.iter().map(|&v| var(v, row.grade)).collect();
        let _ = writeln!(
            out,
            " cut_{}_{}: {} >= 1",
            row.grade,
            row.subset,
            lhs.join(" + ")
        );
    }
    for &(v, i) in &model.ladders {
        let _ = writeln!(
            out,
            " ladder_{v}_{i}: {} - {} >= 0",
            var(v, i),
            var(v, i + 1)
        );
    }
    out.push_str("Bounds\n");
    for &(v, i) in &model.fixed {
        let _ = writeln!(out, " {} = 1", var(v, i));
    }
    out.push_str("Binaries\n");
    for v in 0..model.num_vertices {
        let names: Vec<String> = (1..=model.grades).map(|i| var(v, i)).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpSolution {
    /// `x[v][i - 1]`.
    pub x: Vec<Vec<bool>>,
    pub assignment: GradeAssignment,
    pub objective: Cost,
}

/// Exact 0/1 optimum of the model by enumerating ladder-consistent points
/// (each vertex picks the highest grade it reaches), lexicographically
/// smallest among optima.
pub fn solve_ilp_by_enumeration(
    model: &IlpModel,
    max_variables: usize,
) -> Result<IlpSolution, OracleError> {
    let n = model.num_vertices;
    let vars = model.variable_count();
    if vars > max_variables {
        return Err(OracleError::TooManyVariables {
            variables: vars,
            cap: max_variables,
        });
    }
    let mut floors = vec![0; n];
    for &(v, i) in &model.fixed {
        floors[v] = floors[v].max(i);
    }
    // Only distinct, inclusion-minimal boundaries matter for feasibility.
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); model.grades];
    for row in &model.cuts {
        let mask = row.vertices.iter().fold(0u64, |m, &v| m | 1 << v);
        rows[row.grade - 1].push(mask);
    }
    for masks in rows.iter_mut() {
        masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
        masks.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        for &m in masks.iter() {
            if !minimal.iter().any(|&k| k & !m == 0) {
                minimal.push(m);
            }
        }
        *masks = minimal;
    }
    let value = |y: &[Grade]| -> Cost {
        y.iter()
            .enumerate()
            .map(|(v, &g)| model.objective[v][..g].iter().copied().sum::<Cost>())
            .sum()
    };
    let satisfies = |y: &[Grade]| -> bool {
        rows.iter().enumerate().all(|(idx, masks)| {
            let level = y
                .iter()
                .enumerate()
                .filter(|(_, &g)| g > idx)
                .fold(0u64, |m, (v, _)| m | 1 << v);
            masks.iter().all(|&m| m & level != 0)
        })
    };

    let mut y = floors.clone();
    let mut best: Option<(Cost, Vec<Grade>)> = None;
    'outer: loop {
        if satisfies(&y) {
            let cost = value(&y);
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, y.clone()));
            }
        }
        let mut v = n;
        loop {
            if v == 0 {
                break 'outer;
            }
            v -= 1;
            if y[v] < model.grades {
                y[v] += 1;
                break;
            }
            y[v] = floors[v];
        }
    }
    let (objective, y) = best.ok_or(OracleError::NoFeasibleAssignment)?;
    let x = y
        .iter()
        .map(|&g| (1..=model.grades).map(|i| g >= i).collect())
        .collect();
    Ok(IlpSolution {
        x,
        assignment: GradeAssignment::new(y),
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::solution_cost;
    use crate::generate::{fig3, fig3_solution};

    fn path3() -> Instance {
        Instance::new(
            3,
            1,
            vec![(0, 1), (1, 2)],
            [(0, 1), (2, 1)],
            vec![
                vec![Cost::ZERO],
                vec![Cost::from_units(5)],
                vec![Cost::ZERO],
            ],
        )
        .unwrap()
    }

    #[test]
    fn path_cuts_and_optimum() {
        let model = build_ilp(&path3(), DEFAULT_ILP_VERTEX_CAP).unwrap();
        let subsets: Vec<u64> = model.cuts.iter().map(|r| r.subset).collect();
        // {a}, {a,b}, {b,c}, {c}
        assert_eq!(subsets, vec![0b001, 0b011, 0b100, 0b110]);
        assert_eq!(model.cuts[0].vertices, vec![1]);
        let lp = export_lp(&model);
        assert!(lp.contains(" cut_1_1: x_1_1 >= 1\n"));
        let sol = solve_ilp_by_enumeration(&model, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(sol.objective, Cost::from_units(5));
        assert_eq!(sol.assignment.as_slice(), &[1, 1, 1]);
    }

    #[test]
    fn single_terminal_has_no_cuts() {
        let inst = Instance::new(
            2,
            1,
            vec![(0, 1)],
            [(0, 1)],
            vec![vec![Cost::ZERO], vec![Cost::from_units(2)]],
        )
        .unwrap();
        let model = build_ilp(&inst, DEFAULT_ILP_VERTEX_CAP).unwrap();
        assert!(model.cuts.is_empty());
        let lp = export_lp(&model);
        assert!(lp.contains("Subject To\nBounds\n x_0_1 = 1\nBinaries\n"));
        assert_eq!(
            solve_ilp_by_enumeration(&model, 24).unwrap().objective,
            Cost::ZERO
        );
    }

    #[test]
    fn fig3_model_optimum_is_30() {
        let inst = fig3();
        let model = build_ilp(&inst, DEFAULT_ILP_VERTEX_CAP).unwrap();
        let sol = solve_ilp_by_enumeration(&model, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(sol.objective, Cost::from_units(30));
        assert_eq!(sol.assignment, fig3_solution());
        assert_eq!(solution_cost(&inst, &sol.assignment), sol.objective);
    }

    #[test]
    fn top_terminal_edge_costs_nothing() {
        let inst = Instance::new(
            2,
            2,
            vec![(0, 1)],
            [(0, 2), (1, 2)],
            vec![vec![Cost::ZERO; 2]; 2],
        )
        .unwrap();
        let model = build_ilp(&inst, DEFAULT_ILP_VERTEX_CAP).unwrap();
        assert_eq!(
            solve_ilp_by_enumeration(&model, 24).unwrap().objective,
            Cost::ZERO
        );
    }

    #[test]
    fn objective_telescopes() {
        let inst = fig3();
        let model = build_ilp(&inst, DEFAULT_ILP_VERTEX_CAP).unwrap();
        for v in 0..8 {
            for g in 0..=2 {
                let sum: Cost = model.objective[v][..g].iter().copied().sum();
                assert_eq!(sum, inst.cost(v, g));
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let inst = fig3();
        assert!(build_ilp(&inst, 4).is_err());
        let model = build_ilp(&inst, DEFAULT_ILP_VERTEX_CAP).unwrap();
        assert!(solve_ilp_by_enumeration(&model, 10).is_err());
    }
}
