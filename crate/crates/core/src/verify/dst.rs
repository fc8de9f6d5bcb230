use thiserror::Error;

use crate::cost::Cost;
use crate::graph::reachable_from;
use crate::instance::{Grade, Instance, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DstError {
    #[error("no terminal requires the top grade")]
    NoTopTerminal,
    #[error("{size} layered vertices exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("some terminal is unreachable from the root")]
    Unreachable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cost: Cost,
}

/// Directed Steiner tree instance on `levels` layered copies of a graph.
/// Copy `i` of vertex `v` has index `v * levels + (i - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstInstance {
    pub levels: Grade,
    pub num_vertices: usize,
    pub arcs: Vec<Arc>,
    pub root: usize,
    pub terminals: Vec<usize>,
}

impl DstInstance {
    pub fn index(&self, v: Vertex, grade: Grade) -> usize {
        v * self.levels + (grade - 1)
    }
}

/// Entering `v` in copy `i` costs `c_i(v)`; stepping down from copy `i + 1`
/// to copy `i` of the same vertex is free. The root is the top copy of the
/// smallest terminal requiring the top grade, and terminal `t` is wanted
/// in copy `R(t)`.
pub fn reduce_to_dst(instance: &Instance) -> Result<DstInstance, DstError> {
    let levels = instance.grades();
    let index = |v: Vertex, i: Grade| v * levels + (i - 1);
    let mut arcs = Vec::with_capacity(
        2 * instance.edges().len() * levels + instance.num_vertices() * (levels - 1),
    );
    for &(u, v) in instance.edges() {
        for i in 1..=levels {
            arcs.push(Arc {
                from: index(u, i),
                to: index(v, i),
                cost: instance.cost(v, i),
            });
            arcs.push(Arc {
                from: index(v, i),
                to: index(u, i),
                cost: instance.cost(u, i),
            });
        }
    }
    for v in 0..instance.num_vertices() {
        for i in 1..levels {
            arcs.push(Arc {
                from: index(v, i + 1),
                to: index(v, i),
                cost: Cost::ZERO,
            });
        }
    }
    let root = instance
        .terminals()
        .find(|&(_, r)| r == levels)
        .ok_or(DstError::NoTopTerminal)?
        .0;
    let terminals = instance.terminals().map(|(t, r)| index(t, r)).collect();
    Ok(DstInstance {
        levels,
        num_vertices: instance.num_vertices() * levels,
        arcs,
        root: index(root, levels),
        terminals,
    })
}

pub const DEFAULT_DST_CAP: usize = 14;

/// Cheapest arborescence from the root reaching every terminal.
///
/// Every optional vertex set is tried; for each one reachable from the
/// root, a minimum spanning arborescence of the induced subgraph is found
/// by Chu-Liu/Edmonds.
pub fn brute_force_dst(dst: &DstInstance, cap: usize) -> Result<Cost, DstError> {
    let n = dst.num_vertices;
    if n > cap.min(63) {
        return Err(DstError::TooLarge { size: n, cap });
    }
    let mut required = 1u64 << dst.root;
    for &t in &dst.terminals {
        required |= 1 << t;
    }
    let optional: Vec<usize> = (0..n).filter(|&v| required >> v & 1 == 0).collect();
    let mut adjacency = vec![Vec::new(); n];
    for arc in &dst.arcs {
        adjacency[arc.from].push(arc.to);
    }
    let mut best: Option<u64> = None;
    for pick in 0u64..1 << optional.len() {
        let mut set = required;
        for (k, &v) in optional.iter().enumerate() {
            if pick >> k & 1 == 1 {
                set |= 1 << v;
            }
        }
        let reached = reachable_from(&adjacency, dst.root, |v| set >> v & 1 == 1);
        if (0..n).any(|v| set >> v & 1 == 1 && !reached[v]) {
            continue;
        }
        let local: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
        let position = |v: usize| local.binary_search(&v).ok();
        let arcs: Vec<(usize, usize, u64)> = dst
            .arcs
            .iter()
            .filter_map(|a| Some((position(a.from)?, position(a.to)?, a.cost.micros())))
            .collect();
        let root = position(dst.root).expect("root is required");
        if let Some(cost) = min_arborescence(local.len(), root, &arcs) {
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
    }
    best.map(Cost::from_micros).ok_or(DstError::Unreachable)
}

/// Chu-Liu/Edmonds: weight of a minimum spanning arborescence rooted at
/// `root`, or `None` if some vertex is unreachable.
fn min_arborescence(n: usize, root: usize, arcs: &[(usize, usize, u64)]) -> Option<u64> {
    let mut arcs: Vec<(usize, usize, u64)> =
        arcs.iter().copied().filter(|&(u, v, _)| u != v).collect();
    let (mut n, mut root) = (n, root);
    let mut total = 0u64;
    loop {
        let mut incoming = vec![u64::MAX; n];
        let mut pre = vec![0; n];
        for &(u, v, w) in &arcs {
            if w < incoming[v] {
                incoming[v] = w;
                pre[v] = u;
            }
        }
        if (0..n).any(|v| v != root && incoming[v] == u64::MAX) {
            return None;
        }
        incoming[root] = 0;
        let mut id = vec![usize::MAX; n];
        let mut mark = vec![usize::MAX; n];
        let mut cycles = 0;
        total += incoming.iter().sum::<u64>();
        for v in 0..n {
            let mut x = v;
            while mark[x] != v && id[x] == usize::MAX && x != root {
                mark[x] = v;
                x = pre[x];
            }
            if x != root && id[x] == usize::MAX {
                let mut z = pre[x];
                while z != x {
                    id[z] = cycles;
                    z = pre[z];
                }
                id[x] = cycles;
                cycles += 1;
            }
        }
        if cycles == 0 {
            return Some(total);
        }
        for slot in id.iter_mut() {
            if *slot == usize::MAX {
                *slot = cycles;
                cycles += 1;
            }
        }
        arcs = arcs
            .iter()
            .filter(|&&(u, v, _)| id[u] != id[v])
            .map(|&(u, v, w)| (id[u], id[v], w - incoming[v]))
            .collect();
        n = cycles;
        root = id[root];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{fig2, fig3};

    #[test]
    fn fig3_sizes() {
        let dst = reduce_to_dst(&fig3()).unwrap();
        assert_eq!(dst.num_vertices, 16);
        assert_eq!(dst.arcs.len(), 40);
        assert_eq!(dst.terminals.len(), 4);
        assert_eq!(dst.root, 1);
    }

    #[test]
    fn fig3_optimum_is_30() {
        let dst = reduce_to_dst(&fig3()).unwrap();
        assert_eq!(brute_force_dst(&dst, 16), Ok(Cost::from_units(30)));
    }

    #[test]
    fn fig2_optimum_is_hub() {
        let dst = reduce_to_dst(&fig2(2, Cost::from_micros(100_000)).unwrap()).unwrap();
        assert_eq!(
            brute_force_dst(&dst, DEFAULT_DST_CAP),
            Ok(Cost::from_micros(1_100_000))
        );
    }

    #[test]
    fn one_grade_arcs_are_weighted_by_head() {
        let inst = Instance::single_grade(
            2,
            vec![(0, 1)],
            &[0],
            &[Cost::from_units(3), Cost::from_units(4)],
        )
        .unwrap();
        let dst = reduce_to_dst(&inst).unwrap();
        assert_eq!(
            dst.arcs,
            vec![
                Arc {
                    from: 0,
                    to: 1,
                    cost: Cost::from_units(4)
                },
                Arc {
                    from: 1,
                    to: 0,
                    cost: Cost::from_units(3)
                },
            ]
        );
    }

    #[test]
    fn single_vertex() {
        let inst = Instance::new(1, 1, vec![], [(0, 1)], vec![vec![Cost::ZERO]]).unwrap();
        let dst = reduce_to_dst(&inst).unwrap();
        assert_eq!((dst.num_vertices, dst.arcs.len()), (1, 0));
        assert_eq!(brute_force_dst(&dst, DEFAULT_DST_CAP), Ok(Cost::ZERO));
    }

    #[test]
    fn arborescence_handles_cycles() {
        // 0 -> 1 costly, 0 -> 2 cheap, 1 <-> 2 cheap cycle
        let arcs = [(0, 1, 10), (0, 2, 5), (1, 2, 1), (2, 1, 1)];
        assert_eq!(min_arborescence(3, 0, &arcs), Some(6));
        assert_eq!(min_arborescence(3, 0, &[(0, 1, 1)]), None);
    }
}
