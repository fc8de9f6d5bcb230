use std::collections::BTreeSet;

use crate::cost::{Cost, Ratio};
use crate::instance::{Grade, GradeAssignment, Instance, Vertex};
use crate::solution::IterationRecord;

use super::GreedyError;

/// One tree of the forest, identified by its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrtTree {
    pub root: Vertex,
    /// Requirement of the root.
    pub required: Grade,
    pub members: BTreeSet<Vertex>,
}

/// A merge chosen by the selection step, with the paths it will buy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeCandidate {
    pub gamma: Ratio,
    pub grade: Grade,
    pub center: Vertex,
    /// Root of the tree the others attach to.
    pub root: Vertex,
    /// Roots of the attached trees.
    pub subset: Vec<Vertex>,
    /// Path from `root` to `center`, both included.
    pub root_path: Vec<Vertex>,
    /// For each member of `subset`, the path from `center` to its root.
    pub leg_paths: Vec<Vec<Vertex>>,
    pub(crate) forest_version: u64,
}

/// The greedy solver's state: current trees, assignment and the
/// incremental weights `w_j(v) = max(0, c_j(v) - c_{y(v)}(v))`.
#[derive(Debug, Clone)]
pub struct GrtForest<'a> {
    instance: &'a Instance,
    trees: Vec<GrtTree>,
    y: GradeAssignment,
    /// `weights[v][j - 1]`.
    weights: Vec<Vec<Cost>>,
    version: u64,
}

impl<'a> GrtForest<'a> {
    /// One singleton tree per terminal, each at its requirement.
    pub fn new(instance: &'a Instance) -> Self {
        let trees = instance
            .terminals()
            .map(|(v, r)| GrtTree {
                root: v,
                required: r,
                members: BTreeSet::from([v]),
            })
            .collect();
        let y = GradeAssignment::required_only(instance);
        let weights = (0..instance.num_vertices())
            .map(|v| {
                let paid = instance.cost(v, y[v]);
                instance
                    .ladder(v)
                    .iter()
                    .map(|&c| c.saturating_sub(paid))
                    .collect()
            })
            .collect();
        GrtForest {
            instance,
            trees,
            y,
            weights,
            version: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Trees in ascending root order.
    pub fn trees(&self) -> &[GrtTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn is_done(&self) -> bool {
        self.trees.len() <= 1
    }

    pub fn assignment(&self) -> &GradeAssignment {
        &self.y
    }

    pub fn into_assignment(self) -> GradeAssignment {
        self.y
    }

    /// `w_grade(v)`; zero for grade 0.
    pub fn weight(&self, v: Vertex, grade: Grade) -> Cost {
        if grade == 0 {
            Cost::ZERO
        } else {
            self.weights[v][grade - 1]
        }
    }

    /// Incremented on every merge; candidates from older versions are stale.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub(crate) fn tree_index(&self, root: Vertex) -> Option<usize> {
        self.trees.binary_search_by_key(&root, |t| t.root).ok()
    }

    /// Raises the assignment along the candidate's paths, merges the trees
    /// and updates weights of every vertex in the merged tree.
    pub fn apply_merge(
        &mut self,
        candidate: &MergeCandidate,
    ) -> Result<IterationRecord, GreedyError> {
        if candidate.forest_version != self.version {
            return Err(GreedyError::StaleCandidate {
                expected: self.version,
                found: candidate.forest_version,
            });
        }
        let root_idx = self
            .tree_index(candidate.root)
            .ok_or(GreedyError::UnknownTree(candidate.root))?;
        let mut merged_idx = Vec::with_capacity(candidate.subset.len());
        for &r in &candidate.subset {
            let idx = self.tree_index(r).ok_or(GreedyError::UnknownTree(r))?;
            if idx == root_idx || merged_idx.contains(&idx) {
                return Err(GreedyError::UnknownTree(r));
            }
            merged_idx.push(idx);
        }

        let mut raises: Vec<(Vertex, Grade)> = candidate
            .root_path
            .iter()
            .map(|&v| (v, candidate.grade))
            .collect();
        for (leg, &idx) in candidate.leg_paths.iter().zip(&merged_idx) {
            let required = self.trees[idx].required;
            raises.extend(leg.iter().map(|&v| (v, required)));
        }
        let mut incurred = Cost::ZERO;
        for (v, grade) in raises {
            let old = self.y[v];
            if self.y.raise(v, grade) {
                incurred += self
                    .instance
                    .cost(v, grade)
                    .saturating_sub(self.instance.cost(v, old));
            }
        }

        let mut members = std::mem::take(&mut self.trees[root_idx].members);
        for &idx in &merged_idx {
            members.append(&mut self.trees[idx].members);
        }
        members.extend(candidate.root_path.iter().copied());
        members.extend(candidate.leg_paths.iter().flatten().copied());
        for &v in &members {
            let paid = self.weight(v, self.y[v]);
            for (j, w) in self.weights[v].iter_mut().enumerate() {
                *w = if j < self.y[v] {
                    Cost::ZERO
                } else {
                    w.saturating_sub(paid)
                };
            }
        }
        self.trees[root_idx].members = members;
        let removed: BTreeSet<usize> = merged_idx.iter().copied().collect();
        let mut idx = 0;
        self.trees.retain(|_| {
            let keep = !removed.contains(&idx);
            idx += 1;
            keep
        });
        self.version += 1;

        debug_assert!(incurred <= candidate.gamma.numerator());
        Ok(IterationRecord {
            gamma: candidate.gamma,
            merged_count: 1 + candidate.subset.len(),
            incurred_cost: incurred,
            root: candidate.root,
            center: candidate.center,
            grade: candidate.grade,
            subset: candidate.subset.clone(),
        })
    }
}
