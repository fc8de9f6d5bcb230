#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vgsst_core::{Cost, Grade, GradeAssignment, Instance, Vertex};

/// A random grade-respecting tree with a marked set containing the root.
pub struct GrtCase {
    pub instance: Instance,
    pub edges: Vec<(Vertex, Vertex)>,
    pub y: GradeAssignment,
    pub root: Vertex,
    pub marked: BTreeSet<Vertex>,
}

pub fn random_grt(seed: u64) -> GrtCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=14);
    let grades: Grade = rng.random_range(1..=4);
    let mut labels: Vec<Vertex> = (0..n).collect();
    labels.shuffle(&mut rng);
    let root = labels[0];
    let mut y = vec![0; n];
    y[root] = grades;
    let mut edges = Vec::new();
    for k in 1..n {
        let parent = labels[rng.random_range(0..k)];
        let child = labels[k];
        y[child] = rng.random_range(1..=y[parent]);
        edges.push((parent, child));
    }
    let costs = (0..n)
        .map(|_| {
            let mut total = Cost::ZERO;
            (0..grades)
                .map(|_| {
                    total += Cost::from_micros(rng.random_range(0..=10u64) * 100_000);
                    total
                })
                .collect()
        })
        .collect();
    let instance =
        Instance::new(n, grades, edges.clone(), [(root, grades)], costs).expect("tree instance");
    let mut marked = BTreeSet::from([root]);
    let extra = rng.random_range(1..n);
    let mut others = labels[1..].to_vec();
    others.shuffle(&mut rng);
    marked.extend(others.into_iter().take(extra));
    GrtCase {
        instance,
        edges,
        y: GradeAssignment::new(y),
        root,
        marked,
    }
}

/// `cost <= 2 ln|T| * opt` up to float rounding of the logarithm.
pub fn within_log_bound(cost: Cost, opt: Cost, terminals: usize) -> bool {
    cost.as_f64() <= 2.0 * (terminals as f64).ln() * opt.as_f64() + 1e-9
}
