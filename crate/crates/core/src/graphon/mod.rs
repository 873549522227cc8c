//! Exact algebra of step graphons.

mod density;
mod distance;
mod pattern;
mod step;

pub use density::{
    averaged_perturbation, block_hom_density, decompose_on_support, delta_operator, hom_density,
    AveragedPerturbation, DeltaDecomposition, DECOMPOSITION_TOL,
};
pub use distance::{cut_distance, l1_distance, CUT_DISTANCE_MAX_BLOCKS};
pub use pattern::SubgraphPattern;
pub use step::{BlockFunction, StepGraphon, MEASURE_SUM_TOL};

use crate::error::{invalid, Result};

/// Turán graphon with `classes` equal parts: 0 on diagonal blocks, 1 elsewhere.
pub fn turan_graphon(classes: u32) -> Result<StepGraphon> {
    if classes == 0 {
        return invalid("Turán graphon needs at least one class");
    }
    let m = classes as usize;
    let values = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    StepGraphon::uniform(values)
}

/// Erdős–Rényi graphon with edge probability `p`.
pub fn constant_graphon(p: f64) -> Result<StepGraphon> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0,1]"));
    }
    StepGraphon::new(vec![1.0], vec![vec![p]])
}

/// Cone graphon `a·T_k + b·D_k` around the Turán graphon with `k + 1` classes.
pub fn cone_graphon(k: u32, a: f64, b: f64) -> Result<StepGraphon> {
    if k == 0 {
        return invalid("cone index k must be at least 1");
    }
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return invalid(format!("cone weights ({a},{b}) outside [0,1]"));
    }
    let m = k as usize + 1;
    let values = (0..m)
        .map(|i| (0..m).map(|j| if i == j { b } else { a }).collect())
        .collect();
    StepGraphon::uniform(values)
}

/// Embeds a labeled graph as the step graphon with `n` cells of measure `1/n`.
pub fn graph_to_graphon(adjacency: &[Vec<bool>]) -> Result<StepGraphon> {
    let n = adjacency.len();
    if n == 0 {
        return invalid("graph needs at least one vertex");
    }
    for (i, row) in adjacency.iter().enumerate() {
        if row.len() != n {
            return invalid(format!(
                "adjacency row {i} has length {}, expected {n}",
                row.len()
            ));
        }
        if row[i] {
            return invalid(format!("self-loop at vertex {i}"));
        }
        for j in 0..n {
            if row[j] != adjacency[j][i] {
                return invalid(format!("adjacency not symmetric at ({i},{j})"));
            }
        }
    }
    let values = adjacency
        .iter()
        .map(|row| row.iter().map(|&e| if e { 1.0 } else { 0.0 }).collect())
        .collect();
    StepGraphon::uniform(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turan_shapes() {
        assert!(turan_graphon(0).is_err());
        let t1 = turan_graphon(1).unwrap();
        assert_eq!(t1.values(), &[vec![0.0]]);
        let t2 = turan_graphon(2).unwrap();
        assert_eq!(t2.measures(), &[0.5, 0.5]);
        assert!(t2.is_random_free());
    }

    #[test]
    fn constant_bounds() {
        assert!(constant_graphon(-0.01).is_err());
        assert!(constant_graphon(1.01).is_err());
        assert!(constant_graphon(f64::NAN).is_err());
        assert_eq!(constant_graphon(1.0).unwrap().value(0, 0), 1.0);
    }

    #[test]
    fn graph_embedding_checks() {
        let edge = vec![vec![false, true], vec![true, false]];
        let g = graph_to_graphon(&edge).unwrap();
        assert_eq!(g.values(), &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((hom_density(&SubgraphPattern::edge(), &g) - 0.5).abs() < 1e-15);

        let empty = vec![vec![false; 4]; 4];
        assert!(graph_to_graphon(&empty)
            .unwrap()
            .values()
            .iter()
            .flatten()
            .all(|&v| v == 0.0));

        let asym = vec![vec![false, true], vec![false, false]];
        assert!(graph_to_graphon(&asym).is_err());
        let looped = vec![vec![true, false], vec![false, false]];
        assert!(graph_to_graphon(&looped).is_err());
    }
}
