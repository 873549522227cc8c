//! Homomorphism densities, the edge-removal operator `Δ_H` and the
//! two-level averaging used to flatten a graphon around a random-free one.

use serde::Serialize;

use super::pattern::SubgraphPattern;
use super::step::{pull_back, refine, BlockFunction, StepGraphon};
use crate::error::{invalid, Error, Result};

/// Sup-norm tolerance for accepting a support decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// Sum over all maps `V(H) → blocks` of the product of edge values and
/// vertex-cell measures, with some vertices pinned and optionally one edge
/// left out of the product.
fn partial_density(
    pattern: &SubgraphPattern,
    f: &BlockFunction,
    pinned: &[(usize, usize)],
    skip_edge: Option<(usize, usize)>,
) -> f64 {
    let n = pattern.vertex_count();
    let m = f.blocks();
    let mut fixed = vec![None; n];
    for &(v, block) in pinned {
        fixed[v] = Some(block);
    }
    // For each vertex, the neighbours that precede it in assignment order.
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in pattern.edges() {
        if Some((u, v)) == skip_edge {
            continue;
        }
        back[u.max(v)].push(u.min(v));
    }

    fn walk(
        v: usize,
        assignment: &mut [usize],
        acc: f64,
        fixed: &[Option<usize>],
        back: &[Vec<usize>],
        f: &BlockFunction,
        m: usize,
    ) -> f64 {
        if v == assignment.len() {
            return acc;
        }
        let choices = match fixed[v] {
            Some(b) => b..b + 1,
            None => 0..m,
        };
        let mut total = 0.0;
        for block in choices {
            let mut w = if fixed[v].is_some() {
                1.0
            } else {
                f.measures()[block]
            };
            for &u in &back[v] {
                w *= f.value(assignment[u], block);
                if w == 0.0 {
                    break;
                }
            }
            if w == 0.0 {
                continue;
            }
            assignment[v] = block;
            total += walk(v + 1, assignment, acc * w, fixed, back, f, m);
        }
        total
    }

    let mut assignment = vec![0usize; n];
    walk(0, &mut assignment, 1.0, &fixed, &back, f, m)
}

/// `t(H, f)`: the homomorphism density counting all vertex maps.
pub fn hom_density(pattern: &SubgraphPattern, f: &StepGraphon) -> f64 {
    partial_density(pattern, f.as_block_function(), &[], None)
}

/// Homomorphism density on a relaxed block function (values may exceed 1).
pub fn block_hom_density(pattern: &SubgraphPattern, f: &BlockFunction) -> f64 {
    partial_density(pattern, f, &[], None)
}

/// `Δ_H f`: for every edge of `H`, the density of `H` with that edge removed
/// and its endpoints pinned, summed over edges.
///
/// Edges of a pattern are unordered, so each edge contributes the average of
/// its two orientations; this keeps the result symmetric for asymmetric
/// patterns and changes nothing for vertex-transitive ones.
pub fn delta_operator(pattern: &SubgraphPattern, f: &StepGraphon) -> Result<BlockFunction> {
    if pattern.edge_count() == 0 {
        return invalid("delta operator needs a pattern with at least one edge");
    }
    let bf = f.as_block_function();
    let m = f.blocks();
    let mut values = vec![vec![0.0; m]; m];
    for p in 0..m {
        for q in p..m {
            let mut total = 0.0;
            for &(r, s) in pattern.edges() {
                let forward = partial_density(pattern, bf, &[(r, p), (s, q)], Some((r, s)));
                let backward = partial_density(pattern, bf, &[(r, q), (s, p)], Some((r, s)));
                total += 0.5 * (forward + backward);
            }
            values[p][q] = total;
            values[q][p] = total;
        }
    }
    BlockFunction::new(f.measures().to_vec(), values)
}

/// Least-squares fit `Δ ≈ a·χ_A + b·χ_B` with `A = {f = 1}`, `B = {f = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaDecomposition {
    pub coefficient_on_support: f64,
    pub coefficient_off_support: f64,
    pub residual_sup_norm: f64,
}

impl DeltaDecomposition {
    pub fn is_valid(&self) -> bool {
        self.residual_sup_norm <= DECOMPOSITION_TOL
    }
}

/// Splits a block function along the support of a random-free graphon.
///
/// Each coefficient is the area-weighted mean of `delta` over its set, which
/// is the least-squares fit; the coefficient of an empty set is reported as 0.
pub fn decompose_on_support(delta: &BlockFunction, f: &StepGraphon) -> Result<DeltaDecomposition> {
    if !f.is_random_free() {
        return Err(Error::PreconditionViolation(
            "support decomposition needs a random-free graphon".into(),
        ));
    }
    let r = refine(delta.measures(), f.measures());
    let dv = pull_back(delta.values(), &r.left);
    let fv = pull_back(f.values(), &r.right);
    let m = r.measures.len();

    let (mut sum_a, mut area_a, mut sum_b, mut area_b) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            let w = r.measures[i] * r.measures[j];
            if fv[i][j] == 1.0 {
                sum_a += w * dv[i][j];
                area_a += w;
            } else {
                sum_b += w * dv[i][j];
                area_b += w;
            }
        }
    }
    let a = if area_a > 0.0 { sum_a / area_a } else { 0.0 };
    let b = if area_b > 0.0 { sum_b / area_b } else { 0.0 };
    let mut residual = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            let fit = if fv[i][j] == 1.0 { a } else { b };
            residual = residual.max((dv[i][j] - fit).abs());
        }
    }
    Ok(DeltaDecomposition {
        coefficient_on_support: a,
        coefficient_off_support: b,
        residual_sup_norm: residual,
    })
}

/// Flattening of `h` around a random-free `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedPerturbation {
    /// Mean of `h` over `A = {f = 1}`.
    pub a: f64,
    /// Mean of `h` over `B = {f = 0}`.
    pub b: f64,
    pub measure_a: f64,
    pub measure_b: f64,
    /// `a·χ_A + b·χ_B`, on the common refinement of the two partitions.
    pub flattened: StepGraphon,
}

pub fn averaged_perturbation(h: &StepGraphon, f: &StepGraphon) -> Result<AveragedPerturbation> {
    if !f.is_random_free() {
        return Err(Error::PreconditionViolation(
            "averaged perturbation needs a random-free reference graphon".into(),
        ));
    }
    let r = refine(h.measures(), f.measures());
    let hv = pull_back(h.values(), &r.left);
    let fv = pull_back(f.values(), &r.right);
    let m = r.measures.len();

    let (mut sum_a, mut area_a, mut sum_b, mut area_b) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            let w = r.measures[i] * r.measures[j];
            if fv[i][j] == 1.0 {
                sum_a += w * hv[i][j];
                area_a += w;
            } else {
                sum_b += w * hv[i][j];
                area_b += w;
            }
        }
    }
    if area_a == 0.0 || area_b == 0.0 {
        return Err(Error::DegenerateSupport(format!(
            "support measures |A| = {area_a}, |B| = {area_b}"
        )));
    }
    let a = (sum_a / area_a).clamp(0.0, 1.0);
    let b = (sum_b / area_b).clamp(0.0, 1.0);
    let values = fv
        .iter()
        .map(|row| row.iter().map(|&x| if x == 1.0 { a } else { b }).collect())
        .collect();
    Ok(AveragedPerturbation {
        a,
        b,
        measure_a: area_a,
        measure_b: area_b,
        flattened: StepGraphon::new(r.measures, values)?,
    })
}
