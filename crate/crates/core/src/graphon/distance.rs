use super::step::{pull_back, refine, StepGraphon};
use crate::error::{Error, Result};

/// Largest refinement handled by the exhaustive cut-distance search.
pub const CUT_DISTANCE_MAX_BLOCKS: usize = 20;

/// `∫|f − h|`, exact on the common refinement.
pub fn l1_distance(f: &StepGraphon, h: &StepGraphon) -> f64 {
    let r = refine(f.measures(), h.measures());
    let fv = pull_back(f.values(), &r.left);
    let hv = pull_back(h.values(), &r.right);
    let m = r.measures.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            total += (fv[i][j] - hv[i][j]).abs() * r.measures[i] * r.measures[j];
        }
    }
    total
}

/// Labeled cut distance `d_□(f, h)`.
///
/// For step functions the supremum is attained on unions of refinement cells.
/// Row sets `S` are enumerated in Gray-code order while the column sums
/// `c_j = Σ_{i∈S} w_i w_j (f−h)_{ij}` are updated incrementally; the best `T`
/// for a fixed `S` collects either all positive or all negative `c_j`.
pub fn cut_distance(f: &StepGraphon, h: &StepGraphon) -> Result<f64> {
    let r = refine(f.measures(), h.measures());
    let m = r.measures.len();
    if m > CUT_DISTANCE_MAX_BLOCKS {
        return Err(Error::Capacity {
            what: "refinement blocks",
            got: m,
            limit: CUT_DISTANCE_MAX_BLOCKS,
        });
    }
    let fv = pull_back(f.values(), &r.left);
    let hv = pull_back(h.values(), &r.right);
    let w = &r.measures;
    let diff: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (fv[i][j] - hv[i][j]) * w[i] * w[j])
                .collect()
        })
        .collect();

    let mut col = vec![0.0; m];
    let mut in_set = vec![false; m];
    let mut best = 0.0_f64;
    for step in 1u64..(1u64 << m) {
        let flip = step.trailing_zeros() as usize;
        let sign = if in_set[flip] { -1.0 } else { 1.0 };
        in_set[flip] = !in_set[flip];
        for (c, d) in col.iter_mut().zip(&diff[flip]) {
            *c += sign * d;
        }
        let (pos, neg) = col.iter().fold(
            (0.0, 0.0),
            |(p, n), &c| {
                if c > 0.0 {
                    (p + c, n)
                } else {
                    (p, n - c)
                }
            },
        );
        best = best.max(pos).max(neg);
    }
    Ok(best)
}
