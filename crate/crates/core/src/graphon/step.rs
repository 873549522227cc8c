use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance on `Σ measures = 1`.
pub const MEASURE_SUM_TOL: f64 = 1e-12;

/// Cell boundaries closer than this are merged when refining partitions.
const BOUNDARY_MERGE_TOL: f64 = 1e-13;

/// A symmetric block-constant function on `[0,1]²` whose values are not
/// restricted to `[0,1]`.
///
/// Cells are laid out left to right in the order of `measures`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFunction {
    measures: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl BlockFunction {
    pub fn new(measures: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        validate_partition(&measures)?;
        let m = measures.len();
        if values.len() != m || values.iter().any(|row| row.len() != m) {
            return invalid(format!("value matrix must be {m}x{m}"));
        }
        for i in 0..m {
            for j in 0..m {
                let v = values[i][j];
                if !v.is_finite() {
                    return invalid(format!("value ({i},{j}) is not finite"));
                }
                if v != values[j][i] {
                    return invalid(format!("value matrix not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(Self { measures, values })
    }

    pub fn blocks(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.blocks();
        (0..m).all(|i| (0..m).all(|j| self.values[i][j] == self.values[j][i]))
    }

    /// `∫ self`.
    pub fn integral(&self) -> f64 {
        let m = self.blocks();
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                total += self.values[i][j] * self.measures[i] * self.measures[j];
            }
        }
        total
    }

    /// Largest absolute block value.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// A step graphon: symmetric, block-constant, values in `[0,1]`.
///
/// Serializes as `{"measures":[...],"values":[[...],...]}`; deserialization
/// re-runs every invariant check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStepGraphon", into = "RawStepGraphon")]
pub struct StepGraphon {
    inner: BlockFunction,
}

#[derive(Serialize, Deserialize)]
struct RawStepGraphon {
    measures: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawStepGraphon> for StepGraphon {
    type Error = Error;

    fn try_from(raw: RawStepGraphon) -> Result<Self> {
        StepGraphon::new(raw.measures, raw.values)
    }
}

impl From<StepGraphon> for RawStepGraphon {
    fn from(g: StepGraphon) -> Self {
        RawStepGraphon {
            measures: g.inner.measures,
            values: g.inner.values,
        }
    }
}

impl StepGraphon {
    pub fn new(measures: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let inner = BlockFunction::new(measures, values)?;
        for (i, row) in inner.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return invalid(format!("graphon value {v} at ({i},{j}) outside [0,1]"));
                }
            }
        }
        Ok(Self { inner })
    }

    /// Equal-measure blocks.
    pub fn uniform(values: Vec<Vec<f64>>) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return invalid("a step graphon needs at least one block");
        }
        Self::new(vec![1.0 / m as f64; m], values)
    }

    pub fn blocks(&self) -> usize {
        self.inner.blocks()
    }

    pub fn measures(&self) -> &[f64] {
        self.inner.measures()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        self.inner.values()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.inner.value(i, j)
    }

    pub fn as_block_function(&self) -> &BlockFunction {
        &self.inner
    }

    /// True when every block value is exactly 0 or 1.
    pub fn is_random_free(&self) -> bool {
        self.values()
            .iter()
            .flatten()
            .all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step graphon serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl std::ops::Deref for StepGraphon {
    type Target = BlockFunction;

    fn deref(&self) -> &BlockFunction {
        &self.inner
    }
}

fn validate_partition(measures: &[f64]) -> Result<()> {
    if measures.is_empty() {
        return invalid("a partition needs at least one cell");
    }
    if let Some(m) = measures.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return invalid(format!("cell measure {m} is not strictly positive"));
    }
    let sum: f64 = measures.iter().sum();
    if (sum - 1.0).abs() > MEASURE_SUM_TOL {
        return invalid(format!("cell measures sum to {sum}, expected 1"));
    }
    Ok(())
}

/// Common refinement of two interval partitions of `[0,1]`.
///
/// Each refined cell records its measure and the index of the cell it lies in
/// for each of the two input partitions.
#[derive(Debug, Clone)]
pub(crate) struct Refinement {
    pub measures: Vec<f64>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

pub(crate) fn refine(left: &[f64], right: &[f64]) -> Refinement {
    let cuts = |ms: &[f64]| -> Vec<f64> {
        let mut acc = 0.0;
        ms.iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect()
    };
    let lc = cuts(left);
    let rc = cuts(right);

    let mut out = Refinement {
        measures: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    let (mut i, mut j) = (0usize, 0usize);
    let mut start = 0.0;
    while i < left.len() && j < right.len() {
        let (li, rj) = (lc[i], rc[j]);
        // The final cuts of both partitions are treated as the same point 1.
        let last_i = i + 1 == left.len();
        let last_j = j + 1 == right.len();
        let end;
        let (adv_i, adv_j) = if (li - rj).abs() <= BOUNDARY_MERGE_TOL || (last_i && last_j) {
            end = if last_i && last_j { 1.0 } else { li };
            (true, true)
        } else if li < rj {
            end = li;
            (true, false)
        } else {
            end = rj;
            (false, true)
        };
        let width = end - start;
        if width > 0.0 {
            out.measures.push(width);
            out.left.push(i);
            out.right.push(j);
        }
        start = end;
        if adv_i {
            i += 1;
        }
        if adv_j {
            j += 1;
        }
    }
    // Renormalize away the rounding drift of cumulative sums.
    let total: f64 = out.measures.iter().sum();
    for m in &mut out.measures {
        *m /= total;
    }
    out
}

/// Re-expresses `values` (indexed by the original partition) on refined cells.
pub(crate) fn pull_back(values: &[Vec<f64>], index: &[usize]) -> Vec<Vec<f64>> {
    index
        .iter()
        .map(|&p| index.iter().map(|&q| values[p][q]).collect())
        .collect()
}
