//! Exhaustive enumeration of all labeled graphs on a handful of vertices.

use std::collections::BTreeMap;

use super::chain::weight_from_delta;
use super::state::GraphState;
use crate::error::{invalid, Error, Result};

/// Largest vertex count handled by exhaustive enumeration (`2^21` graphs).
pub const MAX_EXACT_VERTICES: usize = 7;

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return invalid("graph needs at least one vertex");
    }
    if n > MAX_EXACT_VERTICES {
        return Err(Error::Capacity {
            what: "vertices for exhaustive enumeration",
            got: n,
            limit: MAX_EXACT_VERTICES,
        });
    }
    Ok(())
}

/// Unordered pairs `(i, j)`, `i < j`, in lexicographic order; bit `b` of a
/// graph mask refers to `pairs(n)[b]`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Bit mask of `g` under the [`pairs`] ordering.
pub fn graph_mask(g: &GraphState) -> u64 {
    pairs(g.n())
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| g.has_edge(i, j))
        .fold(0, |m, (b, _)| m | 1 << b)
}

/// Visits every labeled graph on `n` vertices once, in Gray-code order, with
/// its mask.
fn for_each_graph<F: FnMut(u64, &GraphState)>(n: usize, mut visit: F) -> Result<()> {
    check_size(n)?;
    let ps = pairs(n);
    let mut g = GraphState::empty(n)?;
    let mut mask = 0u64;
    visit(mask, &g);
    for code in 1u64..(1u64 << ps.len()) {
        let bit = code.trailing_zeros() as usize;
        let (i, j) = ps[bit];
        g.toggle(i, j);
        mask ^= 1 << bit;
        visit(mask, &g);
    }
    Ok(())
}

/// Number of labeled graphs on `n` vertices with each `(edges, triangles)` pair.
pub fn count_histogram(n: usize) -> Result<BTreeMap<(u64, u64), u64>> {
    let mut hist = BTreeMap::new();
    for_each_graph(n, |_, g| {
        *hist
            .entry((g.edge_count(), g.triangle_count()))
            .or_insert(0) += 1;
    })?;
    Ok(hist)
}

fn log_partition(n: usize, beta: [f64; 2]) -> Result<f64> {
    let hist = count_histogram(n)?;
    let terms: Vec<f64> = hist
        .iter()
        .map(|(&(e, t), &c)| (c as f64).ln() + weight_from_delta(n, e as i64, t as i64, beta))
        .collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln())
}

/// `ψ_n^β = n^{-2} log Σ_G exp(n² T^β(G))` over all labeled graphs on `n ≤ 7`
/// vertices.
///
/// Graphs are grouped by their exact `(edges, triangles)` counts before the
/// log-sum-exp, so the sum has only a few hundred terms.
pub fn exact_free_energy(n: usize, beta: [f64; 2]) -> Result<f64> {
    if !beta.iter().all(|b| b.is_finite()) {
        return invalid("beta must be finite");
    }
    Ok(log_partition(n, beta)? / (n * n) as f64)
}

/// Probability of every labeled graph, indexed by [`graph_mask`].
pub fn exact_distribution(n: usize, beta: [f64; 2]) -> Result<Vec<f64>> {
    let log_z = log_partition(n, beta)?;
    let mut probs = vec![0.0; 1usize << pairs(n).len()];
    for_each_graph(n, |mask, g| {
        let w = weight_from_delta(n, g.edge_count() as i64, g.triangle_count() as i64, beta);
        probs[mask as usize] = (w - log_z).exp();
    })?;
    Ok(probs)
}
