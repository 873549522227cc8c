use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::state::GraphState;
use crate::perturbation::{cone_edge_density, cone_triangle_density};

/// Largest cone index searched by [`classify_sample`].
pub const CLASSIFY_MAX_K: u32 = 20;
/// Random restarts of the 2-colouring local search.
pub const COLORING_RESTARTS: usize = 16;
const COLORING_SEED: u64 = 0x2c01_0e5e_ed00_0001;
const CURVE_SAMPLES: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleClassification {
    pub edge_density: f64,
    pub triangle_density: f64,
    /// Cone index whose density curve passes closest to the sample.
    pub nearest_k: u32,
    pub distance_in_density_plane: f64,
    /// `nearest_k` hit [`CLASSIFY_MAX_K`].
    pub at_cap: bool,
    /// `1 − (monochromatic edges of the best 2-colouring found) / edges`.
    pub bipartiteness_score: f64,
}

/// Density curve of the cone around the Turán graphon with `k + 1` classes:
/// the two tangent edges `b = 0, a ∈ [1/2, 1]` and `a = 1, b ∈ [0, 1/2]`,
/// parameterized by `s ∈ [−1/2, 1/2]` through the Turán point at `s = 0`.
fn cone_curve(k: u32, s: f64) -> (f64, f64) {
    let (a, b) = if s < 0.0 { (1.0 + s, 0.0) } else { (1.0, s) };
    (cone_edge_density(k, a, b), cone_triangle_density(k, a, b))
}

/// Distance from `(e, t)` to the cone curve of index `k`.
pub fn distance_to_cone(k: u32, e: f64, t: f64) -> f64 {
    let dist2 = |s: f64| {
        let (ce, ct) = cone_curve(k, s);
        (ce - e).powi(2) + (ct - t).powi(2)
    };
    let step = 1.0 / (CURVE_SAMPLES - 1) as f64;
    let (best_i, _) = (0..CURVE_SAMPLES)
        .map(|i| (i, dist2(-0.5 + i as f64 * step)))
        .fold(
            (0, f64::INFINITY),
            |acc, (i, d)| if d < acc.1 { (i, d) } else { acc },
        );
    // Golden-section refinement inside the neighbouring grid cells.
    let centre = -0.5 + best_i as f64 * step;
    let (mut lo, mut hi) = ((centre - step).max(-0.5), (centre + step).min(0.5));
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if dist2(m1) <= dist2(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist2(centre).min(dist2(0.5 * (lo + hi))).sqrt()
}

/// Fewest monochromatic edges over 2-colourings found by greedy local search.
///
/// Each restart draws a uniform colouring and then flips any vertex with more
/// same-colour than other-colour neighbours until no flip helps. Restarts use
/// a fixed seed, so the result is deterministic.
pub fn min_monochromatic_edges(g: &GraphState) -> u64 {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| g.has_edge(i, j)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(COLORING_SEED);
    let mut best = u64::MAX;
    for _ in 0..COLORING_RESTARTS {
        let mut color: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        loop {
            let mut flipped = false;
            for v in 0..n {
                let same = adj[v].iter().filter(|&&w| color[w] == color[v]).count();
                if 2 * same > adj[v].len() {
                    color[v] = !color[v];
                    flipped = true;
                }
            }
            if !flipped {
                break;
            }
        }
        let mono = (0..n)
            .map(|v| {
                adj[v]
                    .iter()
                    .filter(|&&w| w > v && color[w] == color[v])
                    .count() as u64
            })
            .sum();
        best = best.min(mono);
    }
    best
}

pub fn classify_sample(g: &GraphState) -> SampleClassification {
    let (e, t) = (g.edge_density(), g.triangle_density());
    let (nearest_k, distance) = (1..=CLASSIFY_MAX_K)
        .map(|k| (k, distance_to_cone(k, e, t)))
        .fold(
            (1, f64::INFINITY),
            |acc, (k, d)| if d < acc.1 { (k, d) } else { acc },
        );
    let edges = g.edge_count();
    let bipartiteness_score = if edges == 0 {
        1.0
    } else {
        1.0 - min_monochromatic_edges(g) as f64 / edges as f64
    };
    SampleClassification {
        edge_density: e,
        triangle_density: t,
        nearest_k,
        distance_in_density_plane: distance,
        at_cap: nearest_k == CLASSIFY_MAX_K,
        bipartiteness_score,
    }
}
