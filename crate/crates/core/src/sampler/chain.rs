use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::{GraphState, MAX_VERTICES};
use crate::error::{invalid, Result};

/// Generator identification written into run metadata.
///
/// Chain `c` of a run with root seed `s` draws from
/// `ChaCha8Rng::seed_from_u64(s)` with its stream set to `c`.
pub const GENERATOR_ID: &str =
    "rand_chacha-0.3/ChaCha8Rng(seed_from_u64(root_seed), stream=chain_index)";

/// Starting graph of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum InitialState {
    Empty,
    Complete,
    BipartiteSplit,
    Random(f64),
}

impl InitialState {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(Self::Empty),
            "complete" => Ok(Self::Complete),
            "bipartite" | "bipartite-split" => Ok(Self::BipartiteSplit),
            _ => {
                let p = s
                    .strip_prefix("random(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("random:"))
                    .and_then(|p| p.parse::<f64>().ok());
                match p {
                    Some(p) if (0.0..=1.0).contains(&p) => Ok(Self::Random(p)),
                    _ => invalid(format!("unknown initial state {s:?}")),
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Empty => "empty".into(),
            Self::Complete => "complete".into(),
            Self::BipartiteSplit => "bipartite-split".into(),
            Self::Random(p) => format!("random({p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub beta: [f64; 2],
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub chains: usize,
    /// Initial states assigned to chains round-robin.
    pub initial: Vec<InitialState>,
}

impl SamplerConfig {
    /// Single-chain config starting from `random(0.5)`.
    pub fn new(n: usize, beta: [f64; 2], steps: u64, burn_in: u64, thin: u64, seed: u64) -> Self {
        Self {
            n,
            beta,
            steps,
            burn_in,
            thin,
            seed,
            chains: 1,
            initial: vec![InitialState::Random(0.5)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_VERTICES {
            return invalid(format!("n = {} outside 2..={MAX_VERTICES}", self.n));
        }
        if self.steps == 0 {
            return invalid("steps must be positive");
        }
        if self.thin == 0 {
            return invalid("thin must be at least 1");
        }
        if self.burn_in >= self.steps {
            return invalid(format!(
                "burn-in {} must be below steps {}",
                self.burn_in, self.steps
            ));
        }
        if self.chains == 0 {
            return invalid("at least one chain is required");
        }
        if self.initial.is_empty() {
            return invalid("at least one initial state is required");
        }
        if !self.beta.iter().all(|b| b.is_finite()) {
            return invalid("beta must be finite");
        }
        for init in &self.initial {
            if let InitialState::Random(p) = init {
                if !(0.0..=1.0).contains(p) {
                    return invalid(format!("random initial density {p} outside [0,1]"));
                }
            }
        }
        Ok(())
    }

    pub fn initial_for(&self, chain: usize) -> InitialState {
        self.initial[chain % self.initial.len()]
    }
}

/// Log of the weight ratio `exp(n²·ΔT^β)` for toggling `{i, j}`:
/// `2β₁·Δedges + (6β₂/n)·Δtriangles`.
pub fn log_weight_delta(g: &GraphState, i: usize, j: usize, beta: [f64; 2]) -> Result<f64> {
    let (de, dt) = g.toggle_delta(i, j)?;
    Ok(weight_from_delta(g.n(), de, dt, beta))
}

#[inline]
pub(crate) fn weight_from_delta(n: usize, de: i64, dt: i64, beta: [f64; 2]) -> f64 {
    2.0 * beta[0] * de as f64 + 6.0 * beta[1] / n as f64 * dt as f64
}

/// `exp(n²·T^β(G))` in log form: `2β₁|E| + (6β₂/n)·#triangles`.
pub fn log_weight(g: &GraphState, beta: [f64; 2]) -> f64 {
    weight_from_delta(
        g.n(),
        g.edge_count() as i64,
        g.triangle_count() as i64,
        beta,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub step: u64,
    pub edge_density: f64,
    pub triangle_density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSummary {
    pub samples: usize,
    pub mean_edge_density: f64,
    pub stderr_edge_density: f64,
    pub mean_triangle_density: f64,
    pub stderr_triangle_density: f64,
    pub acceptance_rate: f64,
}

#[derive(Debug, Clone)]
pub struct ChainResult {
    pub chain: usize,
    pub initial: InitialState,
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_state: GraphState,
    pub summary: ChainSummary,
}

/// Batch count used for the standard errors of chain means.
const BATCHES: usize = 25;

/// Mean and batch-means standard error.
fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let batches = BATCHES.min(n);
    if batches < 2 {
        return (mean, f64::NAN);
    }
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

pub(crate) fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

fn initial_graph(n: usize, init: InitialState, rng: &mut ChaCha8Rng) -> Result<GraphState> {
    match init {
        InitialState::Empty => GraphState::empty(n),
        InitialState::Complete => GraphState::complete(n),
        InitialState::BipartiteSplit => GraphState::complete_bipartite(n),
        InitialState::Random(p) => {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
            GraphState::from_edges(n, pairs)
        }
    }
}

/// Drives the single-site Metropolis chain, calling `visit` with the state
/// after every step (1-based step index).
pub(crate) fn drive<F: FnMut(u64, &GraphState)>(
    g: &mut GraphState,
    beta: [f64; 2],
    steps: u64,
    rng: &mut ChaCha8Rng,
    mut visit: F,
) -> u64 {
    let n = g.n();
    let mut accepted = 0;
    for step in 1..=steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (de, dt) = g.toggle_delta_unchecked(i, j);
        let log_ratio = weight_from_delta(n, de, dt, beta);
        let u: f64 = rng.gen();
        if log_ratio >= 0.0 || u < log_ratio.exp() {
            g.toggle(i, j);
            accepted += 1;
        }
        visit(step, g);
    }
    accepted
}

/// Runs chain number `chain` of `config`.
pub fn run_chain_index(config: &SamplerConfig, chain: usize) -> Result<ChainResult> {
    config.validate()?;
    let mut rng = chain_rng(config.seed, chain);
    let init = config.initial_for(chain);
    let mut g = initial_graph(config.n, init, &mut rng)?;
    let mut trajectory = Vec::new();
    let (burn_in, thin) = (config.burn_in, config.thin);
    let accepted = drive(&mut g, config.beta, config.steps, &mut rng, |step, g| {
        if step > burn_in && (step - burn_in) % thin == 0 {
            trajectory.push(TrajectoryPoint {
                step,
                edge_density: g.edge_density(),
                triangle_density: g.triangle_density(),
            });
        }
    });
    let edges: Vec<f64> = trajectory.iter().map(|p| p.edge_density).collect();
    let triangles: Vec<f64> = trajectory.iter().map(|p| p.triangle_density).collect();
    let (me, se) = mean_stderr(&edges);
    let (mt, st) = mean_stderr(&triangles);
    Ok(ChainResult {
        chain,
        initial: init,
        summary: ChainSummary {
            samples: trajectory.len(),
            mean_edge_density: me,
            stderr_edge_density: se,
            mean_triangle_density: mt,
            stderr_triangle_density: st,
            acceptance_rate: accepted as f64 / config.steps as f64,
        },
        trajectory,
        final_state: g,
    })
}

/// Visit counts of every labeled graph along chain `chain`, indexed by
/// [`graph_mask`](super::graph_mask); steps are recorded on the same
/// burn-in/thinning schedule as the trajectory. Needs `n ≤ 7`.
pub fn state_histogram(config: &SamplerConfig, chain: usize) -> Result<Vec<u64>> {
    config.validate()?;
    if config.n > super::MAX_EXACT_VERTICES {
        return Err(crate::error::Error::Capacity {
            what: "vertices for a state histogram",
            got: config.n,
            limit: super::MAX_EXACT_VERTICES,
        });
    }
    let mut rng = chain_rng(config.seed, chain);
    let mut g = initial_graph(config.n, config.initial_for(chain), &mut rng)?;
    let mut counts = vec![0u64; 1usize << (config.n * (config.n - 1) / 2)];
    let (burn_in, thin) = (config.burn_in, config.thin);
    drive(&mut g, config.beta, config.steps, &mut rng, |step, g| {
        if step > burn_in && (step - burn_in) % thin == 0 {
            counts[super::graph_mask(g) as usize] += 1;
        }
    });
    Ok(counts)
}

/// Runs the first chain of `config`.
pub fn run_chain(config: &SamplerConfig) -> Result<ChainResult> {
    run_chain_index(config, 0)
}

/// Runs all `config.chains` chains in parallel; results are in chain order.
pub fn run_chains(config: &SamplerConfig) -> Result<Vec<ChainResult>> {
    config.validate()?;
    (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain_index(config, c))
        .collect()
}

/// Trajectory CSV with header `step,edge_density,triangle_density`.
pub fn write_trajectory_csv<W: std::io::Write>(
    trajectory: &[TrajectoryPoint],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "step,edge_density,triangle_density")?;
    for p in trajectory {
        writeln!(
            out,
            "{},{:.16e},{:.16e}",
            p.step, p.edge_density, p.triangle_density
        )?;
    }
    Ok(())
}
