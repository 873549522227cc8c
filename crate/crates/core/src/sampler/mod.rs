//! Finite-n validation: Metropolis sampling of the edge-triangle exponential
//! random graph and exhaustive small-n partition functions.

mod chain;
mod classify;
mod exact;
mod state;

pub use chain::{
    log_weight, log_weight_delta, run_chain, run_chain_index, run_chains, state_histogram,
    write_trajectory_csv, ChainResult, ChainSummary, InitialState, SamplerConfig, TrajectoryPoint,
    GENERATOR_ID,
};
pub use classify::{
    classify_sample, distance_to_cone, min_monochromatic_edges, SampleClassification,
    CLASSIFY_MAX_K, COLORING_RESTARTS,
};
pub use exact::{
    count_histogram, exact_distribution, exact_free_energy, graph_mask, pairs, MAX_EXACT_VERTICES,
};
pub use state::{GraphState, MAX_VERTICES};

/// Reference sampling run: `n = 60`, `β = (10, −7.5)`.
pub fn reference_sample_config(seed: u64) -> SamplerConfig {
    SamplerConfig {
        n: 60,
        beta: [10.0, -7.5],
        steps: 5_000_000,
        burn_in: 1_000_000,
        thin: 1_000,
        seed,
        chains: 8,
        initial: vec![
            InitialState::Random(0.5),
            InitialState::Empty,
            InitialState::Complete,
            InitialState::BipartiteSplit,
        ],
    }
}
