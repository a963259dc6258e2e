//! Closed-form models and optimizers.
//!
//! All functions here are pure; they take rates and delays explicitly and
//! may be called from any thread.

mod centralized;
mod che;
mod dcr;
mod markov;
mod optimal;
pub mod search;

pub use centralized::{optimize_alpha, optimize_id_cache_size, CentralizedParams};
pub use che::{che_solve, CheSolution};
pub use dcr::{dcr_alpha_sensitive, dcr_caching_phase_delay, ALPHA_FLOOR};
pub use markov::{
    alpha_two_lru_metrics, alpha_two_lru_stationary, file_access_probabilities, map_params_from_rate,
    two_lru_model, AccessProbabilities, AlphaTwoLruParams, StationaryVector, TwoLruModel,
};
pub use optimal::{
    optimal_delay_insensitive, optimal_delay_sensitive, optimal_split_p, optimal_uncached_load, ranking,
    top_c, weighted_popularity, PopularityWeighting,
};
