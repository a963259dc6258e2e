//! Delay-optimal tuning of the centralized 2-LRU agent over an M/M/1
//! uncached path: the forwarding probability of α-2-LRU, or the size of the
//! id cache for plain 2-LRU.
//!
//! The delay minimized is this crate's reconstruction
//! `D = [Σ_j λ_j (p_hit,j d_h + p_miss,j d_m) + λ_4G/(μ − λ_4G)] / Σλ`
//! with `λ_4G = Σ_j λ_j p_4G,j` and per-file probabilities from
//! [`two_lru_model`](super::two_lru_model). Parameter values that make the
//! queue unstable count as infinite delay.

use super::markov::two_lru_model;
use super::search::grid_then_golden;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizedParams {
    /// Aggregate per-file request rates.
    pub rates: Vec<f64>,
    pub capacity: usize,
    pub id_capacity: usize,
    pub hit_delay: f64,
    pub miss_delay: f64,
    pub service_rate: f64,
}

impl CentralizedParams {
    /// Modelled per-request delay; `+∞` when the 4G queue would be unstable.
    pub fn delay(&self, id_capacity: usize, alpha: f64) -> Result<f64> {
        let model = two_lru_model(&self.rates, id_capacity, self.capacity, alpha)?;
        let (mut cache_cost, mut deflected) = (0.0, 0.0);
        for (p, &r) in model.per_file.iter().zip(&self.rates) {
            cache_cost += r * (p.hit * self.hit_delay + p.miss * self.miss_delay);
            deflected += r * p.deflect;
        }
        if deflected >= self.service_rate {
            return Ok(f64::INFINITY);
        }
        let total: f64 = self.rates.iter().sum();
        Ok((cache_cost + deflected / (self.service_rate - deflected)) / total)
    }
}

/// Optimal forwarding probability: a 101-point grid refined by golden
/// section to 1e-4. Returns `(α*, D(α*))`.
pub fn optimize_alpha(params: &CentralizedParams) -> Result<(f64, f64)> {
    // Surface model errors before the search swallows them.
    params.delay(params.id_capacity, 1.0)?;
    let (alpha, d) = grid_then_golden(
        |a| params.delay(params.id_capacity, a).unwrap_or(f64::INFINITY),
        0.0,
        1.0,
        101,
        1e-4,
    );
    if !d.is_finite() {
        return Err(Error::Infeasible("4G queue is unstable for every alpha".into()));
    }
    Ok((alpha, d))
}

/// Optimal id-cache size for plain 2-LRU (every double miss deflected),
/// by exhaustive scan of `1..=K`. Ties go to the smaller size. Returns
/// `(C_id*, D(C_id*))`.
pub fn optimize_id_cache_size(params: &CentralizedParams) -> Result<(usize, f64)> {
    let mut best = (0, f64::INFINITY);
    for c in 1..=params.rates.len() {
        let d = params.delay(c, 0.0)?;
        if d < best.1 {
            best = (c, d);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Infeasible("4G queue is unstable for every id-cache size".into()));
    }
    Ok(best)
}
