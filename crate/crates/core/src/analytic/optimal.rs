//! Optimal static caching with greedy or split routing.

use std::cmp::Ordering;

use crate::path::DelayProfile;
use crate::workload::UserProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopularityWeighting {
    /// `q_j = Σ_i λ_i q_ij (d_i^0 − d_i^h)` for a constant uncached path.
    DelayGap,
    /// `q_j = Σ_i λ_i q_ij` for a congestion-sensitive uncached path.
    Rate,
}

pub fn weighted_popularity(profiles: &[UserProfile], delays: &DelayProfile, weighting: PopularityWeighting) -> Vec<f64> {
    let k = profiles.first().map_or(0, UserProfile::file_count);
    let mut q = vec![0.0; k];
    for (i, p) in profiles.iter().enumerate() {
        let w = match weighting {
            PopularityWeighting::DelayGap => p.rate() * (delays.uncached(i) - delays.hit(i)),
            PopularityWeighting::Rate => p.rate(),
        };
        for (acc, qij) in q.iter_mut().zip(p.popularity()) {
            *acc += w * qij;
        }
    }
    q
}

fn by_weight_desc(weights: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b))
}

/// Files sorted by descending weight; ties go to the lower index.
pub fn ranking(weights: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(by_weight_desc(weights));
    idx
}

/// The `capacity` highest-weight files (ties to the lower index), unordered.
pub fn top_c(weights: &[f64], capacity: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    if capacity >= idx.len() {
        return idx;
    }
    if capacity == 0 {
        return Vec::new();
    }
    idx.select_nth_unstable_by(capacity - 1, by_weight_desc(weights));
    idx.truncate(capacity);
    idx
}

/// Uncached-path load `μ − sqrt(μ/d_m)` at which the marginal queueing delay
/// equals the miss delay.
pub fn optimal_uncached_load(service_rate: f64, miss_delay: f64) -> f64 {
    service_rate - (service_rate / miss_delay).sqrt()
}

/// Fraction `p` of the traffic for uncached files that should still go to
/// the cache, `1 − (μ − sqrt(μ/d_m)) / demand`, clamped to `[0, 1]`.
pub fn optimal_split_p(service_rate: f64, miss_delay: f64, uncached_demand: f64) -> Result<f64> {
    if !(service_rate > 0.0) || !(miss_delay > 0.0) || uncached_demand < 0.0 {
        return Err(Error::invalid("split needs mu > 0, d_m > 0 and nonnegative demand"));
    }
    if uncached_demand == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 - optimal_uncached_load(service_rate, miss_delay) / uncached_demand).clamp(0.0, 1.0))
}

/// Per-request delay with `cached` statically cached, cached files routed to
/// the cache and the rest to the constant uncached path.
pub fn optimal_delay_insensitive(profiles: &[UserProfile], cached: &[bool], delays: &DelayProfile) -> f64 {
    let mut total = 0.0;
    for (i, p) in profiles.iter().enumerate() {
        let in_cache: f64 = p.popularity().iter().zip(cached).filter(|(_, &c)| c).map(|(q, _)| q).sum();
        total += p.rate() * (in_cache * delays.hit(i) + (1.0 - in_cache) * delays.uncached(i));
    }
    total / crate::workload::total_rate(profiles)
}

/// Per-request delay with a congestion-sensitive uncached path: requests for
/// uncached file `j` from user `i` go to the cache (a miss, `d_m`) with
/// probability `split(i, j)` and to the M/M/1 queue otherwise.
pub fn optimal_delay_sensitive(
    profiles: &[UserProfile],
    cached: &[bool],
    hit_delay: f64,
    miss_delay: f64,
    service_rate: f64,
    split: impl Fn(usize, usize) -> f64,
) -> Result<f64> {
    let (mut hits, mut misses, mut queued) = (0.0, 0.0, 0.0);
    for (i, p) in profiles.iter().enumerate() {
        for (j, (&q, &c)) in p.popularity().iter().zip(cached).enumerate() {
            let demand = p.rate() * q;
            if c {
                hits += demand;
            } else {
                let s = split(i, j);
                misses += demand * s;
                queued += demand * (1.0 - s);
            }
        }
    }
    if queued >= service_rate {
        return Err(Error::UnstableQueue { arrival_rate: queued, service_rate });
    }
    let total = crate::workload::total_rate(profiles);
    Ok((hits * hit_delay + misses * miss_delay + queued / (service_rate - queued)) / total)
}
