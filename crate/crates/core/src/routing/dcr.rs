//! Distributed Caching and Routing.
//!
//! The cache alternates between a caching phase, in which users send a
//! fraction `α` of all requests to it, and a routing phase, in which users
//! send requests for files they believe cached to the cache and split the
//! rest with probability `p`. Popularities are estimated from what reaches
//! the cache, each observation weighted by the inverse of the probability
//! that it was forwarded (`1/α` in the caching phase, `1` for hits and `1/p`
//! for misses in the routing phase). The static cache set is refreshed to
//! the top-`C` estimated files at the end of the caching phase and every
//! `refresh_arrivals` arrivals of the routing phase.

use rand::Rng;

use super::{Belief, RouteChoice};
use crate::analytic::{dcr_alpha_sensitive, optimal_split_p, top_c};
use crate::cache::StaticCache;
use crate::path::PathModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Caching,
    Routing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcrConfig {
    pub capacity: usize,
    /// Caching-phase forwarding probability. Fixed on a constant path; on an
    /// M/M/1 path only the first caching phase uses it.
    pub alpha: f64,
    /// Routing-phase split `p` on a constant path.
    pub split: f64,
    pub split_floor: f64,
    pub split_cap: f64,
    pub caching_phase_arrivals: u64,
    pub refresh_arrivals: u64,
    /// Routing-phase length before the cache re-enters the caching phase;
    /// `None` stays in the routing phase for the rest of the run.
    pub routing_phase_arrivals: Option<u64>,
    /// Factor applied to the accumulated counts at every refresh.
    pub estimate_decay: f64,
    pub hit_delay: f64,
    pub miss_delay: f64,
    pub path: PathModel,
}

impl DcrConfig {
    /// Defaults: `α = 0.5`, `p = 0.1` on a constant path; `α = 0.9` to start
    /// and `p = min(0.9, max(0.1, p'))` on an M/M/1 path.
    pub fn new(capacity: usize, path: PathModel, hit_delay: f64, miss_delay: f64) -> Self {
        Self {
            capacity,
            alpha: if path.is_congestion_sensitive() { 0.9 } else { 0.5 },
            split: 0.1,
            split_floor: 0.1,
            split_cap: 0.9,
            caching_phase_arrivals: 10_000,
            refresh_arrivals: 10_000,
            routing_phase_arrivals: None,
            estimate_decay: 1.0,
            hit_delay,
            miss_delay,
            path,
        }
    }

    fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::invalid("DCR alpha must lie in (0, 1]"));
        }
        if !(self.split > 0.0 && self.split <= 1.0) || !unit(self.split_floor) || !unit(self.split_cap) {
            return Err(Error::invalid("DCR split must lie in (0, 1]; floor and cap in [0, 1]"));
        }
        if self.path.is_congestion_sensitive() && !(self.split_floor > 0.0 && self.split_floor <= self.split_cap) {
            return Err(Error::invalid("DCR split floor must be positive and at most the cap"));
        }
        if self.refresh_arrivals == 0 {
            return Err(Error::invalid("DCR refresh interval must be positive"));
        }
        if !(self.estimate_decay > 0.0 && self.estimate_decay <= 1.0) {
            return Err(Error::invalid("DCR estimate decay must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DcrAgent {
    cfg: DcrConfig,
    phase: Phase,
    alpha: f64,
    split: f64,
    cache: StaticCache,
    weights: Vec<f64>,
    phase_arrivals: u64,
    window_arrivals: u64,
    window_start: f64,
    window_weight: f64,
    rate_estimate: Option<f64>,
    cached_rate_estimate: Option<f64>,
}

impl DcrAgent {
    /// Starts in the caching phase with an empty cache.
    pub fn new(cfg: DcrConfig, file_count: usize) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            phase: Phase::Caching,
            alpha: cfg.alpha,
            split: cfg.split,
            cache: StaticCache::empty(file_count),
            weights: vec![0.0; file_count],
            phase_arrivals: 0,
            window_arrivals: 0,
            window_start: 0.0,
            window_weight: 0.0,
            rate_estimate: None,
            cached_rate_estimate: None,
            cfg,
        })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn split(&self) -> f64 {
        self.split
    }

    pub fn cache(&self) -> &StaticCache {
        &self.cache
    }

    /// `(λ̂, λ̂′)`: aggregate and cached-content request rate estimates.
    pub fn rate_estimates(&self) -> Option<(f64, f64)> {
        self.rate_estimate.zip(self.cached_rate_estimate)
    }

    /// Normalized popularity estimate `q̂`.
    pub fn estimated_popularity(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        if total > 0.0 {
            self.weights.iter().map(|w| w / total).collect()
        } else {
            vec![0.0; self.weights.len()]
        }
    }

    /// Advances the phase schedule; call once per arrival, before routing.
    /// Returns the phase broadcast at this arrival, if any.
    pub fn on_arrival(&mut self, time: f64) -> Option<Phase> {
        self.phase_arrivals += 1;
        self.window_arrivals += 1;
        match self.phase {
            Phase::Caching if self.phase_arrivals > self.cfg.caching_phase_arrivals => {
                self.refresh(time);
                self.enter(Phase::Routing);
                Some(Phase::Routing)
            }
            Phase::Routing if self.cfg.routing_phase_arrivals.is_some_and(|n| self.phase_arrivals > n) => {
                self.alpha = self.next_alpha();
                self.window_start = time;
                self.window_weight = 0.0;
                self.enter(Phase::Caching);
                Some(Phase::Caching)
            }
            Phase::Routing if self.window_arrivals > self.cfg.refresh_arrivals => {
                self.refresh(time);
                self.window_arrivals = 1;
                Some(Phase::Routing)
            }
            _ => None,
        }
    }

    fn enter(&mut self, phase: Phase) {
        self.phase = phase;
        self.phase_arrivals = 1;
        self.window_arrivals = 1;
    }

    /// A user's routing decision for `file` given its belief about the file.
    pub fn route<R: Rng + ?Sized>(&self, belief: Belief, rng: &mut R) -> RouteChoice {
        let forward = match self.phase {
            Phase::Caching => rng.random::<f64>() < self.alpha,
            Phase::Routing => belief == Belief::InCache || rng.random::<f64>() < self.split,
        };
        if forward {
            RouteChoice::ToCache
        } else {
            RouteChoice::ToUncached
        }
    }

    /// Serves a request that reached the cache and records it. Returns
    /// whether it hit.
    pub fn serve(&mut self, file: usize) -> bool {
        let hit = self.cache.contains(file);
        let w = match self.phase {
            Phase::Caching => 1.0 / self.alpha,
            Phase::Routing if hit => 1.0,
            Phase::Routing => 1.0 / self.split,
        };
        self.weights[file] += w;
        self.window_weight += w;
        hit
    }

    fn refresh(&mut self, time: f64) {
        let elapsed = time - self.window_start;
        if elapsed > 0.0 && self.window_weight > 0.0 {
            self.rate_estimate = Some(self.window_weight / elapsed);
        }
        let q = self.estimated_popularity();
        if q.iter().any(|&x| x > 0.0) {
            self.cache = StaticCache::new(q.len(), top_c(&q, self.cfg.capacity));
        }
        if let Some(rate) = self.rate_estimate {
            let cached_share: f64 = self.cache.files().iter().map(|&f| q[f]).sum();
            self.cached_rate_estimate = Some(rate * cached_share);
        }
        self.split = self.next_split();
        for w in &mut self.weights {
            *w *= self.cfg.estimate_decay;
        }
        self.window_start = time;
        self.window_weight = 0.0;
    }

    fn next_split(&self) -> f64 {
        match (self.cfg.path, self.rate_estimates()) {
            (PathModel::Mm1 { service_rate }, Some((rate, cached))) => {
                let p = optimal_split_p(service_rate, self.cfg.miss_delay, (rate - cached).max(0.0)).unwrap_or(1.0);
                p.max(self.cfg.split_floor).min(self.cfg.split_cap)
            }
            (PathModel::Mm1 { .. }, None) => self.cfg.split_cap,
            (PathModel::Constant, _) => self.cfg.split,
        }
    }

    fn next_alpha(&self) -> f64 {
        match (self.cfg.path, self.rate_estimates()) {
            (PathModel::Mm1 { service_rate }, Some((rate, cached))) if rate > 0.0 => {
                let cache_delay = (cached * self.cfg.hit_delay + (rate - cached) * self.cfg.miss_delay) / rate;
                dcr_alpha_sensitive(rate, cache_delay, service_rate).unwrap_or(self.cfg.alpha)
            }
            _ => self.cfg.alpha,
        }
    }
}
