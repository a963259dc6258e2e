//! The uncached (cellular) path: a constant per-user delay, or an M/M/1
//! FIFO queue in both analytic and event-driven form.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::{Error, Result};

/// Mean sojourn time `1/(μ − λ)` of an M/M/1 queue.
pub fn mm1_expected_delay(service_rate: f64, arrival_rate: f64) -> Result<f64> {
    if !(service_rate > 0.0) || arrival_rate < 0.0 {
        return Err(Error::invalid("M/M/1 rates must satisfy mu > 0 and lambda >= 0"));
    }
    if arrival_rate >= service_rate {
        return Err(Error::UnstableQueue { arrival_rate, service_rate });
    }
    Ok(1.0 / (service_rate - arrival_rate))
}

/// Per-user delays for cache hits, cache misses and the constant uncached path.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayProfile {
    hit: Vec<f64>,
    miss: Vec<f64>,
    uncached: Vec<f64>,
}

impl DelayProfile {
    pub fn new(hit: Vec<f64>, miss: Vec<f64>, uncached: Vec<f64>) -> Result<Self> {
        if hit.is_empty() || hit.len() != miss.len() || hit.len() != uncached.len() {
            return Err(Error::invalid("delay vectors must be non-empty and of equal length"));
        }
        if hit.iter().chain(&miss).chain(&uncached).any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::invalid("delays must be finite and nonnegative"));
        }
        for (i, (h, m)) in hit.iter().zip(&miss).enumerate() {
            if h >= m {
                return Err(Error::invalid(format!("user {i}: hit delay must be below miss delay")));
            }
        }
        Ok(Self { hit, miss, uncached })
    }

    pub fn homogeneous(users: usize, hit: f64, miss: f64, uncached: f64) -> Result<Self> {
        Self::new(vec![hit; users], vec![miss; users], vec![uncached; users])
    }

    pub fn users(&self) -> usize {
        self.hit.len()
    }

    pub fn hit(&self, user: usize) -> f64 {
        self.hit[user]
    }

    pub fn miss(&self, user: usize) -> f64 {
        self.miss[user]
    }

    pub fn uncached(&self, user: usize) -> f64 {
        self.uncached[user]
    }

    /// `d_h < d_0 < d_m` for every user.
    pub fn is_ordered(&self) -> bool {
        (0..self.users()).all(|i| self.hit[i] < self.uncached[i] && self.uncached[i] < self.miss[i])
    }

    /// Common `(d_h, d_m)` when all users share them.
    pub fn shared_cache_delays(&self) -> Option<(f64, f64)> {
        let (h, m) = (self.hit[0], self.miss[0]);
        (self.hit.iter().all(|&x| x == h) && self.miss.iter().all(|&x| x == m)).then_some((h, m))
    }
}

/// Delay of the constant uncached path for `user`. Stateless.
pub fn constant_path_delay(profile: &DelayProfile, user: usize) -> f64 {
    profile.uncached(user)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathModel {
    Constant,
    Mm1 { service_rate: f64 },
}

impl PathModel {
    pub fn is_congestion_sensitive(&self) -> bool {
        matches!(self, PathModel::Mm1 { .. })
    }
}

/// Event-driven single-server FIFO queue with exponential service.
#[derive(Debug, Clone)]
pub struct Mm1Queue {
    service: Exp<f64>,
    service_rate: f64,
    last_arrival: f64,
    last_departure: f64,
    busy_time: f64,
    jobs: u64,
}

impl Mm1Queue {
    pub fn new(service_rate: f64) -> Result<Self> {
        let service = Exp::new(service_rate)
            .ok()
            .filter(|_| service_rate > 0.0 && service_rate.is_finite())
            .ok_or_else(|| Error::invalid(format!("service rate must be positive, got {service_rate}")))?;
        Ok(Self { service, service_rate, last_arrival: f64::NEG_INFINITY, last_departure: 0.0, busy_time: 0.0, jobs: 0 })
    }

    pub fn service_rate(&self) -> f64 {
        self.service_rate
    }

    /// Submits a job and returns its departure time.
    pub fn submit<R: Rng + ?Sized>(&mut self, arrival: f64, rng: &mut R) -> Result<f64> {
        let service = self.service.sample(rng);
        self.submit_with_service(arrival, service)
    }

    /// Submits a job with a given service duration.
    pub fn submit_with_service(&mut self, arrival: f64, service: f64) -> Result<f64> {
        if arrival < self.last_arrival {
            return Err(Error::OutOfOrderArrival { arrival, previous: self.last_arrival });
        }
        let start = arrival.max(self.last_departure);
        let departure = start + service;
        self.last_arrival = arrival;
        self.last_departure = departure;
        self.busy_time += service;
        self.jobs += 1;
        Ok(departure)
    }

    /// Work remaining in the system at `time`.
    pub fn backlog(&self, time: f64) -> f64 {
        (self.last_departure - time).max(0.0)
    }

    pub fn jobs(&self) -> u64 {
        self.jobs
    }

    /// Total service time handed out so far.
    pub fn busy_time(&self) -> f64 {
        self.busy_time
    }
}
