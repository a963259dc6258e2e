//! IRM request streams: per-user Poisson processes over a Zipf-like catalog,
//! plus the random popularity drift used in the dynamic experiments.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Exp;

use crate::{Error, Result};

/// Tolerance on `Σ q = 1` for a popularity vector.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A catalog of unit-size files indexed `0..file_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Catalog {
    file_count: usize,
}

impl Catalog {
    pub fn new(file_count: usize) -> Result<Self> {
        if file_count == 0 {
            return Err(Error::invalid("catalog must hold at least one file"));
        }
        Ok(Self { file_count })
    }

    pub fn file_count(&self) -> usize {
        self.file_count
    }
}

/// Zipf popularity `q_j ∝ (j+1)^-skew`, normalized to sum 1.
pub fn zipf_popularity(file_count: usize, skew: f64) -> Result<Vec<f64>> {
    if file_count == 0 {
        return Err(Error::invalid("zipf popularity needs at least one file"));
    }
    if !(skew >= 0.0 && skew.is_finite()) {
        return Err(Error::invalid(format!("zipf skew must be >= 0, got {skew}")));
    }
    let mut q: Vec<f64> = (1..=file_count).map(|j| (j as f64).powf(-skew)).collect();
    normalize(&mut q);
    Ok(q)
}

fn normalize(q: &mut [f64]) {
    let sum: f64 = q.iter().sum();
    for v in q.iter_mut() {
        *v /= sum;
    }
}

/// One user: Poisson request rate and per-file request probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct UserProfile {
    rate: f64,
    popularity: Vec<f64>,
}

impl UserProfile {
    pub fn new(rate: f64, popularity: Vec<f64>) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid(format!("user rate must be positive, got {rate}")));
        }
        if popularity.is_empty() {
            return Err(Error::invalid("popularity vector is empty"));
        }
        if popularity.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
            return Err(Error::invalid("popularity entries must lie in [0, 1]"));
        }
        let sum: f64 = popularity.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE * popularity.len() as f64 {
            return Err(Error::invalid(format!("popularity sums to {sum}, not 1")));
        }
        Ok(Self { rate, popularity })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn popularity(&self) -> &[f64] {
        &self.popularity
    }

    pub fn file_count(&self) -> usize {
        self.popularity.len()
    }
}

/// Per-file aggregate request rates `λ_j = Σ_i λ_i q_ij`.
pub fn aggregate_rates(profiles: &[UserProfile]) -> Vec<f64> {
    let k = profiles.first().map_or(0, UserProfile::file_count);
    let mut rates = vec![0.0; k];
    for p in profiles {
        for (r, q) in rates.iter_mut().zip(&p.popularity) {
            *r += p.rate * q;
        }
    }
    rates
}

pub fn total_rate(profiles: &[UserProfile]) -> f64 {
    profiles.iter().map(|p| p.rate).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftConfig {
    pub enabled: bool,
    pub per_arrival_change_probability: f64,
}

impl DriftConfig {
    pub fn disabled() -> Self {
        Self { enabled: false, per_arrival_change_probability: 0.0 }
    }

    pub fn new(per_arrival_change_probability: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&per_arrival_change_probability) {
            return Err(Error::invalid("drift probability must lie in [0, 1]"));
        }
        Ok(Self { enabled: true, per_arrival_change_probability })
    }
}

/// What a drift step changed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEvent {
    pub user: usize,
    pub file: usize,
    /// Popularity before the change.
    pub before: f64,
    /// Clamped value before the user's vector is renormalized.
    pub clamped: f64,
}

/// One drift step. With the configured probability, picks a user `u` and
/// file `f` uniformly, perturbs `q_uf` by `Δ ~ U[-q_uf, q_uf]`, clamps to
/// `[0, 1]` and renormalizes user `u`'s vector.
pub fn apply_drift<R: Rng + ?Sized>(
    rng: &mut R,
    profiles: &mut [UserProfile],
    cfg: &DriftConfig,
) -> Option<DriftEvent> {
    if !cfg.enabled || profiles.is_empty() || !rng.random_bool(cfg.per_arrival_change_probability) {
        return None;
    }
    let user = rng.random_range(0..profiles.len());
    let profile = &mut profiles[user];
    let file = rng.random_range(0..profile.popularity.len());
    let before = profile.popularity[file];
    let delta = if before > 0.0 { rng.random_range(-before..=before) } else { 0.0 };
    let clamped = (before + delta).clamp(0.0, 1.0);

    let rest: f64 = profile.popularity.iter().sum::<f64>() - before;
    if rest + clamped <= 0.0 {
        // Would leave an all-zero vector.
        return Some(DriftEvent { user, file, before, clamped: before });
    }
    profile.popularity[file] = clamped;
    normalize(&mut profile.popularity);
    Some(DriftEvent { user, file, before, clamped })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Request {
    pub time: f64,
    pub user: usize,
    pub file: usize,
}

/// Superposed Poisson request stream over a set of user profiles.
///
/// Holds the profiles so that drift can update them in place; the per-user
/// file samplers are rebuilt only for users whose vector changed.
#[derive(Debug, Clone)]
pub struct RequestGenerator {
    profiles: Vec<UserProfile>,
    user_sampler: WeightedIndex<f64>,
    file_samplers: Vec<WeightedIndex<f64>>,
    interarrival: Exp<f64>,
}

impl RequestGenerator {
    pub fn new(profiles: Vec<UserProfile>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::invalid("at least one user profile is required"));
        }
        let k = profiles[0].file_count();
        if profiles.iter().any(|p| p.file_count() != k) {
            return Err(Error::invalid("user profiles disagree on the catalog size"));
        }
        let user_sampler = WeightedIndex::new(profiles.iter().map(|p| p.rate))
            .map_err(|e| Error::invalid(format!("user rates: {e}")))?;
        let file_samplers = profiles.iter().map(file_sampler).collect::<Result<_>>()?;
        let interarrival = Exp::new(total_rate(&profiles))
            .map_err(|e| Error::invalid(format!("aggregate rate: {e}")))?;
        Ok(Self { profiles, user_sampler, file_samplers, interarrival })
    }

    pub fn profiles(&self) -> &[UserProfile] {
        &self.profiles
    }

    pub fn file_count(&self) -> usize {
        self.profiles[0].file_count()
    }

    /// Next arrival after `now`: exponential gap at the aggregate rate,
    /// user with probability `λ_i/Σλ`, file with probability `q_ij`.
    pub fn next_request<R: Rng + ?Sized>(&self, rng: &mut R, now: f64) -> Request {
        let time = now + self.interarrival.sample(rng);
        let user = self.user_sampler.sample(rng);
        let file = self.file_samplers[user].sample(rng);
        Request { time, user, file }
    }

    pub fn apply_drift<R: Rng + ?Sized>(&mut self, rng: &mut R, cfg: &DriftConfig) -> Option<DriftEvent> {
        let event = apply_drift(rng, &mut self.profiles, cfg)?;
        if event.clamped != event.before {
            // Weights are a valid distribution by construction.
            self.file_samplers[event.user] =
                file_sampler(&self.profiles[event.user]).expect("renormalized popularity");
        }
        Some(event)
    }
}

fn file_sampler(p: &UserProfile) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(p.popularity.iter().copied())
        .map_err(|e| Error::invalid(format!("popularity weights: {e}")))
}
