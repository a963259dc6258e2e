use rayon::prelude::*;

use super::engine::run;
use super::scenario::{PolicyKind, Scenario};
use crate::rng::replication_seed;
use crate::{Error, Result};

/// Mean delay of one scenario over paired-seed replications.
#[derive(Debug, Clone, PartialEq)]
pub struct Replicated {
    pub name: String,
    pub policy: PolicyKind,
    pub cache_size: usize,
    pub alpha: Option<f64>,
    /// Per-replication mean delays, by replication index.
    pub runs: Vec<f64>,
}

impl Replicated {
    pub fn mean(&self) -> f64 {
        self.runs.iter().sum::<f64>() / self.runs.len() as f64
    }

    /// Standard error of the mean; zero for a single run.
    pub fn std_error(&self) -> f64 {
        let n = self.runs.len() as f64;
        if self.runs.len() < 2 {
            return 0.0;
        }
        let m = self.mean();
        let var = self.runs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }
}

/// Runs `replications` copies of the scenario; replication `r` uses seed
/// `replication_seed(scenario.seed, r)`.
pub fn replicate(scenario: &Scenario, replications: usize) -> Result<Replicated> {
    if replications == 0 {
        return Err(Error::invalid("at least one replication is required"));
    }
    let runs = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut s = scenario.clone();
            s.seed = replication_seed(scenario.seed, r);
            run(&s).map(|rep| rep.mean_delay())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Replicated {
        name: scenario.name.clone(),
        policy: scenario.policy.kind,
        cache_size: scenario.policy.cache_size,
        alpha: scenario.policy.alpha,
        runs,
    })
}

/// Paired comparison: every scenario sees the same replication seeds. The
/// scenarios may differ only in policy, cache size and α.
pub fn compare(scenarios: &[Scenario], replications: usize) -> Result<Vec<Replicated>> {
    if let Some(first) = scenarios.first() {
        for s in &scenarios[1..] {
            let same = s.profiles == first.profiles
                && s.delays == first.delays
                && s.path == first.path
                && s.drift == first.drift
                && s.arrivals == first.arrivals
                && s.seed == first.seed;
            if !same {
                return Err(Error::invalid(format!(
                    "scenario {:?} differs from {:?} in more than policy, cache size and alpha",
                    s.name, first.name
                )));
            }
        }
    }
    scenarios.iter().map(|s| replicate(s, replications)).collect()
}
