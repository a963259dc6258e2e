use std::fmt;
use std::str::FromStr;

use crate::analytic::{optimal_delay_insensitive, optimal_delay_sensitive};
use crate::path::{DelayProfile, PathModel};
use crate::routing::optimal_policy;
use crate::workload::{DriftConfig, UserProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// LRU cache, all traffic to the cache.
    Lru,
    /// Static top-`C` cache, all traffic to the cache.
    OptimizedCaching,
    /// LRU cache, per-file routing fixed in advance from Che hit estimates.
    OptimizedRouting,
    /// Static top-`C` cache with exact popularities and optimal routing.
    Optimal,
    Dcr,
    /// DCR with users that know the cache contents.
    Dcor,
    /// 2-LRU with every double miss sent to the uncached path.
    TwoLru,
    AlphaTwoLru,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 8] = [
        PolicyKind::Lru,
        PolicyKind::OptimizedCaching,
        PolicyKind::OptimizedRouting,
        PolicyKind::Optimal,
        PolicyKind::Dcr,
        PolicyKind::Dcor,
        PolicyKind::TwoLru,
        PolicyKind::AlphaTwoLru,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Lru => "lru",
            PolicyKind::OptimizedCaching => "optimized-caching",
            PolicyKind::OptimizedRouting => "optimized-routing",
            PolicyKind::Optimal => "optimal",
            PolicyKind::Dcr => "dcr",
            PolicyKind::Dcor => "dcor",
            PolicyKind::TwoLru => "two-lru",
            PolicyKind::AlphaTwoLru => "alpha-two-lru",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy {s:?}")))
    }
}

/// Policy selection and its parameters. Fields a policy does not use are
/// ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub cache_size: usize,
    /// 2-LRU id-cache size; defaults to `cache_size`.
    pub id_cache_size: Option<usize>,
    /// α-2-LRU forwarding probability (default 0.5), or the DCR caching-phase
    /// α (default 0.5 on a constant path, 0.9 on M/M/1).
    pub alpha: Option<f64>,
    /// DCR routing-phase split on a constant path (default 0.1).
    pub split: Option<f64>,
    pub caching_phase_arrivals: u64,
    pub refresh_arrivals: u64,
    pub routing_phase_arrivals: Option<u64>,
    pub estimate_decay: f64,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, cache_size: usize) -> Self {
        Self {
            kind,
            cache_size,
            id_cache_size: None,
            alpha: None,
            split: None,
            caching_phase_arrivals: 10_000,
            refresh_arrivals: 10_000,
            routing_phase_arrivals: None,
            estimate_decay: 1.0,
        }
    }

    pub fn id_cache_size(&self) -> usize {
        self.id_cache_size.unwrap_or(self.cache_size)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub profiles: Vec<UserProfile>,
    pub delays: DelayProfile,
    pub path: PathModel,
    pub policy: PolicySpec,
    pub drift: DriftConfig,
    pub arrivals: u64,
    /// Arrivals per metrics window.
    pub window: u64,
    pub seed: u64,
    /// A run aborts when the uncached queue's backlog exceeds this many time
    /// units.
    pub max_queue_backlog: f64,
}

impl Scenario {
    pub fn file_count(&self) -> usize {
        self.profiles.first().map_or(0, UserProfile::file_count)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.file_count();
        if self.profiles.is_empty() || k == 0 {
            return Err(Error::invalid("scenario needs at least one user and one file"));
        }
        if self.profiles.iter().any(|p| p.file_count() != k) {
            return Err(Error::invalid("all users must share the catalog"));
        }
        if self.delays.users() != self.profiles.len() {
            return Err(Error::invalid(format!(
                "{} users but delays for {}",
                self.profiles.len(),
                self.delays.users()
            )));
        }
        if let PathModel::Mm1 { service_rate } = self.path {
            if !(service_rate > 0.0 && service_rate.is_finite()) {
                return Err(Error::invalid("service rate must be positive"));
            }
        }
        let c = self.policy.cache_size;
        let needs_cache = !matches!(self.policy.kind, PolicyKind::OptimizedCaching | PolicyKind::Optimal | PolicyKind::Dcr | PolicyKind::Dcor);
        if c > k || (needs_cache && c == 0) {
            return Err(Error::invalid(format!("cache size {c} out of range for {k} files")));
        }
        let id = self.policy.id_cache_size();
        if matches!(self.policy.kind, PolicyKind::TwoLru | PolicyKind::AlphaTwoLru) && (id == 0 || id > k) {
            return Err(Error::invalid(format!("id-cache size {id} out of range for {k} files")));
        }
        if let Some(a) = self.policy.alpha {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::invalid(format!("alpha {a} outside [0, 1]")));
            }
        }
        if self.policy.kind == PolicyKind::OptimizedRouting && self.path.is_congestion_sensitive() {
            return Err(Error::invalid("optimized-routing needs a constant uncached path"));
        }
        if self.arrivals == 0 || self.window == 0 {
            return Err(Error::invalid("arrivals and window must be positive"));
        }
        if !(self.max_queue_backlog > 0.0) {
            return Err(Error::invalid("queue backlog limit must be positive"));
        }
        Ok(())
    }
}

/// Analytic delay of the static optimum for the scenario's initial
/// popularities and cache size.
pub fn analytic_optimum(scenario: &Scenario) -> Result<f64> {
    let policy = optimal_policy(&scenario.profiles, scenario.policy.cache_size, &scenario.delays, scenario.path)?;
    match scenario.path {
        PathModel::Constant => Ok(optimal_delay_insensitive(&scenario.profiles, policy.cache.mask(), &scenario.delays)),
        PathModel::Mm1 { service_rate } => {
            let (hit, miss) = scenario.delays.shared_cache_delays().expect("checked by optimal_policy");
            optimal_delay_sensitive(&scenario.profiles, policy.cache.mask(), hit, miss, service_rate, |_, _| policy.split)
        }
    }
}
