//! TOML scenario files.
//!
//! ```toml
//! name = "example"
//! seed = 42
//! arrivals = 1000000      # default 1e6
//! window = 10000          # default 1e4
//!
//! [catalog]
//! files = 1000            # default 1000
//! zipf_skew = 0.8         # default 0.8
//!
//! [users]
//! count = 5               # default 5
//! rate = 0.2              # default 0.2; a list gives one rate per user
//!
//! [delays]                # each a number or a per-user list
//! hit = 1.0               # default 1
//! miss = 8.0              # default 8
//! uncached = 5.0          # default 5
//!
//! [path]
//! model = "constant"      # "constant" (default) or "mm1"
//! service_rate = 0.5      # default 0.5, used by mm1
//! max_backlog = 10000.0   # default 1e4; larger backlogs abort the run
//!
//! [policy]
//! kind = "optimal"        # lru | optimized-caching | optimized-routing | optimal
//!                         # | dcr | dcor | two-lru | alpha-two-lru
//! cache_size = 100        # default 100
//! # id_cache_size, alpha, split, routing_phase_arrivals: optional
//! caching_phase_arrivals = 10000
//! refresh_arrivals = 10000
//! estimate_decay = 1.0
//!
//! [drift]
//! enabled = false
//! probability = 0.01
//! ```
//!
//! Unknown keys are rejected. All users share the catalog's Zipf
//! popularity.

use serde::{Deserialize, Serialize};

use crate::path::{DelayProfile, PathModel};
use crate::sim::{PolicyKind, PolicySpec, Scenario};
use crate::workload::{zipf_popularity, DriftConfig, UserProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_name")]
    pub name: String,
    pub seed: u64,
    #[serde(default = "default_arrivals")]
    pub arrivals: u64,
    #[serde(default = "default_window")]
    pub window: u64,
    #[serde(default)]
    pub catalog: CatalogSection,
    #[serde(default)]
    pub users: UsersSection,
    #[serde(default)]
    pub delays: DelaysSection,
    #[serde(default)]
    pub path: PathSection,
    #[serde(default)]
    pub policy: PolicySection,
    #[serde(default)]
    pub drift: DriftSection,
}

fn default_name() -> String {
    "scenario".into()
}
fn default_arrivals() -> u64 {
    1_000_000
}
fn default_window() -> u64 {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CatalogSection {
    pub files: usize,
    pub zipf_skew: f64,
}

impl Default for CatalogSection {
    fn default() -> Self {
        Self { files: 1000, zipf_skew: 0.8 }
    }
}

/// A value shared by all users or one per user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerUser {
    All(f64),
    Each(Vec<f64>),
}

impl PerUser {
    fn expand(&self, users: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            PerUser::All(x) => Ok(vec![*x; users]),
            PerUser::Each(v) if v.len() == users => Ok(v.clone()),
            PerUser::Each(v) => Err(Error::Config(format!("{what}: {} values for {users} users", v.len()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UsersSection {
    pub count: usize,
    pub rate: PerUser,
}

impl Default for UsersSection {
    fn default() -> Self {
        Self { count: 5, rate: PerUser::All(0.2) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelaysSection {
    pub hit: PerUser,
    pub miss: PerUser,
    pub uncached: PerUser,
}

impl Default for DelaysSection {
    fn default() -> Self {
        Self { hit: PerUser::All(1.0), miss: PerUser::All(8.0), uncached: PerUser::All(5.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Constant,
    Mm1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathSection {
    pub model: PathKind,
    pub service_rate: f64,
    pub max_backlog: f64,
}

impl Default for PathSection {
    fn default() -> Self {
        Self { model: PathKind::Constant, service_rate: 0.5, max_backlog: 1e4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicySection {
    pub kind: String,
    pub cache_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id_cache_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<f64>,
    pub caching_phase_arrivals: u64,
    pub refresh_arrivals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routing_phase_arrivals: Option<u64>,
    pub estimate_decay: f64,
}

impl Default for PolicySection {
    fn default() -> Self {
        let spec = PolicySpec::new(PolicyKind::Optimal, 100);
        Self {
            kind: spec.kind.name().into(),
            cache_size: spec.cache_size,
            id_cache_size: None,
            alpha: None,
            split: None,
            caching_phase_arrivals: spec.caching_phase_arrivals,
            refresh_arrivals: spec.refresh_arrivals,
            routing_phase_arrivals: None,
            estimate_decay: spec.estimate_decay,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriftSection {
    pub enabled: bool,
    pub probability: f64,
}

impl Default for DriftSection {
    fn default() -> Self {
        Self { enabled: false, probability: 0.01 }
    }
}

impl ScenarioFile {
    /// Defaults everywhere except the seed.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            name: default_name(),
            seed,
            arrivals: default_arrivals(),
            window: default_window(),
            catalog: CatalogSection::default(),
            users: UsersSection::default(),
            delays: DelaysSection::default(),
            path: PathSection::default(),
            policy: PolicySection::default(),
            drift: DriftSection::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario files always serialize")
    }

    /// Sets a dotted key, e.g. `policy.cache_size=200`. The value is parsed
    /// as a TOML value, falling back to a plain string.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        let value = parse_value(raw);
        let mut doc = toml::Value::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        let mut parts = key.split('.').peekable();
        let mut node = &mut doc;
        while let Some(part) = parts.next() {
            let table = node
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("override {key:?}: {part:?} is not inside a section")))?;
            if parts.peek().is_none() {
                table.insert(part.to_string(), value);
                break;
            }
            node = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(Default::default()));
        }
        *self = doc.try_into().map_err(|e: toml::de::Error| Error::Config(format!("override {key:?}: {e}")))?;
        Ok(())
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let users = self.users.count;
        if users == 0 {
            return Err(Error::Config("users.count must be positive".into()));
        }
        let popularity = zipf_popularity(self.catalog.files, self.catalog.zipf_skew)?;
        let rates = self.users.rate.expand(users, "users.rate")?;
        let profiles = rates.into_iter().map(|r| UserProfile::new(r, popularity.clone())).collect::<Result<Vec<_>>>()?;
        let delays = DelayProfile::new(
            self.delays.hit.expand(users, "delays.hit")?,
            self.delays.miss.expand(users, "delays.miss")?,
            self.delays.uncached.expand(users, "delays.uncached")?,
        )?;
        let path = match self.path.model {
            PathKind::Constant => PathModel::Constant,
            PathKind::Mm1 => PathModel::Mm1 { service_rate: self.path.service_rate },
        };
        let p = &self.policy;
        let policy = PolicySpec {
            kind: p.kind.parse().map_err(|_| Error::Config(format!("unknown policy kind {:?}", p.kind)))?,
            cache_size: p.cache_size,
            id_cache_size: p.id_cache_size,
            alpha: p.alpha,
            split: p.split,
            caching_phase_arrivals: p.caching_phase_arrivals,
            refresh_arrivals: p.refresh_arrivals,
            routing_phase_arrivals: p.routing_phase_arrivals,
            estimate_decay: p.estimate_decay,
        };
        let drift = if self.drift.enabled { DriftConfig::new(self.drift.probability)? } else { DriftConfig::disabled() };
        let scenario = Scenario {
            name: self.name.clone(),
            profiles,
            delays,
            path,
            policy,
            drift,
            arrivals: self.arrivals,
            window: self.window,
            seed: self.seed,
            max_queue_backlog: self.path.max_backlog,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
