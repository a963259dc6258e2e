//! Preset experiments and parameter sweeps, written as CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analytic::{optimize_alpha, optimize_id_cache_size, two_lru_model, CentralizedParams};
use crate::config::{PathKind, ScenarioFile};
use crate::path::PathModel;
use crate::sim::{analytic_optimum, compare, run, PolicyKind, RunReport, Scenario};
use crate::workload::aggregate_rates;
use crate::{Error, Result};

/// Column order of a run CSV.
pub const RUN_COLUMNS: [&str; 6] =
    ["window_end_arrivals", "mean_delay", "hit_rate", "miss_rate", "deflect_rate", "uncached_rate"];

/// One CSV row per metrics window. `mean_delay` is the running mean since
/// the start of the run; the rates are those of the window.
pub fn run_csv(report: &RunReport) -> String {
    let mut out = RUN_COLUMNS.join(",");
    out.push('\n');
    for w in &report.windows {
        let [h, m, d, u] = w.window_counts.rates();
        writeln!(out, "{},{},{},{},{},{}", w.end_arrivals, w.cumulative_mean_delay(), h, m, d, u).unwrap();
    }
    out
}

/// Named scenario family. Each policy in `policies` runs on the same
/// workload and seed.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub base: ScenarioFile,
    pub policies: Vec<PolicyKind>,
}

/// Command-line adjustments to a preset.
#[derive(Debug, Clone, Default)]
pub struct PresetOptions {
    pub seed: Option<u64>,
    pub arrivals: Option<u64>,
    pub cache_size: Option<usize>,
    pub path: Option<PathKind>,
    pub overrides: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 1;

fn base(name: &str) -> ScenarioFile {
    let mut f = ScenarioFile::with_seed(DEFAULT_SEED);
    f.name = name.into();
    f
}

pub fn presets() -> Vec<Preset> {
    use PolicyKind::*;
    let centralized = base("paper-centralized");
    let mut dcr = base("paper-dcr");
    dcr.drift.enabled = true;
    let mut two_lru = base("paper-two-lru");
    two_lru.path.model = PathKind::Mm1;
    vec![
        Preset {
            name: "paper-centralized",
            description: "LRU, optimized caching, optimized routing and optimal on a constant uncached path",
            base: centralized,
            policies: vec![Lru, OptimizedCaching, OptimizedRouting, Optimal],
        },
        Preset {
            name: "paper-dcr",
            description: "DCR, DCOR and optimal under popularity drift; --path mm1 for the congested case",
            base: dcr,
            policies: vec![Dcr, Dcor, Optimal],
        },
        Preset {
            name: "paper-two-lru",
            description: "2-LRU with model-optimal id-cache size, alpha-2-LRU with model-optimal alpha, and static optimal on an M/M/1 path",
            base: two_lru,
            policies: vec![TwoLru, AlphaTwoLru, Optimal],
        },
    ]
}

pub fn find_preset(name: &str) -> Result<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))
}

impl Preset {
    /// The preset's scenario file after applying `opts`, with the policy
    /// left at the base's.
    pub fn file(&self, opts: &PresetOptions) -> Result<ScenarioFile> {
        let mut f = self.base.clone();
        if let Some(seed) = opts.seed {
            f.seed = seed;
        }
        if let Some(n) = opts.arrivals {
            f.arrivals = n;
        }
        if let Some(c) = opts.cache_size {
            f.policy.cache_size = c;
        }
        if let Some(p) = opts.path {
            f.path.model = p;
        }
        for o in &opts.overrides {
            f.apply_override(o)?;
        }
        Ok(f)
    }

    /// One scenario per policy. For 2-LRU policies without an explicit id
    /// size or α, the model optimum is used.
    pub fn scenarios(&self, opts: &PresetOptions) -> Result<Vec<Scenario>> {
        let file = self.file(opts)?;
        self.policies
            .iter()
            .map(|&kind| {
                let mut f = file.clone();
                f.policy.kind = kind.name().into();
                let mut s = f.to_scenario()?;
                tune_two_lru(&mut s)?;
                Ok(s)
            })
            .collect()
    }

    pub fn run(&self, opts: &PresetOptions) -> Result<Vec<RunReport>> {
        self.scenarios(opts)?.iter().map(run).collect()
    }
}

fn centralized_params(s: &Scenario) -> Result<CentralizedParams> {
    let PathModel::Mm1 { service_rate } = s.path else {
        return Err(Error::invalid("2-LRU tuning needs an M/M/1 uncached path"));
    };
    let (hit, miss) = s
        .delays
        .shared_cache_delays()
        .ok_or_else(|| Error::invalid("2-LRU tuning needs hit and miss delays shared by all users"))?;
    Ok(CentralizedParams {
        rates: aggregate_rates(&s.profiles),
        capacity: s.policy.cache_size,
        id_capacity: s.policy.id_cache_size(),
        hit_delay: hit,
        miss_delay: miss,
        service_rate,
    })
}

/// Fills in the model-optimal id size (2-LRU) or α (α-2-LRU) when the
/// scenario leaves it unset and the path is M/M/1.
pub fn tune_two_lru(s: &mut Scenario) -> Result<()> {
    if !s.path.is_congestion_sensitive() {
        return Ok(());
    }
    match s.policy.kind {
        PolicyKind::TwoLru if s.policy.id_cache_size.is_none() => {
            s.policy.id_cache_size = Some(optimize_id_cache_size(&centralized_params(s)?)?.0);
        }
        PolicyKind::AlphaTwoLru if s.policy.alpha.is_none() => {
            s.policy.alpha = Some(optimize_alpha(&centralized_params(s)?)?.0);
        }
        _ => {}
    }
    Ok(())
}

/// Numeric table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDimension {
    CacheSize,
    Alpha,
    IdCacheSize,
}

impl FromStr for SweepDimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cache_size" => Ok(SweepDimension::CacheSize),
            "alpha" => Ok(SweepDimension::Alpha),
            "id_cache_size" => Ok(SweepDimension::IdCacheSize),
            _ => Err(Error::Config(format!("unknown sweep dimension {s:?}; use cache_size, alpha or id_cache_size"))),
        }
    }
}

/// Parses `start:end:step` (inclusive of `end` up to rounding) or a
/// comma-separated list.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad range {text:?}; use start:end:step or a,b,c"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(bad());
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * step).map(|x| (x * 1e12).round() / 1e12).collect())
        }
        [single] => single.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

fn as_size(x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 {
        Ok(x as usize)
    } else {
        Err(Error::Config(format!("{x} is not a size")))
    }
}

/// Runs a sweep over `values` of `dimension`.
///
/// * `cache_size`: mean delay and standard error per policy over
///   `replications` paired runs.
/// * `alpha`: simulated and model hit, miss and deflect probabilities of
///   α-2-LRU, averaged over replications.
/// * `id_cache_size`: model and simulated delay of 2-LRU and the static
///   optimum as reference; needs an M/M/1 path.
pub fn sweep(
    dimension: SweepDimension,
    file: &ScenarioFile,
    policies: &[PolicyKind],
    values: &[f64],
    replications: usize,
) -> Result<Table> {
    if values.is_empty() {
        return Err(Error::Config("empty sweep range".into()));
    }
    match dimension {
        SweepDimension::CacheSize => sweep_cache_size(file, policies, values, replications),
        SweepDimension::Alpha => sweep_alpha(file, values, replications),
        SweepDimension::IdCacheSize => sweep_id_cache_size(file, values, replications),
    }
}

fn with_policy(file: &ScenarioFile, kind: PolicyKind) -> ScenarioFile {
    let mut f = file.clone();
    f.policy.kind = kind.name().into();
    f
}

fn sweep_cache_size(file: &ScenarioFile, policies: &[PolicyKind], values: &[f64], replications: usize) -> Result<Table> {
    let mut columns = vec!["cache_size".to_string()];
    for p in policies {
        columns.push(format!("{p}_mean_delay"));
        columns.push(format!("{p}_std_error"));
    }
    let mut rows = Vec::new();
    for &v in values {
        let c = as_size(v)?;
        let scenarios = policies
            .iter()
            .map(|&k| {
                let mut f = with_policy(file, k);
                f.policy.cache_size = c;
                let mut s = f.to_scenario()?;
                tune_two_lru(&mut s)?;
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut row = vec![v];
        for r in compare(&scenarios, replications)? {
            row.push(r.mean());
            row.push(r.std_error());
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

fn mean_rates(scenario: &Scenario, replications: usize) -> Result<[f64; 4]> {
    let mut acc = [0.0; 4];
    for r in 0..replications.max(1) as u64 {
        let mut s = scenario.clone();
        s.seed = crate::rng::replication_seed(scenario.seed, r);
        let rates = run(&s)?.counts.rates();
        acc.iter_mut().zip(rates).for_each(|(a, x)| *a += x);
    }
    Ok(acc.map(|a| a / replications.max(1) as f64))
}

fn sweep_alpha(file: &ScenarioFile, values: &[f64], replications: usize) -> Result<Table> {
    let columns = ["alpha", "sim_hit", "sim_miss", "sim_deflect", "model_hit", "model_miss", "model_deflect"];
    let mut rows = Vec::new();
    for &alpha in values {
        let mut f = with_policy(file, PolicyKind::AlphaTwoLru);
        f.policy.alpha = Some(alpha);
        let s = f.to_scenario()?;
        let [hit, miss, deflect, _] = mean_rates(&s, replications)?;
        let rates = aggregate_rates(&s.profiles);
        let model = two_lru_model(&rates, s.policy.id_cache_size(), s.policy.cache_size, alpha)?.aggregate(&rates);
        rows.push(vec![alpha, hit, miss, deflect, model.hit, model.miss, model.deflect]);
    }
    Ok(Table { columns: columns.map(String::from).to_vec(), rows })
}

fn sweep_id_cache_size(file: &ScenarioFile, values: &[f64], replications: usize) -> Result<Table> {
    let columns = ["id_cache_size", "model_mean_delay", "sim_mean_delay", "sim_std_error", "static_optimal_delay"];
    let base = with_policy(file, PolicyKind::TwoLru).to_scenario()?;
    let params = centralized_params(&base)?;
    let static_optimal = analytic_optimum(&base)?;
    let mut rows = Vec::new();
    for &v in values {
        let id = as_size(v)?;
        let mut s = base.clone();
        s.policy.id_cache_size = Some(id);
        s.validate()?;
        let model = params.delay(id, 0.0)?;
        let (sim, se) = match compare(std::slice::from_ref(&s), replications) {
            Ok(r) => (r[0].mean(), r[0].std_error()),
            Err(Error::Aborted(_)) => (f64::INFINITY, f64::NAN),
            Err(e) => return Err(e),
        };
        rows.push(vec![v, model, sim, se, static_optimal]);
    }
    Ok(Table { columns: columns.map(String::from).to_vec(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_range("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_range("0:1:0.1").unwrap()[3], 0.3);
        assert_eq!(parse_range("10,20, 50").unwrap(), vec![10.0, 20.0, 50.0]);
        assert!(parse_range("1:0:1").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn presets_build() {
        let opts = PresetOptions { arrivals: Some(1000), ..Default::default() };
        for p in presets() {
            let s = p.scenarios(&opts).unwrap();
            assert_eq!(s.len(), p.policies.len());
        }
        let dcr = find_preset("paper-dcr").unwrap();
        let mm1 = PresetOptions { path: Some(PathKind::Mm1), ..opts };
        assert!(dcr.scenarios(&mm1).unwrap().iter().all(|s| s.path.is_congestion_sensitive()));
        assert!(find_preset("nope").is_err());
    }

    #[test]
    fn two_lru_preset_is_tuned() {
        let s = find_preset("paper-two-lru").unwrap().scenarios(&PresetOptions::default()).unwrap();
        assert!(s[0].policy.id_cache_size.is_some());
        assert!(s[1].policy.alpha.is_some());
    }

    #[test]
    fn run_csv_layout() {
        let mut f = ScenarioFile::with_seed(3);
        f.arrivals = 25;
        f.window = 10;
        f.catalog.files = 50;
        f.policy.cache_size = 5;
        let csv = run_csv(&run(&f.to_scenario().unwrap()).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], RUN_COLUMNS.join(","));
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("25,"));
    }
}
