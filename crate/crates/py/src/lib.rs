//! Python bindings: the analytic models, the cache policies, and scenario
//! runs driven by TOML text.

use cacheroute::analytic::{self, AlphaTwoLruParams, CentralizedParams};
use cacheroute::cache::{self, CacheOutcome, OutcomeKind};
use cacheroute::config::ScenarioFile;
use cacheroute::experiments;
use cacheroute::rng::{substream, SimRng, Stream};
use cacheroute::{path, sim, validate, workload, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    if e.is_config() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn outcome_name(o: CacheOutcome) -> &'static str {
    match o.kind {
        OutcomeKind::Hit => "hit",
        OutcomeKind::Miss => "miss",
        OutcomeKind::Deflect4G => "deflect",
    }
}

fn check_file(file: usize, k: usize) -> PyResult<()> {
    if file < k {
        Ok(())
    } else {
        Err(PyValueError::new_err(format!("file {file} outside catalog of {k}")))
    }
}

/// Zipf popularity vector over `files` files.
#[pyfunction]
fn zipf_popularity(files: usize, skew: f64) -> PyResult<Vec<f64>> {
    workload::zipf_popularity(files, skew).map_err(py_err)
}

/// Che characteristic time and per-file LRU hit probabilities.
#[pyfunction]
fn che_solve(rates: Vec<f64>, capacity: usize) -> PyResult<(f64, Vec<f64>)> {
    let s = analytic::che_solve(&rates, capacity).map_err(py_err)?;
    Ok((s.characteristic_time, s.hit))
}

/// Stationary vector `(p00, p10, p01, p11)` of the α-2-LRU chain.
#[pyfunction]
fn alpha_two_lru_stationary(q_a: f64, q_b: f64, q_c: f64, alpha: f64) -> PyResult<(f64, f64, f64, f64)> {
    let p = AlphaTwoLruParams::new(q_a, q_b, q_c, alpha).map_err(py_err)?;
    let pi = analytic::alpha_two_lru_stationary(&p).map_err(py_err)?;
    Ok((pi.p00, pi.p10, pi.p01, pi.p11))
}

/// `(hit, miss, deflect)` probabilities of the α-2-LRU chain.
#[pyfunction]
fn alpha_two_lru_metrics(q_a: f64, q_b: f64, q_c: f64, alpha: f64) -> PyResult<(f64, f64, f64)> {
    let p = AlphaTwoLruParams::new(q_a, q_b, q_c, alpha).map_err(py_err)?;
    let pi = analytic::alpha_two_lru_stationary(&p).map_err(py_err)?;
    let m = analytic::alpha_two_lru_metrics(&pi, alpha);
    Ok((m.hit, m.miss, m.deflect))
}

/// Rate-weighted `(hit, miss, deflect)` of an α-2-LRU cache.
#[pyfunction]
fn two_lru_model(rates: Vec<f64>, id_capacity: usize, capacity: usize, alpha: f64) -> PyResult<(f64, f64, f64)> {
    let m = analytic::two_lru_model(&rates, id_capacity, capacity, alpha).map_err(py_err)?.aggregate(&rates);
    Ok((m.hit, m.miss, m.deflect))
}

#[pyfunction]
fn optimal_split_p(service_rate: f64, miss_delay: f64, uncached_demand: f64) -> PyResult<f64> {
    analytic::optimal_split_p(service_rate, miss_delay, uncached_demand).map_err(py_err)
}

#[pyfunction]
fn mm1_expected_delay(service_rate: f64, arrival_rate: f64) -> PyResult<f64> {
    path::mm1_expected_delay(service_rate, arrival_rate).map_err(py_err)
}

#[pyfunction]
fn dcr_alpha_sensitive(rate: f64, cache_delay: f64, service_rate: f64) -> PyResult<f64> {
    analytic::dcr_alpha_sensitive(rate, cache_delay, service_rate).map_err(py_err)
}

fn centralized(
    rates: Vec<f64>,
    capacity: usize,
    id_capacity: Option<usize>,
    hit_delay: f64,
    miss_delay: f64,
    service_rate: f64,
) -> CentralizedParams {
    CentralizedParams { rates, capacity, id_capacity: id_capacity.unwrap_or(capacity), hit_delay, miss_delay, service_rate }
}

/// `(alpha*, delay)` for α-2-LRU over an M/M/1 uncached path.
#[pyfunction]
#[pyo3(signature = (rates, capacity, hit_delay, miss_delay, service_rate, id_capacity=None))]
fn optimize_alpha(
    rates: Vec<f64>,
    capacity: usize,
    hit_delay: f64,
    miss_delay: f64,
    service_rate: f64,
    id_capacity: Option<usize>,
) -> PyResult<(f64, f64)> {
    analytic::optimize_alpha(&centralized(rates, capacity, id_capacity, hit_delay, miss_delay, service_rate))
        .map_err(py_err)
}

/// `(id_capacity*, delay)` for plain 2-LRU over an M/M/1 uncached path.
#[pyfunction]
fn optimize_id_cache_size(
    rates: Vec<f64>,
    capacity: usize,
    hit_delay: f64,
    miss_delay: f64,
    service_rate: f64,
) -> PyResult<(usize, f64)> {
    analytic::optimize_id_cache_size(&centralized(rates, capacity, None, hit_delay, miss_delay, service_rate))
        .map_err(py_err)
}

#[pyclass(name = "LruCache")]
struct PyLruCache {
    inner: cache::LruCache,
    files: usize,
}

#[pymethods]
impl PyLruCache {
    #[new]
    fn new(capacity: usize, files: usize) -> PyResult<Self> {
        if capacity == 0 || files == 0 {
            return Err(PyValueError::new_err("capacity and catalog size must be positive"));
        }
        Ok(Self { inner: cache::LruCache::new(capacity, files), files })
    }

    /// Returns "hit" or "miss".
    #[pyo3(signature = (file, admit=true))]
    fn access(&mut self, file: usize, admit: bool) -> PyResult<&'static str> {
        check_file(file, self.files)?;
        Ok(outcome_name(self.inner.access(file, admit)))
    }

    fn __contains__(&self, file: usize) -> bool {
        file < self.files && self.inner.contains(file)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Contents, most recent first.
    fn contents(&self) -> Vec<usize> {
        self.inner.iter().collect()
    }

    fn snapshot(&self) -> String {
        self.inner.snapshot()
    }
}

#[pyclass(name = "TwoLruCache")]
struct PyTwoLruCache {
    inner: cache::TwoLruCache,
    rng: SimRng,
    files: usize,
}

#[pymethods]
impl PyTwoLruCache {
    #[new]
    #[pyo3(signature = (id_capacity, capacity, files, alpha=0.0, seed=0))]
    fn new(id_capacity: usize, capacity: usize, files: usize, alpha: f64, seed: u64) -> PyResult<Self> {
        let inner = cache::TwoLruCache::new(id_capacity, capacity, files, alpha).map_err(py_err)?;
        Ok(Self { inner, rng: substream(seed, Stream::Cache), files })
    }

    /// Returns "hit", "miss" or "deflect".
    fn access(&mut self, file: usize) -> PyResult<&'static str> {
        check_file(file, self.files)?;
        Ok(outcome_name(self.inner.access_alpha(file, &mut self.rng)))
    }

    fn mirror_consistent(&self) -> bool {
        self.inner.mirror_consistent()
    }

    fn snapshot(&self) -> String {
        self.inner.snapshot()
    }
}

fn scenario_from(text: &str, overrides: Vec<String>) -> PyResult<ScenarioFile> {
    let mut f = ScenarioFile::from_toml(text).map_err(py_err)?;
    for o in &overrides {
        f.apply_override(o).map_err(py_err)?;
    }
    Ok(f)
}

/// Runs a TOML scenario. Returns a dict with the mean delay, outcome
/// counts and the run CSV.
#[pyfunction]
#[pyo3(signature = (toml, overrides=Vec::new()))]
fn run_scenario<'py>(py: Python<'py>, toml: &str, overrides: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let mut s = scenario_from(toml, overrides)?.to_scenario().map_err(py_err)?;
    experiments::tune_two_lru(&mut s).map_err(py_err)?;
    let report = py.detach(|| sim::run(&s)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("policy", report.policy.name())?;
    out.set_item("arrivals", report.arrivals)?;
    out.set_item("mean_delay", report.mean_delay())?;
    out.set_item("hits", report.counts.hits)?;
    out.set_item("misses", report.counts.misses)?;
    out.set_item("deflects", report.counts.deflects)?;
    out.set_item("uncached", report.counts.uncached)?;
    out.set_item("csv", experiments::run_csv(&report))?;
    Ok(out)
}

/// Analytic delay of the static optimum for a TOML scenario.
#[pyfunction]
fn analytic_optimum(toml: &str) -> PyResult<f64> {
    let s = scenario_from(toml, Vec::new())?.to_scenario().map_err(py_err)?;
    sim::analytic_optimum(&s).map_err(py_err)
}

/// `(name, description, policies)` for each preset.
#[pyfunction]
fn presets() -> Vec<(String, String, Vec<String>)> {
    experiments::presets()
        .into_iter()
        .map(|p| (p.name.into(), p.description.into(), p.policies.iter().map(|k| k.name().into()).collect()))
        .collect()
}

/// Self-checks as `(name, observed, allowed, passed)`.
#[pyfunction]
#[pyo3(signature = (seed=1))]
fn run_validation(py: Python<'_>, seed: u64) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let checks = py.detach(|| validate::run_all(seed)).map_err(py_err)?;
    Ok(checks.into_iter().map(|c| (c.name, c.observed, c.allowed, c.passed)).collect())
}

#[pymodule]
#[pyo3(name = "cacheroute")]
fn cacheroute_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(zipf_popularity, m)?)?;
    m.add_function(wrap_pyfunction!(che_solve, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_two_lru_stationary, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_two_lru_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(two_lru_model, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_split_p, m)?)?;
    m.add_function(wrap_pyfunction!(mm1_expected_delay, m)?)?;
    m.add_function(wrap_pyfunction!(dcr_alpha_sensitive, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_id_cache_size, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(run_validation, m)?)?;
    m.add_class::<PyLruCache>()?;
    m.add_class::<PyTwoLruCache>()?;
    Ok(())
}
