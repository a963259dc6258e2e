//! Self-checks of the models and the simulator against independent
//! references. Each check reports the observed error and the allowed bound.

use rand::Rng;

use crate::analytic::{
    alpha_two_lru_metrics, alpha_two_lru_stationary, che_solve, optimal_split_p, optimal_uncached_load,
    AlphaTwoLruParams, StationaryVector,
};
use crate::config::ScenarioFile;
use crate::path::{mm1_expected_delay, Mm1Queue};
use crate::rng::{substream, Stream};
use crate::sim::{compare, PolicyKind};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub allowed: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `observed <= allowed`.
    pub fn at_most(name: impl Into<String>, observed: f64, allowed: f64) -> Self {
        Self { name: name.into(), observed, allowed, passed: observed <= allowed }
    }
}

fn random_simplex<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    // Sorted uniforms give a uniform point on the simplex.
    let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
    if u > v {
        std::mem::swap(&mut u, &mut v);
    }
    let (a, b) = (u, v - u);
    (a, b, 1.0 - a - b)
}

/// Stationary vectors are nonnegative and sum to one, and hit + miss +
/// deflect = 1, over `draws` random parameter sets. `observed` is the
/// worst deviation; a negative entry counts as its magnitude.
pub fn normalization_check(
    stationary: impl Fn(&AlphaTwoLruParams) -> Result<StationaryVector>,
    draws: usize,
    seed: u64,
) -> Check {
    let mut rng = substream(seed, Stream::Validation);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let (q_a, q_b, q_c) = random_simplex(&mut rng);
        let alpha = rng.random::<f64>();
        let Ok(params) = AlphaTwoLruParams::new(q_a, q_b, q_c, alpha) else { continue };
        let Ok(pi) = stationary(&params) else {
            worst = f64::INFINITY;
            break;
        };
        let negative = [pi.p00, pi.p10, pi.p01, pi.p11].into_iter().fold(0.0_f64, |m, x| m.max(-x));
        let m = alpha_two_lru_metrics(&pi, alpha);
        worst = worst.max(negative).max((pi.sum() - 1.0).abs()).max((m.hit + m.miss + m.deflect - 1.0).abs());
    }
    Check::at_most("markov stationary normalization", worst, 1e-12)
}

/// `Σ h_j = C` at the computed characteristic time, for random rates.
pub fn che_check(seed: u64) -> Result<Check> {
    let mut rng = substream(seed, Stream::Validation);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.random_range(2..400);
        let rates: Vec<f64> = (0..k).map(|_| rng.random_range(1e-3..10.0)).collect();
        let c = rng.random_range(1..k);
        let sol = che_solve(&rates, c)?;
        worst = worst.max((sol.hit.iter().sum::<f64>() - c as f64).abs() / c as f64);
    }
    // Two files with rates (2, 1) and C = 1: x = e^{-t} solves x² + x = 1.
    let x = (5f64.sqrt() - 1.0) / 2.0;
    let sol = che_solve(&[2.0, 1.0], 1)?;
    worst = worst.max((sol.hit[0] - (1.0 - x * x)).abs()).max((sol.hit[1] - (1.0 - x)).abs());
    Ok(Check::at_most("che occupancy equals capacity", worst, 1e-9))
}

/// Uncached load at the optimal split equals `μ − sqrt(μ/d_m)`.
pub fn split_residual_check(seed: u64) -> Result<Check> {
    let mut rng = substream(seed, Stream::Validation);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let mu = rng.random_range(0.1..5.0);
        let dm = rng.random_range(1.0 / mu..20.0 / mu);
        let target = optimal_uncached_load(mu, dm);
        let demand = rng.random_range(target..target + 10.0 * mu);
        let p = optimal_split_p(mu, dm, demand)?;
        if p <= 0.0 || p >= 1.0 {
            continue;
        }
        n += 1;
        worst = worst.max(((1.0 - p) * demand - target).abs());
    }
    Ok(Check::at_most("optimal split residual", worst, 1e-9))
}

/// Relative error of the simulated M/M/1 mean sojourn against `1/(μ − λ)`
/// at `μ = 0.5`, over `jobs` jobs per load.
pub fn mm1_check(jobs: u64, seed: u64) -> Result<Check> {
    let mu = 0.5;
    let mut worst: f64 = 0.0;
    for (i, lambda) in [0.1, 0.25, 0.4].into_iter().enumerate() {
        let mut arrivals = substream(seed + i as u64, Stream::Arrivals);
        let mut service = substream(seed + i as u64, Stream::Service);
        let gap = rand_distr::Exp::new(lambda).expect("positive rate");
        let mut q = Mm1Queue::new(mu)?;
        let (mut t, mut total) = (0.0, 0.0);
        for _ in 0..jobs {
            t += arrivals.sample(gap);
            total += q.submit(t, &mut service)? - t;
        }
        let expected = mm1_expected_delay(mu, lambda)?;
        worst = worst.max((total / jobs as f64 - expected).abs() / expected);
    }
    Ok(Check::at_most("m/m/1 mean sojourn, relative error", worst, 0.02))
}

/// Largest shortfall, in standard errors, of any policy's mean delay below
/// the optimal policy's on a reduced centralized scenario.
pub fn dominance_check(arrivals: u64, replications: usize, seed: u64) -> Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    for c in [100, 300] {
        let mut f = ScenarioFile::with_seed(seed);
        f.arrivals = arrivals;
        f.policy.cache_size = c;
        let kinds = [
            PolicyKind::Optimal,
            PolicyKind::Lru,
            PolicyKind::OptimizedCaching,
            PolicyKind::OptimizedRouting,
            PolicyKind::Dcr,
            PolicyKind::Dcor,
        ];
        let scenarios = kinds
            .iter()
            .map(|k| {
                let mut g = f.clone();
                g.policy.kind = k.name().into();
                g.to_scenario()
            })
            .collect::<Result<Vec<_>>>()?;
        let results = compare(&scenarios, replications)?;
        let optimal = &results[0];
        for r in &results[1..] {
            let se = optimal.std_error().hypot(r.std_error()).max(f64::MIN_POSITIVE);
            worst = worst.max((optimal.mean() - r.mean()) / se);
        }
    }
    Ok(Check::at_most("optimal dominance, worst shortfall in std errors", worst, 3.0))
}

/// The full suite with default sizes.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    Ok(vec![
        normalization_check(alpha_two_lru_stationary, 10_000, seed),
        che_check(seed)?,
        split_residual_check(seed)?,
        mm1_check(1_000_000, seed)?,
        dominance_check(200_000, 5, seed)?,
    ])
}

/// Fixed-width table: name, observed, allowed, verdict.
pub fn format_report(checks: &[Check]) -> String {
    let mut out = format!("{:<52} {:>14} {:>14}  result\n", "check", "observed", "allowed");
    for c in checks {
        out.push_str(&format!(
            "{:<52} {:>14.6e} {:>14.6e}  {}\n",
            c.name,
            c.observed,
            c.allowed,
            if c.passed { "PASS" } else { "FAIL" }
        ));
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_passes_on_closed_forms() {
        assert!(normalization_check(alpha_two_lru_stationary, 2_000, 1).passed);
    }

    #[test]
    fn normalization_catches_corrupted_formula() {
        let corrupted = |p: &AlphaTwoLruParams| {
            let mut pi = alpha_two_lru_stationary(p)?;
            // Drop the (1 − α) factor from the (1, 0) state.
            pi.p10 = p.q_a * p.q_b / (1.0 - (1.0 - p.alpha) * p.q_c);
            Ok(pi)
        };
        let check = normalization_check(corrupted, 2_000, 1);
        assert!(!check.passed, "{check:?}");
    }

    #[test]
    fn analytic_checks_pass() {
        assert!(che_check(2).unwrap().passed);
        assert!(split_residual_check(2).unwrap().passed);
    }

    #[test]
    fn report_has_one_line_per_check() {
        let checks = vec![Check::at_most("a", 1.0, 2.0), Check::at_most("b", 3.0, 2.0)];
        let text = format_report(&checks);
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().ends_with("PASS"));
        assert!(text.lines().nth(2).unwrap().ends_with("FAIL"));
    }
}
