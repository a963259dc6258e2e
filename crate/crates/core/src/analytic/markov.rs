//! Per-file Markov model of an α-2-LRU cache.
//!
//! States `(i, j)` record whether a file's id is in the id cache (`i`) and
//! its content is in the content cache (`j`) when a request for it arrives.
//! `q_a`, `q_b` and `q_c` are the chain's transition probabilities;
//! [`map_params_from_rate`] derives them from characteristic times.

use super::che::che_solve;
use super::search::{bisect_increasing, expand_upper};
use crate::{Error, Result};

const SIMPLEX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTwoLruParams {
    pub q_a: f64,
    pub q_b: f64,
    pub q_c: f64,
    pub alpha: f64,
}

impl AlphaTwoLruParams {
    pub fn new(q_a: f64, q_b: f64, q_c: f64, alpha: f64) -> Result<Self> {
        if q_a < 0.0 || q_b < 0.0 || q_c < 0.0 || ((q_a + q_b + q_c) - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::invalid(format!("(q_a, q_b, q_c) = ({q_a}, {q_b}, {q_c}) is not on the simplex")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { q_a, q_b, q_c, alpha })
    }
}

/// Stationary probabilities, indexed `(id present, content present)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryVector {
    pub p00: f64,
    pub p10: f64,
    pub p01: f64,
    pub p11: f64,
}

impl StationaryVector {
    pub fn sum(&self) -> f64 {
        self.p00 + self.p10 + self.p01 + self.p11
    }
}

pub fn alpha_two_lru_stationary(params: &AlphaTwoLruParams) -> Result<StationaryVector> {
    let AlphaTwoLruParams { q_a, q_b, q_c, alpha } = *params;
    let denom = 1.0 - (1.0 - alpha) * q_c;
    if denom <= 0.0 {
        return Err(Error::invalid("degenerate chain: (1 - alpha) q_c = 1"));
    }
    let absent = (1.0 - alpha) * q_b / denom;
    Ok(StationaryVector {
        p00: q_b / denom,
        p10: (1.0 - alpha) * q_a * q_b / denom,
        p01: q_c * (1.0 - absent),
        p11: q_a * (1.0 - absent),
    })
}

/// Hit, miss and 4G-deflection probabilities of one file.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccessProbabilities {
    pub hit: f64,
    pub miss: f64,
    pub deflect: f64,
}

pub fn alpha_two_lru_metrics(pi: &StationaryVector, alpha: f64) -> AccessProbabilities {
    AccessProbabilities {
        hit: pi.p01 + pi.p11,
        miss: alpha * pi.p00 + pi.p10,
        deflect: (1.0 - alpha) * pi.p00,
    }
}

/// Maps a file's request rate and the two characteristic times onto the
/// chain parameters, treating the time since the file's last request as the
/// survival clock of both caches:
///
/// * `q_a = P(τ < T_id)`: id still cached at the next request,
/// * `q_c = P(T_id ≤ τ < T_content)`: only the content survived,
/// * `q_b = P(τ ≥ T_content)`: neither survived,
///
/// with `τ ~ Exp(rate)`. The chain assumes the content horizon is at least
/// the id horizon, so `t_content` is raised to `t_id` when shorter; use
/// [`file_access_probabilities`] for the exact general expression.
pub fn map_params_from_rate(rate: f64, t_id: f64, t_content: f64, alpha: f64) -> AlphaTwoLruParams {
    let id_gone = (-rate * t_id).exp();
    let both_gone = (-rate * t_content.max(t_id)).exp();
    AlphaTwoLruParams { q_a: -(-rate * t_id).exp_m1(), q_b: both_gone, q_c: id_gone - both_gone, alpha }
}

/// Access probabilities of one file under the characteristic-time model.
///
/// Matches the closed-form chain whenever `t_content >= t_id`, and stays
/// exact for the renewal model when the id horizon is the longer one.
pub fn file_access_probabilities(rate: f64, t_id: f64, t_content: f64, alpha: f64) -> AccessProbabilities {
    let id_gone = (-rate * t_id).exp();
    let both_gone = (-rate * t_content.max(t_id)).exp();
    let content_survives = -(-rate * t_content).exp_m1();
    let p00 = both_gone / (1.0 - (1.0 - alpha) * (id_gone - both_gone));
    let deflect = (1.0 - alpha) * p00;
    let hit = (1.0 - deflect) * content_survives;
    AccessProbabilities { hit, miss: (1.0 - hit - deflect).max(0.0), deflect }
}

/// Characteristic-time model of a whole α-2-LRU cache.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLruModel {
    pub t_id: f64,
    pub t_content: f64,
    pub per_file: Vec<AccessProbabilities>,
}

impl TwoLruModel {
    /// Rate-weighted access probabilities over the catalog.
    pub fn aggregate(&self, rates: &[f64]) -> AccessProbabilities {
        let total: f64 = rates.iter().sum();
        let mut out = AccessProbabilities::default();
        for (p, &r) in self.per_file.iter().zip(rates) {
            out.hit += r * p.hit;
            out.miss += r * p.miss;
            out.deflect += r * p.deflect;
        }
        out.hit /= total;
        out.miss /= total;
        out.deflect /= total;
        out
    }
}

/// Solves the α-2-LRU model: the id cache sees every request (Che on the
/// raw rates); the content horizon makes the expected number of resident
/// files, `Σ_j p_hit,j`, equal to the content capacity.
pub fn two_lru_model(rates: &[f64], id_capacity: usize, capacity: usize, alpha: f64) -> Result<TwoLruModel> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if capacity == 0 {
        return Err(Error::invalid("content capacity must be positive"));
    }
    let t_id = che_solve(rates, id_capacity)?.characteristic_time;
    let t_content = if capacity >= rates.len() {
        f64::INFINITY
    } else {
        let c = capacity as f64;
        let excess = |t: f64| {
            rates.iter().map(|&r| file_access_probabilities(r, t_id, t, alpha).hit).sum::<f64>() - c
        };
        let lo = c / rates.iter().sum::<f64>();
        let hi = expand_upper(excess, lo).ok_or_else(|| Error::Infeasible("content horizon unbounded".into()))?;
        bisect_increasing(excess, lo.min(hi), hi)
    };
    let per_file = rates.iter().map(|&r| file_access_probabilities(r, t_id, t_content, alpha)).collect();
    Ok(TwoLruModel { t_id, t_content, per_file })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Stream};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn alpha_one_collapses() {
        let p = AlphaTwoLruParams::new(0.2, 0.5, 0.3, 1.0).unwrap();
        let pi = alpha_two_lru_stationary(&p).unwrap();
        assert_eq!((pi.p00, pi.p10, pi.p01, pi.p11), (0.5, 0.0, 0.3, 0.2));
    }

    #[test]
    fn metrics_edge_cases() {
        let p = AlphaTwoLruParams::new(0.3, 0.4, 0.3, 0.0).unwrap();
        let pi = alpha_two_lru_stationary(&p).unwrap();
        let m = alpha_two_lru_metrics(&pi, 0.0);
        assert_eq!(m.miss, pi.p10);
        let m1 = alpha_two_lru_metrics(&alpha_two_lru_stationary(&AlphaTwoLruParams { alpha: 1.0, ..p }).unwrap(), 1.0);
        assert_eq!(m1.deflect, 0.0);
    }

    #[test]
    fn normalization_on_random_simplex() {
        let mut rng = substream(8, Stream::Validation);
        for _ in 0..10_000 {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let (lo, hi) = (u.min(v), u.max(v));
            let p = AlphaTwoLruParams::new(lo, hi - lo, 1.0 - hi, rng.random()).unwrap();
            let pi = alpha_two_lru_stationary(&p).unwrap();
            assert!(close(pi.sum(), 1.0, 1e-12));
            let m = alpha_two_lru_metrics(&pi, p.alpha);
            assert!(close(m.hit + m.miss + m.deflect, 1.0, 1e-12));
        }
    }

    fn rational(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    #[test]
    fn matches_exact_rational_evaluation() {
        let (qa, qb, qc, alpha) = (0.3, 0.4, 0.3, 0.5);
        let pi = alpha_two_lru_stationary(&AlphaTwoLruParams::new(qa, qb, qc, alpha).unwrap()).unwrap();
        // Exact arithmetic on the same binary inputs.
        let one = BigRational::from_integer(BigInt::from(1));
        let (qa, qb, qc, a) = (rational(qa), rational(qb), rational(qc), rational(alpha));
        let na = &one - &a;
        let denom = &one - &na * &qc;
        let p00 = &qb / &denom;
        let p10 = &na * &qa * &qb / &denom;
        let absent = &na * &qb / &denom;
        let p01 = &qc * (&one - &absent);
        let p11 = &qa * (&one - &absent);
        let to_f = |r: &BigRational| -> f64 {
            let scale = BigInt::from(10u64).pow(30);
            let n = (r * BigRational::from_integer(scale.clone())).round().to_integer();
            n.to_string().parse::<f64>().unwrap() / 1e30
        };
        for (got, exact) in [(pi.p00, &p00), (pi.p10, &p10), (pi.p01, &p01), (pi.p11, &p11)] {
            assert!(close(got, to_f(exact), 1e-15), "{got} vs {}", to_f(exact));
        }
        assert_eq!(&p00 + &p10 + &p01 + &p11, one);
    }

    #[test]
    fn rejects_off_simplex() {
        assert!(AlphaTwoLruParams::new(0.5, 0.5, 0.5, 0.5).is_err());
        assert!(AlphaTwoLruParams::new(0.5, 0.5, 0.0, 1.5).is_err());
        let degenerate = AlphaTwoLruParams { q_a: 0.0, q_b: 0.0, q_c: 1.0, alpha: 0.0 };
        assert!(alpha_two_lru_stationary(&degenerate).is_err());
    }

    #[test]
    fn mapping_agrees_with_closed_form_when_content_outlives_id() {
        let mut rng = substream(9, Stream::Validation);
        for _ in 0..1000 {
            let rate = rng.random_range(1e-3..5.0);
            let t_id = rng.random_range(0.0..20.0);
            let t_content = t_id + rng.random_range(0.0..20.0);
            let alpha = rng.random();
            let p = map_params_from_rate(rate, t_id, t_content, alpha);
            assert!(close(p.q_a + p.q_b + p.q_c, 1.0, 1e-12));
            let closed = alpha_two_lru_metrics(&alpha_two_lru_stationary(&p).unwrap(), alpha);
            let general = file_access_probabilities(rate, t_id, t_content, alpha);
            assert!(close(closed.hit, general.hit, 1e-12));
            assert!(close(closed.deflect, general.deflect, 1e-12));
            assert!(close(closed.miss, general.miss, 1e-12));
        }
    }

    #[test]
    fn mapping_limits() {
        let cold = file_access_probabilities(1e-12, 10.0, 10.0, 0.5);
        assert!(cold.hit < 1e-9);
        let hot = file_access_probabilities(1e6, 10.0, 10.0, 0.0);
        assert!(hot.hit > 1.0 - 1e-9);
    }

    #[test]
    fn model_fills_content_capacity() {
        let rates: Vec<f64> = (1..=200).map(|j| (j as f64).powf(-0.8)).collect();
        for alpha in [0.0, 0.5, 1.0] {
            for cid in [5, 20, 150, 200] {
                let m = two_lru_model(&rates, cid, 20, alpha).unwrap();
                let resident: f64 = m.per_file.iter().map(|p| p.hit).sum();
                assert!(close(resident, 20.0, 1e-8));
                for p in &m.per_file {
                    assert!(close(p.hit + p.miss + p.deflect, 1.0, 1e-12));
                }
            }
        }
    }
}
