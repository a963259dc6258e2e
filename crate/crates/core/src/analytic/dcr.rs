//! Caching-phase delay of the distributed algorithm over an M/M/1 path.

use crate::{Error, Result};

/// Smallest caching-phase forwarding probability; estimation needs `α > 0`.
pub const ALPHA_FLOOR: f64 = 0.01;

/// `D(α) = α d̄_c + (1 − α)/(μ − (1 − α)λ)`.
pub fn dcr_caching_phase_delay(alpha: f64, cache_delay: f64, arrival_rate: f64, service_rate: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let residual = (1.0 - alpha) * arrival_rate;
    if residual >= service_rate {
        return Err(Error::UnstableQueue { arrival_rate: residual, service_rate });
    }
    Ok(alpha * cache_delay + (1.0 - alpha) / (service_rate - residual))
}

/// Minimizer of [`dcr_caching_phase_delay`]:
/// `α = (sqrt(μ/d̄_c) − μ + λ̂)/λ̂`, clamped to `[ALPHA_FLOOR, 1]`.
pub fn dcr_alpha_sensitive(arrival_rate: f64, cache_delay: f64, service_rate: f64) -> Result<f64> {
    if !(arrival_rate > 0.0 && cache_delay > 0.0 && service_rate > 0.0) {
        return Err(Error::invalid("rate, cache delay and service rate must be positive"));
    }
    let alpha = ((service_rate / cache_delay).sqrt() - service_rate + arrival_rate) / arrival_rate;
    Ok(alpha.clamp(ALPHA_FLOOR, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_delay_endpoints() {
        assert_eq!(dcr_caching_phase_delay(1.0, 3.0, 1.0, 0.5).unwrap(), 3.0);
        assert_eq!(dcr_caching_phase_delay(0.0, 3.0, 0.25, 0.5).unwrap(), 4.0);
        assert!(dcr_caching_phase_delay(0.0, 3.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn alpha_is_one_when_cache_delay_equals_service_time() {
        // d̄_c = 1/μ: sqrt(μ·μ) = μ.
        assert!((dcr_alpha_sensitive(1.0, 2.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(dcr_alpha_sensitive(1.0, 0.5, 0.5).unwrap(), 1.0);
        assert!(dcr_alpha_sensitive(0.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn alpha_matches_grid_minimizer() {
        let (lambda, mu, dc) = (1.0, 0.5, 4.5);
        let alpha = dcr_alpha_sensitive(lambda, dc, mu).unwrap();
        // Grid over the stable region (1 − μ/λ, 1].
        let lo = 1.0 - mu / lambda;
        let n = 1_000_000;
        let best = (1..=n)
            .map(|i| lo + (1.0 - lo) * i as f64 / n as f64)
            .map(|a| (a, dcr_caching_phase_delay(a, dc, lambda, mu).unwrap()))
            .fold((0.0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        assert!((alpha - best.0).abs() < 1e-4, "{alpha} vs {}", best.0);
        // Convexity along the grid.
        let d = |a: f64| dcr_caching_phase_delay(a, dc, lambda, mu).unwrap();
        for i in 1..99 {
            let (a0, a1, a2) = (lo + 0.005 * i as f64, lo + 0.005 * (i + 1) as f64, lo + 0.005 * (i + 2) as f64);
            assert!(d(a1) <= 0.5 * (d(a0) + d(a2)) + 1e-12);
        }
    }
}
