use super::search::{bisect_increasing, expand_upper};
use crate::{Error, Result};

/// Characteristic time of an LRU cache and the per-file hit estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct CheSolution {
    /// `t_C` solving `Σ_j (1 − e^{−λ_j t_C}) = C`; infinite when `C >= K`.
    pub characteristic_time: f64,
    pub hit: Vec<f64>,
}

/// Che approximation for an LRU cache of `capacity` files fed with
/// independent Poisson requests at the given per-file `rates`.
pub fn che_solve(rates: &[f64], capacity: usize) -> Result<CheSolution> {
    if capacity == 0 {
        return Err(Error::invalid("cache capacity must be positive"));
    }
    if rates.is_empty() || rates.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::invalid("Che approximation needs positive finite rates"));
    }
    if capacity >= rates.len() {
        return Ok(CheSolution { characteristic_time: f64::INFINITY, hit: vec![1.0; rates.len()] });
    }
    let c = capacity as f64;
    let excess = |t: f64| rates.iter().map(|&r| -(-r * t).exp_m1()).sum::<f64>() - c;
    // 1 − e^{−x} <= x, so C/Σλ is at or below the root.
    let lo = c / rates.iter().sum::<f64>();
    let hi = expand_upper(excess, lo).ok_or_else(|| Error::Infeasible("Che bracket overflowed".into()))?;
    let t = bisect_increasing(excess, lo, hi);
    Ok(CheSolution { characteristic_time: t, hit: rates.iter().map(|&r| -(-r * t).exp_m1()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Stream};
    use rand::Rng;

    #[test]
    fn uniform_rates_give_c_over_k() {
        for rate in [0.01, 1.0, 37.0] {
            let sol = che_solve(&[rate; 10], 3).unwrap();
            for h in sol.hit {
                assert!((h - 0.3).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_files_quadratic_closed_form() {
        // With x = e^{−t}: (1 − x²) + (1 − x) = 1  ⇒  x² + x − 1 = 0.
        let x = (5f64.sqrt() - 1.0) / 2.0;
        let sol = che_solve(&[2.0, 1.0], 1).unwrap();
        assert!((sol.characteristic_time + x.ln()).abs() < 1e-12);
        assert!((sol.hit[0] - (1.0 - x * x)).abs() < 1e-12);
        assert!((sol.hit[1] - (1.0 - x)).abs() < 1e-12);
        assert!((sol.hit[0] - 0.6180).abs() < 1e-4);
    }

    #[test]
    fn hits_sum_to_capacity_on_random_rates() {
        let mut rng = substream(5, Stream::Validation);
        for _ in 0..50 {
            let k = rng.random_range(2..400);
            let rates: Vec<f64> = (0..k).map(|_| rng.random_range(1e-4..10.0)).collect();
            let c = rng.random_range(1..k);
            let sol = che_solve(&rates, c).unwrap();
            let sum: f64 = sol.hit.iter().sum();
            assert!((sum - c as f64).abs() < 1e-9, "{sum} vs {c}");
        }
    }

    #[test]
    fn monotone_in_rate_and_capacity() {
        let rates: Vec<f64> = (1..=50).map(|j| 1.0 / j as f64).collect();
        let a = che_solve(&rates, 10).unwrap();
        let b = che_solve(&rates, 11).unwrap();
        assert!(a.hit.windows(2).all(|w| w[0] > w[1]));
        assert!(a.hit.iter().zip(&b.hit).all(|(x, y)| y > x));
    }

    #[test]
    fn degenerate_capacities() {
        let sol = che_solve(&[1.0, 2.0], 2).unwrap();
        assert!(sol.characteristic_time.is_infinite());
        assert_eq!(sol.hit, vec![1.0, 1.0]);
        assert!(che_solve(&[1.0, 2.0], 0).is_err());
        assert!(che_solve(&[1.0, 0.0], 1).is_err());
    }
}
