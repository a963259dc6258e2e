use rand::Rng;

use crate::analytic::{optimal_split_p, top_c, weighted_popularity, PopularityWeighting};
use crate::cache::StaticCache;
use crate::path::{DelayProfile, PathModel};
use crate::workload::UserProfile;
use crate::{Error, Result};

use super::RouteChoice;

/// Static cache of the top-`C` files plus greedy (constant path) or split
/// (M/M/1 path) routing. Needs exact popularities; a benchmark, not an
/// online policy.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPolicy {
    pub cache: StaticCache,
    /// Probability that a request for an uncached file still goes to the cache.
    pub split: f64,
}

impl OptimalPolicy {
    /// Cached files go to the cache; the rest go there with probability
    /// `split`. No coin is drawn when `split` is zero.
    pub fn route<R: Rng + ?Sized>(&self, file: usize, rng: &mut R) -> RouteChoice {
        if self.cache.contains(file) || (self.split > 0.0 && rng.random::<f64>() < self.split) {
            RouteChoice::ToCache
        } else {
            RouteChoice::ToUncached
        }
    }
}

pub fn optimal_policy(
    profiles: &[UserProfile],
    capacity: usize,
    delays: &DelayProfile,
    path: PathModel,
) -> Result<OptimalPolicy> {
    let k = profiles.first().map_or(0, UserProfile::file_count);
    match path {
        PathModel::Constant => {
            let q = weighted_popularity(profiles, delays, PopularityWeighting::DelayGap);
            Ok(OptimalPolicy { cache: StaticCache::new(k, top_c(&q, capacity)), split: 0.0 })
        }
        PathModel::Mm1 { service_rate } => {
            let (_, miss) = delays
                .shared_cache_delays()
                .ok_or_else(|| Error::invalid("congestion-sensitive optimum needs shared hit/miss delays"))?;
            let q = weighted_popularity(profiles, delays, PopularityWeighting::Rate);
            let cache = StaticCache::new(k, top_c(&q, capacity));
            let uncached: f64 = (0..k).filter(|&j| !cache.contains(j)).map(|j| q[j]).sum();
            let split = optimal_split_p(service_rate, miss, uncached)?;
            Ok(OptimalPolicy { cache, split })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::optimal_delay_insensitive;
    use crate::workload::zipf_popularity;

    fn users(k: usize) -> Vec<UserProfile> {
        (0..5).map(|_| UserProfile::new(0.2, zipf_popularity(k, 0.8).unwrap()).unwrap()).collect()
    }

    #[test]
    fn full_cache_routes_everything_to_cache() {
        let profiles = users(30);
        let delays = DelayProfile::homogeneous(5, 1.0, 8.0, 5.0).unwrap();
        let opt = optimal_policy(&profiles, 30, &delays, PathModel::Constant).unwrap();
        assert_eq!(opt.cache.len(), 30);
        assert!((optimal_delay_insensitive(&profiles, opt.cache.mask(), &delays) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn caches_most_popular_files() {
        let profiles = users(100);
        let delays = DelayProfile::homogeneous(5, 1.0, 8.0, 5.0).unwrap();
        let opt = optimal_policy(&profiles, 10, &delays, PathModel::Constant).unwrap();
        assert_eq!(opt.cache.files(), (0..10).collect::<Vec<_>>().as_slice());
        assert_eq!(opt.split, 0.0);
        let sens = optimal_policy(&profiles, 10, &delays, PathModel::Mm1 { service_rate: 0.5 }).unwrap();
        assert_eq!(sens.cache, opt.cache);
        assert!(sens.split > 0.0 && sens.split < 1.0);
    }
}
