use crate::analytic::{che_solve, CheSolution};
use crate::path::DelayProfile;
use crate::workload::{aggregate_rates, UserProfile};
use crate::Result;

use super::RouteChoice;

/// A priori per-user, per-file route computed before the run starts.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingPlan {
    to_cache: Vec<Vec<bool>>,
    pub che: CheSolution,
}

impl RoutingPlan {
    pub fn route(&self, user: usize, file: usize) -> RouteChoice {
        if self.to_cache[user][file] {
            RouteChoice::ToCache
        } else {
            RouteChoice::ToUncached
        }
    }

    /// Number of files that at least one user routes to the cache.
    pub fn cache_bound_files(&self) -> usize {
        let k = self.to_cache[0].len();
        (0..k).filter(|&j| self.to_cache.iter().any(|u| u[j])).count()
    }
}

/// "Optimized Routing": estimate LRU hit probabilities with the Che
/// approximation as if all traffic went to the cache, then route file `j`
/// to the cache iff `h_j d_h + (1 − h_j) d_m < d_0`.
pub fn optimized_routing_plan(profiles: &[UserProfile], capacity: usize, delays: &DelayProfile) -> Result<RoutingPlan> {
    let che = che_solve(&aggregate_rates(profiles), capacity)?;
    let to_cache = (0..profiles.len())
        .map(|i| {
            che.hit
                .iter()
                .map(|&h| h * delays.hit(i) + (1.0 - h) * delays.miss(i) < delays.uncached(i))
                .collect()
        })
        .collect();
    Ok(RoutingPlan { to_cache, che })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::zipf_popularity;

    #[test]
    fn threshold_is_three_sevenths() {
        // h·1 + (1 − h)·8 < 5  ⇔  h > 3/7
        let profiles = vec![UserProfile::new(1.0, zipf_popularity(300, 0.8).unwrap()).unwrap()];
        let delays = DelayProfile::homogeneous(1, 1.0, 8.0, 5.0).unwrap();
        for c in [10, 50, 150] {
            let plan = optimized_routing_plan(&profiles, c, &delays).unwrap();
            for (j, &h) in plan.che.hit.iter().enumerate() {
                let expect = if h > 3.0 / 7.0 { RouteChoice::ToCache } else { RouteChoice::ToUncached };
                assert_eq!(plan.route(0, j), expect);
            }
        }
    }

    #[test]
    fn boundary_hit_probabilities() {
        let profiles = vec![UserProfile::new(1.0, vec![0.5, 0.5]).unwrap()];
        let delays = DelayProfile::homogeneous(1, 1.0, 8.0, 5.0).unwrap();
        // C = K: every h_j = 1.
        let plan = optimized_routing_plan(&profiles, 2, &delays).unwrap();
        assert_eq!(plan.route(0, 0), RouteChoice::ToCache);
        assert_eq!(plan.cache_bound_files(), 2);
    }
}
