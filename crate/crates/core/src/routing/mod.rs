//! User-side routing: greedy, Che-based optimized routing, the optimal
//! static benchmark, and the distributed caching-and-routing agent.

mod dcr;
mod optimal;
mod optimized;

pub use dcr::{DcrAgent, DcrConfig, Phase};
pub use optimal::{optimal_policy, OptimalPolicy};
pub use optimized::{optimized_routing_plan, RoutingPlan};

pub use crate::analytic::dcr_alpha_sensitive;
use crate::path::DelayProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteChoice {
    ToCache,
    ToUncached,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Belief {
    InCache,
    NotInCache,
    #[default]
    Unknown,
}

/// What every user believes about every file's cache membership. Updated
/// only from the delay a user observes when it routes to the cache.
#[derive(Debug, Clone)]
pub struct UserBeliefs {
    beliefs: Vec<Vec<Belief>>,
}

impl UserBeliefs {
    pub fn new(users: usize, file_count: usize) -> Self {
        Self { beliefs: vec![vec![Belief::Unknown; file_count]; users] }
    }

    pub fn get(&self, user: usize, file: usize) -> Belief {
        self.beliefs[user][file]
    }

    /// Records the outcome the user saw: a hit delay means cached, a miss
    /// delay means not cached.
    pub fn observe(&mut self, user: usize, file: usize, hit: bool) {
        self.beliefs[user][file] = if hit { Belief::InCache } else { Belief::NotInCache };
    }
}

/// Cache-agnostic routing on a constant uncached path: pick the path with
/// the lower delay given what the user believes about the cache. Unknown
/// files go to the uncached path.
pub fn greedy_route(belief: Belief, delays: &DelayProfile, user: usize) -> RouteChoice {
    let cache_delay = match belief {
        Belief::InCache => delays.hit(user),
        Belief::NotInCache => delays.miss(user),
        Belief::Unknown => return RouteChoice::ToUncached,
    };
    if cache_delay < delays.uncached(user) {
        RouteChoice::ToCache
    } else {
        RouteChoice::ToUncached
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_follows_belief() {
        let d = DelayProfile::homogeneous(1, 1.0, 8.0, 5.0).unwrap();
        assert_eq!(greedy_route(Belief::InCache, &d, 0), RouteChoice::ToCache);
        assert_eq!(greedy_route(Belief::NotInCache, &d, 0), RouteChoice::ToUncached);
        assert_eq!(greedy_route(Belief::Unknown, &d, 0), RouteChoice::ToUncached);
    }

    #[test]
    fn greedy_is_locally_optimal_per_file() {
        // For a frozen cache state, compare both choices exhaustively.
        for (h, m, u) in [(1.0, 8.0, 5.0), (0.5, 3.0, 0.7), (2.0, 9.0, 8.5), (1.0, 4.0, 6.0)] {
            let d = DelayProfile::homogeneous(1, h, m, u).unwrap();
            for cached in [true, false] {
                let belief = if cached { Belief::InCache } else { Belief::NotInCache };
                let cost = |r: RouteChoice| match r {
                    RouteChoice::ToCache if cached => h,
                    RouteChoice::ToCache => m,
                    RouteChoice::ToUncached => u,
                };
                let chosen = cost(greedy_route(belief, &d, 0));
                assert!(chosen <= cost(RouteChoice::ToCache).min(cost(RouteChoice::ToUncached)));
            }
        }
    }

    #[test]
    fn beliefs_start_unknown() {
        let mut b = UserBeliefs::new(2, 3);
        assert_eq!(b.get(1, 2), Belief::Unknown);
        b.observe(1, 2, true);
        assert_eq!(b.get(1, 2), Belief::InCache);
        b.observe(1, 2, false);
        assert_eq!(b.get(1, 2), Belief::NotInCache);
    }
}
