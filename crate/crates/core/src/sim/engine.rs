use super::metrics::{Accumulator, Counts, MetricsWindow};
use super::scenario::{PolicyKind, Scenario};
use crate::cache::{LruCache, OutcomeKind, TwoLruCache};
use crate::path::{Mm1Queue, PathModel};
use crate::rng::{substream, SimRng, Stream};
use crate::routing::{
    optimal_policy, optimized_routing_plan, Belief, DcrAgent, DcrConfig, OptimalPolicy, Phase, RouteChoice, RoutingPlan,
    UserBeliefs,
};
use crate::workload::{RequestGenerator, UserProfile};
use crate::{Error, Result};

/// How a request was served.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Served {
    Hit,
    Miss,
    /// Sent to the cache but redirected to the uncached path (2-LRU double miss).
    Deflected,
    /// Routed to the uncached path by the user.
    Uncached,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequestRecord {
    pub time: f64,
    pub user: usize,
    pub file: usize,
    pub route: RouteChoice,
    pub served: Served,
    pub delay: f64,
    /// DCR and DCOR only.
    pub phase: Option<Phase>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub name: String,
    pub policy: PolicyKind,
    pub seed: u64,
    pub arrivals: u64,
    pub total_delay: f64,
    pub counts: Counts,
    pub windows: Vec<MetricsWindow>,
    pub end_time: f64,
    pub drift_events: u64,
    /// Policy-specific end-of-run values, e.g. the DCR split.
    pub auxiliary: Vec<(&'static str, f64)>,
}

impl RunReport {
    pub fn mean_delay(&self) -> f64 {
        self.total_delay / self.arrivals as f64
    }

    /// Mean delay over the arrivals after the first `skip`, from window
    /// boundaries. `skip` is rounded down to a window boundary.
    pub fn tail_mean_delay(&self, skip: u64) -> f64 {
        let start = self.windows.iter().rev().find(|w| w.end_arrivals <= skip);
        let (n0, d0) = start.map_or((0, 0.0), |w| (w.end_arrivals, w.cumulative_delay));
        (self.total_delay - d0) / (self.arrivals - n0) as f64
    }
}

enum PolicyState {
    /// LRU, optionally behind an a-priori routing plan.
    Lru { cache: LruCache, plan: Option<RoutingPlan> },
    /// Static top-`C` set from true popularities, recomputed on drift.
    Static { policy: OptimalPolicy, route_all: bool },
    Dcr { agent: DcrAgent, beliefs: Option<UserBeliefs> },
    TwoLru { cache: TwoLruCache, coin: bool },
}

struct Streams {
    arrivals: SimRng,
    drift: SimRng,
    routing: SimRng,
    service: SimRng,
    cache: SimRng,
}

impl Streams {
    fn new(seed: u64) -> Self {
        Self {
            arrivals: substream(seed, Stream::Arrivals),
            drift: substream(seed, Stream::Drift),
            routing: substream(seed, Stream::Routing),
            service: substream(seed, Stream::Service),
            cache: substream(seed, Stream::Cache),
        }
    }
}

fn build_policy(s: &Scenario) -> Result<PolicyState> {
    let spec = &s.policy;
    let k = s.file_count();
    Ok(match spec.kind {
        PolicyKind::Lru => PolicyState::Lru { cache: LruCache::new(spec.cache_size, k), plan: None },
        PolicyKind::OptimizedRouting => PolicyState::Lru {
            cache: LruCache::new(spec.cache_size, k),
            plan: Some(optimized_routing_plan(&s.profiles, spec.cache_size, &s.delays)?),
        },
        PolicyKind::OptimizedCaching | PolicyKind::Optimal => PolicyState::Static {
            policy: optimal_policy(&s.profiles, spec.cache_size, &s.delays, s.path)?,
            route_all: spec.kind == PolicyKind::OptimizedCaching,
        },
        PolicyKind::Dcr | PolicyKind::Dcor => {
            let (hit, miss) = s
                .delays
                .shared_cache_delays()
                .ok_or_else(|| Error::invalid("DCR needs hit and miss delays shared by all users"))?;
            let mut cfg = DcrConfig::new(spec.cache_size, s.path, hit, miss);
            if let Some(a) = spec.alpha {
                cfg.alpha = a;
            }
            if let Some(p) = spec.split {
                cfg.split = p;
            }
            cfg.caching_phase_arrivals = spec.caching_phase_arrivals;
            cfg.refresh_arrivals = spec.refresh_arrivals;
            cfg.routing_phase_arrivals = spec.routing_phase_arrivals;
            cfg.estimate_decay = spec.estimate_decay;
            let beliefs = (spec.kind == PolicyKind::Dcr).then(|| UserBeliefs::new(s.profiles.len(), k));
            PolicyState::Dcr { agent: DcrAgent::new(cfg, k)?, beliefs }
        }
        PolicyKind::TwoLru => PolicyState::TwoLru {
            cache: TwoLruCache::new(spec.id_cache_size(), spec.cache_size, k, 0.0)?,
            coin: false,
        },
        PolicyKind::AlphaTwoLru => PolicyState::TwoLru {
            cache: TwoLruCache::new(spec.id_cache_size(), spec.cache_size, k, spec.alpha.unwrap_or(0.5))?,
            coin: true,
        },
    })
}

fn cache_outcome(hit: bool) -> Served {
    if hit {
        Served::Hit
    } else {
        Served::Miss
    }
}

impl PolicyState {
    /// Routes and serves one request; returns the route, the outcome and
    /// the DCR phase.
    fn serve(&mut self, user: usize, file: usize, time: f64, rng: &mut Streams) -> (RouteChoice, Served, Option<Phase>) {
        use RouteChoice::*;
        match self {
            PolicyState::Lru { cache, plan } => {
                if plan.as_ref().is_some_and(|p| p.route(user, file) == ToUncached) {
                    return (ToUncached, Served::Uncached, None);
                }
                (ToCache, cache_outcome(cache.access(file, true).is_hit()), None)
            }
            PolicyState::Static { policy, route_all } => {
                let route = if *route_all { ToCache } else { policy.route(file, &mut rng.routing) };
                match route {
                    ToCache => (ToCache, cache_outcome(policy.cache.contains(file)), None),
                    ToUncached => (ToUncached, Served::Uncached, None),
                }
            }
            PolicyState::Dcr { agent, beliefs } => {
                agent.on_arrival(time);
                let belief = match beliefs {
                    Some(b) => b.get(user, file),
                    None if agent.cache().contains(file) => Belief::InCache,
                    None => Belief::NotInCache,
                };
                let phase = Some(agent.phase());
                match agent.route(belief, &mut rng.routing) {
                    ToCache => {
                        let hit = agent.serve(file);
                        if let Some(b) = beliefs {
                            b.observe(user, file, hit);
                        }
                        (ToCache, cache_outcome(hit), phase)
                    }
                    ToUncached => (ToUncached, Served::Uncached, phase),
                }
            }
            PolicyState::TwoLru { cache, coin } => {
                let out = if *coin { cache.access_alpha(file, &mut rng.cache) } else { cache.access(file) };
                let served = match out.kind {
                    OutcomeKind::Hit => Served::Hit,
                    OutcomeKind::Miss => Served::Miss,
                    OutcomeKind::Deflect4G => Served::Deflected,
                };
                (ToCache, served, None)
            }
        }
    }

    fn on_drift(&mut self, s: &Scenario, profiles: &[UserProfile]) -> Result<()> {
        if let PolicyState::Static { policy, .. } = self {
            *policy = optimal_policy(profiles, s.policy.cache_size, &s.delays, s.path)?;
        }
        Ok(())
    }

    fn auxiliary(&self) -> Vec<(&'static str, f64)> {
        match self {
            PolicyState::Static { policy, .. } => vec![("split", policy.split)],
            PolicyState::Dcr { agent, .. } => {
                let mut aux = vec![("alpha", agent.alpha()), ("split", agent.split())];
                if let Some((rate, cached)) = agent.rate_estimates() {
                    aux.push(("rate_estimate", rate));
                    aux.push(("cached_rate_estimate", cached));
                }
                aux
            }
            PolicyState::Lru { plan: Some(plan), .. } => {
                vec![("che_time", plan.che.characteristic_time), ("cache_bound_files", plan.cache_bound_files() as f64)]
            }
            _ => Vec::new(),
        }
    }
}

pub fn run(scenario: &Scenario) -> Result<RunReport> {
    run_with(scenario, |_| {})
}

/// Runs the scenario, handing every request record to `observe`.
pub fn run_with(scenario: &Scenario, mut observe: impl FnMut(&RequestRecord)) -> Result<RunReport> {
    scenario.validate()?;
    let mut streams = Streams::new(scenario.seed);
    let mut generator = RequestGenerator::new(scenario.profiles.clone())?;
    let mut policy = build_policy(scenario)?;
    let mut queue = match scenario.path {
        PathModel::Mm1 { service_rate } => Some(Mm1Queue::new(service_rate)?),
        PathModel::Constant => None,
    };
    let mut acc = Accumulator::new(scenario.window);
    let mut now = 0.0;
    let mut drift_events = 0;

    for n in 0..scenario.arrivals {
        let req = generator.next_request(&mut streams.arrivals, now);
        now = req.time;
        if scenario.drift.enabled {
            if let Some(ev) = generator.apply_drift(&mut streams.drift, &scenario.drift) {
                drift_events += 1;
                if ev.clamped != ev.before {
                    policy.on_drift(scenario, generator.profiles())?;
                }
            }
        }
        let (route, served, phase) = policy.serve(req.user, req.file, now, &mut streams);
        let delay = match served {
            Served::Hit => scenario.delays.hit(req.user),
            Served::Miss => scenario.delays.miss(req.user),
            Served::Deflected | Served::Uncached => match queue.as_mut() {
                None => scenario.delays.uncached(req.user),
                Some(q) => {
                    let backlog = q.backlog(now);
                    if backlog > scenario.max_queue_backlog {
                        let offered = q.jobs() as f64 / now;
                        return Err(Error::Aborted(format!(
                            "uncached queue unstable: backlog {backlog:.1} exceeds {} after {n} arrivals \
                             (uncached rate {offered:.4}, service rate {})",
                            scenario.max_queue_backlog,
                            q.service_rate()
                        )));
                    }
                    q.submit(now, &mut streams.service)? - now
                }
            },
        };
        acc.record(served, delay);
        observe(&RequestRecord { time: now, user: req.user, file: req.file, route, served, delay, phase });
    }

    let (total_delay, counts, windows) = acc.finish();
    Ok(RunReport {
        name: scenario.name.clone(),
        policy: scenario.policy.kind,
        seed: scenario.seed,
        arrivals: scenario.arrivals,
        total_delay,
        counts,
        windows,
        end_time: now,
        drift_events,
        auxiliary: policy.auxiliary(),
    })
}
