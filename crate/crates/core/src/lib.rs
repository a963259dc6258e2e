//! Joint caching and routing between an in-network cache and an uncached
//! backhaul path.
//!
//! The crate has two halves that check each other:
//!
//! * a deterministic discrete-event simulator ([`sim`]) driving request
//!   streams ([`workload`]) through cache replacement policies ([`cache`]),
//!   user routing strategies ([`routing`]) and uncached-path models ([`path`]);
//! * closed-form models and optimizers ([`analytic`]): the Che
//!   approximation, the α-2-LRU Markov chain, optimal static caching with
//!   the M/M/1 traffic split, and the delay-minimizing parameter searches.
//!
//! [`config`] and [`experiments`] turn scenario files and built-in presets
//! into CSV output; [`validate`] bundles the numerical self-checks.
//!
//! Files are indexed `0..K` throughout; file `0` is the most popular under a
//! Zipf catalog.

pub mod analytic;
pub mod cache;
pub mod config;
mod error;
pub mod experiments;
pub mod path;
pub mod rng;
pub mod routing;
pub mod sim;
pub mod validate;
pub mod workload;

pub use error::{Error, Result};
