//! Cache replacement policies behind a common outcome type.
//!
//! All caches index files densely over a catalog `0..K`, so membership and
//! recency updates are O(1) array operations.
//!
//! Each cache renders a one-line-per-field text snapshot used by golden-trace
//! tests:
//!
//! ```text
//! policy=lru capacity=3
//! content=4,1,7
//! ```
//!
//! Lists run most-recent first for LRU structures and in ascending file order
//! for the static set. 2-LRU snapshots add `id_capacity`, `alpha`, an `id=` line
//! and a `virtual=` line.

mod lru;
mod static_set;
mod two_lru;

pub use lru::LruCache;
pub use static_set::StaticCache;
pub use two_lru::TwoLruCache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    Hit,
    Miss,
    /// Double miss in a 2-LRU agent, sent to the uncached path.
    Deflect4G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheOutcome {
    pub kind: OutcomeKind,
    /// Whether the file was admitted into the content cache.
    pub inserted: bool,
}

impl CacheOutcome {
    pub const HIT: Self = Self { kind: OutcomeKind::Hit, inserted: false };
    pub const MISS: Self = Self { kind: OutcomeKind::Miss, inserted: false };
    pub const MISS_ADMIT: Self = Self { kind: OutcomeKind::Miss, inserted: true };
    pub const DEFLECT: Self = Self { kind: OutcomeKind::Deflect4G, inserted: false };

    pub fn is_hit(&self) -> bool {
        self.kind == OutcomeKind::Hit
    }
}

fn join_ids(ids: impl Iterator<Item = usize>) -> String {
    ids.map(|id| id.to_string()).collect::<Vec<_>>().join(",")
}
