use rand::Rng;

use super::{join_ids, CacheOutcome, LruCache};
use crate::{Error, Result};

/// 2-LRU as run by a central agent: an id cache filtering admissions into
/// the content cache, plus the agent's virtual copy of the content cache.
///
/// The id cache sees every request and is always LRU-updated, including on
/// deflections. A request that misses both the id cache and the virtual
/// content cache is forwarded (and admitted) with probability `alpha`, and
/// deflected to the uncached path otherwise. Plain 2-LRU deflects every such
/// request, which is `alpha = 0`.
#[derive(Debug, Clone)]
pub struct TwoLruCache {
    id: LruCache,
    content: LruCache,
    virtual_content: LruCache,
    alpha: f64,
}

impl TwoLruCache {
    pub fn new(id_capacity: usize, capacity: usize, file_count: usize, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if id_capacity == 0 || capacity == 0 {
            return Err(Error::invalid("2-LRU capacities must be at least 1"));
        }
        Ok(Self {
            id: LruCache::new(id_capacity, file_count),
            content: LruCache::new(capacity, file_count),
            virtual_content: LruCache::new(capacity, file_count),
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn id_cache(&self) -> &LruCache {
        &self.id
    }

    pub fn content_cache(&self) -> &LruCache {
        &self.content
    }

    pub fn virtual_content(&self) -> &LruCache {
        &self.virtual_content
    }

    /// α-2-LRU access. One uniform is drawn on every double miss, whatever
    /// `alpha` is, so traces replayed with equal seeds stay aligned.
    pub fn access_alpha<R: Rng + ?Sized>(&mut self, file: usize, rng: &mut R) -> CacheOutcome {
        let alpha = self.alpha;
        self.access_with(file, || rng.random::<f64>() < alpha)
    }

    /// Plain 2-LRU: every double miss is deflected.
    pub fn access(&mut self, file: usize) -> CacheOutcome {
        self.access_with(file, || false)
    }

    fn access_with(&mut self, file: usize, forward_double_miss: impl FnOnce() -> bool) -> CacheOutcome {
        let id_hit = self.id.access(file, true).is_hit();
        if id_hit {
            return self.forward(file);
        }
        if self.virtual_content.contains(file) {
            self.content.touch(file);
            self.virtual_content.touch(file);
            return CacheOutcome::HIT;
        }
        if forward_double_miss() {
            self.forward(file)
        } else {
            CacheOutcome::DEFLECT
        }
    }

    fn forward(&mut self, file: usize) -> CacheOutcome {
        let out = self.content.access(file, true);
        self.virtual_content.access(file, true);
        out
    }

    /// Virtual and real content caches agree on members and recency order.
    pub fn mirror_consistent(&self) -> bool {
        self.content.len() == self.virtual_content.len() && self.content.iter().eq(self.virtual_content.iter())
    }

    pub fn snapshot(&self) -> String {
        format!(
            "policy=two-lru id_capacity={} capacity={} alpha={}\nid={}\ncontent={}\nvirtual={}\n",
            self.id.capacity(),
            self.content.capacity(),
            self.alpha,
            join_ids(self.id.iter()),
            join_ids(self.content.iter()),
            join_ids(self.virtual_content.iter()),
        )
    }
}
