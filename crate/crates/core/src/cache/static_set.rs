use super::CacheOutcome;

/// A fixed set of cached files. Contents never change through `access`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticCache {
    member: Vec<bool>,
    files: Vec<usize>,
}

impl StaticCache {
    pub fn new(file_count: usize, files: impl IntoIterator<Item = usize>) -> Self {
        let mut member = vec![false; file_count];
        for f in files {
            member[f] = true;
        }
        let files = member.iter().enumerate().filter(|(_, &m)| m).map(|(f, _)| f).collect();
        Self { member, files }
    }

    pub fn empty(file_count: usize) -> Self {
        Self::new(file_count, [])
    }

    pub fn contains(&self, file: usize) -> bool {
        self.member[file]
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Dense membership indexed by file.
    pub fn mask(&self) -> &[bool] {
        &self.member
    }

    /// Cached files in ascending order.
    pub fn files(&self) -> &[usize] {
        &self.files
    }

    pub fn access(&self, file: usize) -> CacheOutcome {
        if self.member[file] {
            CacheOutcome::HIT
        } else {
            CacheOutcome::MISS
        }
    }

    pub fn snapshot(&self) -> String {
        format!(
            "policy=static capacity={}\ncontent={}\n",
            self.files.len(),
            super::join_ids(self.files.iter().copied())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::OutcomeKind;

    #[test]
    fn hits_members_only_and_never_changes() {
        let cache = StaticCache::new(10, [1, 2, 3]);
        let before = cache.clone();
        assert_eq!(cache.access(2).kind, OutcomeKind::Hit);
        let out = cache.access(7);
        assert_eq!(out.kind, OutcomeKind::Miss);
        assert!(!out.inserted);
        for f in 0..10 {
            cache.access(f);
        }
        assert_eq!(cache, before);
        assert_eq!(cache.snapshot(), "policy=static capacity=3\ncontent=1,2,3\n");
    }
}
