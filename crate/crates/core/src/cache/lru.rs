use super::{join_ids, CacheOutcome};

const NIL: u32 = u32::MAX;

/// LRU list over a dense catalog, stored as an intrusive doubly linked list.
#[derive(Debug, Clone)]
pub struct LruCache {
    capacity: usize,
    len: usize,
    head: u32,
    tail: u32,
    prev: Vec<u32>,
    next: Vec<u32>,
    resident: Vec<bool>,
}

impl LruCache {
    /// # Panics
    /// If `capacity` is zero or the catalog does not fit in `u32`.
    pub fn new(capacity: usize, file_count: usize) -> Self {
        assert!(capacity >= 1, "LRU capacity must be at least 1");
        assert!(file_count < NIL as usize, "catalog too large");
        Self {
            capacity,
            len: 0,
            head: NIL,
            tail: NIL,
            prev: vec![NIL; file_count],
            next: vec![NIL; file_count],
            resident: vec![false; file_count],
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, file: usize) -> bool {
        self.resident[file]
    }

    /// Hit moves `file` to the front; a miss inserts it at the front when
    /// `admit_on_miss`, evicting the least-recent entry if full.
    pub fn access(&mut self, file: usize, admit_on_miss: bool) -> CacheOutcome {
        if self.resident[file] {
            self.touch(file);
            CacheOutcome::HIT
        } else if admit_on_miss {
            self.insert(file);
            CacheOutcome::MISS_ADMIT
        } else {
            CacheOutcome::MISS
        }
    }

    /// Moves a resident file to the front. No-op for absent files.
    pub fn touch(&mut self, file: usize) {
        if self.resident[file] && self.head != file as u32 {
            self.unlink(file as u32);
            self.push_front(file as u32);
        }
    }

    /// Inserts an absent file at the front and returns the evicted file.
    pub fn insert(&mut self, file: usize) -> Option<usize> {
        if self.resident[file] {
            self.touch(file);
            return None;
        }
        let evicted = if self.len == self.capacity {
            let victim = self.tail;
            self.unlink(victim);
            self.resident[victim as usize] = false;
            self.len -= 1;
            Some(victim as usize)
        } else {
            None
        };
        self.push_front(file as u32);
        self.resident[file] = true;
        self.len += 1;
        evicted
    }

    /// Files from most to least recently used.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                None
            } else {
                let out = cur as usize;
                cur = self.next[out];
                Some(out)
            }
        })
    }

    pub fn snapshot(&self) -> String {
        format!("policy=lru capacity={}\ncontent={}\n", self.capacity, join_ids(self.iter()))
    }

    fn unlink(&mut self, f: u32) {
        let (p, n) = (self.prev[f as usize], self.next[f as usize]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
        self.prev[f as usize] = NIL;
        self.next[f as usize] = NIL;
    }

    fn push_front(&mut self, f: u32) {
        self.prev[f as usize] = NIL;
        self.next[f as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = f;
        }
        self.head = f;
        if self.tail == NIL {
            self.tail = f;
        }
    }
}
