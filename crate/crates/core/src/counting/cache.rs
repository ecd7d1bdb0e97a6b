//! Component cache: canonical component key -> model count.
//!
//! Unbounded by default. With a capacity bound the least-recently-touched
//! entry is evicted (a hit refreshes an entry, so cold entries go first).
//! A cache may be reused across sequential solves of the same formula but is
//! never shared between concurrent solves.

use super::component::CacheKey;
use num_bigint::BigUint;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub lookups: u64,
    pub hits: u64,
    pub stores: u64,
    pub evictions: u64,
    /// Sum of component sizes (variable counts) over all stores.
    pub stored_size_sum: u64,
    /// Sum of component sizes over all hits.
    pub hit_size_sum: u64,
}

struct Entry {
    count: BigUint,
    stamp: u64,
}

pub struct ComponentCache {
    map: HashMap<CacheKey, Entry>,
    by_stamp: BTreeMap<u64, CacheKey>,
    next_stamp: u64,
    capacity: Option<usize>,
    stats: CacheStats,
}

impl Default for ComponentCache {
    fn default() -> Self {
        ComponentCache::unbounded()
    }
}

impl ComponentCache {
    pub fn unbounded() -> ComponentCache {
        ComponentCache::with_capacity(None)
    }

    /// `capacity` bounds the number of entries; `Some(0)` never stores.
    pub fn with_capacity(capacity: Option<usize>) -> ComponentCache {
        ComponentCache {
            map: HashMap::new(),
            by_stamp: BTreeMap::new(),
            next_stamp: 0,
            capacity,
            stats: CacheStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn stats(&self) -> &CacheStats {
        &self.stats
    }

    /// Looks up a component count. `size` is the component's variable count,
    /// recorded in the hit-size accumulator on success.
    pub fn lookup(&mut self, key: &[u8], size: usize) -> Option<BigUint> {
        self.stats.lookups += 1;
        let stamp = self.next_stamp;
        let entry = self.map.get_mut(key)?;
        self.stats.hits += 1;
        self.stats.hit_size_sum += size as u64;
        self.by_stamp.remove(&entry.stamp);
        entry.stamp = stamp;
        self.by_stamp.insert(stamp, key.to_vec());
        self.next_stamp += 1;
        Some(entry.count.clone())
    }

    pub fn store(&mut self, key: CacheKey, count: BigUint, size: usize) {
        if let Some(cap) = self.capacity {
            if cap == 0 {
                return;
            }
            if !self.map.contains_key(&key) {
                while self.map.len() >= cap {
                    let (_, oldest) = self
                        .by_stamp
                        .pop_first()
                        .expect("stamp index out of sync with map");
                    self.map.remove(&oldest);
                    self.stats.evictions += 1;
                }
            }
        }
        let stamp = self.next_stamp;
        self.next_stamp += 1;
        if let Some(old) = self.map.insert(key.clone(), Entry { count, stamp }) {
            self.by_stamp.remove(&old.stamp);
        }
        self.by_stamp.insert(stamp, key);
        self.stats.stores += 1;
        self.stats.stored_size_sum += size as u64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: u32) -> CacheKey {
        n.to_le_bytes().to_vec()
    }

    #[test]
    fn lookup_miss_then_hit() {
        let mut cache = ComponentCache::unbounded();
        assert_eq!(cache.lookup(&key(1), 3), None);
        cache.store(key(1), BigUint::from(5u32), 3);
        assert_eq!(cache.lookup(&key(1), 3), Some(BigUint::from(5u32)));
        assert_eq!(cache.stats().lookups, 2);
        assert_eq!(cache.stats().hits, 1);
        assert_eq!(cache.stats().stores, 1);
        assert_eq!(cache.stats().stored_size_sum, 3);
        assert_eq!(cache.stats().hit_size_sum, 3);
    }

    #[test]
    fn capacity_zero_never_stores() {
        let mut cache = ComponentCache::with_capacity(Some(0));
        cache.store(key(1), BigUint::from(5u32), 1);
        assert_eq!(cache.len(), 0);
        assert_eq!(cache.lookup(&key(1), 1), None);
    }

    #[test]
    fn eviction_removes_least_recently_touched() {
        let mut cache = ComponentCache::with_capacity(Some(2));
        cache.store(key(1), BigUint::from(1u32), 1);
        cache.store(key(2), BigUint::from(2u32), 1);
        // Touch key 1 so key 2 becomes the eviction candidate.
        assert!(cache.lookup(&key(1), 1).is_some());
        cache.store(key(3), BigUint::from(3u32), 1);
        assert_eq!(cache.len(), 2);
        assert!(cache.lookup(&key(2), 1).is_none());
        assert!(cache.lookup(&key(1), 1).is_some());
        assert!(cache.lookup(&key(3), 1).is_some());
        assert_eq!(cache.stats().evictions, 1);
    }
}
