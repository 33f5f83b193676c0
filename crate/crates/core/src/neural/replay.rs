//! Bounded experience replay with uniform sampling.

use rand::Rng;

/// Ring buffer of experience records. Insertion beyond capacity evicts the
/// oldest entry; sampling is uniform without replacement and requires at
/// least `minibatch` stored records.
#[derive(Debug, Clone)]
pub struct ReplayMemory<T> {
    capacity: usize,
    minibatch: usize,
    entries: Vec<T>,
    next: usize,
}

impl<T: Clone> ReplayMemory<T> {
    pub fn new(capacity: usize, minibatch: usize) -> Self {
        assert!(capacity >= 1 && minibatch >= 1);
        Self { capacity, minibatch, entries: Vec::new(), next: 0 }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn minibatch(&self) -> usize {
        self.minibatch
    }

    pub fn insert(&mut self, record: T) {
        if self.entries.len() < self.capacity {
            self.entries.push(record);
        } else {
            self.entries[self.next] = record;
            self.next = (self.next + 1) % self.capacity;
        }
    }

    /// Uniform minibatch without replacement; `None` until enough records
    /// have accumulated (callers skip the training step).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<Vec<&T>> {
        if self.entries.len() < self.minibatch {
            return None;
        }
        let idx = rand::seq::index::sample(rng, self.entries.len(), self.minibatch);
        Some(idx.iter().map(|i| &self.entries[i]).collect())
    }

    /// All stored entries in insertion order (oldest first).
    pub fn iter_ordered(&self) -> impl Iterator<Item = &T> {
        let (tail, head) = self.entries.split_at(self.next.min(self.entries.len()));
        head.iter().chain(tail.iter())
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.next = 0;
    }
}
