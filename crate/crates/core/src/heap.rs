//! Indexed 4-ary min-heap with decrease-key, keyed by vertex id.

use crate::INVALID;

const ARITY: usize = 4;

#[derive(Clone, Debug)]
pub struct IndexedHeap<K> {
    entries: Vec<(K, u32)>,
    position: Vec<u32>,
}

impl<K: Copy + Ord> IndexedHeap<K> {
    pub fn new(capacity: usize) -> Self {
        Self { entries: Vec::new(), position: vec![INVALID; capacity] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.position[id as usize] != INVALID
    }

    pub fn peek(&self) -> Option<(K, u32)> {
        self.entries.first().copied()
    }

    /// Inserts `id` or lowers its key. Larger keys for present ids are ignored.
    pub fn push_or_decrease(&mut self, id: u32, key: K) {
        let pos = self.position[id as usize];
        if pos == INVALID {
            self.entries.push((key, id));
            let last = self.entries.len() - 1;
            self.position[id as usize] = last as u32;
            self.sift_up(last);
        } else if key < self.entries[pos as usize].0 {
            self.entries[pos as usize].0 = key;
            self.sift_up(pos as usize);
        }
    }

    pub fn pop(&mut self) -> Option<(K, u32)> {
        if self.entries.is_empty() {
            return None;
        }
        let top = self.entries.swap_remove(0);
        self.position[top.1 as usize] = INVALID;
        if !self.entries.is_empty() {
            self.position[self.entries[0].1 as usize] = 0;
            self.sift_down(0);
        }
        Some(top)
    }

    pub fn clear(&mut self) {
        for &(_, id) in &self.entries {
            self.position[id as usize] = INVALID;
        }
        self.entries.clear();
    }

    fn sift_up(&mut self, mut pos: usize) {
        while pos > 0 {
            let parent = (pos - 1) / ARITY;
            if self.entries[pos].0 >= self.entries[parent].0 {
                break;
            }
            self.swap(pos, parent);
            pos = parent;
        }
    }

    fn sift_down(&mut self, mut pos: usize) {
        loop {
            let first = pos * ARITY + 1;
            if first >= self.entries.len() {
                break;
            }
            let last = (first + ARITY).min(self.entries.len());
            let mut best = first;
            for c in first + 1..last {
                if self.entries[c].0 < self.entries[best].0 {
                    best = c;
                }
            }
            if self.entries[best].0 >= self.entries[pos].0 {
                break;
            }
            self.swap(pos, best);
            pos = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
        self.position[self.entries[a].1 as usize] = a as u32;
        self.position[self.entries[b].1 as usize] = b as u32;
    }
}
