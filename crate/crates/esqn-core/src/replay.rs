//! Fixed-capacity ring buffer of reservoir-augmented transitions with
//! uniform random sampling.
//!
//! Each stored record carries the observation and the reservoir state at
//! both ends of the transition, so batches sampled here contain the input
//! history context without any sequence bookkeeping. Sampling is uniform
//! with replacement; at N = 10000 and batches of 256 the difference from
//! without-replacement sampling is negligible, and swapping the variant is
//! a one-line change in `sample_indices`.

use crate::error::{Error, Result};
use crate::numerics::{SeededRng, Vector};

/// One replay record `(o, x, a, r, o_next, x_next)` plus the terminal flag
/// that truncates bootstrapping.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub o: Vector,
    pub x: Vector,
    pub a: usize,
    /// Clipped reward, exactly -1, 0 or 1.
    pub r: f64,
    pub o_next: Vector,
    pub x_next: Vector,
    pub terminal: bool,
}

impl Transition {
    pub fn validate(&self) -> Result<()> {
        if !(self.r == -1.0 || self.r == 0.0 || self.r == 1.0) {
            return Err(Error::InvalidTransition("reward outside {-1, 0, 1}"));
        }
        if self.o.len() != self.o_next.len() {
            return Err(Error::InvalidTransition("observation lengths differ"));
        }
        if self.x.len() != self.x_next.len() {
            return Err(Error::InvalidTransition("reservoir state lengths differ"));
        }
        Ok(())
    }
}

/// Ring buffer: pushing beyond capacity overwrites the oldest record.
#[derive(Clone, Debug)]
pub struct ReplayMemory {
    capacity: usize,
    storage: Vec<Transition>,
    cursor: usize,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        ReplayMemory {
            capacity,
            storage: Vec::with_capacity(capacity),
            cursor: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    /// Stored transitions in insertion order, oldest first.
    pub fn iter_fifo(&self) -> impl Iterator<Item = &Transition> {
        let split = if self.storage.len() == self.capacity {
            self.cursor
        } else {
            0
        };
        self.storage[split..]
            .iter()
            .chain(self.storage[..split].iter())
    }

    /// Appends a transition; data is copied in, never aliased with live
    /// reservoir state.
    pub fn push(&mut self, t: Transition) -> Result<()> {
        t.validate()?;
        if let Some(first) = self.storage.first() {
            if first.o.len() != t.o.len() || first.x.len() != t.x.len() {
                return Err(Error::InvalidTransition(
                    "transition shape differs from stored records",
                ));
            }
        }
        if self.storage.len() < self.capacity {
            self.storage.push(t);
        } else {
            self.storage[self.cursor] = t;
            self.cursor = (self.cursor + 1) % self.capacity;
        }
        Ok(())
    }

    /// `n` transitions drawn uniformly with replacement; the memory is
    /// left untouched.
    pub fn sample(&self, n: usize, rng: &mut SeededRng) -> Result<Vec<&Transition>> {
        if self.storage.len() < n {
            return Err(Error::InsufficientData {
                have: self.storage.len(),
                need: n,
            });
        }
        Ok((0..n)
            .map(|_| &self.storage[rng.below(self.storage.len())])
            .collect())
    }
}
