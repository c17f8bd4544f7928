//! Bookkeeping for which collections of (anti-)circles already produced a
//! maximal direction.
//!
//! A collection is a set of signed outside points. Point `i` (0-based position
//! in the outside list of length `m`) contributes its circle with code `i` and
//! its anti-circle with code `i + m`. Because slabs are symmetric under
//! `u ↦ −u`, flipping every sign of a collection describes the same geometry,
//! so every key is stored in canonical form: members sorted by point and the
//! first member taken as a circle.

use std::collections::HashSet;

/// A point of the outside list together with the side it is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex {
    pub index: usize,
    pub negated: bool,
}

impl SignedIndex {
    pub fn circle(index: usize) -> Self {
        SignedIndex { index, negated: false }
    }

    pub fn anti(index: usize) -> Self {
        SignedIndex { index, negated: true }
    }

    pub fn sign(&self) -> f64 {
        if self.negated {
            -1.0
        } else {
            1.0
        }
    }

    /// Flattened code in `0..2m`.
    pub fn code(&self, m: usize) -> u32 {
        (self.index + if self.negated { m } else { 0 }) as u32
    }

    pub fn from_code(code: u32, m: usize) -> Self {
        let c = code as usize;
        if c < m {
            SignedIndex::circle(c)
        } else {
            SignedIndex::anti(c - m)
        }
    }
}

/// Set of visited (anti-)circle collections of size at most `max_size`.
#[derive(Debug, Clone)]
pub struct VisitedStore {
    m: usize,
    max_size: usize,
    singles: Vec<bool>,
    groups: HashSet<Vec<u32>>,
}

impl VisitedStore {
    /// Store for `m` outside points in dimension `d`; collections of up to
    /// `d − 2` (anti-)circles are tracked.
    pub fn new(m: usize, d: usize) -> Self {
        VisitedStore {
            m,
            max_size: d.saturating_sub(2),
            singles: vec![false; m],
            groups: HashSet::new(),
        }
    }

    pub fn outside_count(&self) -> usize {
        self.m
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    fn canonical_into(&self, codes: &[u32], out: &mut Vec<u32>) {
        out.clear();
        let m = self.m as u32;
        out.extend_from_slice(codes);
        out.sort_unstable_by_key(|&c| (if c < m { c } else { c - m }, c));
        if out.first().is_some_and(|&c| c >= m) {
            for c in out.iter_mut() {
                *c = if *c < m { *c + m } else { *c - m };
            }
            out.sort_unstable_by_key(|&c| (if c < m { c } else { c - m }, c));
        }
    }

    fn circle_of(&self, code: u32) -> usize {
        let c = code as usize;
        if c < self.m {
            c
        } else {
            c - self.m
        }
    }

    /// Flags every non-empty sub-collection of `codes` with at most
    /// `max_size` members.
    pub fn mark(&mut self, codes: &[u32]) {
        let k = codes.len();
        debug_assert!(k <= 31);
        let mut key = Vec::with_capacity(k);
        let mut subset = Vec::with_capacity(k);
        for mask in 1u32..(1u32 << k) {
            let size = mask.count_ones() as usize;
            if size > self.max_size {
                continue;
            }
            if size == 1 {
                let c = codes[mask.trailing_zeros() as usize];
                let i = self.circle_of(c);
                self.singles[i] = true;
                continue;
            }
            subset.clear();
            subset.extend((0..k).filter(|b| mask >> b & 1 == 1).map(|b| codes[b]));
            self.canonical_into(&subset, &mut key);
            if !self.groups.contains(&key) {
                self.groups.insert(key.clone());
            }
        }
    }

    pub fn is_visited(&self, codes: &[u32]) -> bool {
        match codes.len() {
            0 => false,
            1 => self.singles[self.circle_of(codes[0])],
            _ => {
                let mut key = Vec::with_capacity(codes.len());
                self.canonical_into(codes, &mut key);
                self.groups.contains(&key)
            }
        }
    }

    /// Union with another store over the same outside list.
    pub fn merge(&mut self, other: VisitedStore) {
        debug_assert_eq!(self.m, other.m);
        for (a, b) in self.singles.iter_mut().zip(other.singles) {
            *a |= b;
        }
        self.groups.extend(other.groups);
    }

    /// Number of flagged collections.
    pub fn len(&self) -> usize {
        self.singles.iter().filter(|&&s| s).count() + self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lexicographic walk over the `k`-subsets of `lo..hi`.
#[derive(Debug, Clone)]
pub(crate) struct Combinations {
    current: Vec<usize>,
    hi: usize,
    started: bool,
}

impl Combinations {
    pub(crate) fn new(k: usize, lo: usize, hi: usize) -> Self {
        Combinations { current: (lo..lo + k).collect(), hi, started: false }
    }

    /// Advances to the next subset; the slice is valid until the next call.
    pub(crate) fn next_subset(&mut self) -> Option<&[usize]> {
        let k = self.current.len();
        if !self.started {
            self.started = true;
            return if self.current.last().is_none_or(|&l| l < self.hi) {
                Some(&self.current)
            } else {
                None
            };
        }
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if self.current[pos] < self.hi - (k - pos) {
                self.current[pos] += 1;
                for j in pos + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(&self.current);
            }
        }
        None
    }
}
