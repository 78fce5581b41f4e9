//! Simple digraphs: representation, structural predicates and the two
//! arc transforms used by the extremal arguments (in-arc retargeting and
//! arc subdivision).
//!
//! Vertices are 0-indexed. Arcs are kept both as a sorted `(tail, head)`
//! list and as one out-neighbour bitmask per vertex, so `n` is capped at 64.

mod canon;
mod dgr1;
mod structure;
mod transform;

pub use canon::{CanonicalKey, MAX_CANON_VERTICES};
pub use dgr1::{parse_dgr1, Dgr1Error};
pub use structure::{Bipartition, MAX_KPQ_SEARCH_VERTICES};

use std::fmt;

use thiserror::Error;

/// Largest vertex count representable with one `u64` row mask per vertex.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("{0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("loop arc ({0}, {0}) is not allowed")]
    LoopArc(usize),
    #[error("arc ({tail}, {head}) has an endpoint outside 0..{n}")]
    OutOfRange { tail: usize, head: usize, n: usize },
    #[error("arc ({0}, {1}) listed more than once")]
    DuplicateArc(usize, usize),
    #[error("arc ({0}, {1}) is not present")]
    MissingArc(usize, usize),
    #[error("retarget precondition violated by source {source_vertex}: {reason}")]
    PreconditionViolated { source_vertex: usize, reason: String },
    #[error("{what} supports at most {max} vertices, got {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
}

/// A loop-free, multi-arc-free directed graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out: Vec<u64>,
}

impl Digraph {
    /// Validates and builds a digraph. The arc list is sorted by `(tail, head)`.
    /// Duplicates are rejected, not merged.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(DigraphError::TooManyVertices(n));
        }
        let mut out = vec![0u64; n];
        for &(tail, head) in arcs {
            if tail >= n || head >= n {
                return Err(DigraphError::OutOfRange { tail, head, n });
            }
            if tail == head {
                return Err(DigraphError::LoopArc(tail));
            }
            let bit = 1u64 << head;
            if out[tail] & bit != 0 {
                return Err(DigraphError::DuplicateArc(tail, head));
            }
            out[tail] |= bit;
        }
        Ok(Self::from_out_masks_unchecked(n, out))
    }

    /// Builds from per-vertex out-neighbour masks. Caller guarantees
    /// `n <= 64`, no diagonal bits and no bits at or above `n`.
    pub(crate) fn from_out_masks_unchecked(n: usize, out: Vec<u64>) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&n) && out.len() == n);
        let mut arcs = Vec::with_capacity(out.iter().map(|m| m.count_ones() as usize).sum());
        for (tail, &mask) in out.iter().enumerate() {
            debug_assert_eq!(mask & (1u64 << tail), 0);
            let mut m = mask;
            while m != 0 {
                let head = m.trailing_zeros() as usize;
                arcs.push((tail, head));
                m &= m - 1;
            }
        }
        Self { n, arcs, out }
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Result<Self, DigraphError> {
        if n == 1 {
            return Self::new(1, &[]);
        }
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs sorted by `(tail, head)`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        tail < self.n && head < self.n && self.out[tail] & (1u64 << head) != 0
    }

    /// Out-neighbour bitmask of `v`.
    pub fn out_mask(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub(crate) fn out_masks(&self) -> &[u64] {
        &self.out
    }

    /// In-neighbour bitmask of `v`.
    pub fn in_mask(&self, v: usize) -> u64 {
        let bit = 1u64 << v;
        self.out.iter().enumerate().filter(|(_, m)| *m & bit != 0).fold(0u64, |acc, (u, _)| acc | (1u64 << u))
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.out[v])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(|m| m.count_ones() as usize).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(_, h) in &self.arcs {
            deg[h] += 1;
        }
        deg
    }

    /// Maximum out-degree.
    pub fn max_out_degree(&self) -> usize {
        self.out_degrees().into_iter().max().unwrap_or(0)
    }

    /// True for the directed cycle `C_n` (up to labelling), `n >= 2`.
    pub fn is_directed_cycle(&self) -> bool {
        self.n >= 2
            && self.arcs.len() == self.n
            && self.out.iter().all(|m| m.count_ones() == 1)
            && self.is_strongly_connected()
    }

    /// Copy with one arc removed.
    pub fn without_arc(&self, tail: usize, head: usize) -> Result<Self, DigraphError> {
        if !self.has_arc(tail, head) {
            return Err(DigraphError::MissingArc(tail, head));
        }
        let mut out = self.out.clone();
        out[tail] &= !(1u64 << head);
        Ok(Self::from_out_masks_unchecked(self.n, out))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut out = vec![0u64; self.n];
        for &(t, h) in &self.arcs {
            out[perm[t]] |= 1u64 << perm[h];
        }
        Self::from_out_masks_unchecked(self.n, out)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs)
    }
}

/// Iterates the set bit positions of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
