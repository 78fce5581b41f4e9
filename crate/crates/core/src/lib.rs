//! Spectral radius of the convex combination `A_α(G) = α·D(G) + (1-α)·A(G)`
//! for strongly connected digraphs, where `D(G)` holds out-degrees.
//!
//! - [`digraph`]: representation, strong connectivity, bipartiteness,
//!   canonical keys, arc retargeting and subdivision.
//! - [`family`]: the named extremal families and their enumerators.
//! - [`spectral`]: `A_α` construction, Perron root by shifted power iteration
//!   with Collatz–Wielandt enclosures, and a determinant-scan oracle.
//! - [`chareq`]: scalar characteristic functions per family and their
//!   largest real roots.
//! - [`campaigns`]: exhaustive and family-restricted verification runs with
//!   JSON/CSV reports.

pub mod campaigns;
pub mod chareq;
pub mod digraph;
pub mod family;
pub mod spectral;

pub use digraph::{CanonicalKey, Digraph, DigraphError};
pub use family::{FamilyError, FamilySpec};
