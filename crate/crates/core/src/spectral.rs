//! `A_α(G) = α·D(G) + (1-α)·A(G)` and its Perron root.
//!
//! [`spectral_radius`] runs power iteration on `A_α + I`. The shift makes
//! every irreducible `A_α` primitive, so the iteration converges even for
//! periodic digraphs such as `C_n` at `α = 0`. Each step is certified by the
//! Collatz–Wielandt quotients `(A_α x)_i / x_i`, whose min and max bracket
//! the Perron root for any positive `x`.
//!
//! [`det_scan_largest_real_root`] is an independent oracle that never looks
//! at eigenvectors: it walks down a grid testing whether `xI - A_α` is a
//! nonsingular M-matrix, then bisects.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Radii closer than this are reported as indistinguishable.
pub const DECISION_MARGIN: f64 = 1e-9;
/// Grid step of the downward root scans.
pub const SCAN_STEP: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("alpha = {0} outside [0, 1)")]
    AlphaOutOfRange(f64),
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("tolerance {0} must be positive and finite")]
    InvalidTolerance(f64),
    #[error("power iteration stalled after {iterations} steps with enclosure width {width:e}")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("vector entry {index} is not positive")]
    NonpositiveVector { index: usize },
    #[error("vector has length {got}, matrix has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("determinant scan found no sign change above {0}")]
    ScanFailed(f64),
}

fn check_alpha(alpha: f64) -> Result<(), SpectralError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(SpectralError::AlphaOutOfRange(alpha))
    }
}

fn check_tol(tol: f64) -> Result<(), SpectralError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::InvalidTolerance(tol))
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Outcome of comparing two certified radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusOrder {
    Less,
    Greater,
    Indistinguishable,
}

/// Orders by enclosures when they are disjoint, else by midpoints; midpoints
/// within `margin` are indistinguishable.
pub fn compare_radii(a: Enclosure, b: Enclosure, margin: f64) -> RadiusOrder {
    if a.hi < b.lo {
        RadiusOrder::Less
    } else if a.lo > b.hi {
        RadiusOrder::Greater
    } else {
        let d = a.mid() - b.mid();
        if d.abs() <= margin {
            RadiusOrder::Indistinguishable
        } else if d < 0.0 {
            RadiusOrder::Less
        } else {
            RadiusOrder::Greater
        }
    }
}

/// Gap between the top of `lower` and the bottom of `upper`; positive when
/// `upper` lies strictly above `lower`.
pub fn separation(lower: Enclosure, upper: Enclosure) -> f64 {
    upper.lo - lower.hi
}

/// Dense row-major `A_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaMatrix {
    n: usize,
    alpha: f64,
    entries: Vec<f64>,
    irreducible: bool,
}

impl AlphaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// True iff the underlying digraph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn principal(&self, idx: &[usize]) -> AlphaMatrix {
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                entries.push(self.get(i, j));
            }
        }
        AlphaMatrix { n: k, alpha: self.alpha, entries, irreducible: true }
    }
}

/// `α·D + (1-α)·A` for `0 <= α < 1`.
pub fn build_alpha_matrix(d: &Digraph, alpha: f64) -> Result<AlphaMatrix, SpectralError> {
    check_alpha(alpha)?;
    let n = d.n();
    let mut entries = vec![0.0; n * n];
    for (i, deg) in d.out_degrees().into_iter().enumerate() {
        entries[i * n + i] = alpha * deg as f64;
    }
    let off = 1.0 - alpha;
    for &(t, h) in d.arcs() {
        entries[t * n + h] = off;
    }
    Ok(AlphaMatrix { n, alpha, entries, irreducible: d.is_strongly_connected() })
}

/// `[min row sum, max row sum]`, i.e. `[min d⁺, max d⁺]`.
pub fn row_sum_bounds(m: &AlphaMatrix) -> Result<Enclosure, SpectralError> {
    if !m.irreducible {
        return Err(SpectralError::NotStronglyConnected);
    }
    let sums = m.row_sums();
    let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Enclosure { lo, hi })
}

/// Collatz–Wielandt bounds `[min (Mx)_i/x_i, max (Mx)_i/x_i]` for positive `x`.
pub fn cw_enclosure(m: &AlphaMatrix, x: &[f64]) -> Result<Enclosure, SpectralError> {
    if x.len() != m.n {
        return Err(SpectralError::DimensionMismatch { expected: m.n, got: x.len() });
    }
    if let Some(index) = x.iter().position(|&v| v.is_nan() || v <= 0.0) {
        return Err(SpectralError::NonpositiveVector { index });
    }
    let mut y = vec![0.0; m.n];
    m.mul_into(x, &mut y);
    Ok(quotient_bounds(&y, x))
}

fn quotient_bounds(mx: &[f64], x: &[f64]) -> Enclosure {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in mx.iter().zip(x) {
        let r = a / b;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Enclosure { lo, hi }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Midpoint of `enclosure`.
    pub radius: f64,
    pub enclosure: Enclosure,
    /// Positive, unit Euclidean norm.
    pub perron: Vec<f64>,
    pub iterations: usize,
    /// Relative Collatz–Wielandt gap `(hi - lo) / hi` at termination.
    pub residual: f64,
}

/// Shifted power iteration on an irreducible nonnegative matrix.
fn perron_iteration(m: &AlphaMatrix, tol: f64) -> Result<SpectralResult, SpectralError> {
    let n = m.n;
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut iterations = 0;
    loop {
        m.mul_into(&x, &mut y);
        let enc = quotient_bounds(&y, &x);
        if enc.width() <= tol {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
            let radius = enc.mid();
            return Ok(SpectralResult {
                radius,
                enclosure: enc,
                perron: x,
                iterations,
                residual: enc.width() / enc.hi,
            });
        }
        if iterations >= MAX_ITERATIONS {
            return Err(SpectralError::NoConvergence { iterations, width: enc.width() });
        }
        // x <- (A + I) x, rescaled by its max entry
        let mut peak = 0.0f64;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi += yi;
            peak = peak.max(*xi);
        }
        x.iter_mut().for_each(|v| *v /= peak);
        iterations += 1;
    }
}

/// Perron root `λ_α(G)` with a certified enclosure of width at most `tol`
/// and the Perron vector.
pub fn spectral_radius(d: &Digraph, alpha: f64, tol: f64) -> Result<SpectralResult, SpectralError> {
    check_tol(tol)?;
    let m = build_alpha_matrix(d, alpha)?;
    if !m.irreducible {
        return Err(SpectralError::NotStronglyConnected);
    }
    perron_iteration(&m, tol)
}

/// Spectral radius of `A_α(G)` for any digraph: the largest Perron root
/// over the diagonal blocks of its strongly connected components.
pub fn spectral_radius_reducible(d: &Digraph, alpha: f64, tol: f64) -> Result<Enclosure, SpectralError> {
    check_tol(tol)?;
    let m = build_alpha_matrix(d, alpha)?;
    let mut best = Enclosure { lo: 0.0, hi: 0.0 };
    for comp in d.strongly_connected_components() {
        let enc = if comp.len() == 1 {
            let v = m.get(comp[0], comp[0]);
            Enclosure { lo: v, hi: v }
        } else {
            perron_iteration(&m.principal(&comp), tol)?.enclosure
        };
        if enc.mid() > best.mid() {
            best = enc;
        }
    }
    Ok(best)
}

/// Determinant of a dense square matrix by Gaussian elimination with partial
/// pivoting. Consumes its input.
fn determinant(mut a: Vec<f64>, k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let pivot_row = (col..k).max_by(|&r, &s| a[r * k + col].abs().total_cmp(&a[s * k + col].abs())).unwrap();
        let pivot = a[pivot_row * k + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for j in 0..k {
                a.swap(col * k + j, pivot_row * k + j);
            }
            det = -det;
        }
        det *= pivot;
        for r in col + 1..k {
            let factor = a[r * k + col] / pivot;
            if factor != 0.0 {
                for j in col..k {
                    a[r * k + j] -= factor * a[col * k + j];
                }
            }
        }
    }
    det
}

/// `xI - A_α`, assembled straight from the arc list.
fn shifted_characteristic_matrix(d: &Digraph, alpha: f64, degrees: &[usize], x: f64) -> Vec<f64> {
    let n = d.n();
    let mut a = vec![0.0; n * n];
    for (i, &deg) in degrees.iter().enumerate() {
        a[i * n + i] = x - alpha * deg as f64;
    }
    for &(t, h) in d.arcs() {
        a[t * n + h] = alpha - 1.0;
    }
    a
}

/// For a Z-matrix `xI - A_α`, all leading principal minors are positive iff
/// it is a nonsingular M-matrix iff `x > λ_α`.
fn above_perron_root(d: &Digraph, alpha: f64, degrees: &[usize], x: f64) -> bool {
    let n = d.n();
    let full = shifted_characteristic_matrix(d, alpha, degrees, x);
    (1..=n).all(|k| {
        let mut block = Vec::with_capacity(k * k);
        for i in 0..k {
            block.extend_from_slice(&full[i * n..i * n + k]);
        }
        determinant(block, k) > 0.0
    })
}

/// Largest real eigenvalue of `A_α` located from determinants alone.
///
/// Walks down from `max d⁺ + 1` in steps of [`SCAN_STEP`] to
/// `max(1, α·Δ⁺) - SCAN_STEP`, stopping at the first grid point where
/// `det(xI - A_α)` or one of its leading principal minors is no longer
/// positive, then bisects the last step to `tol`.
pub fn det_scan_largest_real_root(d: &Digraph, alpha: f64, tol: f64) -> Result<f64, SpectralError> {
    check_alpha(alpha)?;
    check_tol(tol)?;
    if !d.is_strongly_connected() {
        return Err(SpectralError::NotStronglyConnected);
    }
    let degrees = d.out_degrees();
    let max_deg = degrees.iter().copied().max().unwrap_or(0) as f64;
    let top = max_deg + 1.0;
    let bottom = (alpha * max_deg).max(1.0) - SCAN_STEP;
    let above = |x: f64| above_perron_root(d, alpha, &degrees, x);

    if !above(top) {
        return Err(SpectralError::ScanFailed(top));
    }
    let mut hi = top;
    let mut step = 1;
    let lo = loop {
        let x = top - SCAN_STEP * step as f64;
        if x < bottom - 1e-12 {
            return Err(SpectralError::ScanFailed(bottom));
        }
        if !above(x) {
            break x;
        }
        hi = x;
        step += 1;
    };
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
