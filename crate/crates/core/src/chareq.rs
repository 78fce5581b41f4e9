//! Scalar characteristic functions whose largest real root is `λ_α` of a
//! family digraph, and the closed form for bidirected `K_{p,q}`.
//!
//! Everything is written in `y = (x - α)/(1 - α)`, the ratio between the
//! Perron entries of consecutive vertices on an induced path.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{ExceptionalKind, FamilyError, FamilySpec};
use crate::spectral::SCAN_STEP;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharError {
    #[error("alpha = {0} outside [0, 1)")]
    AlphaOutOfRange(f64),
    #[error("tolerance {0} must be positive and finite")]
    InvalidTolerance(f64),
    #[error("no characteristic equation for {0}")]
    Unsupported(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("no sign change of f on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("K_(p,q) needs p, q >= 1, got ({p}, {q})")]
    InvalidParams { p: usize, q: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharKind {
    InftyTilde { ks: Vec<usize> },
    ThetaTilde { ks: Vec<usize>, l1: usize },
    Gprime { n: usize },
    Bip1 { n: usize, p: usize, q: usize },
    Bip2 { n: usize, p: usize, q: usize },
    Bip5 { n: usize, p: usize, q: usize },
    Bip6 { n: usize, p: usize, q: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharEquation {
    pub kind: CharKind,
    pub alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<(), CharError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(CharError::AlphaOutOfRange(alpha))
    }
}

/// Cubic factor shared by the bipartite equations; `B²` and `B⁶` use it with
/// `p` and `q` swapped.
fn bip_cubic(x: f64, a: f64, p: f64, q: f64) -> f64 {
    let a2 = a * a;
    let c2 = a * p + 2.0 * a * q + a;
    let c1 = a2 * q * q + a2 * p * q + 2.0 * a * p * q + a2 * q + a2 * p - p * q;
    let c0 = -2.0 * a2 * q * q * p - 2.0 * a2 * p * q + a * q * q * p + a * p * q + 2.0 * a2 * q - a2 * a * q - a * q;
    ((x - c2) * x + c1) * x + c0
}

impl CharEquation {
    /// Equation for a family spec. `g1:n` and `g2:n` are isomorphic to
    /// `gprime:n` and share its equation.
    pub fn for_family(spec: &FamilySpec, alpha: f64) -> Result<Self, CharError> {
        check_alpha(alpha)?;
        spec.validate()?;
        let kind = match spec {
            FamilySpec::InftyTilde { ks } => CharKind::InftyTilde { ks: ks.clone() },
            FamilySpec::ThetaTilde { ks, l1 } => CharKind::ThetaTilde { ks: ks.clone(), l1: *l1 },
            FamilySpec::Exceptional {
                kind: ExceptionalKind::Gprime | ExceptionalKind::G1 | ExceptionalKind::G2,
                n,
            } => CharKind::Gprime { n: *n },
            &FamilySpec::BipB { kind, n, p, q } => match kind {
                1 => CharKind::Bip1 { n, p, q },
                2 => CharKind::Bip2 { n, p, q },
                5 => CharKind::Bip5 { n, p, q },
                6 => CharKind::Bip6 { n, p, q },
                _ => return Err(CharError::Unsupported(spec.to_string())),
            },
            _ => return Err(CharError::Unsupported(spec.to_string())),
        };
        Ok(Self { kind, alpha })
    }

    pub fn n(&self) -> usize {
        match &self.kind {
            CharKind::InftyTilde { ks } => 1 + ks.iter().sum::<usize>(),
            CharKind::ThetaTilde { ks, l1 } => 2 + l1 + ks.iter().sum::<usize>(),
            CharKind::Gprime { n }
            | CharKind::Bip1 { n, .. }
            | CharKind::Bip2 { n, .. }
            | CharKind::Bip5 { n, .. }
            | CharKind::Bip6 { n, .. } => *n,
        }
    }

    /// Maximum out-degree of the family digraph.
    pub fn max_out_degree(&self) -> usize {
        match &self.kind {
            CharKind::InftyTilde { ks } | CharKind::ThetaTilde { ks, .. } => ks.len(),
            CharKind::Gprime { .. } => 2,
            // U has out-degree q, W out-degree p; the path leaves U in B¹/B⁵ and W in B²/B⁶
            CharKind::Bip1 { p, q, .. } | CharKind::Bip5 { p, q, .. } => (*p).max(q + 1),
            CharKind::Bip2 { p, .. } | CharKind::Bip6 { p, .. } => p + 1,
        }
    }

    /// Value of the characteristic function at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let a = self.alpha;
        let b = 1.0 - a;
        let y = (x - a) / b;
        let pow = |e: usize| y.powi(e as i32);
        match &self.kind {
            CharKind::InftyTilde { ks } => {
                let n = self.n();
                let s = ks.len() as f64;
                (x - s * a) / b * pow(n - 1) - ks.iter().map(|&k| pow(n - 1 - k)).sum::<f64>()
            }
            CharKind::ThetaTilde { ks, l1 } => {
                let n = self.n();
                let s = ks.len() as f64;
                (x - s * a) / b * pow(n - 1) - ks.iter().map(|&k| pow(n - 2 - l1 - k)).sum::<f64>()
            }
            &CharKind::Gprime { n } => {
                let t = (x - 2.0 * a) / b;
                t * t * pow(n - 2) - (2.0 * x - 3.0 * a) / b - 1.0
            }
            &CharKind::Bip1 { n, p, q } => pow(n - p - q) * bip_cubic(x, a, p as f64, q as f64) - b.powi(3) * q as f64,
            &CharKind::Bip2 { n, p, q } => pow(n - p - q) * bip_cubic(x, a, q as f64, p as f64) - b.powi(3) * p as f64,
            &CharKind::Bip5 { n, p, q } => {
                pow(n - p - q) * bip_cubic(x, a, p as f64, q as f64) - b * b * (x - a * q as f64)
            }
            &CharKind::Bip6 { n, p, q } => {
                pow(n - p - q) * bip_cubic(x, a, q as f64, p as f64) - b * b * (x - a * p as f64)
            }
        }
    }
}

/// Free-function form of [`CharEquation::eval`].
pub fn eval_char(eq: &CharEquation, x: f64) -> f64 {
    eq.eval(x)
}

/// Largest real root of the characteristic function.
///
/// Scans down from `Δ⁺ + 1`, where `f > 0` is required, in steps of
/// [`SCAN_STEP`] to `max(1, α·Δ⁺)`, halving the step if no sign change
/// turns up, then bisects to `tol`.
pub fn largest_root(eq: &CharEquation, tol: f64) -> Result<f64, CharError> {
    check_alpha(eq.alpha)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CharError::InvalidTolerance(tol));
    }
    let delta = eq.max_out_degree() as f64;
    let top = delta + 1.0;
    let bottom = (eq.alpha * delta).max(1.0);
    let f_top = eq.eval(top);
    if f_top.is_nan() || f_top <= 0.0 {
        return Err(CharError::NoSignChange { lo: bottom, hi: top });
    }
    let mut step = SCAN_STEP;
    let bracket = loop {
        if let Some(br) = scan_down(eq, top, bottom, step) {
            break br;
        }
        step /= 2.0;
        if step < 1e-6 {
            return Err(CharError::NoSignChange { lo: bottom, hi: top });
        }
    };
    let (mut lo, mut hi) = bracket;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eq.eval(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First grid cell `[lo, hi]` from the top with `f(hi) > 0 >= f(lo)`.
fn scan_down(eq: &CharEquation, top: f64, bottom: f64, step: f64) -> Option<(f64, f64)> {
    let mut hi = top;
    let mut k = 1;
    loop {
        let lo = (top - step * k as f64).max(bottom);
        if eq.eval(lo) <= 0.0 {
            return Some((lo, hi));
        }
        if lo <= bottom {
            return None;
        }
        hi = lo;
        k += 1;
    }
}

/// `λ_α(K↔_{p,q}) = (α(p+q) + sqrt(α²(p+q)² - 8αpq + 4pq)) / 2`.
pub fn kpq_radius(p: usize, q: usize, alpha: f64) -> Result<f64, CharError> {
    check_alpha(alpha)?;
    if p < 1 || q < 1 {
        return Err(CharError::InvalidParams { p, q });
    }
    let (p, q) = (p as f64, q as f64);
    let s = p + q;
    let disc = alpha * alpha * s * s - 8.0 * alpha * p * q + 4.0 * p * q;
    Ok(0.5 * (alpha * s + disc.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(spec: &str, alpha: f64) -> CharEquation {
        CharEquation::for_family(&spec.parse().unwrap(), alpha).unwrap()
    }

    #[test]
    fn infinity_one_one() {
        let e = eq("infty:1,1", 0.0);
        assert!(e.eval(2f64.sqrt()).abs() < 1e-14);
        for x in [0.5, 1.0, 1.7, 3.0] {
            assert!((e.eval(x) - (x.powi(3) - 2.0 * x)).abs() < 1e-12);
        }
        assert!((largest_root(&e, 1e-13).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn theta_zero_one_zero() {
        let e = eq("theta:0,1;0", 0.0);
        assert_eq!(e.eval(1.0), -1.0);
        for x in [0.3, 1.2, 2.5] {
            assert!((e.eval(x) - (x.powi(3) - x - 1.0)).abs() < 1e-12);
        }
        let r = largest_root(&e, 1e-13).unwrap();
        assert!((r - 1.324717957244746).abs() < 1e-12);
    }

    #[test]
    fn gprime_at_alpha_zero() {
        let e = eq("gprime:5", 0.0);
        assert_eq!(e.eval(1.0), -2.0);
        for x in [0.4, 1.3, 2.0] {
            assert!((e.eval(x) - (x.powi(5) - 2.0 * x - 1.0)).abs() < 1e-12);
        }
        assert_eq!(eq("g1:6", 0.3).kind, CharKind::Gprime { n: 6 });
    }

    #[test]
    fn bip1_at_alpha_zero() {
        let e = eq("bip1:5,2,2", 0.0);
        for x in [0.5, 1.5, 2.2] {
            assert!((e.eval(x) - (x.powi(4) - 4.0 * x * x - 2.0)).abs() < 1e-12);
        }
        let want = (2.0 + 6f64.sqrt()).sqrt();
        assert!((largest_root(&e, 1e-13).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn bip_cubic_matches_product_form() {
        // (x-αq)(x-αp)(x-α(q+1)) - (1-α)²q(x-αq) - (1-α)²q(p-1)(x-α(q+1))
        for &(p, q) in &[(2.0, 2.0), (3.0, 2.0), (4.0, 3.0), (2.0, 4.0)] {
            for &a in &[0.0, 0.2, 0.55, 0.9] {
                for &x in &[-1.0, 0.7, 2.3, 5.1] {
                    let b2 = (1.0 - a) * (1.0f64 - a);
                    let prod = (x - a * q) * (x - a * p) * (x - a * (q + 1.0))
                        - b2 * q * (x - a * q)
                        - b2 * q * (p - 1.0) * (x - a * (q + 1.0));
                    let got = bip_cubic(x, a, p, q);
                    assert!((got - prod).abs() < 1e-10 * (1.0 + prod.abs()), "{p} {q} {a} {x}");
                }
            }
        }
    }

    #[test]
    fn theta_zero_two_matches_q_of_x() {
        for n in 5..=10 {
            for &a in &[0.0, 0.3, 0.6] {
                let e = eq(&format!("theta:0,2;{}", n - 4), a);
                for &x in &[0.9, 1.4, 2.2] {
                    let y: f64 = (x - a) / (1.0 - a);
                    let q = (x - 2.0 * a) / (1.0 - a) * y.powi(n - 1) - y * y - 1.0;
                    assert!((e.eval(x) - q).abs() <= 1e-12 * (1.0 + q.abs()));
                }
            }
        }
    }

    #[test]
    fn kpq_closed_form() {
        assert_eq!(kpq_radius(2, 2, 0.0).unwrap(), 2.0);
        assert_eq!(kpq_radius(3, 2, 0.5).unwrap(), 2.5);
        assert_eq!(kpq_radius(4, 4, 0.0).unwrap(), 4.0);
        for p in 1..6 {
            for q in 1..6 {
                for a in [0.0, 0.35, 0.8] {
                    let x = kpq_radius(p, q, a).unwrap();
                    let (pf, qf) = (p as f64, q as f64);
                    let r = x * x - a * (pf + qf) * x - pf * qf + 2.0 * a * pf * qf;
                    assert!(r.abs() < 1e-10);
                }
            }
        }
        assert!(matches!(kpq_radius(2, 2, 1.0), Err(CharError::AlphaOutOfRange(_))));
        assert!(matches!(kpq_radius(0, 2, 0.1), Err(CharError::InvalidParams { .. })));
    }

    #[test]
    fn unsupported_families() {
        let spec = "cycle:5".parse().unwrap();
        assert!(matches!(CharEquation::for_family(&spec, 0.1), Err(CharError::Unsupported(_))));
        let spec = "bip3:7,2,2".parse().unwrap();
        assert!(matches!(CharEquation::for_family(&spec, 0.1), Err(CharError::Unsupported(_))));
    }

    #[test]
    fn n_matches_spec() {
        for s in ["infty:1,2,4", "theta:0,1,3;2", "gprime:7", "bip6:9,3,2"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(CharEquation::for_family(&spec, 0.0).unwrap().n(), spec.n());
        }
    }
}
