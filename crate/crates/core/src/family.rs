//! Named digraph families and enumerators of their compositions.
//!
//! Labelling conventions (0-indexed):
//!
//! | family | labels |
//! |--------|--------|
//! | `infty:k1..ks` | hub `0`; cycle `i` uses fresh consecutive vertices |
//! | `theta:k1..ks;l1` | `u = 0` (start of the `s` parallel paths), `v = 1`, then each path's interior, then the return path `v -> y1 .. -> u` |
//! | `bipK:n,p,q` | `v_i` is vertex `i - 1`; `U = {0..p-1}`, `W = {p..p+q-1}`, path vertices `p+q..n-1` |
//! | `gprime:n` | `w = 0`, `u = 1`, `v = 2`, `u_1..u_{n-3}` = `3..n-1` |
//! | `g1:n`, `g2:n` | `u = 0`, `w = 1`, `w_1 = 2`, `v = 3`, `w'_1..w'_{n-4}` = `4..n-1` |

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::digraph::{Digraph, DigraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("parse error at byte {position}: expected {expected}, found {found:?}")]
    Parse { position: usize, expected: String, found: String },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExceptionalKind {
    /// `θ(0,1,n-3)` plus the arc `(u, u_1)`.
    Gprime,
    /// `θ(1,1,n-4)` plus the arc `(w, w_1)`.
    G1,
    /// `θ(1,1,n-4)` plus the arc `(w_1, w)`.
    G2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        p: usize,
        q: usize,
    },
    /// `s` directed cycles of lengths `k_i + 1` sharing one hub vertex.
    InftyTilde {
        ks: Vec<usize>,
    },
    /// `s` internally disjoint paths `u -> v` of lengths `k_i + 1` and a
    /// return path `v -> u` of length `l1 + 1`.
    ThetaTilde {
        ks: Vec<usize>,
        l1: usize,
    },
    /// Bidirected `K_{p,q}` plus one attached path; `kind` in `1..=6`.
    BipB {
        kind: u8,
        n: usize,
        p: usize,
        q: usize,
    },
    Exceptional {
        kind: ExceptionalKind,
        n: usize,
    },
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FamilyError> {
    Err(FamilyError::InvalidSpec(msg.into()))
}

fn nondecreasing(ks: &[usize]) -> bool {
    ks.windows(2).all(|w| w[0] <= w[1])
}

impl FamilySpec {
    /// `∞̃` spec from an arbitrary-order cycle-length list.
    pub fn infty_sorted(mut ks: Vec<usize>) -> Result<Self, FamilyError> {
        ks.sort_unstable();
        let spec = Self::InftyTilde { ks };
        spec.validate()?;
        Ok(spec)
    }

    /// `θ̃` spec from an arbitrary-order path-length list.
    pub fn theta_sorted(mut ks: Vec<usize>, l1: usize) -> Result<Self, FamilyError> {
        ks.sort_unstable();
        let spec = Self::ThetaTilde { ks, l1 };
        spec.validate()?;
        Ok(spec)
    }

    /// `∞(k, l)` with `k <= l` in either argument order.
    pub fn infinity(k: usize, l: usize) -> Result<Self, FamilyError> {
        Self::infty_sorted(vec![k, l])
    }

    /// `θ(a, b, c)`: two paths with `a`, `b` interior vertices, return path with `c`.
    pub fn theta(a: usize, b: usize, c: usize) -> Result<Self, FamilyError> {
        Self::theta_sorted(vec![a, b], c)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            Self::Cycle { n } if *n < 2 => invalid("cycle needs n >= 2"),
            Self::Complete { n } if *n < 2 => invalid("complete digraph needs n >= 2"),
            Self::CompleteBipartite { p, q } if *p < 1 || *q < 1 => invalid("K_{p,q} needs p, q >= 1"),
            Self::InftyTilde { ks } => {
                if ks.len() < 2 {
                    return invalid("∞̃ needs s >= 2 cycles");
                }
                if ks.iter().any(|&k| k < 1) {
                    return invalid("∞̃ cycle parameters must be >= 1");
                }
                if !nondecreasing(ks) {
                    return invalid("∞̃ parameters must be nondecreasing");
                }
                self.check_size()
            }
            Self::ThetaTilde { ks, .. } => {
                if ks.len() < 2 {
                    return invalid("θ̃ needs s >= 2 paths");
                }
                if !nondecreasing(ks) {
                    return invalid("θ̃ path parameters must be nondecreasing");
                }
                if ks.len() >= 2 && ks[1] == 0 {
                    return invalid("θ̃ allows at most one zero path parameter (would duplicate arc u->v)");
                }
                self.check_size()
            }
            Self::BipB { kind, n, p, q } => {
                if !(1..=6).contains(kind) {
                    return invalid(format!("B-family kind {kind} outside 1..=6"));
                }
                check_bip_shape(*n, *p, *q)?;
                let odd = (n - p - q) % 2 == 1;
                match (kind, odd) {
                    (1..=4, false) => invalid(format!("B{kind} requires n-p-q odd, got {}", n - p - q)),
                    (5 | 6, true) => invalid(format!("B{kind} requires n-p-q even, got {}", n - p - q)),
                    _ => Ok(()),
                }
            }
            Self::Exceptional { n, .. } if *n < 5 => invalid("exceptional digraphs need n >= 5"),
            _ => self.check_size(),
        }
    }

    fn check_size(&self) -> Result<(), FamilyError> {
        let n = self.n();
        if n > crate::digraph::MAX_VERTICES {
            return invalid(format!("{n} vertices exceeds {}", crate::digraph::MAX_VERTICES));
        }
        Ok(())
    }

    /// Number of vertices of the generated digraph.
    pub fn n(&self) -> usize {
        match self {
            Self::Cycle { n } | Self::Complete { n } => *n,
            Self::CompleteBipartite { p, q } => p + q,
            Self::InftyTilde { ks } => ks.iter().sum::<usize>() + 1,
            Self::ThetaTilde { ks, l1 } => ks.iter().sum::<usize>() + l1 + 2,
            Self::BipB { n, .. } | Self::Exceptional { n, .. } => *n,
        }
    }

    /// Builds the labelled digraph.
    pub fn generate(&self) -> Result<Digraph, FamilyError> {
        self.validate()?;
        let d = match self {
            Self::Cycle { n } => Digraph::cycle(*n)?,
            Self::Complete { n } => {
                let arcs: Vec<_> =
                    (0..*n).flat_map(|i| (0..*n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
                Digraph::new(*n, &arcs)?
            }
            Self::CompleteBipartite { p, q } => Digraph::new(p + q, &kpq_arcs(*p, *q))?,
            Self::InftyTilde { ks } => {
                let mut arcs = Vec::new();
                let mut next = 1;
                for &k in ks {
                    let mut prev = 0;
                    for _ in 0..k {
                        arcs.push((prev, next));
                        prev = next;
                        next += 1;
                    }
                    arcs.push((prev, 0));
                }
                Digraph::new(self.n(), &arcs)?
            }
            Self::ThetaTilde { ks, l1 } => {
                let (u, v) = (0, 1);
                let mut arcs = Vec::new();
                let mut next = 2;
                for &k in ks {
                    next = push_path(&mut arcs, u, v, k, next);
                }
                push_path(&mut arcs, v, u, *l1, next);
                Digraph::new(self.n(), &arcs)?
            }
            Self::BipB { kind, n, p, q } => bip_construction(*kind, *n, *p, *q)?,
            Self::Exceptional { kind, n } => exceptional(*kind, *n)?,
        };
        debug_assert!(d.is_strongly_connected());
        Ok(d)
    }
}

/// Appends the path `from -> fresh.. -> to` with `interior` fresh vertices
/// starting at `next`; returns the next unused label.
fn push_path(arcs: &mut Vec<(usize, usize)>, from: usize, to: usize, interior: usize, mut next: usize) -> usize {
    let mut prev = from;
    for _ in 0..interior {
        arcs.push((prev, next));
        prev = next;
        next += 1;
    }
    arcs.push((prev, to));
    next
}

fn kpq_arcs(p: usize, q: usize) -> Vec<(usize, usize)> {
    let mut arcs = Vec::with_capacity(2 * p * q);
    for u in 0..p {
        for w in p..p + q {
            arcs.push((u, w));
            arcs.push((w, u));
        }
    }
    arcs
}

fn check_bip_shape(n: usize, p: usize, q: usize) -> Result<(), FamilyError> {
    if q < 2 || p < q {
        return invalid(format!("B-family needs p >= q >= 2, got p={p}, q={q}"));
    }
    if p + q + 1 > n {
        return invalid(format!("B-family needs p+q <= n-1, got p+q={}, n={n}", p + q));
    }
    if n > crate::digraph::MAX_VERTICES {
        return invalid(format!("{n} vertices exceeds {}", crate::digraph::MAX_VERTICES));
    }
    Ok(())
}

/// The `B^kind_{n,p,q}` construction without the parity requirement, so the
/// bipartite/parity correspondence can be observed directly. All other shape
/// constraints (`p >= q >= 2`, `p + q <= n - 1`) still apply.
pub fn bip_construction(kind: u8, n: usize, p: usize, q: usize) -> Result<Digraph, FamilyError> {
    check_bip_shape(n, p, q)?;
    // v_i -> i-1
    let v = |i: usize| i - 1;
    let (start, end) = match kind {
        1 | 3 => (v(1), v(p)),
        2 | 4 => (v(p + 1), v(p + q)),
        5 => (v(1), v(p + 1)),
        6 => (v(p + 1), v(1)),
        _ => return invalid(format!("B-family kind {kind} outside 1..=6")),
    };
    let mut arcs = kpq_arcs(p, q);
    push_path(&mut arcs, start, end, n - p - q, p + q);
    match kind {
        3 => retarget_last(&mut arcs, v(n), v(p), v(1)),
        4 => retarget_last(&mut arcs, v(n), v(p + q), v(p + 1)),
        _ => {}
    }
    Ok(Digraph::new(n, &arcs)?)
}

fn retarget_last(arcs: &mut [(usize, usize)], tail: usize, from: usize, to: usize) {
    let arc = arcs.iter_mut().find(|a| **a == (tail, from)).expect("path end arc present");
    arc.1 = to;
}

fn exceptional(kind: ExceptionalKind, n: usize) -> Result<Digraph, FamilyError> {
    let mut arcs = Vec::new();
    match kind {
        ExceptionalKind::Gprime => {
            let (w, u, v, u1) = (0, 1, 2, 3);
            arcs.extend([(w, v), (w, u), (u, v)]);
            push_path(&mut arcs, v, w, n - 3, 3);
            arcs.push((u, u1));
        }
        ExceptionalKind::G1 | ExceptionalKind::G2 => {
            let (u, w, w1, v) = (0, 1, 2, 3);
            arcs.extend([(u, w), (w, v), (u, w1), (w1, v)]);
            push_path(&mut arcs, v, u, n - 4, 4);
            arcs.push(if kind == ExceptionalKind::G1 { (w, w1) } else { (w1, w) });
        }
    }
    Ok(Digraph::new(n, &arcs)?)
}

/// Which composition family [`list_compositions`] enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionFamily {
    InftyTilde,
    ThetaTilde,
}

/// Nondecreasing sequences of length `parts` with entries `>= min` summing to `total`.
fn partitions(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts_left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // the smallest remaining part is at most remaining / parts_left
        let mut k = min;
        while k * parts_left <= remaining {
            cur.push(k);
            rec(remaining - k, parts_left - 1, k, cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, parts, min, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Every valid `∞̃` or `θ̃` spec on `n` vertices with `s` cycles.
pub fn list_compositions(family: CompositionFamily, n: usize, s: usize) -> Result<Vec<FamilySpec>, FamilyError> {
    if s < 2 {
        return Err(FamilyError::Infeasible(format!("s = {s} < 2")));
    }
    if n < s + 1 {
        return Err(FamilyError::Infeasible(format!("n = {n} < s + 1 = {}", s + 1)));
    }
    let specs = match family {
        CompositionFamily::InftyTilde => {
            partitions(n - 1, s, 1).into_iter().map(|ks| FamilySpec::InftyTilde { ks }).collect()
        }
        CompositionFamily::ThetaTilde => {
            let mut specs = Vec::new();
            for l1 in 0..=n - 2 {
                for ks in partitions(n - 2 - l1, s, 0) {
                    if ks[1] > 0 {
                        specs.push(FamilySpec::ThetaTilde { ks, l1 });
                    }
                }
            }
            specs
        }
    };
    Ok(specs)
}

/// Every strongly connected bicyclic digraph on `n` vertices: `∞(k, l)` and `θ(a, b, c)`.
pub fn list_bicyclic(n: usize) -> Result<Vec<FamilySpec>, FamilyError> {
    if n < 3 {
        return Err(FamilyError::Infeasible(format!("bicyclic digraphs need n >= 3, got {n}")));
    }
    let mut specs = list_compositions(CompositionFamily::InftyTilde, n, 2)?;
    specs.extend(list_compositions(CompositionFamily::ThetaTilde, n, 2)?);
    Ok(specs)
}

fn join(ks: &[usize]) -> String {
    ks.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cycle { n } => write!(f, "cycle:{n}"),
            Self::Complete { n } => write!(f, "complete:{n}"),
            Self::CompleteBipartite { p, q } => write!(f, "kpq:{p},{q}"),
            Self::InftyTilde { ks } => write!(f, "infty:{}", join(ks)),
            Self::ThetaTilde { ks, l1 } => write!(f, "theta:{};{l1}", join(ks)),
            Self::BipB { kind, n, p, q } => write!(f, "bip{kind}:{n},{p},{q}"),
            Self::Exceptional { kind, n } => {
                let name = match kind {
                    ExceptionalKind::Gprime => "gprime",
                    ExceptionalKind::G1 => "g1",
                    ExceptionalKind::G2 => "g2",
                };
                write!(f, "{name}:{n}")
            }
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn fail<T>(&self, expected: &str) -> Result<T, FamilyError> {
        let found = self.text[self.pos..].chars().next().map_or_else(|| "end of input".to_string(), |c| c.to_string());
        Err(FamilyError::Parse { position: self.pos, expected: expected.to_string(), found })
    }

    fn number(&mut self) -> Result<usize, FamilyError> {
        let digits = self.text[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.fail("a decimal number");
        }
        let value =
            self.text[self.pos..self.pos + digits].parse().or_else(|_| self.fail("a number that fits in usize"))?;
        self.pos += digits;
        Ok(value)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FamilyError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("{c:?}"))
        }
    }

    fn list(&mut self) -> Result<Vec<usize>, FamilyError> {
        let mut xs = vec![self.number()?];
        while self.eat(',') {
            xs.push(self.number()?);
        }
        Ok(xs)
    }

    fn fixed<const N: usize>(&mut self) -> Result<[usize; N], FamilyError> {
        let mut xs = [0; N];
        for (i, x) in xs.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *x = self.number()?;
        }
        Ok(xs)
    }

    fn end(&self) -> Result<(), FamilyError> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }
}

const KINDS: &str = "one of cycle, complete, kpq, infty, theta, bip1..bip6, gprime, g1, g2";

/// Parses the family text syntax (`cycle:n`, `theta:k1,..,ks;l1`, `bip5:n,p,q`, ...)
/// and validates the result.
pub fn parse_spec(text: &str) -> Result<FamilySpec, FamilyError> {
    let Some(colon) = text.find(':') else {
        let mut c = Cursor { text, pos: text.len() };
        if text.is_empty() {
            c.pos = 0;
            return c.fail(KINDS);
        }
        return c.fail("':'");
    };
    let name = &text[..colon];
    let mut c = Cursor { text, pos: colon + 1 };
    let spec = match name {
        "cycle" => FamilySpec::Cycle { n: c.number()? },
        "complete" => FamilySpec::Complete { n: c.number()? },
        "kpq" => {
            let [p, q] = c.fixed()?;
            FamilySpec::CompleteBipartite { p, q }
        }
        "infty" => FamilySpec::InftyTilde { ks: c.list()? },
        "theta" => {
            let ks = c.list()?;
            c.expect(';')?;
            FamilySpec::ThetaTilde { ks, l1: c.number()? }
        }
        "gprime" => FamilySpec::Exceptional { kind: ExceptionalKind::Gprime, n: c.number()? },
        "g1" => FamilySpec::Exceptional { kind: ExceptionalKind::G1, n: c.number()? },
        "g2" => FamilySpec::Exceptional { kind: ExceptionalKind::G2, n: c.number()? },
        _ => match name.strip_prefix("bip").and_then(|k| k.parse::<u8>().ok()) {
            Some(kind @ 1..=6) if name.len() == 4 => {
                let [n, p, q] = c.fixed()?;
                FamilySpec::BipB { kind, n, p, q }
            }
            _ => return Err(FamilyError::Parse { position: 0, expected: KINDS.to_string(), found: name.to_string() }),
        },
    };
    c.end()?;
    spec.validate()?;
    Ok(spec)
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}
