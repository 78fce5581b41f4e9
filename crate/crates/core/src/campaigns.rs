//! Verification campaigns: exhaustive enumeration at small order, family
//! rankings, bipartite inequality chains and randomized lemma checks.
//!
//! Every campaign produces a [`VerificationReport`] carrying its own
//! parameters, so [`replay`] can re-run it from the serialized form.

use std::collections::HashMap;
use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{bits, CanonicalKey, Digraph, DigraphError};
use crate::family::{list_bicyclic, list_compositions, CompositionFamily, FamilyError, FamilySpec};
use crate::spectral::{
    separation, spectral_radius, spectral_radius_reducible, Enclosure, SpectralError, DECISION_MARGIN, DEFAULT_TOL,
};

/// Exhaustive enumeration covers `2^(n(n-1))` labelled digraphs.
pub const MAX_ENUM_VERTICES: usize = 5;
/// Strongly connected digraphs up to isomorphism, indexed by `n`.
pub const SC_CLASS_COUNTS: [usize; 6] = [0, 1, 1, 5, 83, 5048];
/// Equality claims between two radii are checked at this tolerance.
pub const EQUALITY_TOL: f64 = 1e-10;
/// α values cycled through by the lemma fuzzing trials.
pub const FUZZ_ALPHA_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Arc density of the random digraph model.
pub const FUZZ_DENSITY: f64 = 0.4;
/// Family digraphs swept by the lemma campaign have at most this many vertices.
pub const FUZZ_FAMILY_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CampaignError {
    #[error("n = {n} exceeds the enumeration bound {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CampaignError> {
    Err(CampaignError::InvalidParams(msg.into()))
}

// ---------------------------------------------------------------------------
// enumeration

fn enumerate_uncached(n: usize) -> Vec<Digraph> {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let total = 1u64 << slots.len();
    let best: HashMap<CanonicalKey, u64> = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<CanonicalKey, u64>, mask| {
            let mut out = vec![0u64; n];
            for b in bits(mask) {
                let (i, j) = slots[b];
                out[i] |= 1u64 << j;
            }
            let d = Digraph::from_out_masks_unchecked(n, out);
            if d.is_strongly_connected() {
                let key = d.canonical_key().expect("n within canonical bound");
                let e = acc.entry(key).or_insert(mask);
                *e = (*e).min(mask);
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, m) in b {
                let e = a.entry(k).or_insert(m);
                *e = (*e).min(m);
            }
            a
        });
    let mut classes: Vec<(CanonicalKey, u64)> = best.into_iter().collect();
    classes.sort();
    classes
        .into_iter()
        .map(|(_, mask)| {
            let mut out = vec![0u64; n];
            for b in bits(mask) {
                let (i, j) = slots[b];
                out[i] |= 1u64 << j;
            }
            Digraph::from_out_masks_unchecked(n, out)
        })
        .collect()
}

/// One strongly connected digraph per isomorphism class on `n` vertices,
/// sorted by canonical key. Each is the labelled digraph with the smallest
/// arc mask in its class (off-diagonal slots in row-major order, slot 0 as
/// the least significant bit).
pub fn enumerate_sc_digraphs(n: usize) -> Result<Vec<Digraph>, CampaignError> {
    if n > MAX_ENUM_VERTICES {
        return Err(CampaignError::TooLarge { n, max: MAX_ENUM_VERTICES });
    }
    if n < 2 {
        return invalid(format!("enumeration needs n >= 2, got {n}"));
    }
    static CACHE: [OnceLock<Vec<Digraph>>; MAX_ENUM_VERTICES + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    Ok(CACHE[n].get_or_init(|| enumerate_uncached(n)).clone())
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    /// Family spec or canonical key.
    pub spec: String,
    pub alpha: f64,
    pub radius: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Indistinguishable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    /// `None` for claims aggregated over several α values.
    pub alpha: Option<f64>,
    pub status: Status,
    /// Exploratory verdicts are recorded but never count as failures.
    pub exploratory: bool,
    pub margin: f64,
    /// Number of instances the claim was checked on.
    pub instances: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremeFamily {
    InftyTilde,
    ThetaTilde,
    /// `∞̃` and `θ̃` digraphs with the same `s` together.
    Combined,
    /// All `∞(k, l)` and `θ(a, b, c)` on `n` vertices; ignores `s`.
    Bicyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "campaign", rename_all = "kebab-case")]
pub enum CampaignParams {
    FamilyExtremes { family: ExtremeFamily, n: usize, s: usize },
    GlobalMin { n: usize },
    BipartiteMin { n: usize, p: usize, q: usize },
    TransformLemmas { trials: usize, seed: u64 },
}

impl CampaignParams {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FamilyExtremes { .. } => "family-extremes",
            Self::GlobalMin { .. } => "global-min",
            Self::BipartiteMin { .. } => "bipartite-min",
            Self::TransformLemmas { .. } => "transform-lemmas",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub alpha_grid: Vec<f64>,
    pub params: Vec<CampaignParams>,
    pub items: Vec<ReportItem>,
    pub verdicts: Vec<Verdict>,
    pub runtime_s: f64,
}

impl VerificationReport {
    fn new(params: CampaignParams, alpha_grid: Vec<f64>) -> Self {
        Self {
            campaign: params.name().to_string(),
            alpha_grid,
            params: vec![params],
            items: Vec::new(),
            verdicts: Vec::new(),
            runtime_s: 0.0,
        }
    }

    /// True iff every non-exploratory verdict passed.
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.exploratory || v.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.exploratory && v.status != Status::Pass)
    }

    /// Concatenates reports in order. The α grid is the ordered union.
    pub fn merge(reports: Vec<VerificationReport>) -> Option<VerificationReport> {
        let mut it = reports.into_iter();
        let mut acc = it.next()?;
        for r in it {
            if r.campaign != acc.campaign {
                acc.campaign = "mixed".into();
            }
            for a in r.alpha_grid {
                if !acc.alpha_grid.contains(&a) {
                    acc.alpha_grid.push(a);
                }
            }
            for p in r.params {
                if !acc.params.contains(&p) {
                    acc.params.push(p);
                }
            }
            acc.items.extend(r.items);
            acc.verdicts.extend(r.verdicts);
            acc.runtime_s += r.runtime_s;
        }
        Some(acc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One row per item with header `spec,alpha,radius,lo,hi`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(w);
        for item in &self.items {
            wtr.serialize(item)?;
        }
        if self.items.is_empty() {
            wtr.write_record(["spec", "alpha", "radius", "lo", "hi"])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// True if both reports hold the same items and verdicts.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.items == other.items && self.verdicts == other.verdicts
    }
}

fn item(spec: String, alpha: f64, enc: Enclosure) -> ReportItem {
    ReportItem { spec, alpha, radius: enc.mid(), lo: enc.lo, hi: enc.hi }
}

fn radius(d: &Digraph, alpha: f64) -> Result<Enclosure, CampaignError> {
    Ok(spectral_radius(d, alpha, DEFAULT_TOL)?.enclosure)
}

fn fmt_enc(e: Enclosure) -> String {
    format!("{:.12}", e.mid())
}

// ---------------------------------------------------------------------------
// ranking helpers

type Ranked = Vec<(String, Enclosure)>;

fn rank(mut entries: Ranked) -> Ranked {
    entries.sort_by(|a, b| a.1.mid().total_cmp(&b.1.mid()).then_with(|| a.0.cmp(&b.0)));
    entries
}

/// Checks that `claimed` sits at position `idx` of `ranked` and is
/// separated from its neighbours by more than the decision margin.
fn unique_rank_verdict(claim: String, alpha: f64, ranked: &Ranked, idx: usize, claimed: &str) -> Verdict {
    let mut v = Verdict {
        claim,
        alpha: Some(alpha),
        status: Status::Pass,
        exploratory: false,
        margin: DECISION_MARGIN,
        instances: ranked.len(),
        detail: String::new(),
    };
    let Some(ci) = ranked.iter().position(|r| r.0 == claimed) else {
        v.status = Status::Fail;
        v.detail = format!("{claimed} is not in the domain");
        return v;
    };
    let (held, held_enc) = &ranked[idx];
    let claimed_enc = ranked[ci].1;
    if ci != idx {
        let diff = (claimed_enc.mid() - held_enc.mid()).abs();
        v.status = if diff <= DECISION_MARGIN { Status::Indistinguishable } else { Status::Fail };
        v.detail = format!(
            "position held by {held} ({}), {claimed} has {} (difference {diff:.3e})",
            fmt_enc(*held_enc),
            fmt_enc(claimed_enc)
        );
        return v;
    }
    let mut worst: Option<(f64, &str)> = None;
    if idx > 0 {
        worst = Some((separation(ranked[idx - 1].1, claimed_enc), &ranked[idx - 1].0));
    }
    if idx + 1 < ranked.len() {
        let gap = separation(claimed_enc, ranked[idx + 1].1);
        if worst.is_none_or(|(w, _)| gap < w) {
            worst = Some((gap, &ranked[idx + 1].0));
        }
    }
    match worst {
        None => v.detail = format!("{claimed} ({}) is the only member", fmt_enc(claimed_enc)),
        Some((gap, other)) if gap > DECISION_MARGIN => {
            v.detail = format!("{claimed} ({}), nearest {other} at gap {gap:.3e}", fmt_enc(claimed_enc))
        }
        Some((gap, other)) => {
            v.status = Status::Indistinguishable;
            v.detail = format!("{claimed} and {other} separated by only {gap:.3e}");
        }
    }
    v
}

fn infty_max(n: usize, s: usize) -> FamilySpec {
    let mut ks = vec![1; s - 1];
    ks.push(n - s);
    FamilySpec::InftyTilde { ks }
}

fn infty_balanced(n: usize, s: usize) -> FamilySpec {
    let a = (n - 1) / s;
    let r = (n - 1) - s * a;
    let mut ks = vec![a; s - r];
    ks.extend(std::iter::repeat_n(a + 1, r));
    FamilySpec::InftyTilde { ks }
}

fn theta_max(n: usize, s: usize) -> FamilySpec {
    let mut ks = vec![0];
    ks.extend(std::iter::repeat_n(1, s - 2));
    ks.push(n - s);
    FamilySpec::ThetaTilde { ks, l1: 0 }
}

fn theta_min(n: usize, s: usize) -> FamilySpec {
    let mut ks = vec![0];
    ks.extend(std::iter::repeat_n(1, s - 1));
    FamilySpec::ThetaTilde { ks, l1: n - s - 1 }
}

fn spec_radii(specs: &[FamilySpec], alpha: f64) -> Result<Ranked, CampaignError> {
    specs.par_iter().map(|spec| Ok((spec.to_string(), radius(&spec.generate()?, alpha)?))).collect()
}

// ---------------------------------------------------------------------------
// family extremes

/// Ranks every member of a composition family by `λ_α` and checks the
/// claimed unique maximizer and minimizer (for `Bicyclic`, the three
/// smallest and the largest).
pub fn verify_family_extremes(
    family: ExtremeFamily,
    n: usize,
    s: usize,
    alpha: f64,
) -> Result<VerificationReport, CampaignError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(CampaignParams::FamilyExtremes { family, n, s }, vec![alpha]);
    let domain: Vec<FamilySpec> = match family {
        ExtremeFamily::InftyTilde => list_compositions(CompositionFamily::InftyTilde, n, s)?,
        ExtremeFamily::ThetaTilde => list_compositions(CompositionFamily::ThetaTilde, n, s)?,
        ExtremeFamily::Combined => {
            let mut all = list_compositions(CompositionFamily::InftyTilde, n, s)?;
            all.extend(list_compositions(CompositionFamily::ThetaTilde, n, s)?);
            all
        }
        ExtremeFamily::Bicyclic => {
            if n < 5 {
                return Err(FamilyError::Infeasible(format!("bicyclic ranking needs n >= 5, got {n}")).into());
            }
            list_bicyclic(n)?
        }
    };
    let ranked = rank(spec_radii(&domain, alpha)?);
    report.items = ranked.iter().map(|(s, e)| item(s.clone(), alpha, *e)).collect();
    let top = ranked.len() - 1;
    let mut claims: Vec<(String, usize, FamilySpec)> = Vec::new();
    match family {
        ExtremeFamily::InftyTilde => {
            claims.push(("∞̃ unique maximum".into(), top, infty_max(n, s)));
            claims.push(("∞̃ unique minimum (balanced)".into(), 0, infty_balanced(n, s)));
        }
        ExtremeFamily::ThetaTilde => {
            claims.push(("θ̃ unique maximum".into(), top, theta_max(n, s)));
            claims.push(("θ̃ unique minimum".into(), 0, theta_min(n, s)));
        }
        ExtremeFamily::Combined => {
            claims.push(("∞̃ ∪ θ̃ unique maximum".into(), top, infty_max(n, s)));
            claims.push(("∞̃ ∪ θ̃ unique minimum".into(), 0, theta_min(n, s)));
        }
        ExtremeFamily::Bicyclic => {
            claims.push(("bicyclic unique minimum".into(), 0, FamilySpec::theta(0, 1, n - 3)?));
            claims.push(("bicyclic unique second minimum".into(), 1, FamilySpec::theta(1, 1, n - 4)?));
            claims.push(("bicyclic unique third minimum".into(), 2, FamilySpec::theta(0, 2, n - 4)?));
            claims.push(("bicyclic unique maximum".into(), top, FamilySpec::infinity(1, n - 2)?));
        }
    }
    for (name, idx, spec) in claims {
        let claim = format!(
            "{name}: {spec} (n={n}{})",
            if family == ExtremeFamily::Bicyclic { String::new() } else { format!(", s={s}") }
        );
        report.verdicts.push(unique_rank_verdict(claim, alpha, &ranked, idx, &spec.to_string()));
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

// ---------------------------------------------------------------------------
// global minima

/// Largest α for which the rank claims are a theorem rather than a conjecture.
pub const THEOREM_ALPHA_MAX: f64 = 0.5;

/// Ranks every strongly connected digraph on `n` vertices and checks that
/// the four smallest radii belong to `C_n`, `θ(0,1,n-3)`, `θ(1,1,n-4)` and
/// `θ(0,2,n-4)`. Above α = 1/2 all verdicts are exploratory.
pub fn verify_global_minima(n: usize, alpha: f64) -> Result<VerificationReport, CampaignError> {
    let start = Instant::now();
    if n != MAX_ENUM_VERTICES {
        if n > MAX_ENUM_VERTICES {
            return Err(CampaignError::TooLarge { n, max: MAX_ENUM_VERTICES });
        }
        return invalid(format!("global minima are checked at n = {MAX_ENUM_VERTICES} only, got {n}"));
    }
    let mut report = VerificationReport::new(CampaignParams::GlobalMin { n }, vec![alpha]);
    let classes = enumerate_sc_digraphs(n)?;
    let entries: Ranked = classes
        .par_iter()
        .map(|d| Ok((d.canonical_key()?.to_string(), radius(d, alpha)?)))
        .collect::<Result<_, CampaignError>>()?;
    let ranked = rank(entries);
    report.items = ranked.iter().map(|(s, e)| item(s.clone(), alpha, *e)).collect();

    // distinct radius levels, merging values within the margin
    let mut level = vec![0usize; ranked.len()];
    for i in 1..ranked.len() {
        let step = ranked[i].1.mid() - ranked[i - 1].1.mid() > DECISION_MARGIN;
        level[i] = level[i - 1] + step as usize;
    }
    let exploratory = alpha > THEOREM_ALPHA_MAX;
    let named = [
        (FamilySpec::Cycle { n }, "minimum"),
        (FamilySpec::theta(0, 1, n - 3)?, "second minimum"),
        (FamilySpec::theta(1, 1, n - 4)?, "third minimum"),
        (FamilySpec::theta(0, 2, n - 4)?, "fourth minimum"),
    ];
    for (rank_idx, (spec, what)) in named.iter().enumerate() {
        let key = spec.generate()?.canonical_key()?.to_string();
        let pos = ranked.iter().position(|r| r.0 == key).expect("named digraph is strongly connected");
        let enc = ranked[pos].1;
        let mut v = Verdict {
            claim: format!("{spec} attains the {what} over strongly connected digraphs (n={n})"),
            alpha: Some(alpha),
            status: Status::Pass,
            exploratory,
            margin: DECISION_MARGIN,
            instances: ranked.len(),
            detail: format!("{spec} = {key}, λ = {}, level {}", fmt_enc(enc), level[pos] + 1),
        };
        if level[pos] != rank_idx {
            v.status = Status::Fail;
            let holder = level.iter().position(|&l| l == rank_idx).map(|i| ranked[i].0.clone()).unwrap_or_default();
            v.detail.push_str(&format!("; level {} first held by {holder}", rank_idx + 1));
        }
        if rank_idx == 0 && (enc.mid() - 1.0).abs() > DECISION_MARGIN {
            v.status = Status::Fail;
            v.detail.push_str("; radius differs from 1");
        }
        report.verdicts.push(v);

        // uniqueness is observational only
        let peers: Vec<&str> =
            (0..ranked.len()).filter(|&i| i != pos && level[i] == level[pos]).map(|i| ranked[i].0.as_str()).collect();
        let mut u = Verdict {
            claim: format!("{spec} is the only digraph at its level (observational)"),
            alpha: Some(alpha),
            status: Status::Pass,
            exploratory: true,
            margin: DECISION_MARGIN,
            instances: ranked.len(),
            detail: String::new(),
        };
        let next_gap = ranked.get(pos + 1).map(|r| separation(enc, r.1));
        let prev_gap = pos.checked_sub(1).map(|i| separation(ranked[i].1, enc));
        let gap = next_gap.into_iter().chain(prev_gap).fold(f64::INFINITY, f64::min);
        if !peers.is_empty() {
            u.status = Status::Fail;
            u.detail = format!("shares its level with {}", peers.join(", "));
        } else if gap <= DECISION_MARGIN {
            u.status = Status::Indistinguishable;
            u.detail = format!("nearest neighbour gap {gap:.3e}");
        } else {
            u.detail = format!("nearest neighbour gap {gap:.3e}");
        }
        report.verdicts.push(u);
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

// ---------------------------------------------------------------------------
// bipartite minimum

fn claim_verdict(claim: String, alpha: f64, a: Enclosure, b: Enclosure, kind: Relation, detail: String) -> Verdict {
    let status = kind.judge_radii(a, b);
    Verdict { claim, alpha: Some(alpha), status, exploratory: false, margin: kind.margin(), instances: 1, detail }
}

/// What a claimed relation `a ⋈ b` between two radii asserts about
/// `diff = a - b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Greater,
    AtLeast,
    Equal,
}

impl Relation {
    fn margin(self) -> f64 {
        match self {
            Relation::Equal => EQUALITY_TOL,
            _ => DECISION_MARGIN,
        }
    }

    /// Judges `a ⋈ b` for two certified radii: disjoint enclosures in the
    /// claimed direction settle a strict claim outright.
    fn judge_radii(self, a: Enclosure, b: Enclosure) -> Status {
        if self == Relation::Greater && a.lo > b.hi {
            return Status::Pass;
        }
        self.judge(a.mid() - b.mid())
    }

    fn judge(self, diff: f64) -> Status {
        match self {
            Relation::Greater if diff > DECISION_MARGIN => Status::Pass,
            Relation::Greater if diff >= -DECISION_MARGIN => Status::Indistinguishable,
            Relation::AtLeast if diff >= -DECISION_MARGIN => Status::Pass,
            Relation::Equal if diff.abs() <= EQUALITY_TOL => Status::Pass,
            _ => Status::Fail,
        }
    }
}

/// Pairwise inequalities between the `B` constructions at `(n, p, q)` and,
/// for `n <= 5`, a full search over strongly connected bipartite digraphs
/// containing `K↔_{p,q}`.
pub fn verify_bipartite_minimum(n: usize, p: usize, q: usize, alpha: f64) -> Result<VerificationReport, CampaignError> {
    let start = Instant::now();
    if !(p >= q && q >= 2 && p + q < n) {
        return invalid(format!("need p >= q >= 2 and p + q <= n - 1, got (n, p, q) = ({n}, {p}, {q})"));
    }
    let mut report = VerificationReport::new(CampaignParams::BipartiteMin { n, p, q }, vec![alpha]);
    let odd = (n - p - q) % 2 == 1;
    let mut needed: Vec<(u8, usize)> =
        if odd { vec![(1, n), (2, n), (3, n), (4, n)] } else { vec![(5, n), (6, n), (1, n - 1)] };
    if odd && n - p - q >= 3 {
        needed.push((5, n - 1));
    }
    let mut lam: HashMap<(u8, usize), Enclosure> = HashMap::new();
    for &(kind, m) in &needed {
        let spec = FamilySpec::BipB { kind, n: m, p, q };
        let enc = radius(&spec.generate()?, alpha)?;
        report.items.push(item(spec.to_string(), alpha, enc));
        lam.insert((kind, m), enc);
    }
    let r = |k: u8, m: usize| lam[&(k, m)];
    let name = |k: u8, m: usize| FamilySpec::BipB { kind: k, n: m, p, q }.to_string();
    let mut push = |a: (u8, usize), b: (u8, usize), rel: Relation, text: &str| {
        let (ea, eb) = (r(a.0, a.1), r(b.0, b.1));
        let claim = format!("{} {text} {}", name(a.0, a.1), name(b.0, b.1));
        let detail = format!("difference {:.3e}", ea.mid() - eb.mid());
        report.verdicts.push(claim_verdict(claim, alpha, ea, eb, rel, detail));
    };
    if odd {
        if p == q {
            push((2, n), (1, n), Relation::Equal, "=");
        } else {
            push((2, n), (1, n), Relation::Greater, ">");
        }
        push((3, n), (1, n), Relation::Greater, ">");
        push((4, n), (2, n), Relation::Greater, ">");
        if n - p - q >= 3 {
            push((5, n - 1), (1, n), Relation::Greater, ">");
        }
    } else {
        if p == q || alpha == 0.0 {
            push((6, n), (5, n), Relation::Equal, "=");
        } else {
            push((6, n), (5, n), Relation::Greater, ">");
        }
        push((1, n - 1), (5, n), Relation::AtLeast, ">=");
    }

    if n <= MAX_ENUM_VERTICES {
        let classes = enumerate_sc_digraphs(n)?;
        let domain: Vec<&Digraph> = classes
            .iter()
            .filter(|d| d.bipartition().is_some() && d.contains_bidirected_kpq(p, q).unwrap_or(false))
            .collect();
        let entries: Ranked = domain
            .par_iter()
            .map(|d| Ok((d.canonical_key()?.to_string(), radius(d, alpha)?)))
            .collect::<Result<_, CampaignError>>()?;
        let ranked = rank(entries);
        let key_of = |k: u8| -> Result<String, CampaignError> {
            Ok(FamilySpec::BipB { kind: k, n, p, q }.generate()?.canonical_key()?.to_string())
        };
        if odd {
            let key = key_of(1)?;
            let mut v = unique_rank_verdict(
                format!("{} is the unique minimizer over bipartite digraphs containing K↔{p},{q} (n={n})", name(1, n)),
                alpha,
                &ranked,
                0,
                &key,
            );
            v.detail = format!("{} = {key}; {}", name(1, n), v.detail);
            report.verdicts.push(v);
        } else {
            let k5 = key_of(5)?;
            let k6 = key_of(6)?;
            let min = ranked[0].1.mid();
            let at_min: Vec<&str> =
                ranked.iter().filter(|r| r.1.mid() - min <= DECISION_MARGIN).map(|r| r.0.as_str()).collect();
            let allowed: Vec<&str> = if alpha == 0.0 { vec![&k5, &k6] } else { vec![&k5] };
            let ok = at_min.contains(&k5.as_str()) && at_min.iter().all(|k| allowed.contains(k));
            report.verdicts.push(Verdict {
                claim: format!(
                    "minimizers over bipartite digraphs containing K↔{p},{q} (n={n}) are {}",
                    if alpha == 0.0 { "B5/B6" } else { "B5 only" }
                ),
                alpha: Some(alpha),
                status: if ok { Status::Pass } else { Status::Fail },
                exploratory: false,
                margin: DECISION_MARGIN,
                instances: ranked.len(),
                detail: format!("minimizers: {}", at_min.join(", ")),
            });
        }
        report.items.extend(ranked.iter().map(|(s, e)| item(s.clone(), alpha, *e)));
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

// ---------------------------------------------------------------------------
// transform lemmas

#[derive(Debug, Clone, Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    violations: usize,
    indistinguishable: usize,
    /// Smallest `diff` seen, with its description.
    worst: Option<(f64, String)>,
}

impl Tally {
    fn record_radii(&mut self, rel: Relation, a: Enclosure, b: Enclosure, what: impl FnOnce() -> String) {
        self.tally(rel.judge_radii(a, b), rel, a.mid() - b.mid(), what);
    }

    fn record(&mut self, rel: Relation, diff: f64, what: impl FnOnce() -> String) {
        self.tally(rel.judge(diff), rel, diff, what);
    }

    fn tally(&mut self, status: Status, rel: Relation, diff: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        match status {
            Status::Pass => {}
            Status::Indistinguishable => self.indistinguishable += 1,
            Status::Fail => self.violations += 1,
        }
        let score = if rel == Relation::Equal { -diff.abs() } else { diff };
        if self.worst.as_ref().is_none_or(|(w, _)| score < *w) {
            self.worst = Some((score, what()));
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations += other.violations;
        self.indistinguishable += other.indistinguishable;
        if let Some((w, s)) = other.worst {
            if self.worst.as_ref().is_none_or(|(mine, _)| w < *mine) {
                self.worst = Some((w, s));
            }
        }
    }
}

const LEMMAS: [&str; 6] = [
    "subdigraph: λ(G) > λ(G - e) for every arc e",
    "subdivision: λ(G) >= λ(G^w) for G != C_n",
    "retarget: x_q >= x_p implies λ(H) >= λ(G)",
    "retarget: H strongly connected and x_q > x_p imply λ(H) > λ(G)",
    "perron order: N+(i) ⊆ N+(j), i and j non-adjacent, implies x_j >= x_i",
    "perron order: N+(i) = N+(j), i and j non-adjacent, implies x_j = x_i",
];

#[derive(Debug, Clone, Default)]
struct LemmaTallies([Tally; 6]);

impl LemmaTallies {
    fn absorb(mut self, other: LemmaTallies) -> LemmaTallies {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            a.absorb(b);
        }
        self
    }
}

/// Strongly connected digraph with arcs drawn independently at
/// [`FUZZ_DENSITY`], by rejection.
pub fn random_sc_digraph<R: Rng>(rng: &mut R, n: usize) -> Digraph {
    loop {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(FUZZ_DENSITY) {
                    arcs.push((i, j));
                }
            }
        }
        let d = Digraph::new(n, &arcs).expect("valid arcs");
        if d.is_strongly_connected() {
            return d;
        }
    }
}

fn check_lemmas<R: Rng>(g: &Digraph, label: &str, alpha: f64, rng: &mut R) -> Result<LemmaTallies, CampaignError> {
    let mut t = LemmaTallies::default();
    let base = spectral_radius(g, alpha, DEFAULT_TOL)?;
    let lam = base.enclosure;
    let x = &base.perron;
    let n = g.n();
    let ctx = |s: String| format!("{label} α={alpha}: {s}");

    for &(a, b) in g.arcs() {
        let h = g.without_arc(a, b)?;
        let lh = spectral_radius_reducible(&h, alpha, DEFAULT_TOL)?;
        t.0[0].record_radii(Relation::Greater, lam, lh, || ctx(format!("delete ({a},{b})")));
    }

    if g.is_directed_cycle() {
        t.0[1].skipped += 1;
    } else {
        for &(a, b) in g.arcs() {
            let gw = g.subdivide_arc(a, b)?;
            let lw = spectral_radius(&gw, alpha, DEFAULT_TOL)?.enclosure;
            t.0[1].record_radii(Relation::AtLeast, lam, lw, || ctx(format!("subdivide ({a},{b})")));
        }
    }

    for p in 0..n {
        for q in 0..n {
            if p == q || x[q] < x[p] {
                continue;
            }
            let candidates: Vec<usize> = (0..n).filter(|&s| s != q && g.has_arc(s, p) && !g.has_arc(s, q)).collect();
            if candidates.is_empty() {
                t.0[2].skipped += 1;
                continue;
            }
            // random nonempty subset
            let sources: Vec<usize> = loop {
                let pick: Vec<usize> = candidates.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if !pick.is_empty() {
                    break pick;
                }
            };
            let h = g.retarget_in_arcs(&sources, p, q)?;
            let lh = spectral_radius_reducible(&h, alpha, DEFAULT_TOL)?;
            let what = || ctx(format!("retarget {sources:?} from {p} to {q}"));
            t.0[2].record_radii(Relation::AtLeast, lh, lam, what);
            if h.is_strongly_connected() && x[q] - x[p] > DECISION_MARGIN {
                t.0[3].record_radii(Relation::Greater, lh, lam, what);
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if i == j || g.has_arc(i, j) || g.has_arc(j, i) {
                continue;
            }
            let (ni, nj) = (g.out_mask(i), g.out_mask(j));
            if ni & !nj != 0 {
                continue;
            }
            let what = || ctx(format!("vertices {i}, {j}"));
            if ni == nj {
                t.0[5].record(Relation::Equal, x[j] - x[i], what);
            } else {
                t.0[4].record(Relation::Greater, x[j] - x[i], what);
            }
        }
    }
    Ok(t)
}

/// Family digraphs swept by the lemma campaign, in a fixed order.
pub fn lemma_family_specs() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for n in 3..=FUZZ_FAMILY_MAX_N {
        for s in 2..=4 {
            for fam in [CompositionFamily::InftyTilde, CompositionFamily::ThetaTilde] {
                if let Ok(list) = list_compositions(fam, n, s) {
                    specs.extend(list);
                }
            }
        }
        for p in 2..=4 {
            for q in 2..=p {
                for kind in 1..=6u8 {
                    let spec = FamilySpec::BipB { kind, n, p, q };
                    if spec.validate().is_ok() {
                        specs.push(spec);
                    }
                }
            }
        }
        if n >= 5 {
            for s in ["gprime", "g1", "g2"] {
                specs.push(format!("{s}:{n}").parse().expect("valid spec"));
            }
        }
        specs.push(FamilySpec::Cycle { n });
    }
    specs
}

/// Checks the subdigraph, subdivision, in-arc retargeting and Perron-order
/// lemmas on `trials` seeded random strongly connected digraphs (3 to 8
/// vertices) and on every digraph of [`lemma_family_specs`].
pub fn verify_transform_lemmas(trials: usize, seed: u64) -> Result<VerificationReport, CampaignError> {
    let start = Instant::now();
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let mut report =
        VerificationReport::new(CampaignParams::TransformLemmas { trials, seed }, FUZZ_ALPHA_GRID.to_vec());
    let grid = FUZZ_ALPHA_GRID;

    let random: Vec<(ReportItem, LemmaTallies)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let n = rng.gen_range(3..=8);
            let g = random_sc_digraph(&mut rng, n);
            let alpha = grid[t % grid.len()];
            let label = format!("trial {t} {}", g.canonical_key()?);
            let tallies = check_lemmas(&g, &label, alpha, &mut rng)?;
            let enc = radius(&g, alpha)?;
            Ok((item(g.canonical_key()?.to_string(), alpha, enc), tallies))
        })
        .collect::<Result<_, CampaignError>>()?;

    let specs = lemma_family_specs();
    let family: Vec<LemmaTallies> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((trials + i) as u64);
            let alpha = grid[i % grid.len()];
            check_lemmas(&spec.generate()?, &spec.to_string(), alpha, &mut rng)
        })
        .collect::<Result<_, CampaignError>>()?;

    let mut total = LemmaTallies::default();
    for (it, tally) in random {
        report.items.push(it);
        total = total.absorb(tally);
    }
    for tally in family {
        total = total.absorb(tally);
    }
    for (claim, tally) in LEMMAS.iter().zip(total.0) {
        let status = if tally.violations > 0 {
            Status::Fail
        } else if tally.indistinguishable > 0 {
            Status::Indistinguishable
        } else {
            Status::Pass
        };
        let worst = tally.worst.map(|(w, s)| format!("; tightest {w:.3e} at {s}")).unwrap_or_default();
        report.verdicts.push(Verdict {
            claim: claim.to_string(),
            alpha: None,
            status,
            exploratory: false,
            margin: if claim.contains("x_j = x_i") { EQUALITY_TOL } else { DECISION_MARGIN },
            instances: tally.checked,
            detail: format!(
                "checked {}, skipped {}, violations {}, indistinguishable {}{worst}",
                tally.checked, tally.skipped, tally.violations, tally.indistinguishable
            ),
        });
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

// ---------------------------------------------------------------------------
// dispatch

/// Runs one campaign over an α grid (ignored by the lemma campaign, which
/// uses its own) and merges the per-α reports in grid order.
pub fn run_campaign(params: &CampaignParams, alpha_grid: &[f64]) -> Result<VerificationReport, CampaignError> {
    if let CampaignParams::TransformLemmas { trials, seed } = *params {
        return verify_transform_lemmas(trials, seed);
    }
    if alpha_grid.is_empty() {
        return invalid("empty α grid");
    }
    if let Some(&a) = alpha_grid.iter().find(|a| !(0.0..1.0).contains(*a)) {
        return Err(SpectralError::AlphaOutOfRange(a).into());
    }
    let reports = alpha_grid
        .par_iter()
        .map(|&alpha| match *params {
            CampaignParams::FamilyExtremes { family, n, s } => verify_family_extremes(family, n, s, alpha),
            CampaignParams::GlobalMin { n } => verify_global_minima(n, alpha),
            CampaignParams::BipartiteMin { n, p, q } => verify_bipartite_minimum(n, p, q, alpha),
            CampaignParams::TransformLemmas { .. } => unreachable!(),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport::merge(reports).expect("nonempty grid"))
}

/// Re-runs every campaign recorded in `report` on its α grid.
pub fn replay(report: &VerificationReport) -> Result<VerificationReport, CampaignError> {
    let mut parts = Vec::new();
    for params in &report.params {
        let grid: Vec<f64> = match params {
            CampaignParams::TransformLemmas { .. } => FUZZ_ALPHA_GRID.to_vec(),
            _ => report.verdicts.iter().filter_map(|v| v.alpha).fold(Vec::new(), |mut acc, a| {
                if !acc.contains(&a) {
                    acc.push(a);
                }
                acc
            }),
        };
        let grid = if grid.is_empty() { report.alpha_grid.clone() } else { grid };
        parts.push(run_campaign(params, &grid)?);
    }
    let mut out =
        VerificationReport::merge(parts).ok_or(CampaignError::InvalidParams("report has no parameters".into()))?;
    out.campaign = report.campaign.clone();
    Ok(out)
}
