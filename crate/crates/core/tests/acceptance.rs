//! Acceptance suite. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::time::{Duration, Instant};

use spectra_core::campaigns::{
    enumerate_sc_digraphs, verify_bipartite_minimum, verify_family_extremes, verify_global_minima,
    verify_transform_lemmas, ExtremeFamily, Status, VerificationReport, SC_CLASS_COUNTS,
};
use spectra_core::chareq::{kpq_radius, largest_root, CharEquation};
use spectra_core::family::{list_compositions, CompositionFamily};
use spectra_core::spectral::{det_scan_largest_real_root, spectral_radius, DEFAULT_TOL};
use spectra_core::FamilySpec;

const ORACLE_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-10;
const ALPHAS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(id: u32, title: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            out.ok = false;
            out.detail.push_str(&format!("; over budget {:.0}s", b.as_secs_f64()));
        }
    }
    println!(
        "criterion {id} {} {title}: {} [{:.2}s]",
        if out.ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    out.ok
}

fn oracle_specs() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for s in 2..=4 {
        for n in s + 1..=12 {
            for fam in [CompositionFamily::InftyTilde, CompositionFamily::ThetaTilde] {
                specs.extend(list_compositions(fam, n, s).unwrap());
            }
        }
    }
    for n in 5..=12 {
        for p in 2..=4 {
            for q in 2..=p {
                for kind in [1u8, 2, 5, 6] {
                    let spec = FamilySpec::BipB { kind, n, p, q };
                    if spec.validate().is_ok() {
                        specs.push(spec);
                    }
                }
            }
        }
    }
    for n in 5..=10 {
        specs.push(format!("gprime:{n}").parse().unwrap());
    }
    specs
}

fn criterion_1() -> Outcome {
    let specs = oracle_specs();
    let (mut worst_root, mut worst_scan, mut checks) = (0.0f64, 0.0f64, 0);
    let mut first_bad = None;
    for spec in &specs {
        let d = spec.generate().unwrap();
        for alpha in ALPHAS {
            let lam = spectral_radius(&d, alpha, DEFAULT_TOL).unwrap().radius;
            let root = largest_root(&CharEquation::for_family(spec, alpha).unwrap(), DEFAULT_TOL).unwrap();
            let scan = det_scan_largest_real_root(&d, alpha, DEFAULT_TOL).unwrap();
            let (er, es) = ((root - lam).abs(), (scan - lam).abs());
            worst_root = worst_root.max(er);
            worst_scan = worst_scan.max(es);
            if (er > ORACLE_TOL || es > ORACLE_TOL) && first_bad.is_none() {
                first_bad = Some(format!("{spec} α={alpha}"));
            }
            checks += 1;
        }
    }
    Outcome {
        ok: first_bad.is_none(),
        detail: format!(
            "{} specs x 4 α = {checks} checks; max |root-λ| {worst_root:.1e}, max |scan-λ| {worst_scan:.1e} (tol {ORACLE_TOL:.0e}){}",
            specs.len(),
            first_bad.map(|b| format!("; first miss {b}")).unwrap_or_default()
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for p in 2..=6 {
        for q in 2..=p {
            for i in 0..10 {
                let alpha = i as f64 / 10.0;
                let d = FamilySpec::CompleteBipartite { p, q }.generate().unwrap();
                let lam = spectral_radius(&d, alpha, DEFAULT_TOL).unwrap().radius;
                worst = worst.max((kpq_radius(p, q, alpha).unwrap() - lam).abs());
                checks += 1;
            }
        }
    }
    let s1 = (kpq_radius(2, 2, 0.0).unwrap() - 2.0).abs();
    let s2 = (kpq_radius(3, 2, 0.5).unwrap() - 2.5).abs();
    Outcome {
        ok: worst <= CLOSED_FORM_TOL && s1 <= CLOSED_FORM_TOL && s2 <= CLOSED_FORM_TOL,
        detail: format!(
            "{checks} (p,q,α) checks, max deviation {worst:.1e}; spot (2,2,0) off by {s1:.0e}, (3,2,0.5) off by {s2:.0e} (tol {CLOSED_FORM_TOL:.0e})"
        ),
    }
}

fn summarize(reports: &[VerificationReport]) -> (bool, usize, String) {
    let verdicts: Vec<_> = reports.iter().flat_map(|r| r.verdicts.iter()).collect();
    let bad: Vec<_> = verdicts.iter().filter(|v| !v.exploratory && v.status != Status::Pass).collect();
    let first = bad.first().map(|v| format!("; first: {} α={:?} {:?} ({})", v.claim, v.alpha, v.status, v.detail));
    (bad.is_empty(), verdicts.len(), format!("{} not passing{}", bad.len(), first.unwrap_or_default()))
}

fn criterion_3() -> Outcome {
    let mut reports = Vec::new();
    for s in 2..=4 {
        for n in s + 2..=12 {
            for family in [ExtremeFamily::InftyTilde, ExtremeFamily::ThetaTilde, ExtremeFamily::Combined] {
                for alpha in ALPHAS {
                    reports.push(verify_family_extremes(family, n, s, alpha).unwrap());
                }
            }
        }
    }
    let (ok, count, detail) = summarize(&reports);
    Outcome { ok, detail: format!("{} campaigns, {count} max/min verdicts; {detail} (margin 1e-9)", reports.len()) }
}

fn criterion_4() -> Outcome {
    let mut reports = Vec::new();
    for n in 5..=12 {
        for alpha in ALPHAS {
            reports.push(verify_family_extremes(ExtremeFamily::Bicyclic, n, 0, alpha).unwrap());
        }
    }
    let ranks_ok = reports.iter().all(|r| {
        let n = match r.params[0] {
            spectra_core::campaigns::CampaignParams::FamilyExtremes { n, .. } => n,
            _ => unreachable!(),
        };
        let got: Vec<&str> = r.items.iter().take(3).map(|i| i.spec.as_str()).collect();
        got == [format!("theta:0,1;{}", n - 3), format!("theta:1,1;{}", n - 4), format!("theta:0,2;{}", n - 4)]
    });
    let (ok, count, detail) = summarize(&reports);
    Outcome { ok: ok && ranks_ok, detail: format!("n=5..12 x 4 α, {count} rank verdicts with gap > 1e-9; {detail}") }
}

fn criterion_5() -> Outcome {
    let counts: Vec<usize> = (2..=5).map(|n| enumerate_sc_digraphs(n).unwrap().len()).collect();
    let counts_ok = counts == SC_CLASS_COUNTS[2..=5];
    let reports: Vec<_> = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5].iter().map(|&a| verify_global_minima(5, a).unwrap()).collect();
    let (ok, count, detail) = summarize(&reports);
    let unique = reports.iter().flat_map(|r| &r.verdicts).filter(|v| v.exploratory && v.status == Status::Pass).count();
    Outcome {
        ok: counts_ok && ok,
        detail: format!(
            "class counts n=2..5 {counts:?} (fixture {:?}); {count} verdicts at α=0..0.5, {detail}; {unique} observational uniqueness checks passed",
            &SC_CLASS_COUNTS[2..=5]
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut reports = Vec::new();
    for alpha in ALPHAS {
        reports.push(verify_bipartite_minimum(5, 2, 2, alpha).unwrap());
    }
    for n in 6..=12 {
        for p in 2..=4 {
            for q in 2..=p {
                if p + q < n {
                    for alpha in ALPHAS {
                        reports.push(verify_bipartite_minimum(n, p, q, alpha).unwrap());
                    }
                }
            }
        }
    }
    let equalities = reports.iter().flat_map(|r| &r.verdicts).filter(|v| v.claim.contains(" = ")).count();
    let (ok, count, detail) = summarize(&reports);
    Outcome {
        ok,
        detail: format!(
            "{count} verdicts ({equalities} equality cases at tol 1e-10, strict cases at margin 1e-9); {detail}"
        ),
    }
}

fn criterion_7() -> Outcome {
    let r = verify_transform_lemmas(500, 20_240_601).unwrap();
    let violations = r.verdicts.iter().filter(|v| v.status == Status::Fail).count();
    let summary: Vec<String> = r
        .verdicts
        .iter()
        .map(|v| format!("{} [{:?}, n={}]", v.claim.split(':').next().unwrap(), v.status, v.instances))
        .collect();
    Outcome {
        ok: violations == 0,
        detail: format!("500 trials, lemmas with violations: {violations}; {}", summary.join(", ")),
    }
}

fn criterion_8() -> Outcome {
    let alphas = [0.55, 0.65, 0.75, 0.85, 0.95];
    let reports: Vec<_> = alphas.iter().map(|&a| verify_global_minima(5, a)).collect();
    let produced = reports.iter().all(|r| r.is_ok());
    let mut notes = Vec::new();
    for (a, r) in alphas.iter().zip(&reports) {
        if let Ok(r) = r {
            let off: Vec<&str> = r
                .verdicts
                .iter()
                .filter(|v| !v.claim.contains("observational") && v.status != Status::Pass)
                .map(|v| v.claim.as_str())
                .collect();
            notes.push(format!(
                "α={a}: {}",
                if off.is_empty() {
                    "ranks as conjectured".to_string()
                } else {
                    format!("deviates on {}", off.join("; "))
                }
            ));
        }
    }
    Outcome { ok: produced, detail: format!("exploratory reports produced; {}", notes.join(", ")) }
}

fn main() {
    let results = [
        run(1, "oracle agreement", Some(Duration::from_secs(60)), criterion_1),
        run(2, "K<->p,q closed form", None, criterion_2),
        run(3, "∞̃/θ̃/combined extremes", Some(Duration::from_secs(120)), criterion_3),
        run(4, "bicyclic ranking", None, criterion_4),
        run(5, "global minima by enumeration", Some(Duration::from_secs(300)), criterion_5),
        run(6, "bipartite minimum", None, criterion_6),
        run(7, "transform-lemma fuzzing", None, criterion_7),
        run(8, "conjecture sweep", None, criterion_8),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
