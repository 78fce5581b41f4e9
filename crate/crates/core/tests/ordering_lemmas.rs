//! Composition moves that must strictly raise the spectral radius, checked
//! on every ∞̃/θ̃ composition with n <= 12, s <= 4, and the B-family links.

use std::collections::HashMap;

use spectra_core::family::{list_compositions, CompositionFamily};
use spectra_core::spectral::{compare_radii, spectral_radius, Enclosure, RadiusOrder, DECISION_MARGIN, DEFAULT_TOL};
use spectra_core::FamilySpec;

const ALPHAS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];

struct Radii {
    alpha: f64,
    cache: HashMap<String, Enclosure>,
}

impl Radii {
    fn new(alpha: f64) -> Self {
        Self { alpha, cache: HashMap::new() }
    }

    fn get(&mut self, spec: &FamilySpec) -> Enclosure {
        let alpha = self.alpha;
        *self
            .cache
            .entry(spec.to_string())
            .or_insert_with(|| spectral_radius(&spec.generate().unwrap(), alpha, DEFAULT_TOL).unwrap().enclosure)
    }

    /// Asserts λ(bigger) > λ(smaller).
    fn assert_gt(&mut self, bigger: &FamilySpec, smaller: &FamilySpec) {
        let (a, b) = (self.get(bigger), self.get(smaller));
        assert_eq!(
            compare_radii(a, b, DECISION_MARGIN),
            RadiusOrder::Greater,
            "α={}: λ({bigger}) = {} should exceed λ({smaller}) = {}",
            self.alpha,
            a.mid(),
            b.mid()
        );
    }
}

fn compositions(family: CompositionFamily) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for s in 2..=4 {
        for n in s + 1..=12 {
            out.extend(list_compositions(family, n, s).unwrap());
        }
    }
    out
}

fn moved(ks: &[usize], from: usize, to: usize) -> Vec<usize> {
    let mut v = ks.to_vec();
    v[from] -= 1;
    v[to] += 1;
    v
}

#[test]
fn infinity_relocation() {
    for alpha in ALPHAS {
        let mut r = Radii::new(alpha);
        for spec in compositions(CompositionFamily::InftyTilde) {
            let FamilySpec::InftyTilde { ks } = &spec else { unreachable!() };
            for p in 0..ks.len() {
                for q in 0..ks.len() {
                    if p != q && 2 <= ks[p] && ks[p] <= ks[q] {
                        let next = FamilySpec::infty_sorted(moved(ks, p, q)).unwrap();
                        r.assert_gt(&next, &spec);
                    }
                }
            }
        }
    }
}

#[test]
fn theta_path_relocation_and_return_shift() {
    for alpha in ALPHAS {
        let mut r = Radii::new(alpha);
        for spec in compositions(CompositionFamily::ThetaTilde) {
            let FamilySpec::ThetaTilde { ks, l1 } = &spec else { unreachable!() };
            for p in 0..ks.len() {
                for q in 0..ks.len() {
                    if p != q && 1 <= ks[p] && ks[p] <= ks[q] {
                        // a second zero path would duplicate the arc u -> v
                        if let Ok(next) = FamilySpec::theta_sorted(moved(ks, p, q), *l1) {
                            r.assert_gt(&next, &spec);
                        }
                    }
                }
                if *l1 >= 1 {
                    let mut longer = ks.clone();
                    longer[p] += 1;
                    let next = FamilySpec::theta_sorted(longer, l1 - 1).unwrap();
                    r.assert_gt(&next, &spec);
                }
            }
        }
    }
}

#[test]
fn theta_below_merged_infinity() {
    for alpha in ALPHAS {
        let mut r = Radii::new(alpha);
        for spec in compositions(CompositionFamily::ThetaTilde) {
            let FamilySpec::ThetaTilde { ks, l1 } = &spec else { unreachable!() };
            let mut cycles = ks[1..].to_vec();
            cycles.push(ks[0] + l1 + 1);
            let inf = FamilySpec::infty_sorted(cycles).unwrap();
            assert_eq!(inf.n(), spec.n());
            r.assert_gt(&inf, &spec);
        }
    }
}

#[test]
fn infinity_above_split_theta() {
    for alpha in ALPHAS {
        let mut r = Radii::new(alpha);
        for spec in compositions(CompositionFamily::InftyTilde) {
            let FamilySpec::InftyTilde { ks } = &spec else { unreachable!() };
            let s = ks.len();
            let mut paths = ks[..s - 1].to_vec();
            paths.push(ks[s - 1] - 1);
            let theta = FamilySpec::theta_sorted(paths, 0).unwrap();
            assert_eq!(theta.n(), spec.n());
            r.assert_gt(&spec, &theta);
        }
    }
}

#[test]
fn bipartite_retarget_links() {
    for alpha in ALPHAS {
        let mut r = Radii::new(alpha);
        for n in 5..=12 {
            for p in 2..=4 {
                for q in 2..=p {
                    if p + q >= n || (n - p - q) % 2 == 0 {
                        continue;
                    }
                    let b = |kind| FamilySpec::BipB { kind, n, p, q };
                    r.assert_gt(&b(3), &b(1));
                    r.assert_gt(&b(4), &b(2));
                    if n - p - q >= 3 {
                        r.assert_gt(&FamilySpec::BipB { kind: 5, n: n - 1, p, q }, &b(1));
                    }
                }
            }
        }
    }
}
