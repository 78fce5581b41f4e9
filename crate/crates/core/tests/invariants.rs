use proptest::prelude::*;

use spectra_core::digraph::parse_dgr1;
use spectra_core::family::bip_construction;
use spectra_core::spectral::{build_alpha_matrix, det_scan_largest_real_root, spectral_radius, DEFAULT_TOL};
use spectra_core::{Digraph, FamilySpec};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.4), n * n).prop_map(move |bits| {
            let arcs: Vec<(usize, usize)> =
                (0..n * n).filter(|&k| bits[k] && k / n != k % n).map(|k| (k / n, k % n)).collect();
            Digraph::new(n, &arcs).unwrap()
        })
    })
}

fn strong_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    digraph(max_n).prop_filter("strongly connected", |d| d.is_strongly_connected())
}

fn alpha() -> impl Strategy<Value = f64> {
    (0usize..10).prop_map(|i| i as f64 / 10.0)
}

fn permuted(max_n: usize) -> impl Strategy<Value = (Digraph, Vec<usize>)> {
    digraph(max_n).prop_flat_map(|d| {
        let n = d.n();
        (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn composition_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        proptest::collection::vec(1usize..5, 2..=4).prop_map(|ks| FamilySpec::infty_sorted(ks).unwrap()),
        (proptest::collection::vec(1usize..5, 1..=3), 0usize..4, any::<bool>()).prop_map(|(mut ks, l1, zero)| {
            if zero {
                ks.push(0);
            } else {
                ks.push(1);
            }
            FamilySpec::theta_sorted(ks, l1).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dgr1_round_trip(d in digraph(9)) {
        prop_assert_eq!(parse_dgr1(&d.to_dgr1()).unwrap(), d);
    }

    #[test]
    fn canonical_key_ignores_labels((d, perm) in permuted(6)) {
        prop_assert_eq!(d.relabel(&perm).canonical_key().unwrap(), d.canonical_key().unwrap());
    }

    #[test]
    fn degree_zero_means_not_strong(d in digraph(7)) {
        let sources_or_sinks = d.out_degrees().contains(&0) || d.in_degrees().contains(&0);
        if sources_or_sinks {
            prop_assert!(!d.is_strongly_connected());
        }
    }

    #[test]
    fn subdivision_shape(d in strong_digraph(7), pick in any::<prop::sample::Index>()) {
        let (t, h) = d.arcs()[pick.index(d.arc_count())];
        let s = d.subdivide_arc(t, h).unwrap();
        prop_assert_eq!(s.arc_count(), d.arc_count() + 1);
        prop_assert!(s.is_strongly_connected());
    }

    #[test]
    fn retarget_keeps_degrees(d in digraph(7), p in 0usize..7, q in 0usize..7) {
        let n = d.n();
        let (p, q) = (p % n, q % n);
        prop_assume!(p != q);
        let sources: Vec<usize> = (0..n).filter(|&s| s != q && d.has_arc(s, p) && !d.has_arc(s, q)).collect();
        let h = d.retarget_in_arcs(&sources, p, q).unwrap();
        prop_assert_eq!(h.arc_count(), d.arc_count());
        prop_assert_eq!(h.out_degrees(), d.out_degrees());
    }

    #[test]
    fn row_sums_are_out_degrees(d in digraph(8), a in alpha()) {
        let m = build_alpha_matrix(&d, a).unwrap();
        prop_assert!(m.entries().iter().all(|&e| e >= 0.0));
        for (s, deg) in m.row_sums().iter().zip(d.out_degrees()) {
            prop_assert!((s - deg as f64).abs() <= 1e-12 * (deg as f64).max(1.0));
        }
    }

    #[test]
    fn radius_bounds(d in strong_digraph(7), a in alpha()) {
        let r = spectral_radius(&d, a, DEFAULT_TOL).unwrap();
        let n = d.n() as f64;
        let degs = d.out_degrees();
        let (dmin, dmax) = (*degs.iter().min().unwrap() as f64, *degs.iter().max().unwrap() as f64);
        prop_assert!(r.enclosure.lo <= r.radius && r.radius <= r.enclosure.hi);
        prop_assert!(r.enclosure.width() <= DEFAULT_TOL);
        prop_assert!(r.radius >= 1.0 - 1e-12 && r.radius <= n - 1.0 + 1e-12);
        prop_assert!(r.radius > a * dmax);
        if dmin < dmax {
            prop_assert!(dmin < r.radius && r.radius < dmax, "{} not strictly in [{dmin}, {dmax}]", r.radius);
        } else {
            prop_assert!((r.radius - dmin).abs() <= 1e-12);
        }
    }

    #[test]
    fn perron_vector_is_an_eigenvector(d in strong_digraph(8), a in alpha()) {
        let r = spectral_radius(&d, a, DEFAULT_TOL).unwrap();
        prop_assert!(r.perron.iter().all(|&v| v > 0.0));
        let norm: f64 = r.perron.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let m = build_alpha_matrix(&d, a).unwrap();
        for i in 0..d.n() {
            let ax: f64 = m.row(i).iter().zip(&r.perron).map(|(x, y)| x * y).sum();
            prop_assert!((ax - r.radius * r.perron[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn power_iteration_matches_determinant_scan(d in strong_digraph(7), a in alpha()) {
        let lam = spectral_radius(&d, a, DEFAULT_TOL).unwrap().radius;
        let scan = det_scan_largest_real_root(&d, a, DEFAULT_TOL).unwrap();
        prop_assert!((lam - scan).abs() <= 1e-9, "power {lam} vs scan {scan}");
    }

    #[test]
    fn radius_ignores_labels((d, perm) in permuted(7), a in alpha()) {
        prop_assume!(d.is_strongly_connected());
        let x = spectral_radius(&d, a, DEFAULT_TOL).unwrap().radius;
        let y = spectral_radius(&d.relabel(&perm), a, DEFAULT_TOL).unwrap().radius;
        prop_assert!((x - y).abs() <= 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn composition_shapes(spec in composition_spec()) {
        prop_assert_eq!(spec.to_string().parse::<FamilySpec>().unwrap(), spec.clone());
        let d = spec.generate().unwrap();
        prop_assert_eq!(d.n(), spec.n());
        prop_assert!(d.is_strongly_connected());
        let (n, s) = match &spec {
            FamilySpec::InftyTilde { ks } => {
                prop_assert_eq!(d.arc_count(), d.n() - 1 + ks.len());
                (d.n(), ks.len())
            }
            FamilySpec::ThetaTilde { ks, .. } => {
                // s forward paths plus the return path: Σ(k_i+1) + l1 + 1 arcs
                prop_assert_eq!(d.arc_count(), d.n() + ks.len() - 1);
                (d.n(), ks.len())
            }
            _ => unreachable!(),
        };
        let hubs = d.out_degrees().iter().filter(|&&k| k == s).count();
        prop_assert_eq!(hubs, 1, "n={} s={}", n, s);
        prop_assert_eq!(spec.generate().unwrap(), d);
    }
}

#[test]
fn bipartite_families_contain_kpq_and_respect_parity() {
    for n in 5..=10 {
        for p in 2..=4 {
            for q in 2..=p {
                if p + q >= n {
                    continue;
                }
                for kind in 1..=6u8 {
                    let d = bip_construction(kind, n, p, q).unwrap();
                    assert!(d.is_strongly_connected());
                    assert!(d.contains_bidirected_kpq(p, q).unwrap(), "bip{kind}:{n},{p},{q}");
                    let parity_ok = if kind <= 4 { (n - p - q) % 2 == 1 } else { (n - p - q) % 2 == 0 };
                    assert_eq!(d.bipartition().is_some(), parity_ok, "bip{kind}:{n},{p},{q}");
                    assert_eq!(FamilySpec::BipB { kind, n, p, q }.validate().is_ok(), parity_ok);
                }
            }
        }
    }
}

#[test]
fn bicyclic_specializations() {
    // ∞(k, l): two cycles through one hub; θ(a, b, c): two u->v paths and a return path
    let inf = FamilySpec::infinity(2, 1).unwrap().generate().unwrap();
    assert_eq!((inf.n(), inf.arc_count()), (4, 5));
    let theta = FamilySpec::theta(0, 1, 0).unwrap().generate().unwrap();
    let expected = Digraph::new(3, &[(0, 1), (0, 2), (2, 1), (1, 0)]).unwrap();
    assert_eq!(theta.canonical_key().unwrap(), expected.canonical_key().unwrap());
    for n in 5..=8 {
        let g = |s: &str| s.parse::<FamilySpec>().unwrap().generate().unwrap().canonical_key().unwrap();
        assert_eq!(g(&format!("g1:{n}")), g(&format!("gprime:{n}")));
        assert_eq!(g(&format!("g2:{n}")), g(&format!("gprime:{n}")));
    }
}

#[test]
fn cycles_are_strong() {
    for n in 2..=64 {
        assert!(Digraph::cycle(n).unwrap().is_strongly_connected());
    }
}
