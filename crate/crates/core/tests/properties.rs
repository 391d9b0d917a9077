use graphspectra::density::{estimate_density, BandwidthRule, DensityOptions, Grid, SpectralDensity};
use graphspectra::divergence::{js_divergence, kl_divergence, spectral_entropy};
use graphspectra::graph::{Graph, ModelSpec};
use graphspectra::jstest::{bootstrap_p_value, js_test, GraphSet};
use graphspectra::selection::score;
use graphspectra::spectrum::Spectrum;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(-1.0, 1.0, 64).unwrap()
}

/// Random nonnegative tabulations, some with exact-zero stretches.
fn density() -> impl Strategy<Value = SpectralDensity> {
    (prop::collection::vec(0.0f64..1.0, 64), 0usize..64, 0usize..20).prop_map(|(mut v, start, width)| {
        for x in v.iter_mut().skip(start).take(width) {
            *x = 0.0;
        }
        v[start.saturating_sub(1)] += 0.5;
        SpectralDensity::from_values(grid(), v, 1.0).unwrap()
    })
}

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        (2usize..60, 0.0f64..=1.0).prop_map(|(n, p)| ModelSpec::erdos_renyi(n, p).unwrap()),
        (1usize..4, 0usize..60, 0.0f64..3.0).prop_map(|(m1, extra, e)| {
            ModelSpec::scale_free(m1 + 1 + extra, e, m1, m1).unwrap()
        }),
        (1usize..4, 0usize..60, 0.0f64..=1.0).prop_map(|(half, extra, p)| {
            let k = 2 * half;
            ModelSpec::small_world(k + 1 + extra, k, p).unwrap()
        }),
    ]
}

fn check_graph(g: &Graph) {
    let n = g.node_count();
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in g.edges() {
        assert!(u < n && v < n && u != v);
        assert!(seen.insert((u.min(v), u.max(v))), "duplicate edge {u}-{v}");
        assert!(g.has_edge(u, v) && g.has_edge(v, u));
    }
    assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divergences_are_nonnegative(a in density(), b in density()) {
        prop_assert!(kl_divergence(&a, &b).unwrap() >= 0.0);
        let js = js_divergence(&a, &b).unwrap();
        prop_assert!((0.0..=std::f64::consts::LN_2).contains(&js));
    }

    #[test]
    fn js_is_symmetric(a in density(), b in density()) {
        prop_assert_eq!(js_divergence(&a, &b).unwrap(), js_divergence(&b, &a).unwrap());
    }

    #[test]
    fn sqrt_js_triangle(a in density(), b in density(), c in density()) {
        let d = |x: &SpectralDensity, y: &SpectralDensity| js_divergence(x, y).unwrap().sqrt();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
    }

    #[test]
    fn kl_zero_only_on_identity(a in density(), b in density()) {
        prop_assert_eq!(kl_divergence(&a, &a).unwrap(), 0.0);
        let same = a.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() <= 1e-12);
        if !same {
            prop_assert!(kl_divergence(&a, &b).unwrap() > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_traces(spec in model(), seed in any::<u64>()) {
        let g = spec.generate(seed).unwrap();
        let n = g.node_count() as f64;
        let lambda = Spectrum::of(&g).unwrap().unscaled();
        let sum: f64 = lambda.iter().sum();
        let squares: f64 = lambda.iter().map(|x| x * x).sum();
        prop_assert!(sum.abs() <= 1e-8 * n, "trace {sum}");
        prop_assert!((squares - 2.0 * g.edge_count() as f64).abs() <= 1e-6 * n);
        prop_assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn generated_graphs_are_simple_and_reproducible(spec in model(), seed in any::<u64>()) {
        let g = spec.generate(seed).unwrap();
        check_graph(&g);
        prop_assert_eq!(g.node_count(), spec.n);
        prop_assert_eq!(&g, &spec.generate(seed).unwrap());
    }

    #[test]
    fn rewiring_conserves_edges(half in 1usize..5, extra in 0usize..80, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = 2 * half;
        let n = k + 1 + extra;
        let g = ModelSpec::small_world(n, k, p).unwrap().generate(seed).unwrap();
        prop_assert_eq!(g.edge_count(), n * k / 2);
    }

    #[test]
    fn growth_edge_count(m1 in 1usize..4, extra in 0usize..80, e in 0.0f64..3.0, seed in any::<u64>()) {
        let n = m1 + 1 + extra;
        let g = ModelSpec::scale_free(n, e, m1, m1).unwrap().generate(seed).unwrap();
        prop_assert_eq!(g.edge_count(), (n - m1) * m1);
    }

    #[test]
    fn density_is_normalized(sample in prop::collection::vec(-5.0f64..5.0, 1..200), rule in 0u8..3) {
        let bandwidth = match rule {
            0 => BandwidthRule::Silverman,
            1 => BandwidthRule::Sturges,
            _ => BandwidthRule::Fixed(0.2),
        };
        let opts = DensityOptions { bandwidth, ..Default::default() };
        let d = estimate_density(&sample, None, &opts).unwrap();
        prop_assert!((d.integral() - 1.0).abs() < 1e-6);
        prop_assert!(d.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn density_ignores_sample_order(
        sample in prop::collection::vec(-5.0f64..5.0, 2..100).prop_shuffle(),
    ) {
        let opts = DensityOptions::default();
        let mut sorted = sample.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(
            estimate_density(&sample, None, &opts).unwrap(),
            estimate_density(&sorted, None, &opts).unwrap()
        );
    }

    #[test]
    fn doubling_multiplicity_with_fixed_bandwidth(sample in prop::collection::vec(-3.0f64..3.0, 1..100)) {
        let opts = DensityOptions { bandwidth: BandwidthRule::Fixed(0.25), ..Default::default() };
        let g = Grid::new(-5.0, 5.0, 512).unwrap();
        let once = estimate_density(&sample, Some(&g), &opts).unwrap();
        let doubled: Vec<f64> = sample.iter().chain(&sample).copied().collect();
        let twice = estimate_density(&doubled, Some(&g), &opts).unwrap();
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn entropy_stable_under_refinement(mu in -1.0f64..1.0, s in 0.3f64..1.5, w in 0.1f64..0.9) {
        let f = |x: f64| {
            let phi = |m: f64, sd: f64| (-0.5 * ((x - m) / sd).powi(2)).exp() / sd;
            w * phi(mu, s) + (1.0 - w) * phi(-mu, 0.5 * s)
        };
        let coarse = SpectralDensity::tabulate(Grid::new(-12.0, 12.0, 512).unwrap(), f).unwrap();
        let fine = SpectralDensity::tabulate(Grid::new(-12.0, 12.0, 1024).unwrap(), f).unwrap();
        prop_assert!((spectral_entropy(&coarse) - spectral_entropy(&fine)).abs() < 1e-4);
    }

    #[test]
    fn p_value_bounds_and_monotonicity(
        null in prop::collection::vec(0.0f64..0.7, 1..300),
        a in 0.0f64..0.7,
        b in 0.0f64..0.7,
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let (p_lo, p_hi) = (bootstrap_p_value(lo, &null), bootstrap_p_value(hi, &null));
        prop_assert!(p_hi <= p_lo);
        prop_assert!(p_hi > 0.0 && p_lo <= 1.0);
    }

    #[test]
    fn score_ordering(kls in prop::collection::vec(0.0f64..10.0, 2..6), shift in -5.0f64..5.0) {
        let scores: Vec<f64> = kls.iter().map(|&k| score(k, 1)).collect();
        let argmin = |v: &[f64]| v.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        prop_assert_eq!(argmin(&scores), argmin(&shifted));
        prop_assert_eq!(argmin(&scores), argmin(&kls));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn js_test_exchangeable_and_thread_independent(seed in any::<u64>()) {
        let g = Grid::new(-1.0, 2.0, 128).unwrap();
        let opts = DensityOptions::default();
        let spec = ModelSpec::erdos_renyi(20, 0.3).unwrap();
        let build = |offset: u64| {
            let densities = (0..8)
                .map(|i| {
                    let s = Spectrum::of(&spec.generate(seed ^ (offset + i)).unwrap()).unwrap();
                    estimate_density(s.values(), Some(&g), &opts).unwrap()
                })
                .collect();
            GraphSet::new("x", densities).unwrap()
        };
        let (a, b) = (build(0), build(100));
        let forward = js_test(&a, &b, 200, seed, true).unwrap();
        let backward = js_test(&b, &a, 200, seed, false).unwrap();
        prop_assert_eq!(forward.observed_js, backward.observed_js);
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = single.install(|| js_test(&a, &b, 200, seed, true)).unwrap();
        prop_assert_eq!(forward, serial);
    }
}
