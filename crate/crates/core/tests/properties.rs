use proptest::prelude::*;

use dpsbm::certificates::build_binary;
use dpsbm::graph::{pair_count, pair_from_index, pair_index};
use dpsbm::privacy::laplace_quantile;
use dpsbm::sbm::{cluster_size, generate};
use dpsbm::sdp::round_binary;
use dpsbm::spectral::{eigenvalues, psd_project, SymMatrix};
use dpsbm::{Alphabet, Graph, GroundTruth, SbmParams};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<bool>()).prop_flat_map(|(n, censored)| {
        let alphabet = if censored { Alphabet::Censored } else { Alphabet::Simple };
        let values = alphabet.values().to_vec();
        prop::collection::vec(prop::sample::select(values), pair_count(n))
            .prop_map(move |e| Graph::from_packed(n, alphabet, e).unwrap())
    })
}

fn binomial(m: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

fn binary_params() -> impl Strategy<Value = SbmParams> {
    (6usize..40, 0.05f64..1.0, 0.01f64..1.0, 0.15f64..=0.5, any::<bool>(), 0.0f64..0.45).prop_filter_map(
        "valid parameters",
        |(n, fa, fb, rho, censored, xi)| {
            let a = fa * n as f64 / (n as f64).ln();
            let p = if censored {
                SbmParams::Cbsbm { n, a, rho, xi }
            } else {
                SbmParams::Basbm { n, a, b: fb * a, rho }
            };
            p.validate().is_ok().then_some(p)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_index_round_trips(n in 2usize..200, seed in any::<u64>()) {
        let m = pair_count(n);
        let idx = (seed % m as u64) as usize;
        let (i, j) = pair_from_index(n, idx);
        prop_assert!(i < j && j < n);
        prop_assert_eq!(pair_index(n, i, j), idx);
    }

    #[test]
    fn edge_list_round_trips(g in graph(12)) {
        let h = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(&h, &g);
        prop_assert_eq!(h.edge_count(), g.edges().count());
    }

    #[test]
    fn set_entry_touches_one_pair(g in graph(10), i in 0usize..10, j in 0usize..10, pick in 0usize..3) {
        let n = g.n();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let values = g.alphabet().values();
        let v = values[pick % values.len()];
        let h = g.set_entry(i, j, v).unwrap();
        prop_assert_eq!(h.get(i, j), v);
        prop_assert_eq!(h.get(j, i), v);
        let changed = (g.get(i, j) != v) as usize;
        prop_assert_eq!(g.hamming_distance(&h).unwrap(), changed);
    }

    #[test]
    fn degrees_sum_to_twice_edges(g in graph(15)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn neighborhood_has_expected_size(g in graph(5), k in 1usize..=2) {
        let m = pair_count(g.n());
        prop_assume!(k <= m);
        let alt = g.alphabet().values().len() - 1;
        let all: Vec<Graph> = g.neighbors_at(k).collect();
        prop_assert_eq!(all.len(), binomial(m, k) * alt.pow(k as u32));
        for h in &all {
            prop_assert_eq!(g.hamming_distance(h).unwrap(), k);
        }
        let mut uniq = all.clone();
        uniq.sort_by(|a, b| a.packed().cmp(b.packed()));
        uniq.dedup();
        prop_assert_eq!(uniq.len(), all.len());
    }

    #[test]
    fn binary_certificate_annihilates_sigma(params in binary_params(), seed in any::<u64>()) {
        let (g, truth) = generate(&params, seed).unwrap();
        let cert = build_binary(&g, &truth, &params).unwrap();
        let sigma = truth.sigma_f64();
        let n = sigma.len();
        let scale = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| cert.s.get(i, j).abs()).fold(1.0, f64::max);
        for i in 0..n {
            let r: f64 = (0..n).map(|j| cert.s.get(i, j) * sigma[j]).sum();
            prop_assert!(r.abs() <= 1e-9 * scale * n as f64, "row {} residual {}", i, r);
        }
    }

    #[test]
    fn generation_is_seeded(params in binary_params(), seed in any::<u64>()) {
        let (g1, t1) = generate(&params, seed).unwrap();
        let (g2, t2) = generate(&params, seed).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(&t1, &t2);
        let minus = match &params {
            SbmParams::Basbm { n, rho, .. } | SbmParams::Cbsbm { n, rho, .. } => cluster_size(*rho, *n),
            SbmParams::Gssbm { .. } => unreachable!(),
        };
        let smaller = t1.plus_count().min(params.n() - t1.plus_count());
        prop_assert_eq!(smaller, minus.min(params.n() - minus));
    }

    #[test]
    fn canonical_ignores_sign(sigma in prop::collection::vec(prop::sample::select(vec![-1i8, 1]), 1..30)) {
        let t = GroundTruth::Binary { sigma: sigma.clone() };
        let u = GroundTruth::Binary { sigma: sigma.iter().map(|s| -s).collect() };
        prop_assert_eq!(t.canonical(), u.canonical());
    }

    #[test]
    fn rounding_inverts_the_cluster_matrix(sigma in prop::collection::vec(prop::sample::select(vec![-1i8, 1]), 2..30)) {
        let t = GroundTruth::Binary { sigma };
        let y = t.cluster_matrix();
        for i in 0..t.n() {
            for j in 0..t.n() {
                let s = t.sigma_f64();
                prop_assert_eq!(y.matrix().get(i, j), s[i] * s[j]);
            }
        }
        let r = round_binary(y.matrix(), Some(t.plus_count())).unwrap();
        prop_assert_eq!(r.canonical(), t.canonical());
    }

    #[test]
    fn laplace_quantile_is_odd_and_monotone(u in 0.001f64..0.999, v in 0.001f64..0.999, scale in 0.01f64..10.0) {
        prop_assert!((laplace_quantile(u, scale) + laplace_quantile(1.0 - u, scale)).abs() < 1e-9 * scale.max(1.0) * 10.0);
        if u < v {
            prop_assert!(laplace_quantile(u, scale) <= laplace_quantile(v, scale));
        }
    }

    #[test]
    fn psd_projection_is_psd_and_idempotent(n in 1usize..12, data in prop::collection::vec(-5.0f64..5.0, 144)) {
        let m = SymMatrix::from_fn(n, |i, j| data[i.min(j) * 12 + i.max(j)]);
        let p = psd_project(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(eigenvalues(&p).unwrap().iter().all(|&l| l >= -1e-10 * scale));
        let q = psd_project(&p).unwrap();
        prop_assert!(p.max_abs_diff(&q) <= 1e-9 * scale);
        // the projection is the nearest PSD matrix, so it beats the zero matrix
        let mut diff = m.clone();
        diff.axpy(-1.0, &p);
        prop_assert!(diff.frobenius_norm() <= m.frobenius_norm() + 1e-9 * scale);
    }
}
