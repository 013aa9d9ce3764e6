//! Block-model parameterizations, planted partitions and seeded sampling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, Alphabet, Graph};
use crate::spectral::{tol, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Two communities of unequal size, simple edges.
    Basbm,
    /// Two communities, Erdős–Rényi edges with noisy ±1 labels.
    Cbsbm,
    /// `r` communities plus outliers.
    Gssbm,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Basbm => "basbm",
            Variant::Cbsbm => "cbsbm",
            Variant::Gssbm => "gssbm",
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Variant::Cbsbm => Alphabet::Censored,
            _ => Alphabet::Simple,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basbm" => Ok(Variant::Basbm),
            "cbsbm" => Ok(Variant::Cbsbm),
            "gssbm" => Ok(Variant::Gssbm),
            other => Err(Error::Config(format!("unknown variant `{other}`"))),
        }
    }
}

/// Model parameters. Edge probabilities are `a ln n / n` (intra) and
/// `b ln n / n` (inter).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum SbmParams {
    Basbm {
        n: usize,
        a: f64,
        b: f64,
        rho: f64,
    },
    Cbsbm {
        n: usize,
        a: f64,
        rho: f64,
        xi: f64,
    },
    Gssbm {
        n: usize,
        a: f64,
        b: f64,
        rhos: Vec<f64>,
    },
}

/// `floor(rho * n)`, robust to representation error in `rho`.
pub fn cluster_size(rho: f64, n: usize) -> usize {
    (rho * n as f64 + 1e-9).floor() as usize
}

impl SbmParams {
    pub fn variant(&self) -> Variant {
        match self {
            SbmParams::Basbm { .. } => Variant::Basbm,
            SbmParams::Cbsbm { .. } => Variant::Cbsbm,
            SbmParams::Gssbm { .. } => Variant::Gssbm,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            SbmParams::Basbm { n, .. } | SbmParams::Cbsbm { n, .. } | SbmParams::Gssbm { n, .. } => n,
        }
    }

    pub fn a(&self) -> f64 {
        match *self {
            SbmParams::Basbm { a, .. } | SbmParams::Cbsbm { a, .. } | SbmParams::Gssbm { a, .. } => a,
        }
    }

    /// Inter-cluster density constant; zero for the censored model.
    pub fn b(&self) -> f64 {
        match *self {
            SbmParams::Basbm { b, .. } | SbmParams::Gssbm { b, .. } => b,
            SbmParams::Cbsbm { .. } => 0.0,
        }
    }

    pub fn log_n(&self) -> f64 {
        (self.n() as f64).ln()
    }

    pub fn p(&self) -> f64 {
        self.a() * self.log_n() / self.n() as f64
    }

    pub fn q(&self) -> f64 {
        self.b() * self.log_n() / self.n() as f64
    }

    /// Community sizes: `[K, n - K]` for binary models, `K_1..K_r` otherwise.
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            SbmParams::Basbm { n, rho, .. } | SbmParams::Cbsbm { n, rho, .. } => {
                let k = cluster_size(*rho, *n);
                vec![k, n - k]
            }
            SbmParams::Gssbm { n, rhos, .. } => rhos.iter().map(|&r| cluster_size(r, *n)).collect(),
        }
    }

    /// Smallest community fraction `K_k / n`.
    pub fn rho_min(&self) -> f64 {
        let n = self.n() as f64;
        match self {
            SbmParams::Gssbm { .. } => self
                .sizes()
                .iter()
                .map(|&k| k as f64 / n)
                .fold(f64::INFINITY, f64::min),
            SbmParams::Basbm { rho, .. } | SbmParams::Cbsbm { rho, .. } => *rho,
        }
    }

    /// Same structure with replaced density constants.
    pub fn with_densities(&self, a: f64, b: f64) -> SbmParams {
        let mut p = self.clone();
        match &mut p {
            SbmParams::Basbm { a: pa, b: pb, .. } | SbmParams::Gssbm { a: pa, b: pb, .. } => {
                *pa = a;
                *pb = b;
            }
            SbmParams::Cbsbm { a: pa, .. } => *pa = a,
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(Error::InvalidParams(m));
        if n < 2 {
            return bad(format!("n = {n} must be at least 2"));
        }
        let a = self.a();
        if !(a.is_finite() && a > 0.0) {
            return bad(format!("a = {a} must be positive"));
        }
        if self.p() > 1.0 {
            return bad(format!("a ln n / n = {} exceeds 1", self.p()));
        }
        match self {
            SbmParams::Basbm { b, rho, .. } => {
                if !(*b > 0.0 && *b < a) {
                    return bad(format!("need a > b > 0, got a = {a}, b = {b}"));
                }
                if !(*rho > 0.0 && *rho <= 0.5) {
                    return bad(format!("rho = {rho} must lie in (0, 0.5]"));
                }
            }
            SbmParams::Cbsbm { rho, xi, .. } => {
                if !(*rho > 0.0 && *rho <= 0.5) {
                    return bad(format!("rho = {rho} must lie in (0, 0.5]"));
                }
                if !(0.0..=0.5).contains(xi) {
                    return bad(format!("xi = {xi} must lie in [0, 0.5]"));
                }
            }
            SbmParams::Gssbm { b, rhos, .. } => {
                if !(*b > 0.0 && *b < a) {
                    return bad(format!("need a > b > 0, got a = {a}, b = {b}"));
                }
                if rhos.is_empty() {
                    return bad("at least one cluster is required".into());
                }
                if rhos.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
                    return bad(format!("cluster fractions {rhos:?} must lie in (0, 1]"));
                }
                if rhos.windows(2).any(|w| w[0] < w[1]) {
                    return bad(format!("cluster fractions {rhos:?} must be nonincreasing"));
                }
                let sizes = self.sizes();
                if sizes.iter().sum::<usize>() > n {
                    return bad(format!("cluster sizes {sizes:?} exceed n = {n}"));
                }
                if sizes.contains(&0) {
                    return bad(format!("cluster sizes {sizes:?} must be nonzero"));
                }
            }
        }
        Ok(())
    }

    /// Planted partition with communities laid out contiguously from vertex 0.
    pub fn planted_truth(&self) -> GroundTruth {
        let n = self.n();
        match self {
            SbmParams::Basbm { .. } | SbmParams::Cbsbm { .. } => {
                let k = self.sizes()[0];
                GroundTruth::Binary {
                    sigma: (0..n).map(|i| if i < k { 1 } else { -1 }).collect(),
                }
            }
            SbmParams::Gssbm { .. } => {
                let sizes = self.sizes();
                let mut labels = vec![0; n];
                let mut start = 0;
                for (k, &size) in sizes.iter().enumerate() {
                    labels[start..start + size].fill(k + 1);
                    start += size;
                }
                GroundTruth::General { labels, sizes }
            }
        }
    }
}

/// A planted (or recovered) partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroundTruth {
    /// `sigma[i] = +1` for the first community, `-1` for the second.
    Binary { sigma: Vec<i8> },
    /// `labels[i]` in `1..=r`, or `0` for outliers; `sizes[k - 1] = |C_k|`.
    General { labels: Vec<usize>, sizes: Vec<usize> },
}

impl GroundTruth {
    pub fn n(&self) -> usize {
        match self {
            GroundTruth::Binary { sigma } => sigma.len(),
            GroundTruth::General { labels, .. } => labels.len(),
        }
    }

    /// `sigma` as reals; panics on a general partition.
    pub fn sigma_f64(&self) -> Vec<f64> {
        match self {
            GroundTruth::Binary { sigma } => sigma.iter().map(|&s| s as f64).collect(),
            GroundTruth::General { .. } => panic!("sigma requested from a general partition"),
        }
    }

    /// Size of the `+1` community.
    pub fn plus_count(&self) -> usize {
        match self {
            GroundTruth::Binary { sigma } => sigma.iter().filter(|&&s| s == 1).count(),
            GroundTruth::General { .. } => 0,
        }
    }

    /// Cluster index per vertex in `1..=r`, `0` for outliers. Binary `+1` maps
    /// to 1 and `-1` to 2.
    pub fn labels(&self) -> Vec<usize> {
        match self {
            GroundTruth::Binary { sigma } => sigma.iter().map(|&s| if s == 1 { 1 } else { 2 }).collect(),
            GroundTruth::General { labels, .. } => labels.clone(),
        }
    }

    pub fn cluster_count(&self) -> usize {
        match self {
            GroundTruth::Binary { .. } => 2,
            GroundTruth::General { sizes, .. } => sizes.len(),
        }
    }

    /// Members of each cluster, indexed `0..r`.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let labels = self.labels();
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (i, &l) in labels.iter().enumerate() {
            if l > 0 {
                out[l - 1].push(i);
            }
        }
        out
    }

    /// Relabeling-invariant form: clusters numbered by first appearance,
    /// outliers stay 0.
    pub fn canonical(&self) -> Partition {
        let labels = self.labels();
        let mut map = vec![0u32; self.cluster_count() + 1];
        let mut next = 1;
        let out = labels
            .iter()
            .map(|&l| {
                if l == 0 {
                    return 0;
                }
                if map[l] == 0 {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Partition(out)
    }

    pub fn cluster_matrix(&self) -> ClusterMatrix {
        match self {
            GroundTruth::Binary { sigma } => {
                ClusterMatrix(SymMatrix::from_fn(sigma.len(), |i, j| (sigma[i] * sigma[j]) as f64))
            }
            GroundTruth::General { labels, .. } => ClusterMatrix(SymMatrix::from_fn(labels.len(), |i, j| {
                (labels[i] != 0 && labels[i] == labels[j]) as u8 as f64
            })),
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> GroundTruth {
        match self {
            GroundTruth::Binary { sigma } => {
                let mut s = vec![0; sigma.len()];
                for (i, &p) in perm.iter().enumerate() {
                    s[p] = sigma[i];
                }
                GroundTruth::Binary { sigma: s }
            }
            GroundTruth::General { labels, sizes } => {
                let mut l = vec![0; labels.len()];
                for (i, &p) in perm.iter().enumerate() {
                    l[p] = labels[i];
                }
                GroundTruth::General {
                    labels: l,
                    sizes: sizes.clone(),
                }
            }
        }
    }
}

/// Canonical partition labels, comparable with `==`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition(pub Vec<u32>);

/// `sigma sigma^T` for binary models or `sum_k xi_k xi_k^T` for the general one.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterMatrix(pub SymMatrix);

impl ClusterMatrix {
    pub fn matrix(&self) -> &SymMatrix {
        &self.0
    }

    fn relation(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.as_slice().iter().map(|&v| v > tol::CLUSTER_THRESHOLD)
    }
}

/// True iff both matrices induce the same partition and outlier set.
pub fn same_clustering(m1: &ClusterMatrix, m2: &ClusterMatrix) -> Result<bool> {
    if m1.0.n() != m2.0.n() {
        return Err(Error::ShapeMismatch(format!("{} vs {}", m1.0.n(), m2.0.n())));
    }
    Ok(m1.relation().eq(m2.relation()))
}

/// Draws a graph for `truth` with explicit edge probabilities.
///
/// Pair `(i, j)` with packed index `t` consumes words `4t..4t + 4` of a
/// ChaCha8 stream keyed by `seed`: the first `f64` decides presence, the
/// second the label flip. Samples are therefore independent of the order in
/// which pairs are visited.
pub fn sample_graph(truth: &GroundTruth, p: f64, q: f64, xi: f64, alphabet: Alphabet, seed: u64) -> Graph {
    let n = truth.n();
    let labels = truth.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.gen();
            let flip: f64 = rng.gen();
            let same = labels[i] != 0 && labels[i] == labels[j];
            let v = match alphabet {
                Alphabet::Simple => {
                    let prob = if same { p } else { q };
                    (u < prob) as i8
                }
                Alphabet::Censored => {
                    if u < p {
                        let agree: i8 = if labels[i] == labels[j] { 1 } else { -1 };
                        if flip < xi {
                            -agree
                        } else {
                            agree
                        }
                    } else {
                        0
                    }
                }
            };
            entries.push(v);
        }
    }
    Graph::from_packed(n, alphabet, entries).expect("sampled entries are in the alphabet")
}

/// Samples a graph from the model together with its planted partition.
pub fn generate(params: &SbmParams, seed: u64) -> Result<(Graph, GroundTruth)> {
    params.validate()?;
    let truth = params.planted_truth();
    let xi = match params {
        SbmParams::Cbsbm { xi, .. } => *xi,
        _ => 0.0,
    };
    let g = sample_graph(&truth, params.p(), params.q(), xi, params.variant().alphabet(), seed);
    Ok((g, truth))
}

/// Random relabeling of vertices applied to a graph and its partition.
pub fn permute(g: &Graph, truth: &GroundTruth, seed: u64) -> (Graph, GroundTruth) {
    use rand::seq::SliceRandom;
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut h = Graph::empty(n, g.alphabet());
    for (i, j, v) in g.edges() {
        h.set_in_place(perm[i], perm[j], v).expect("permuted pair is valid");
    }
    (h, truth.permuted(&perm))
}

pub(crate) fn check_truth(params: &SbmParams, truth: &GroundTruth) -> Result<()> {
    if truth.n() != params.n() {
        return Err(Error::ShapeMismatch(format!(
            "partition over {} vertices, model over {}",
            truth.n(),
            params.n()
        )));
    }
    match (params.variant(), truth) {
        (Variant::Gssbm, GroundTruth::General { .. }) | (Variant::Basbm | Variant::Cbsbm, GroundTruth::Binary { .. }) => {
            Ok(())
        }
        _ => Err(Error::InvalidParams(format!(
            "partition kind does not match the {} model",
            params.variant()
        ))),
    }
}

/// Entrywise expectation of the adjacency matrix under `params` given `truth`.
pub fn expected_adjacency(params: &SbmParams, truth: &GroundTruth) -> Result<SymMatrix> {
    check_truth(params, truth)?;
    let (p, q) = (params.p(), params.q());
    let n = params.n();
    Ok(match (params, truth) {
        (SbmParams::Cbsbm { xi, .. }, GroundTruth::Binary { sigma }) => {
            let scale = (1.0 - 2.0 * xi) * p;
            SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { scale * (sigma[i] * sigma[j]) as f64 })
        }
        _ => {
            let labels = truth.labels();
            SymMatrix::from_fn(n, |i, j| {
                if i == j {
                    0.0
                } else if labels[i] != 0 && labels[i] == labels[j] {
                    p
                } else {
                    q
                }
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenvalues, is_psd};

    fn basbm(n: usize, a: f64, b: f64, rho: f64) -> SbmParams {
        SbmParams::Basbm { n, a, b, rho }
    }

    #[test]
    fn validation() {
        assert!(basbm(300, 20.0, 2.0, 0.5).validate().is_ok());
        assert!(basbm(300, 2.0, 20.0, 0.5).validate().is_err());
        assert!(basbm(300, 20.0, 2.0, 0.6).validate().is_err());
        assert!(basbm(10, 20.0, 2.0, 0.5).validate().is_err()); // p > 1
        let c = SbmParams::Cbsbm { n: 100, a: 5.0, rho: 0.5, xi: 0.7 };
        assert!(c.validate().is_err());
        let g = SbmParams::Gssbm { n: 100, a: 5.0, b: 1.0, rhos: vec![0.2, 0.3] };
        assert!(g.validate().is_err());
        let g = SbmParams::Gssbm { n: 100, a: 5.0, b: 1.0, rhos: vec![0.6, 0.5] };
        assert!(g.validate().is_err());
    }

    #[test]
    fn sizes_use_floor() {
        assert_eq!(basbm(301, 20.0, 2.0, 0.5).sizes(), vec![150, 151]);
        let g = SbmParams::Gssbm { n: 300, a: 40.0, b: 2.0, rhos: vec![0.3, 0.3, 0.3] };
        assert_eq!(g.sizes(), vec![90, 90, 90]);
        match g.planted_truth() {
            GroundTruth::General { labels, .. } => assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 30),
            _ => unreachable!(),
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let p = basbm(120, 20.0, 2.0, 0.3);
        let (g1, t1) = generate(&p, 11).unwrap();
        let (g2, t2) = generate(&p, 11).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(t1, t2);
        let (g3, _) = generate(&p, 12).unwrap();
        assert_ne!(g1, g3);
        assert_eq!(t1.plus_count(), 36);
    }

    #[test]
    fn intra_edges_within_three_sigma() {
        let p = basbm(300, 20.0, 2.0, 0.5);
        let (g, _) = generate(&p, 7).unwrap();
        let pp = p.p();
        let pairs = 150.0 * 149.0 / 2.0;
        let mean = pairs * pp;
        let sd = (pairs * pp * (1.0 - pp)).sqrt();
        for block in [0..150, 150..300] {
            let count = g.edges().filter(|(i, j, _)| block.contains(i) && block.contains(j)).count() as f64;
            assert!((count - mean).abs() <= 3.0 * sd, "{count} vs {mean} ± {sd}");
        }
    }

    #[test]
    fn zero_probability_gives_empty_graph() {
        let t = basbm(50, 20.0, 2.0, 0.5).planted_truth();
        assert_eq!(sample_graph(&t, 0.0, 0.0, 0.0, Alphabet::Simple, 3).edge_count(), 0);
    }

    #[test]
    fn noiseless_censored_labels_agree() {
        let p = SbmParams::Cbsbm { n: 200, a: 8.0, rho: 0.3, xi: 0.0 };
        let (g, t) = generate(&p, 5).unwrap();
        let s = t.sigma_f64();
        assert!(g.edge_count() > 0);
        for (i, j, v) in g.edges() {
            assert_eq!(v as f64, s[i] * s[j]);
        }
    }

    #[test]
    fn expected_adjacency_entries() {
        let p = basbm(20, 4.0, 1.0, 0.5);
        let t = p.planted_truth();
        let e = expected_adjacency(&p, &t).unwrap();
        assert_eq!(e.get(0, 1), p.p());
        assert_eq!(e.get(0, 15), p.q());
        assert_eq!(e.get(3, 3), 0.0);

        let c = SbmParams::Cbsbm { n: 20, a: 4.0, rho: 0.5, xi: 0.1 };
        let t = c.planted_truth();
        let e = expected_adjacency(&c, &t).unwrap();
        assert!((e.get(0, 15) + 0.8 * c.p()).abs() < 1e-15);
        assert!((e.get(0, 1) - 0.8 * c.p()).abs() < 1e-15);

        let gp = SbmParams::Gssbm { n: 20, a: 4.0, b: 1.0, rhos: vec![0.4, 0.4] };
        let t = gp.planted_truth();
        let e = expected_adjacency(&gp, &t).unwrap();
        assert_eq!(e.get(18, 19), gp.q()); // outlier pair
        assert_eq!(e.get(0, 18), gp.q());
        assert_eq!(e.get(0, 1), gp.p());
    }

    // (p-q)Z* + qJ - p I_in - q I_out, assembled independently
    #[test]
    fn general_expectation_matches_matrix_identity() {
        let gp = SbmParams::Gssbm { n: 25, a: 4.0, b: 1.0, rhos: vec![0.4, 0.3] };
        let t = gp.planted_truth();
        let (p, q) = (gp.p(), gp.q());
        let z = t.cluster_matrix();
        let mut m = z.0.scale(p - q);
        m.axpy(q, &SymMatrix::ones(25));
        for i in 0..25 {
            let inside = z.0.get(i, i) == 1.0;
            let v = m.get(i, i) - if inside { p } else { q };
            m.set(i, i, v);
        }
        assert!(m.max_abs_diff(&expected_adjacency(&gp, &t).unwrap()) < 1e-15);
    }

    #[test]
    fn cluster_matrix_examples() {
        let t = GroundTruth::Binary { sigma: vec![1, -1] };
        assert_eq!(t.cluster_matrix().0.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
        let t = GroundTruth::General { labels: vec![1, 1, 1], sizes: vec![3] };
        assert_eq!(t.cluster_matrix().0, SymMatrix::ones(3));
        let t = GroundTruth::General { labels: vec![1, 0, 1], sizes: vec![2] };
        let z = t.cluster_matrix();
        assert!((0..3).all(|j| z.0.get(1, j) == 0.0));
    }

    #[test]
    fn cluster_matrix_rank_and_psd() {
        let gp = SbmParams::Gssbm { n: 30, a: 4.0, b: 1.0, rhos: vec![0.4, 0.3, 0.2] };
        let z = gp.planted_truth().cluster_matrix();
        assert!(is_psd(&z.0, 1e-10).unwrap());
        let rank = eigenvalues(&z.0).unwrap().iter().filter(|&&w| w > 1e-9).count();
        assert_eq!(rank, 3);
    }

    #[test]
    fn same_clustering_examples() {
        let s = GroundTruth::Binary { sigma: vec![1, -1, 1, -1] };
        let neg = GroundTruth::Binary { sigma: vec![-1, 1, -1, 1] };
        let other = GroundTruth::Binary { sigma: vec![1, 1, -1, -1] };
        assert!(same_clustering(&s.cluster_matrix(), &neg.cluster_matrix()).unwrap());
        assert!(!same_clustering(&s.cluster_matrix(), &other.cluster_matrix()).unwrap());
        let g1 = GroundTruth::General { labels: vec![1, 1, 2, 2, 0], sizes: vec![2, 2] };
        let g2 = GroundTruth::General { labels: vec![2, 2, 1, 1, 0], sizes: vec![2, 2] };
        assert!(same_clustering(&g1.cluster_matrix(), &g2.cluster_matrix()).unwrap());
        assert_eq!(g1.canonical(), g2.canonical());
        assert_eq!(s.canonical(), neg.canonical());
        let small = GroundTruth::Binary { sigma: vec![1, -1] };
        assert!(same_clustering(&s.cluster_matrix(), &small.cluster_matrix()).is_err());
    }

    #[test]
    fn permutation_preserves_structure() {
        let p = basbm(40, 8.0, 1.0, 0.4);
        let (g, t) = generate(&p, 1).unwrap();
        let (h, u) = permute(&g, &t, 9);
        assert_eq!(h.edge_count(), g.edge_count());
        assert_eq!(u.plus_count(), t.plus_count());
        let e = expected_adjacency(&p, &u).unwrap();
        let e0 = expected_adjacency(&p, &t).unwrap();
        // each sampled edge keeps its block type under the relabeling
        let intra_g = g.edges().filter(|&(i, j, _)| e0.get(i, j) == p.p()).count();
        let intra_h = h.edges().filter(|&(i, j, _)| e.get(i, j) == p.p()).count();
        assert_eq!(intra_g, intra_h);
    }
}
