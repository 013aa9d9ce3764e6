use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{ClusterMatrix, GroundTruth, SbmParams, Variant};

pub const MLE_MAX_N: usize = 16;

/// Exact maximizer of `sum_ij A_ij Y_ij` over admissible partitions.
///
/// Candidates are visited in lexicographic order of the label vector
/// (`-1 < +1` for binary models, `0 < 1 < .. < r` otherwise) and the first
/// strict maximum is kept.
pub fn mle_partition(g: &Graph, params: &SbmParams) -> Result<GroundTruth> {
    let n = g.n();
    if n > MLE_MAX_N {
        return Err(Error::TooLarge { n, max: MLE_MAX_N });
    }
    if n != params.n() {
        return Err(Error::ShapeMismatch(format!("graph n = {n}, model n = {}", params.n())));
    }
    let a: Vec<f64> = (0..n * n).map(|t| g.get(t / n, t % n) as f64).collect();
    match params.variant() {
        Variant::Basbm | Variant::Cbsbm => {
            let k = (params.variant() == Variant::Basbm).then(|| params.sizes()[0]);
            Ok(best_sign_vector(&a, n, k))
        }
        Variant::Gssbm => Ok(best_labeling(&a, n, &params.sizes())),
    }
}

/// [`mle_partition`] as a cluster matrix.
pub fn mle_bruteforce(g: &Graph, params: &SbmParams) -> Result<ClusterMatrix> {
    Ok(mle_partition(g, params)?.cluster_matrix())
}

fn best_sign_vector(a: &[f64], n: usize, plus: Option<usize>) -> GroundTruth {
    let mut best = f64::NEG_INFINITY;
    let mut best_mask = 0u32;
    // bit (n - 1 - i) set <=> sigma_i = +1, so increasing masks are lexicographic
    for mask in 0u32..(1u32 << n) {
        if let Some(k) = plus {
            if mask.count_ones() as usize != k {
                continue;
            }
        }
        let s = |i: usize| if mask >> (n - 1 - i) & 1 == 1 { 1.0 } else { -1.0 };
        let mut obj = 0.0;
        for i in 0..n {
            let si = s(i);
            for j in 0..n {
                obj += a[i * n + j] * si * s(j);
            }
        }
        if obj > best {
            best = obj;
            best_mask = mask;
        }
    }
    GroundTruth::Binary {
        sigma: (0..n)
            .map(|i| if best_mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 })
            .collect(),
    }
}

fn best_labeling(a: &[f64], n: usize, sizes: &[usize]) -> GroundTruth {
    struct Search<'a> {
        a: &'a [f64],
        n: usize,
        remaining: Vec<usize>,
        labels: Vec<usize>,
        best: f64,
        best_labels: Vec<usize>,
    }

    impl Search<'_> {
        fn objective(&self) -> f64 {
            let mut obj = 0.0;
            for i in 0..self.n {
                let li = self.labels[i];
                if li == 0 {
                    continue;
                }
                for j in 0..self.n {
                    if self.labels[j] == li {
                        obj += self.a[i * self.n + j];
                    }
                }
            }
            obj
        }

        fn go(&mut self, i: usize) {
            if i == self.n {
                let obj = self.objective();
                if obj > self.best {
                    self.best = obj;
                    self.best_labels = self.labels.clone();
                }
                return;
            }
            for l in 0..self.remaining.len() {
                if self.remaining[l] == 0 {
                    continue;
                }
                self.remaining[l] -= 1;
                self.labels[i] = l;
                self.go(i + 1);
                self.remaining[l] += 1;
            }
        }
    }

    let outliers = n - sizes.iter().sum::<usize>();
    let mut remaining = vec![outliers];
    remaining.extend_from_slice(sizes);
    let mut search = Search {
        a,
        n,
        remaining,
        labels: vec![0; n],
        best: f64::NEG_INFINITY,
        best_labels: vec![0; n],
    };
    search.go(0);
    GroundTruth::General {
        labels: search.best_labels,
        sizes: sizes.to_vec(),
    }
}
