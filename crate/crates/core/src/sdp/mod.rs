//! Semidefinite relaxations of the maximum-likelihood clustering problems,
//! an ADMM solver, rounding back to partitions, and an exhaustive MLE for
//! small graphs.

mod admm;
mod mle;
mod round;

pub use admm::{solve, solve_polished, PolishCandidate, SdpSolution, SolveStatus, SolverOptions};
pub use mle::{mle_bruteforce, mle_partition, MLE_MAX_N};
pub use round::{round_binary, round_general};

use crate::certificates::{build_binary_adjacency, build_general_adjacency};
use crate::concentration::tau;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{GroundTruth, Partition, SbmParams, Variant};
use crate::spectral::SymMatrix;

/// Affine and box constraints applied alongside `Y ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraints {
    /// `Y_ii = 1`, plus `<J, Y> = mass` when sizes are fixed.
    UnitDiagonal { mass: Option<f64> },
    /// `0 <= Z`, `Z_ii <= 1`, `<I, Z> = trace`, `<J, Z> = total`.
    Clustered { trace: f64, total: f64 },
}

/// `max <A, Y>` over the constraint set intersected with the PSD cone.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub variant: Variant,
    pub data: SymMatrix,
    pub constraints: Constraints,
}

impl SdpProblem {
    /// Two communities with `k` vertices in the first one.
    pub fn binary_sized(data: SymMatrix, k: usize) -> Result<Self> {
        let n = data.n();
        if k > n {
            return Err(Error::InfeasibleProblem(format!("community of {k} vertices in a graph of {n}")));
        }
        let d = n as f64 - 2.0 * k as f64;
        Ok(SdpProblem {
            variant: Variant::Basbm,
            data,
            constraints: Constraints::UnitDiagonal { mass: Some(d * d) },
        })
    }

    pub fn binary_free(data: SymMatrix) -> Self {
        SdpProblem {
            variant: Variant::Cbsbm,
            data,
            constraints: Constraints::UnitDiagonal { mass: None },
        }
    }

    pub fn clustered(data: SymMatrix, sizes: &[usize]) -> Result<Self> {
        let n = data.n() as f64;
        let trace: f64 = sizes.iter().map(|&k| k as f64).sum();
        let total: f64 = sizes.iter().map(|&k| (k * k) as f64).sum();
        if trace > n {
            return Err(Error::InfeasibleProblem(format!("cluster sizes {sizes:?} exceed n = {n}")));
        }
        let p = SdpProblem {
            variant: Variant::Gssbm,
            data,
            constraints: Constraints::Clustered { trace, total },
        };
        p.check_feasible()?;
        Ok(p)
    }

    /// The relaxation matching the model that produced `g`.
    pub fn for_model(g: &Graph, params: &SbmParams) -> Result<Self> {
        if g.n() != params.n() {
            return Err(Error::ShapeMismatch(format!("graph n = {}, model n = {}", g.n(), params.n())));
        }
        if g.alphabet() != params.variant().alphabet() {
            return Err(Error::ShapeMismatch(format!(
                "{} graph for the {} model",
                g.alphabet().name(),
                params.variant()
            )));
        }
        let a = SymMatrix::adjacency(g);
        match params.variant() {
            Variant::Basbm => Self::binary_sized(a, params.sizes()[0]),
            Variant::Cbsbm => Ok(Self::binary_free(a)),
            Variant::Gssbm => Self::clustered(a, &params.sizes()),
        }
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn check_feasible(&self) -> Result<()> {
        let n = self.n() as f64;
        match self.constraints {
            Constraints::UnitDiagonal { mass: Some(m) } if !(0.0..=n * n).contains(&m) => {
                Err(Error::InfeasibleProblem(format!("mass {m} outside [0, n^2]")))
            }
            Constraints::Clustered { trace, total } if trace > n || total < trace || total > trace * n => {
                Err(Error::InfeasibleProblem(format!(
                    "trace {trace} and total {total} are inconsistent for n = {n}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn zero_mass(&self) -> bool {
        matches!(self.constraints, Constraints::UnitDiagonal { mass: Some(m) } if m == 0.0)
    }

    /// The only feasible point, when the constraints pin one down: a single
    /// community forces `Y = J`.
    pub(crate) fn unique_point(&self) -> Option<SymMatrix> {
        let n = self.n();
        match self.constraints {
            Constraints::UnitDiagonal { mass: Some(m) } if n > 0 && m == (n * n) as f64 => Some(SymMatrix::ones(n)),
            _ => None,
        }
    }

    /// Largest violation of the affine and box constraints by `y`.
    pub fn violation(&self, y: &SymMatrix) -> f64 {
        let n = self.n();
        match self.constraints {
            Constraints::UnitDiagonal { mass } => {
                let diag = (0..n).map(|i| (y.get(i, i) - 1.0).abs()).fold(0.0, f64::max);
                let m = mass.map_or(0.0, |m| (y.sum() - m).abs() / (n * n) as f64);
                diag.max(m)
            }
            Constraints::Clustered { trace, total } => {
                let neg = y.as_slice().iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
                let over = (0..n).map(|i| (y.get(i, i) - 1.0).max(0.0)).fold(0.0, f64::max);
                let t = (y.trace() - trace).abs() / n as f64;
                let s = (y.sum() - total).abs() / (n * n) as f64;
                neg.max(over).max(t).max(s)
            }
        }
    }

    /// Frobenius projection onto the affine and box constraints.
    pub fn project(&self, y: &mut SymMatrix) {
        let n = self.n();
        match self.constraints {
            Constraints::UnitDiagonal { mass } => {
                for i in 0..n {
                    y.set(i, i, 1.0);
                }
                if let (Some(m), true) = (mass, n > 1) {
                    let shift = (m - y.sum()) / (n * (n - 1)) as f64;
                    let data = y.as_mut_slice();
                    for i in 0..n {
                        for j in 0..n {
                            if i != j {
                                data[i * n + j] += shift;
                            }
                        }
                    }
                }
            }
            Constraints::Clustered { trace, total } => {
                let diag = y.diag();
                let d = capped_simplex(&diag, trace);
                let mut upper = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in i + 1..n {
                        upper.push(y.get(i, j));
                    }
                }
                let theta = simplex_threshold(&upper, 0.5 * (total - trace));
                for (i, &di) in d.iter().enumerate() {
                    y.set(i, i, di);
                    for j in i + 1..n {
                        let v = (y.get(i, j) - theta).max(0.0);
                        y.set(i, j, v);
                    }
                }
            }
        }
    }

    /// Objective `<A, Y>`.
    pub fn objective(&self, y: &SymMatrix) -> f64 {
        self.data.dot(y)
    }
}

/// Projection of `v` onto `{x : 0 <= x <= 1, sum x = target}`.
fn capped_simplex(v: &[f64], target: f64) -> Vec<f64> {
    let total = |theta: f64| v.iter().map(|&x| (x - theta).clamp(0.0, 1.0)).sum::<f64>();
    let lo0 = v.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    v.iter().map(|&x| (x - theta).clamp(0.0, 1.0)).collect()
}

/// `theta` with `sum max(v - theta, 0) = target` for `target > 0`; for
/// `target == 0` any `theta >= max v` works and the maximum is returned.
fn simplex_threshold(v: &[f64], target: f64) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    if target <= 0.0 {
        return sorted[0];
    }
    let mut cum = 0.0;
    let mut theta = sorted[0] - target;
    for (k, &x) in sorted.iter().enumerate() {
        cum += x;
        let t = (cum - target) / (k + 1) as f64;
        if x > t {
            theta = t;
        } else {
            break;
        }
    }
    theta
}

/// Solves the relaxation for `g` and rounds it to a partition.
///
/// Polishing rounds the iterate and pairs the rounded cluster matrix with its
/// dual certificate; when that certificate is valid the pair is a KKT point
/// and the solver stops there.
pub fn recover(g: &Graph, params: &SbmParams, opts: &SolverOptions) -> Result<(GroundTruth, SdpSolution)> {
    let prob = SdpProblem::for_model(g, params)?;
    let mut last: Option<Partition> = None;
    let polish = |z: &SymMatrix| {
        let cand = round(z, params).ok()?;
        let key = cand.canonical();
        if last.as_ref() == Some(&key) {
            return None;
        }
        last = Some(key);
        let s = match params {
            SbmParams::Gssbm { a, b, .. } => {
                let lambda = tau(*a, *b).ok()?;
                build_general_adjacency(&prob.data, &cand, params, lambda).ok()?.s
            }
            _ => build_binary_adjacency(&prob.data, &cand, params).ok()?.s,
        };
        let mut m = prob.data.clone();
        m.axpy(1.0, &s);
        Some((cand.cluster_matrix().0, m))
    };
    let sol = solve_polished(&prob, opts, polish)?;
    Ok((round(&sol.matrix, params)?, sol))
}

fn round(z: &SymMatrix, params: &SbmParams) -> Result<GroundTruth> {
    match params.variant() {
        Variant::Basbm => round_binary(z, Some(params.sizes()[0])),
        Variant::Cbsbm => round_binary(z, None),
        Variant::Gssbm => round_general(z, &params.sizes()),
    }
}
