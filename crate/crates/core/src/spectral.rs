//! Dense symmetric matrices and the eigenvalue routines built on LAPACK's
//! `dsyevr` (MRRR).

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Numerical tolerances shared across modules.
pub mod tol {
    /// Largest entrywise asymmetry accepted by [`super::SymMatrix::from_rows`].
    pub const ASYMMETRY: f64 = 1e-12;
    /// Relative eigenvalue accuracy target.
    pub const EIGEN_REL: f64 = 1e-9;
    /// Certificate checks, relative to the spectral norm.
    pub const CERTIFICATE: f64 = 1e-8;
    /// Relative gap below which the top eigenvalue counts as repeated.
    pub const EIGEN_GAP: f64 = 1e-6;
    /// Threshold separating "same cluster" from "different cluster".
    pub const CLUSTER_THRESHOLD: f64 = 0.5;
}

/// Symmetric `n x n` matrix in dense row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn ones(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![1.0; n * n],
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Fills entries `(i, j)` with `i <= j` from `f` and mirrors them.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    /// Validates symmetry of a full row-major buffer.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((data[i * n + j] - data[j * n + i]).abs());
            }
        }
        if worst.is_nan() || worst > tol::ASYMMETRY {
            return Err(Error::NotSymmetric(worst));
        }
        let mut m = SymMatrix { n, data };
        m.symmetrize();
        Ok(m)
    }

    /// Adjacency matrix of `g` with the graph's entry values.
    pub fn adjacency(g: &Graph) -> Self {
        let n = g.n();
        let mut m = Self::zeros(n);
        for (i, j, v) in g.edges() {
            m.data[i * n + j] = v as f64;
            m.data[j * n + i] = v as f64;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Trace inner product `<self, other>`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &SymMatrix) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Adds `s * v v^T`.
    pub fn rank_one_update(&mut self, s: f64, v: &[f64]) {
        let n = self.n;
        for i in 0..n {
            let si = s * v[i];
            let row = &mut self.data[i * n..(i + 1) * n];
            for (r, vj) in row.iter_mut().zip(v) {
                *r += si * vj;
            }
        }
    }

    /// `P M P` with `P = I - J/n`, which puts the all-ones vector in the kernel.
    pub fn double_center(&mut self) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let nf = n as f64;
        let means: Vec<f64> = (0..n).map(|i| self.row(i).iter().sum::<f64>() / nf).collect();
        let grand = means.iter().sum::<f64>() / nf;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] += grand - means[i] - means[j];
            }
        }
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

/// Which part of the spectrum to compute.
#[derive(Clone, Copy, Debug)]
pub enum EigenRange {
    All,
    /// Half-open value interval `(lo, hi]`.
    Values(f64, f64),
    /// 0-based inclusive index range in ascending order.
    Indices(usize, usize),
}

/// Ascending eigenvalues and, when requested, the matching eigenvectors stored
/// column by column.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<f64>>,
    n: usize,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        self.vectors
            .as_ref()
            .map(|z| &z[k * self.n..(k + 1) * self.n])
    }
}

/// Reusable `dsyevr` workspace.
#[derive(Default)]
pub struct EigenSolver {
    a: Vec<f64>,
    w: Vec<f64>,
    z: Vec<f64>,
    isuppz: Vec<i32>,
    work: Vec<f64>,
    iwork: Vec<i32>,
}

impl EigenSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn solve(&mut self, m: &SymMatrix, range: EigenRange, vectors: bool) -> Result<Eigen> {
        m.ensure_finite()?;
        let n = m.n();
        if n == 0 {
            return Ok(Eigen {
                values: vec![],
                vectors: vectors.then(Vec::new),
                n,
            });
        }
        let ni = n as i32;
        self.a.clear();
        self.a.extend_from_slice(m.as_slice());
        self.w.resize(n, 0.0);
        if vectors {
            self.z.resize(n * n, 0.0);
        } else if self.z.is_empty() {
            self.z.push(0.0);
        }
        self.isuppz.resize(2 * n, 0);
        let jobz = if vectors { b'V' } else { b'N' };
        let (rng, vl, vu, il, iu) = match range {
            EigenRange::All => (b'A', 0.0, 0.0, 0, 0),
            EigenRange::Values(lo, hi) => (b'V', lo, hi, 0, 0),
            EigenRange::Indices(lo, hi) => {
                if lo > hi || hi >= n {
                    return Err(Error::InvalidParams(format!(
                        "eigen index range {lo}..={hi} for n = {n}"
                    )));
                }
                (b'I', 0.0, 0.0, lo as i32 + 1, hi as i32 + 1)
            }
        };
        let ldz = if vectors { ni } else { 1 };
        let mut found = 0;
        let mut info = 0;
        // workspace query
        let mut wq = [0.0f64];
        let mut iwq = [0i32];
        unsafe {
            lapack::dsyevr(
                jobz, rng, b'U', ni, &mut self.a, ni, vl, vu, il, iu, 0.0, &mut found,
                &mut self.w, &mut self.z, ldz, &mut self.isuppz, &mut wq, -1, &mut iwq, -1,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::Eigensolver(info));
        }
        let lwork = wq[0] as usize;
        let liwork = iwq[0] as usize;
        if self.work.len() < lwork {
            self.work.resize(lwork, 0.0);
        }
        if self.iwork.len() < liwork {
            self.iwork.resize(liwork, 0);
        }
        let (lw, liw) = (self.work.len() as i32, self.iwork.len() as i32);
        unsafe {
            lapack::dsyevr(
                jobz,
                rng,
                b'U',
                ni,
                &mut self.a,
                ni,
                vl,
                vu,
                il,
                iu,
                0.0,
                &mut found,
                &mut self.w,
                &mut self.z,
                ldz,
                &mut self.isuppz,
                &mut self.work,
                lw,
                &mut self.iwork,
                liw,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::Eigensolver(info));
        }
        let found = found as usize;
        Ok(Eigen {
            values: self.w[..found].to_vec(),
            vectors: vectors.then(|| self.z[..found * n].to_vec()),
            n,
        })
    }
}

pub fn eigen(m: &SymMatrix, range: EigenRange, vectors: bool) -> Result<Eigen> {
    EigenSolver::new().solve(m, range, vectors)
}

/// All eigenvalues in ascending order.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    Ok(eigen(m, EigenRange::All, false)?.values)
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    let w = eigenvalues(m)?;
    Ok(match (w.first(), w.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    })
}

/// The `k` smallest eigenvalues, ascending.
pub fn smallest_eigenvalues(m: &SymMatrix, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > m.n() {
        return Err(Error::InvalidParams(format!("k = {k} for n = {}", m.n())));
    }
    Ok(eigen(m, EigenRange::Indices(0, k - 1), false)?.values)
}

/// The `k` largest eigenpairs, ascending by eigenvalue.
pub fn largest_eigenpairs(m: &SymMatrix, k: usize) -> Result<Eigen> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("k = {k} for n = {n}")));
    }
    eigen(m, EigenRange::Indices(n - k, n - 1), true)
}

pub fn is_psd(m: &SymMatrix, tol: f64) -> Result<bool> {
    if m.n() == 0 {
        return Ok(true);
    }
    Ok(smallest_eigenvalues(m, 1)?[0] >= -tol)
}

/// Frobenius projection onto the PSD cone.
pub fn psd_project(m: &SymMatrix) -> Result<SymMatrix> {
    PsdProjector::new(m.n()).project(m)
}

/// PSD projection that only computes the smaller half of the spectrum.
///
/// The number of positive eigenvalues seen in the previous call decides
/// whether the positive part is assembled directly or as `M - negative part`.
pub struct PsdProjector {
    solver: EigenSolver,
    last_positive: usize,
}

impl PsdProjector {
    pub fn new(n: usize) -> Self {
        PsdProjector {
            solver: EigenSolver::new(),
            last_positive: n,
        }
    }

    /// Number of strictly positive eigenvalues found on the last call.
    pub fn last_rank(&self) -> usize {
        self.last_positive
    }

    pub fn project(&mut self, m: &SymMatrix) -> Result<SymMatrix> {
        let n = m.n();
        let bound = m.frobenius_norm() + 1.0;
        if !bound.is_finite() {
            return Err(Error::NonFinite);
        }
        if 2 * self.last_positive <= n {
            let e = self.solver.solve(m, EigenRange::Values(0.0, bound), true)?;
            let mut out = SymMatrix::zeros(n);
            for (k, &lam) in e.values.iter().enumerate() {
                out.rank_one_update(lam, e.vector(k).unwrap());
            }
            self.last_positive = e.values.len();
            Ok(out)
        } else {
            let e = self.solver.solve(m, EigenRange::Values(-bound, 0.0), true)?;
            let mut out = m.clone();
            for (k, &lam) in e.values.iter().enumerate() {
                out.rank_one_update(-lam, e.vector(k).unwrap());
            }
            out.symmetrize();
            let nonpos = e.values.len();
            self.last_positive = n - nonpos;
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    // power iteration on M + shift*I, independent of LAPACK
    fn power_norm(m: &SymMatrix) -> f64 {
        let n = m.n();
        let mut best = 0.0f64;
        for sign in [1.0, -1.0] {
            let shifted = {
                let mut s = m.scale(sign);
                let shift = m.frobenius_norm();
                s.axpy(shift, &SymMatrix::identity(n));
                (s, shift)
            };
            let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64) * 0.01).collect();
            let mut lam = 0.0;
            for _ in 0..20000 {
                let w = shifted.0.matvec(&v);
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                lam = norm;
                v = w.iter().map(|x| x / norm).collect();
            }
            best = best.max((lam - shifted.1).abs());
        }
        best
    }

    #[test]
    fn norm_examples() {
        assert_eq!(spectral_norm(&SymMatrix::zeros(4)).unwrap(), 0.0);
        assert!((spectral_norm(&SymMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        assert!((spectral_norm(&SymMatrix::ones(7)).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn norm_matches_power_iteration() {
        for seed in 0..3 {
            let m = random_sym(12, seed);
            let a = spectral_norm(&m).unwrap();
            let b = power_norm(&m);
            assert!((a - b).abs() <= 1e-6 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, f64::NAN);
        assert!(matches!(spectral_norm(&m), Err(Error::NonFinite)));
        assert!(matches!(psd_project(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(matches!(
            SymMatrix::from_rows(2, vec![0.0, 1.0, 1.0 + 1e-9, 0.0]),
            Err(Error::NotSymmetric(_))
        ));
        assert!(SymMatrix::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn smallest_examples() {
        let d = SymMatrix::diagonal(&[3.0, 1.0, 2.0]);
        let w = smallest_eigenvalues(&d, 2).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 2.0).abs() < 1e-12);
        let w = smallest_eigenvalues(&SymMatrix::ones(3), 2).unwrap();
        assert!(w[0].abs() < 1e-12 && w[1].abs() < 1e-12);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymMatrix::identity(3), 0.0).unwrap());
        assert!(!is_psd(&SymMatrix::diagonal(&[1.0, -1.0]), 1e-9).unwrap());
        let s = [1.0, -1.0, 1.0, 1.0];
        let y = SymMatrix::from_fn(4, |i, j| s[i] * s[j]);
        assert!(is_psd(&y, 1e-12).unwrap());
    }

    #[test]
    fn projection_examples() {
        let p = psd_project(&SymMatrix::diagonal(&[1.0, -2.0])).unwrap();
        assert!(p.max_abs_diff(&SymMatrix::diagonal(&[1.0, 0.0])) < 1e-14);
        let s = [1.0, -1.0, 1.0, 1.0, -1.0];
        let y = SymMatrix::from_fn(5, |i, j| s[i] * s[j]);
        let p = psd_project(&y).unwrap();
        assert!((&p - &y).frobenius_norm() < 1e-10);
    }

    #[test]
    fn projection_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 15;
        let m = random_sym(n, 5);
        let p = psd_project(&m).unwrap();
        assert!(smallest_eigenvalues(&p, 1).unwrap()[0] >= -1e-10);
        let resid = &m - &p;
        for _ in 0..200 {
            // random PSD X = B B^T
            let b: Vec<f64> = (0..n * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = SymMatrix::from_fn(n, |i, j| (0..3).map(|k| b[i * 3 + k] * b[j * 3 + k]).sum());
            let diff = &x - &p;
            assert!(resid.dot(&diff) <= 1e-9);
        }
    }

    #[test]
    fn double_center_matches_projection() {
        let n = 9;
        let m = random_sym(n, 7);
        let mut c = m.clone();
        c.double_center();
        let p = SymMatrix::from_fn(n, |i, j| (i == j) as u8 as f64 - 1.0 / n as f64);
        let pmp = SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .flat_map(|k| (0..n).map(move |l| (k, l)))
                .map(|(k, l)| p.get(i, k) * m.get(k, l) * p.get(l, j))
                .sum()
        });
        assert!(c.max_abs_diff(&pmp) < 1e-12);
        assert!(c.matvec(&vec![1.0; n]).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn projector_branches_agree() {
        for seed in 0..4 {
            let m = random_sym(30, seed);
            let mut lo = PsdProjector::new(30);
            lo.last_positive = 0;
            let mut hi = PsdProjector::new(30);
            let a = lo.project(&m).unwrap();
            let b = hi.project(&m).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10);
            assert_eq!(lo.last_rank(), hi.last_rank());
        }
    }
}
