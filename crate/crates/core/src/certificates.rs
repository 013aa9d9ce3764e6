//! Dual certificates witnessing that the planted partition is the unique
//! optimizer of the relaxation.

use serde::{Deserialize, Serialize};

use crate::concentration::{tau, vertex_cluster_counts};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{check_truth, expected_adjacency, GroundTruth, SbmParams, Variant};
use crate::spectral::{eigenvalues, spectral_norm, tol, SymMatrix};

/// `S* = D* - A + lambda* J`; `lambda* = 0` for the censored model.
#[derive(Clone, Debug)]
pub struct BinaryCertificate {
    pub variant: Variant,
    pub d_star: Vec<f64>,
    pub lambda: f64,
    pub s: SymMatrix,
}

/// `S* = D* - B* - A + eta* I + lambda* J`.
#[derive(Clone, Debug)]
pub struct GeneralCertificate {
    pub d_star: Vec<f64>,
    pub b_star: SymMatrix,
    pub eta: f64,
    pub lambda: f64,
    pub s: SymMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryVerification {
    pub valid: bool,
    /// `||S* sigma||_inf`.
    pub residual: f64,
    pub lambda_min: f64,
    pub lambda2: f64,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralVerification {
    pub valid: bool,
    /// `max_k ||S* xi_k||_inf`.
    pub kernel_residual: f64,
    /// `max_ij |B*_ij Z*_ij|`.
    pub complementarity: f64,
    pub lambda_min: f64,
    /// `(r + 1)`-th smallest eigenvalue.
    pub lambda_r1: f64,
    /// Smallest `d*_i` over clustered vertices.
    pub d_min: f64,
    /// Smallest `B*_ij` over pairs in different clusters.
    pub b_min_off: f64,
    pub norm: f64,
}

fn binary_sigma(truth: &GroundTruth) -> Result<&[i8]> {
    match truth {
        GroundTruth::Binary { sigma } => Ok(sigma),
        GroundTruth::General { .. } => Err(Error::InvalidParams("binary partition expected".into())),
    }
}

pub fn build_binary(g: &Graph, truth: &GroundTruth, params: &SbmParams) -> Result<BinaryCertificate> {
    build_binary_adjacency(&SymMatrix::adjacency(g), truth, params)
}

pub fn build_binary_adjacency(a: &SymMatrix, truth: &GroundTruth, params: &SbmParams) -> Result<BinaryCertificate> {
    check_truth(params, truth)?;
    let n = a.n();
    if n != params.n() {
        return Err(Error::ShapeMismatch(format!("graph n = {n}, model n = {}", params.n())));
    }
    let sigma = binary_sigma(truth)?;
    let lambda = match params {
        SbmParams::Basbm { a, b, .. } => tau(*a, *b)? * params.log_n() / n as f64,
        _ => 0.0,
    };
    let k = sigma.iter().filter(|&&s| s == 1).count();
    let imbalance = 2.0 * k as f64 - n as f64;
    let d_star: Vec<f64> = (0..n)
        .map(|i| {
            let si = sigma[i] as f64;
            let s: f64 = a.row(i).iter().zip(sigma).map(|(&x, &sj)| x * sj as f64).sum();
            si * s - lambda * imbalance * si
        })
        .collect();
    let s = SymMatrix::from_fn(n, |i, j| {
        let d = if i == j { d_star[i] } else { 0.0 };
        d - a.get(i, j) + lambda
    });
    Ok(BinaryCertificate {
        variant: params.variant(),
        d_star,
        lambda,
        s,
    })
}

/// `tau_tilde = b + 2 c2` fixes `lambda* = tau_tilde ln n / n`.
pub fn build_general(g: &Graph, truth: &GroundTruth, params: &SbmParams, tau_tilde: f64) -> Result<GeneralCertificate> {
    build_general_adjacency(&SymMatrix::adjacency(g), truth, params, tau_tilde)
}

pub fn build_general_adjacency(
    a: &SymMatrix,
    truth: &GroundTruth,
    params: &SbmParams,
    tau_tilde: f64,
) -> Result<GeneralCertificate> {
    check_truth(params, truth)?;
    let n = a.n();
    if n != params.n() {
        return Err(Error::ShapeMismatch(format!("graph n = {n}, model n = {}", params.n())));
    }
    let GroundTruth::General { labels, .. } = truth else {
        return Err(Error::InvalidParams("general partition expected".into()));
    };
    let sizes: Vec<f64> = truth.members().iter().map(|m| m.len() as f64).collect();
    let r = sizes.len();
    let lambda = tau_tilde * params.log_n() / n as f64;
    let eta = spectral_norm(&(a - &expected_adjacency(params, truth)?))?;
    let e = vertex_cluster_counts(a, labels, r);
    let mut block = vec![vec![0.0; r]; r];
    for i in 0..n {
        if labels[i] > 0 {
            for k in 0..r {
                block[labels[i] - 1][k] += e[i][k];
            }
        }
    }
    let d_star: Vec<f64> = (0..n)
        .map(|i| match labels[i] {
            0 => 0.0,
            l => e[i][l - 1] - eta - lambda * sizes[l - 1],
        })
        .collect();
    let b_star = SymMatrix::from_fn(n, |i, j| match (labels[i], labels[j]) {
        (li, lj) if li == lj => 0.0,
        (0, lj) => lambda - e[i][lj - 1] / sizes[lj - 1],
        (li, 0) => lambda - e[j][li - 1] / sizes[li - 1],
        (li, lj) => {
            let (ki, kj) = (li - 1, lj - 1);
            lambda + block[ki][kj] / (sizes[ki] * sizes[kj]) - e[i][kj] / sizes[kj] - e[j][ki] / sizes[ki]
        }
    });
    let s = SymMatrix::from_fn(n, |i, j| {
        let diag = if i == j { d_star[i] + eta } else { 0.0 };
        diag - b_star.get(i, j) - a.get(i, j) + lambda
    });
    Ok(GeneralCertificate {
        d_star,
        b_star,
        eta,
        lambda,
        s,
    })
}

/// Valid iff `||S* sigma||_inf <= tol ||S*||`, `lambda_min >= -tol ||S*||`
/// and `lambda_2 > tol ||S*||`.
pub fn verify_binary(cert: &BinaryCertificate, truth: &GroundTruth, tol: f64) -> Result<BinaryVerification> {
    let sigma: Vec<f64> = binary_sigma(truth)?.iter().map(|&s| s as f64).collect();
    let n = cert.s.n();
    if sigma.len() != n {
        return Err(Error::ShapeMismatch(format!("certificate over {n}, partition over {}", sigma.len())));
    }
    let residual = cert.s.matvec(&sigma).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let w = eigenvalues(&cert.s)?;
    let norm = w.first().map_or(0.0, |lo| lo.abs().max(w[w.len() - 1].abs()));
    let lambda_min = w.first().copied().unwrap_or(f64::NAN);
    let lambda2 = w.get(1).copied().unwrap_or(f64::NAN);
    let slack = tol * norm;
    let valid = residual <= slack && lambda_min >= -slack && lambda2 > slack;
    Ok(BinaryVerification {
        valid,
        residual,
        lambda_min,
        lambda2,
        norm,
    })
}

pub fn verify_general(cert: &GeneralCertificate, truth: &GroundTruth, tol: f64) -> Result<GeneralVerification> {
    let GroundTruth::General { labels, .. } = truth else {
        return Err(Error::InvalidParams("general partition expected".into()));
    };
    let n = cert.s.n();
    if labels.len() != n {
        return Err(Error::ShapeMismatch(format!("certificate over {n}, partition over {}", labels.len())));
    }
    let r = truth.cluster_count();
    let mut kernel_residual = 0.0f64;
    for k in 1..=r {
        let xi: Vec<f64> = labels.iter().map(|&l| (l == k) as u8 as f64).collect();
        let res = cert.s.matvec(&xi);
        kernel_residual = res.iter().fold(kernel_residual, |m, x| m.max(x.abs()));
    }
    let mut complementarity = 0.0f64;
    let mut b_min_off = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                if labels[i] != 0 {
                    complementarity = complementarity.max(cert.b_star.get(i, j).abs());
                }
            } else {
                b_min_off = b_min_off.min(cert.b_star.get(i, j));
            }
        }
    }
    let d_min = (0..n)
        .filter(|&i| labels[i] != 0)
        .map(|i| cert.d_star[i])
        .fold(f64::INFINITY, f64::min);
    let w = eigenvalues(&cert.s)?;
    let norm = w.first().map_or(0.0, |lo| lo.abs().max(w[w.len() - 1].abs()));
    let lambda_min = w.first().copied().unwrap_or(f64::NAN);
    let lambda_r1 = w.get(r).copied().unwrap_or(f64::NAN);
    let slack = tol * norm;
    let valid = kernel_residual <= slack
        && complementarity <= slack
        && lambda_min >= -slack
        && lambda_r1 > slack
        && d_min > 0.0
        && b_min_off > 0.0;
    Ok(GeneralVerification {
        valid,
        kernel_residual,
        complementarity,
        lambda_min,
        lambda_r1,
        d_min,
        b_min_off,
        norm,
    })
}

/// Builds and verifies the certificate matching `params` at the default
/// tolerance. The general model needs `tau_tilde`.
pub fn certify(g: &Graph, truth: &GroundTruth, params: &SbmParams, tau_tilde: Option<f64>) -> Result<bool> {
    match params.variant() {
        Variant::Basbm | Variant::Cbsbm => Ok(verify_binary(&build_binary(g, truth, params)?, truth, tol::CERTIFICATE)?.valid),
        Variant::Gssbm => {
            let t = tau_tilde.ok_or_else(|| Error::InvalidParams("general certificate needs tau_tilde".into()))?;
            Ok(verify_general(&build_general(g, truth, params, t)?, truth, tol::CERTIFICATE)?.valid)
        }
    }
}
