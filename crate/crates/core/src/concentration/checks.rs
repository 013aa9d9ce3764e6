use serde::{Deserialize, Serialize};

use super::constants::ConcentrationConstants;
use super::derived::BasbmDerived;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{check_truth, expected_adjacency, GroundTruth, SbmParams};
use crate::spectral::{spectral_norm, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
}

impl Relation {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Relation::AtMost => lhs <= rhs,
            Relation::AtLeast => lhs >= rhs,
            Relation::Above => lhs > rhs,
        }
    }
}

/// One inequality. For conditions quantified over vertices or clusters,
/// `lhs` and `rhs` belong to the instance with the smallest slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub conditions: Vec<ConditionResult>,
    pub pass: bool,
}

impl ConcentrationReport {
    fn new(conditions: Vec<ConditionResult>) -> Self {
        let pass = conditions.iter().all(|c| c.pass);
        ConcentrationReport { conditions, pass }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn single(name: &str, lhs: f64, relation: Relation, rhs: f64) -> ConditionResult {
    ConditionResult {
        name: name.into(),
        lhs,
        relation,
        rhs,
        pass: relation.holds(lhs, rhs),
    }
}

/// Worst instance of a quantified inequality; an empty quantifier passes.
fn worst(name: &str, relation: Relation, items: impl IntoIterator<Item = (f64, f64)>) -> ConditionResult {
    let slack = |(l, r): (f64, f64)| match relation {
        Relation::AtMost => r - l,
        Relation::AtLeast | Relation::Above => l - r,
    };
    let mut pick: Option<(f64, f64)> = None;
    let mut all = true;
    for item in items {
        all &= relation.holds(item.0, item.1);
        if pick.is_none_or(|p| slack(item) < slack(p)) {
            pick = Some(item);
        }
    }
    let (lhs, rhs) = pick.unwrap_or((0.0, 0.0));
    ConditionResult {
        name: name.into(),
        lhs,
        relation,
        rhs,
        pass: all,
    }
}

fn prepare(g: &SymMatrix, truth: &GroundTruth, params: &SbmParams) -> Result<()> {
    params.validate()?;
    check_truth(params, truth)?;
    if g.n() != params.n() {
        return Err(Error::ShapeMismatch(format!("graph n = {}, model n = {}", g.n(), params.n())));
    }
    Ok(())
}

fn constants_for<'a>(constants: &'a ConcentrationConstants, params: &SbmParams) -> Result<&'a ConcentrationConstants> {
    if constants.variant() != params.variant() {
        return Err(Error::InvalidParams(format!(
            "{} constants for the {} model",
            constants.variant(),
            params.variant()
        )));
    }
    Ok(constants)
}

fn binary_sigma(truth: &GroundTruth) -> Vec<i8> {
    match truth {
        GroundTruth::Binary { sigma } => sigma.clone(),
        GroundTruth::General { .. } => unreachable!("checked by check_truth"),
    }
}

/// Evaluates whichever model `params` describes.
pub fn check(g: &Graph, truth: &GroundTruth, params: &SbmParams, constants: &ConcentrationConstants) -> Result<ConcentrationReport> {
    check_adjacency(&SymMatrix::adjacency(g), truth, params, constants)
}

pub fn check_adjacency(
    a: &SymMatrix,
    truth: &GroundTruth,
    params: &SbmParams,
    constants: &ConcentrationConstants,
) -> Result<ConcentrationReport> {
    match params {
        SbmParams::Basbm { .. } => check_basbm_adjacency(a, truth, params, constants),
        SbmParams::Cbsbm { .. } => check_cbsbm_adjacency(a, truth, params, constants),
        SbmParams::Gssbm { .. } => check_gssbm_adjacency(a, truth, params, constants),
    }
}

pub fn check_basbm(g: &Graph, truth: &GroundTruth, params: &SbmParams, constants: &ConcentrationConstants) -> Result<ConcentrationReport> {
    check_basbm_adjacency(&SymMatrix::adjacency(g), truth, params, constants)
}

pub fn check_cbsbm(g: &Graph, truth: &GroundTruth, params: &SbmParams, constants: &ConcentrationConstants) -> Result<ConcentrationReport> {
    check_cbsbm_adjacency(&SymMatrix::adjacency(g), truth, params, constants)
}

pub fn check_gssbm(g: &Graph, truth: &GroundTruth, params: &SbmParams, constants: &ConcentrationConstants) -> Result<ConcentrationReport> {
    check_gssbm_adjacency(&SymMatrix::adjacency(g), truth, params, constants)
}

/// Binary asymmetric conditions on an arbitrary symmetric matrix.
pub fn check_basbm_adjacency(
    a: &SymMatrix,
    truth: &GroundTruth,
    params: &SbmParams,
    constants: &ConcentrationConstants,
) -> Result<ConcentrationReport> {
    prepare(a, truth, params)?;
    let &ConcentrationConstants::Basbm { c1, c2, c3, c4 } = constants_for(constants, params)? else {
        unreachable!()
    };
    let ln_n = params.log_n();
    let sigma = binary_sigma(truth);
    let ea = expected_adjacency(params, truth)?;
    let dev = spectral_norm(&(a - &ea))?;
    let derived = BasbmDerived::new(a, &sigma, params)?;
    let x = &derived.x_check;
    let quad = derived.d_form(x) + derived.j_form(x);
    let mean = derived.expected_d_star(&sigma);
    let fluct = derived
        .d_star
        .iter()
        .zip(&mean)
        .zip(x)
        .map(|((d, m), xi)| ((d - m) * xi).powi(2))
        .sum::<f64>()
        .sqrt();
    let floor = c4 * ln_n;
    Ok(ConcentrationReport::new(vec![
        single("spectral_deviation", dev, Relation::AtMost, c1 * ln_n.sqrt()),
        single("orthogonal_quadratic", quad, Relation::Above, c2 * ln_n),
        single("degree_fluctuation", fluct, Relation::AtMost, c3 * ln_n.sqrt()),
        worst("min_degree_margin", Relation::AtLeast, derived.d_star.iter().map(|&d| (d, floor))),
    ]))
}

/// Binary censored conditions; `d*_i = sum_j A_ij s_i s_j`.
pub fn check_cbsbm_adjacency(
    a: &SymMatrix,
    truth: &GroundTruth,
    params: &SbmParams,
    constants: &ConcentrationConstants,
) -> Result<ConcentrationReport> {
    prepare(a, truth, params)?;
    let &ConcentrationConstants::Cbsbm { c1, c2 } = constants_for(constants, params)? else {
        unreachable!()
    };
    let ln_n = params.log_n();
    let sigma = binary_sigma(truth);
    let ea = expected_adjacency(params, truth)?;
    let dev = spectral_norm(&(a - &ea))?;
    let d = censored_degrees(a, &sigma);
    let floor = c2 * ln_n;
    Ok(ConcentrationReport::new(vec![
        single("spectral_deviation", dev, Relation::AtMost, c1 * ln_n.sqrt()),
        worst("min_degree_margin", Relation::AtLeast, d.iter().map(|&v| (v, floor))),
    ]))
}

fn censored_degrees(a: &SymMatrix, sigma: &[i8]) -> Vec<f64> {
    (0..a.n())
        .map(|i| {
            let s: f64 = a.row(i).iter().zip(sigma).map(|(&x, &sj)| x * sj as f64).sum();
            s * sigma[i] as f64
        })
        .collect()
}

/// Edge counts between each vertex and each cluster, `e[i][k]` for
/// clusters `0..r`.
pub(crate) fn vertex_cluster_counts(a: &SymMatrix, labels: &[usize], r: usize) -> Vec<Vec<f64>> {
    (0..a.n())
        .map(|i| {
            let mut e = vec![0.0; r];
            for (j, &l) in labels.iter().enumerate() {
                if l > 0 && j != i {
                    e[l - 1] += a.get(i, j);
                }
            }
            e
        })
        .collect()
}

/// General structure conditions. Condition 3 ranges over clustered vertices;
/// condition 5 bounds every outlier's edge count into every cluster from
/// above.
pub fn check_gssbm_adjacency(
    a: &SymMatrix,
    truth: &GroundTruth,
    params: &SbmParams,
    constants: &ConcentrationConstants,
) -> Result<ConcentrationReport> {
    prepare(a, truth, params)?;
    let &ConcentrationConstants::Gssbm { c1, c2, c3, c4, c5 } = constants_for(constants, params)? else {
        unreachable!()
    };
    let n = params.n();
    let nf = n as f64;
    let ln_n = params.log_n();
    let b = params.b();
    let q = params.q();
    let tau_tilde = b + 2.0 * c2;
    let labels = truth.labels();
    let sizes: Vec<f64> = truth.members().iter().map(|m| m.len() as f64).collect();
    let r = sizes.len();

    let ea = expected_adjacency(params, truth)?;
    let dev = spectral_norm(&(a - &ea))?;
    let e = vertex_cluster_counts(a, &labels, r);

    let inside = (0..n).filter(|&i| labels[i] > 0);
    let cond2 = worst(
        "min_intra_degree",
        Relation::AtLeast,
        inside.clone().map(|i| {
            let k = labels[i] - 1;
            (e[i][k], tau_tilde * sizes[k] / nf * ln_n)
        }),
    );
    let cond3 = worst(
        "max_cross_degree",
        Relation::AtMost,
        inside.flat_map(|i| {
            let own = labels[i] - 1;
            let (e, sizes) = (&e, &sizes);
            (0..r)
                .filter(move |&k| k != own)
                .map(move |k| (e[i][k], (b + c2) * sizes[k] * ln_n / nf - c3 * ln_n))
        }),
    );
    let mut block = vec![vec![0.0; r]; r];
    for i in 0..n {
        if labels[i] > 0 {
            for k in 0..r {
                block[labels[i] - 1][k] += e[i][k];
            }
        }
    }
    let cond4 = worst(
        "min_cross_block",
        Relation::AtLeast,
        (0..r).flat_map(|k| {
            let (block, sizes) = (&block, &sizes);
            (0..r).filter(move |&l| l != k).map(move |l| {
                let kk = sizes[k] * sizes[l];
                (block[k][l], kk * q - 2.0 * kk.sqrt() * ln_n.sqrt() - c4 * ln_n)
            })
        }),
    );
    let cond5 = worst(
        "max_outlier_degree",
        Relation::AtMost,
        (0..n).filter(|&i| labels[i] == 0).flat_map(|i| {
            let (e, sizes) = (&e, &sizes);
            (0..r).map(move |k| (e[i][k], tau_tilde * sizes[k] * ln_n / nf - c5 * ln_n))
        }),
    );
    Ok(ConcentrationReport::new(vec![
        single("spectral_deviation", dev, Relation::AtMost, c1 * ln_n.sqrt()),
        cond2,
        cond3,
        cond4,
        cond5,
    ]))
}
