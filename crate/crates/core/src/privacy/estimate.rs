use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Alphabet, Graph};

/// How the two degree levels are averaged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorForm {
    /// Mean of `w_i` over each side of the split.
    #[default]
    ConditionalMean,
    /// Sum over each side divided by `n`.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamEstimate {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
}

/// Degree-split estimate of `(a, b, rho)` for the binary asymmetric model.
pub fn param_estimate(g: &Graph) -> Result<ParamEstimate> {
    param_estimate_with(g, EstimatorForm::default())
}

pub fn param_estimate_with(g: &Graph, form: EstimatorForm) -> Result<ParamEstimate> {
    if g.alphabet() != Alphabet::Simple {
        return Err(Error::InvalidParams("degree estimates need an unsigned graph".into()));
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} is too small to estimate from")));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let w: Vec<f64> = g.degrees().into_iter().map(|d| d as f64 / ln_n).collect();
    let mean = w.iter().sum::<f64>() / nf;
    let low: Vec<f64> = w.iter().copied().filter(|&x| x <= mean).collect();
    let high: Vec<f64> = w.iter().copied().filter(|&x| x >= mean).collect();
    let rho = low.len() as f64 / nf;
    if low.is_empty() || high.is_empty() || rho >= 1.0 || (1.0 - 2.0 * rho).abs() < 1e-3 {
        return Err(Error::DegenerateEstimate { rho_hat: rho });
    }
    let (w_plus, w_minus) = match form {
        EstimatorForm::ConditionalMean => (
            high.iter().sum::<f64>() / high.len() as f64,
            low.iter().sum::<f64>() / low.len() as f64,
        ),
        EstimatorForm::Literal => (high.iter().sum::<f64>() / nf, low.iter().sum::<f64>() / nf),
    };
    let den = 1.0 - 2.0 * rho;
    Ok(ParamEstimate {
        a: ((1.0 - rho) * w_plus - rho * w_minus) / den,
        b: ((1.0 - rho) * w_minus - rho * w_plus) / den,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbm::{generate, SbmParams};

    #[test]
    fn regular_graph_is_degenerate() {
        let g = Graph::complete(10);
        assert!(matches!(param_estimate(&g), Err(Error::DegenerateEstimate { .. })));
        let g = Graph::empty(10, Alphabet::Simple);
        assert!(matches!(param_estimate(&g), Err(Error::DegenerateEstimate { rho_hat }) if rho_hat == 1.0));
    }

    #[test]
    fn balanced_split_is_degenerate() {
        // two disjoint stars of equal size: half the vertices above the mean
        let mut g = Graph::empty(8, Alphabet::Simple);
        for (i, j) in [(0, 1), (2, 3), (4, 5), (6, 7)] {
            g = g.set_entry(i, j, 1).unwrap();
        }
        g = g.set_entry(0, 2, 1).unwrap().set_entry(4, 6, 1).unwrap();
        // degrees 2,1,2,1,2,1,2,1
        assert!(matches!(param_estimate(&g), Err(Error::DegenerateEstimate { .. })));
    }

    #[test]
    fn separated_levels_are_close() {
        // with far apart degree levels the mean split nearly matches the
        // communities, so the inversion lands near the true parameters
        let params = SbmParams::Basbm { n: 2000, a: 40.0, b: 1.0, rho: 0.2 };
        let (g, _) = generate(&params, 0).unwrap();
        let e = param_estimate(&g).unwrap();
        assert!((e.rho - 0.2).abs() < 0.02, "{e:?}");
        assert!((e.a - 40.0).abs() < 3.0, "{e:?}");
    }

    #[test]
    fn literal_form_sums_to_mean() {
        let params = SbmParams::Basbm { n: 1000, a: 20.0, b: 2.0, rho: 0.3 };
        let (g, _) = generate(&params, 1).unwrap();
        let e = param_estimate_with(&g, EstimatorForm::Literal).unwrap();
        let ln_n = 1000f64.ln();
        let mean = g.degrees().iter().sum::<usize>() as f64 / 1000.0 / ln_n;
        // a + b = w+ + w-, which the 1/n scaling turns into the overall mean
        assert!((e.a + e.b - mean).abs() < 0.05 * mean, "{e:?} vs {mean}");
    }

    #[test]
    fn rejects_censored() {
        let g = Graph::empty(5, Alphabet::Censored);
        assert!(param_estimate(&g).is_err());
    }
}
