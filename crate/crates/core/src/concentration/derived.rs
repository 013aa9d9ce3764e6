use super::rates::tau;
use crate::error::{Error, Result};
use crate::sbm::SbmParams;
use crate::spectral::SymMatrix;

/// Ground-truth dependent quantities of the binary asymmetric model.
#[derive(Clone, Debug)]
pub struct BasbmDerived {
    pub n: usize,
    /// Size of the `+1` community.
    pub k: usize,
    pub tau: f64,
    /// `tau ln n / n`.
    pub lambda: f64,
    /// `d*_i = sum_j A_ij s_i s_j - lambda (2K - n) s_i`.
    pub d_star: Vec<f64>,
    /// Unit vector orthogonal to `sigma` maximizing `x^T J x`.
    pub x_check: Vec<f64>,
    p: f64,
    q: f64,
}

impl BasbmDerived {
    pub fn new(adjacency: &SymMatrix, sigma: &[i8], params: &SbmParams) -> Result<Self> {
        let n = adjacency.n();
        if sigma.len() != n || params.n() != n {
            return Err(Error::ShapeMismatch(format!(
                "adjacency over {n}, sigma over {}, model over {}",
                sigma.len(),
                params.n()
            )));
        }
        let SbmParams::Basbm { a, b, .. } = *params else {
            return Err(Error::InvalidParams("binary asymmetric model expected".into()));
        };
        let t = tau(a, b)?;
        let ln_n = params.log_n();
        let lambda = t * ln_n / n as f64;
        let k = sigma.iter().filter(|&&s| s == 1).count();
        let imbalance = 2.0 * k as f64 - n as f64;
        let d_star = (0..n)
            .map(|i| {
                let si = sigma[i] as f64;
                let row = adjacency.row(i);
                let s: f64 = row.iter().zip(sigma).map(|(&x, &sj)| x * sj as f64).sum();
                si * s - lambda * imbalance * si
            })
            .collect();
        Ok(BasbmDerived {
            n,
            k,
            tau: t,
            lambda,
            d_star,
            x_check: x_check(sigma),
            p: params.p(),
            q: params.q(),
        })
    }

    /// `E[d*_i]` under the model: `d+` on the `+1` side and `d-` on the other.
    pub fn expected_d_star(&self, sigma: &[i8]) -> Vec<f64> {
        let (plus, minus) = self.expected_levels();
        sigma.iter().map(|&s| if s == 1 { plus } else { minus }).collect()
    }

    /// `(d+, d-)`.
    pub fn expected_levels(&self) -> (f64, f64) {
        let n = self.n as f64;
        let k = self.k as f64;
        let ln_n = n.ln();
        // p = a ln n / n, so a = p n / ln n
        let a = self.p * n / ln_n;
        let b = self.q * n / ln_n;
        let t = self.tau;
        let plus = (k * (a - t) + (n - k) * (t - b) - a) * ln_n / n;
        let minus = ((n - k) * (a - t) + k * (t - b) - a) * ln_n / n;
        (plus, minus)
    }

    /// `(lambda* - (p + q) / 2) (sum x)^2`.
    pub fn j_form(&self, x: &[f64]) -> f64 {
        let s: f64 = x.iter().sum();
        (self.lambda - 0.5 * (self.p + self.q)) * s * s
    }

    /// `x^T D* x`.
    pub fn d_form(&self, x: &[f64]) -> f64 {
        self.d_star.iter().zip(x).map(|(d, xi)| d * xi * xi).sum()
    }
}

/// `sqrt((n - K) / (K n))` on the `+1` side, `sqrt(K / (n (n - K)))` on the
/// other. Zero when one side is empty.
pub fn x_check(sigma: &[i8]) -> Vec<f64> {
    let n = sigma.len() as f64;
    let k = sigma.iter().filter(|&&s| s == 1).count() as f64;
    if k == 0.0 || k == n {
        return vec![0.0; sigma.len()];
    }
    let hi = ((n - k) / (k * n)).sqrt();
    let lo = (k / (n * (n - k))).sqrt();
    sigma.iter().map(|&s| if s == 1 { hi } else { lo }).collect()
}
