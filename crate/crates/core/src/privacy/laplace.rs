use rand::distributions::Open01;
use rand::Rng;

use crate::error::{Error, Result};

/// Quantile of the centered Laplace law with the given scale, `u` in `(0, 1)`.
pub fn laplace_quantile(u: f64, scale: f64) -> f64 {
    let c = u - 0.5;
    -scale * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

/// One draw from `Lap(scale)` by inversion of a single open-interval uniform.
pub fn sample_laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParams(format!("Laplace scale {scale} must be positive")));
    }
    let u: f64 = rng.sample(Open01);
    Ok(laplace_quantile(u, scale))
}
