//! Closed-form rate functions and thresholds. Natural logarithms throughout.

use crate::error::{Error, Result};

/// Logarithmic mean `(a - b) / (ln a - ln b)`, equal to `a` when `a == b`.
pub fn tau(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParams(format!("tau needs a, b > 0, got {a}, {b}")));
    }
    if a < b {
        return Err(Error::InvalidParams(format!("tau needs a >= b, got {a} < {b}")));
    }
    let r = a / b;
    if (r - 1.0).abs() < 1e-8 {
        // series of x / ln(1 + x) around x = 0
        let x = r - 1.0;
        return Ok(b * (1.0 + x / 2.0 - x * x / 12.0));
    }
    Ok((a - b) / r.ln())
}

fn check_binary(a: f64, b: f64, rho: f64) -> Result<()> {
    if !(a > b && b > 0.0) {
        return Err(Error::InvalidParams(format!("need a > b > 0, got a = {a}, b = {b}")));
    }
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(Error::InvalidParams(format!("rho = {rho} must lie in (0, 0.5]")));
    }
    Ok(())
}

/// Degree-difference rate
/// `a rho + b (1 - rho) - sqrt(alpha^2 + 4 rho (1 - rho) a b)
///  + |alpha| / 2 * ln(rho b / ((1 - rho) a))`.
pub fn h(alpha: f64, a: f64, b: f64, rho: f64) -> Result<f64> {
    check_binary(a, b, rho)?;
    let gamma = (alpha * alpha + 4.0 * rho * (1.0 - rho) * a * b).sqrt();
    Ok(a * rho + b * (1.0 - rho) - gamma + alpha.abs() / 2.0 * (rho * b / ((1.0 - rho) * a)).ln())
}

/// Minimum-degree rate for the first community at level `x`:
/// `h(x - tau (1 - 2 rho))`.
///
/// Equals the plain expression without the absolute value for
/// `x <= tau (1 - 2 rho)`; it increases up to that point and decreases after.
pub fn h_tilde(x: f64, a: f64, b: f64, rho: f64) -> Result<f64> {
    check_binary(a, b, rho)?;
    let t = tau(a, b)?;
    h(x - t * (1.0 - 2.0 * rho), a, b, rho)
}

/// Large-deviation rate of `X - Y` for `X ~ Bin(rho1 n, a ln n / n)` and
/// `Y ~ Bin(rho2 n, b ln n / n)` at level `alpha ln n`.
pub fn g_rate(rho1: f64, rho2: f64, a: f64, b: f64, alpha: f64) -> Result<f64> {
    if !(rho1 > 0.0 && rho2 > 0.0 && a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParams("g needs positive rho1, rho2, a, b".into()));
    }
    let gamma = (alpha * alpha + 4.0 * rho1 * rho2 * a * b).sqrt();
    let num = (gamma - alpha) * a * rho1;
    let den = (gamma + alpha) * b * rho2;
    if alpha == 0.0 {
        return Ok(a * rho1 + b * rho2 - gamma);
    }
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::Domain(format!("log argument {num} / {den} is not positive")));
    }
    Ok(a * rho1 + b * rho2 - gamma - alpha / 2.0 * (num / den).ln())
}

/// `a (sqrt(1 - xi) - sqrt(xi))^2`.
pub fn h_censored(xi: f64, a: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&xi) || !(a > 0.0) {
        return Err(Error::InvalidParams(format!("need xi in [0, 0.5] and a > 0, got {xi}, {a}")));
    }
    let d = (1.0 - xi).sqrt() - xi.sqrt();
    Ok(a * d * d)
}

/// `I(x, y) = x - y ln(e x / y)`, with `I(x, 0) = x`.
pub fn rate_i(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || y < 0.0 || !y.is_finite() {
        return Err(Error::InvalidParams(format!("I needs x > 0 and y >= 0, got {x}, {y}")));
    }
    if y == 0.0 {
        return Ok(x);
    }
    Ok(x - y * (1.0 + (x / y).ln()))
}

/// Bisection for the root of a decreasing `f` on `[lo, hi]`.
pub(crate) fn bisect_decreasing(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(4.0, 4.0).unwrap(), 4.0);
        // 18 / ln 10
        assert!((tau(20.0, 2.0).unwrap() - 7.817_300_674_258_533).abs() < 1e-12);
        assert!((tau(30.0, 2.0).unwrap() - 10.339_542_445_927_942).abs() < 1e-12);
        assert!(tau(-1.0, 2.0).is_err());
        assert!(tau(1.0, 0.0).is_err());
        // continuity across the series branch
        let near = tau(4.0 * (1.0 + 1e-9), 4.0).unwrap();
        assert!((near - 4.0).abs() < 1e-8);
    }

    #[test]
    fn tau_brackets() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let b = rng.gen_range(0.1..10.0);
            let a = b + rng.gen_range(0.01..30.0);
            let t = tau(a, b).unwrap();
            assert!(b < t && t < a);
        }
    }

    #[test]
    fn h_tilde_balanced() {
        // (sqrt 8 - sqrt 2)^2 / 2
        assert!((h_tilde(0.0, 8.0, 2.0, 0.5).unwrap() - 1.0).abs() < 1e-12);
        let sqrt2 = 2f64.sqrt();
        for (a, b) in [(9.0f64, 1.0f64), (6.0, 1.0), (20.0, 2.0), (3.0, 2.0)] {
            let above = a.sqrt() - b.sqrt() > sqrt2;
            assert_eq!(h_tilde(0.0, a, b, 0.5).unwrap() > 1.0, above);
        }
    }

    #[test]
    fn h_tilde_matches_plain_formula_left_of_peak() {
        let (a, b, rho) = (12.0, 3.0, 0.3);
        let t = tau(a, b).unwrap();
        for k in 0..10 {
            let x = t * (1.0 - 2.0 * rho) * k as f64 / 10.0;
            let d = t * (1.0 - 2.0 * rho) - x;
            let plain = a * rho + b * (1.0 - rho) - (d * d + 4.0 * rho * (1.0 - rho) * a * b).sqrt()
                + d / 2.0 * (rho * b / ((1.0 - rho) * a)).ln();
            assert!((h_tilde(x, a, b, rho).unwrap() - plain).abs() < 1e-12);
        }
    }

    #[test]
    fn h_decreases_in_abs_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let b = rng.gen_range(0.5..5.0);
            let a = b + rng.gen_range(0.5..20.0);
            let rho = rng.gen_range(0.05..0.5);
            let x1: f64 = rng.gen_range(-10.0..10.0);
            let x2: f64 = rng.gen_range(-10.0..10.0);
            if (x1.abs() - x2.abs()).abs() < 1e-9 {
                continue;
            }
            let (lo, hi) = if x1.abs() < x2.abs() { (x1, x2) } else { (x2, x1) };
            assert!(h(lo, a, b, rho).unwrap() > h(hi, a, b, rho).unwrap());
        }
    }

    #[test]
    fn h_below_g() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let b = rng.gen_range(0.5..5.0);
            let a = b + rng.gen_range(0.5..20.0);
            let rho = rng.gen_range(0.05..0.5);
            let t = tau(a, b).unwrap();
            let c4 = rng.gen_range(0.0..5.0);
            let alpha = -t * (1.0 - 2.0 * rho) + c4;
            let lhs = h(alpha, a, b, rho).unwrap();
            let rhs = g_rate(rho, 1.0 - rho, a, b, alpha).unwrap();
            assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn g_examples() {
        assert!((g_rate(0.5, 0.5, 8.0, 2.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let (r1, r2, a, b) = (0.3f64, 0.7f64, 5.0f64, 2.0f64);
        let expect = (a * r1).sqrt() - (b * r2).sqrt();
        assert!((g_rate(r1, r2, a, b, 0.0).unwrap() - expect * expect).abs() < 1e-12);
        assert!(g_rate(0.0, 0.5, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn censored_examples() {
        assert_eq!(h_censored(0.0, 7.5).unwrap(), 7.5);
        assert!(h_censored(0.5, 7.5).unwrap().abs() < 1e-15);
        // 8 (sqrt .95 - sqrt .05)^2 = 8 (1 - 2 sqrt(.0475))
        assert!((h_censored(0.05, 8.0).unwrap() - 4.512_880_845_167_461).abs() < 1e-12);
        assert!(h_censored(0.6, 1.0).is_err());
    }

    #[test]
    fn rate_i_examples() {
        assert!(rate_i(3.0, 3.0).unwrap().abs() < 1e-15);
        assert!((rate_i(4.0, 1.0).unwrap() - (3.0 - 4f64.ln())).abs() < 1e-15);
        assert!((rate_i(4.0, 1.0).unwrap() - 1.613_705_6).abs() < 1e-6);
        assert_eq!(rate_i(2.5, 0.0).unwrap(), 2.5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = rng.gen_range(0.1..20.0);
            let y = rng.gen_range(0.1..20.0);
            assert!(rate_i(x, y).unwrap() > 0.0);
        }
    }
}
