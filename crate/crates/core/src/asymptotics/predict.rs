//! Leading-order predictions for the mean and variance of the number of
//! orbits, and ratio checks of the `W` sums against their singular behaviour.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::w::{w0_inverse, w_eval};
use crate::bigmath::ratio_to_f64;
use crate::error::{Error, Result};
use crate::groups::{CoeffTable, GroupSpec};

/// `(alpha, m, gamma)` of the rightmost pole of the zeta function, and
/// `K = Gamma(alpha) gamma / (m-1)!`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularData {
    pub alpha: f64,
    pub m: u32,
    pub gamma: f64,
    pub k: f64,
}

fn factorial_f64(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

impl SingularData {
    pub fn new(alpha: f64, m: u32, gamma_value: f64) -> Result<Self> {
        if !(alpha > 0.0) || m == 0 || !(gamma_value > 0.0) {
            return Err(Error::Domain(format!(
                "singular data needs alpha > 0, m >= 1, gamma > 0; got ({alpha}, {m}, {gamma_value})"
            )));
        }
        Ok(SingularData {
            alpha,
            m,
            gamma: gamma_value,
            k: gamma(alpha) * gamma_value / factorial_f64(m - 1),
        })
    }

    pub fn from_spec(spec: &GroupSpec) -> Self {
        Self::new(spec.alpha_f64(), spec.pole_order, spec.gamma.value())
            .expect("catalog entries are validated")
    }

    fn need_prediction_range(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::Domain(format!("predictions need n >= 2, got {n}")));
        }
        if !(self.alpha > 1.0) {
            return Err(Error::Domain(format!("predictions need alpha > 1, got {}", self.alpha)));
        }
        Ok(())
    }

    /// `alpha^{-(m-1)/alpha} (xK)^{1/alpha} n^{(alpha-1)/alpha} (ln n)^{(m-1)/alpha}`.
    fn scale(&self, n: usize, x: f64) -> f64 {
        let (a, m1) = (self.alpha, f64::from(self.m - 1));
        let nf = n as f64;
        a.powf(-m1 / a) * (x * self.k).powf(1.0 / a) * nf.powf((a - 1.0) / a) * nf.ln().powf(m1 / a)
    }
}

/// Leading term of `E[K_{G,n}]`.
pub fn predicted_mean(sing: &SingularData, n: usize, x: f64) -> Result<f64> {
    sing.need_prediction_range(n)?;
    Ok(sing.scale(n, x) / (sing.alpha - 1.0))
}

/// Leading term of `Var(K_{G,n})`.
pub fn predicted_variance(sing: &SingularData, n: usize, x: f64) -> Result<f64> {
    sing.need_prediction_range(n)?;
    Ok(sing.scale(n, x) / (sing.alpha * (sing.alpha - 1.0)))
}

/// Centering `a_n = x W_{-1}(W_0^{-1}(n/x))` and scale `b_n` (the square root
/// of the predicted variance).
pub fn refined_center_scale(
    coeffs: &CoeffTable,
    sing: &SingularData,
    n: usize,
    x: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let b = predicted_variance(sing, n, x)?.sqrt();
    let t = w0_inverse(coeffs, n as f64 / x, tol)?;
    let a = x * w_eval(coeffs, -1.0, t, tol)?;
    Ok((a, b))
}

/// `W_beta(u) / [Gamma(alpha+beta) gamma/(m-1)! u^{-(alpha+beta)} (-ln u)^{m-1}]`.
pub fn tauberian_ratio(
    coeffs: &CoeffTable,
    sing: &SingularData,
    beta: f64,
    u: f64,
    tol: f64,
) -> Result<f64> {
    let s = sing.alpha + beta;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("need beta > -alpha, got beta={beta}")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("need 0 < u < 1, got {u}")));
    }
    let w = w_eval(coeffs, beta, u, tol)?;
    let m1 = sing.m - 1;
    let lead = gamma(s) * sing.gamma / factorial_f64(m1) * u.powf(-s) * (-u.ln()).powi(m1 as i32);
    Ok(w / lead)
}

/// `sum_{d<=N} d^beta a_d` against `gamma/((m-1)!(alpha+beta)) N^{alpha+beta} (ln N)^{m-1}`.
///
/// The sum is exact for integer `beta >= 0`.
pub fn partial_sum_ratio(coeffs: &CoeffTable, sing: &SingularData, beta: f64, n: usize) -> Result<f64> {
    let s = sing.alpha + beta;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("need beta > -alpha, got beta={beta}")));
    }
    if n == 0 || n > coeffs.len() {
        return Err(Error::InsufficientCoefficients {
            needed: n.max(1),
            have: coeffs.len(),
        });
    }
    let m1 = sing.m - 1;
    let nf = n as f64;
    if m1 > 0 && n == 1 {
        return Err(Error::Domain("(ln N)^(m-1) vanishes at N = 1".into()));
    }
    let sum = if beta >= 0.0 && beta.fract() == 0.0 && beta <= 64.0 {
        let b = beta as u32;
        let exact: BigInt = (1..=n).map(|d| BigInt::from(d).pow(b) * coeffs.get(d)).sum();
        exact
            .to_f64()
            .unwrap_or_else(|| ratio_to_f64(&exact.into()))
    } else {
        coeffs.floats()[..n]
            .iter()
            .enumerate()
            .map(|(i, a)| a * ((i + 1) as f64).powf(beta))
            .sum()
    };
    let lead = sing.gamma / (factorial_f64(m1) * s) * nf.powf(s) * nf.ln().powi(m1 as i32);
    Ok(sum / lead)
}
