//! Saddle-point split `H_n(x) = P_n(x,t) J_n(x,t)` on the circle `|z| = e^{-t}`.
//!
//! `P_n = exp(n t + x W_{-1}(t))` and
//! `J_n = (1/2pi) int e^{-i n theta} exp(x (F(theta) - F(0))) d theta` with
//! `F(theta) = sum_{d<=L} a_d/d e^{-d t} e^{i d theta}`. The same truncation
//! `L >= n` enters both factors, so the split is an identity for the truncated
//! series and `H_n` only sees `a_1..a_n`; the check therefore measures the
//! quadrature alone. `J_n` is a periodic trapezoid sum whose nodes are filled
//! by one inverse FFT after folding the coefficients modulo the node count.

use num_traits::{Pow, Zero};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::predict::{predicted_variance, SingularData};
use super::w::{w0_inverse, w_eval_detailed, w_partial};
use crate::bigmath::{ln_bigint, ln_factorial};
use crate::error::{Error, Result};
use crate::groups::CoeffTable;
use crate::orbits::{ln_h_real, OrbitTable};
use crate::scalar::Scalar;

/// Largest trapezoid node count tried before giving up.
pub const MAX_NODES: usize = 1 << 22;

/// Saddle quantities at `s = 0` (so `x_n = x`).
#[derive(Clone, Debug, Serialize)]
pub struct SaddleParams {
    pub n: usize,
    pub x: f64,
    /// `W_0^{-1}(n/x)`.
    pub t_n: f64,
    pub x_n: f64,
    /// `(x W_1(t_n))^{-1/2}`.
    pub lambda_n: f64,
    /// `ln P_n = n t_n + x W_{-1}(t_n)`.
    pub log_p: f64,
    /// `J_n` by quadrature.
    pub j: f64,
    /// `x W_{-1}(t_n)`.
    pub x_w_minus1: f64,
    /// Series truncation `L`.
    pub terms: usize,
    /// Trapezoid nodes at convergence.
    pub nodes: usize,
    pub tol: f64,
    pub quad_tol: f64,
}

/// `J_n` with `nodes` trapezoid points.
fn j_trapezoid(coeffs: &CoeffTable, n: usize, x: f64, t: f64, terms: usize, nodes: usize) -> f64 {
    let a = coeffs.floats();
    let mut folded = vec![Complex64::zero(); nodes];
    let mut f0 = 0.0;
    for d in 1..=terms {
        let c = a[d - 1] / d as f64 * (-(d as f64) * t).exp();
        folded[d % nodes].re += c;
        f0 += c;
    }
    // unnormalized inverse DFT: F(theta_j) = sum_r folded[r] e^{2 pi i r j / M}
    FftPlanner::new().plan_fft_inverse(nodes).process(&mut folded);
    let step = std::f64::consts::TAU / nodes as f64;
    let sum: f64 = folded
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let theta = step * j as f64;
            let phase = -((n as f64) * theta) + x * f.im;
            (x * (f.re - f0)).exp() * phase.cos()
        })
        .sum();
    sum / nodes as f64
}

/// Doubles the node count from `max(16, 2 * next_pow2(n+1))` until the relative
/// change of `J_n` is at most `quad_tol`.
fn j_converged(
    coeffs: &CoeffTable,
    n: usize,
    x: f64,
    t: f64,
    terms: usize,
    quad_tol: f64,
) -> Result<(f64, usize)> {
    let mut nodes = (2 * (n + 1).next_power_of_two()).max(16);
    let mut prev = j_trapezoid(coeffs, n, x, t, terms, nodes);
    let mut change = f64::INFINITY;
    while nodes < MAX_NODES {
        nodes *= 2;
        let cur = j_trapezoid(coeffs, n, x, t, terms, nodes);
        change = ((cur - prev) / cur).abs();
        if change <= quad_tol {
            return Ok((cur, nodes));
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence { nodes, change })
}

/// `t_n`, `lambda_n`, `P_n` and `J_n` at `(n, x)`.
pub fn saddle_params(coeffs: &CoeffTable, n: usize, x: f64, tol: f64, quad_tol: f64) -> Result<SaddleParams> {
    if n == 0 {
        return Err(Error::Domain("saddle quantities need n >= 1".into()));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveX(x.to_string()));
    }
    if !(quad_tol > 0.0 && quad_tol < 1.0) {
        return Err(Error::Domain(format!("quad_tol must lie in (0,1), got {quad_tol}")));
    }
    let t = w0_inverse(coeffs, n as f64 / x, tol)?;
    let cert = w_eval_detailed(coeffs, -1.0, t, tol)?;
    let terms = cert.terms.max(n);
    if terms > coeffs.len() {
        return Err(Error::InsufficientCoefficients {
            needed: terms,
            have: coeffs.len(),
        });
    }
    let w_minus1 = w_partial(coeffs, -1.0, t, terms);
    let w1 = w_eval_detailed(coeffs, 1.0, t, tol)?.value;
    let (j, nodes) = j_converged(coeffs, n, x, t, terms, quad_tol)?;
    Ok(SaddleParams {
        n,
        x,
        t_n: t,
        x_n: x,
        lambda_n: (x * w1).powf(-0.5),
        log_p: n as f64 * t + x * w_minus1,
        j,
        x_w_minus1: x * w_minus1,
        terms,
        nodes,
        tol,
        quad_tol,
    })
}

/// Comparison of `ln(P_n J_n)` with the exact `ln H_n(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct SaddleCheck {
    pub n: usize,
    pub log_h_exact: f64,
    pub log_p: f64,
    pub j: f64,
    /// `|P_n J_n / H_n - 1|`.
    pub rel_error: f64,
    pub params: SaddleParams,
}

/// `ln H_n(x)` from the exact row; `ln(sum A_k p^k q^(n-k)) - n ln q - ln n!`
/// for rational `x = p/q`.
pub fn log_h_exact(table: &OrbitTable, x: &Scalar) -> f64 {
    match x {
        Scalar::Exact(r) => {
            let n = table.n;
            let (p, q) = (r.numer(), r.denom());
            let total: num_bigint::BigInt = table
                .counts()
                .iter()
                .enumerate()
                .map(|(k, a)| a * Pow::pow(p, k as u32) * Pow::pow(q, (n - k) as u32))
                .sum();
            ln_bigint(&total) - n as f64 * ln_bigint(q) - ln_factorial(n)
        }
        Scalar::Real(v) => ln_h_real(table, *v),
    }
}

/// Checks `H_n(x) = P_n(x, t_n) J_n(x, t_n)` against the exact orbit row.
pub fn saddle_factorization_check(
    coeffs: &CoeffTable,
    table: &OrbitTable,
    x: &Scalar,
    tol: f64,
    quad_tol: f64,
) -> Result<SaddleCheck> {
    let x = x.clone().positive()?;
    let params = saddle_params(coeffs, table.n, x.to_f64(), tol, quad_tol)?;
    let exact = log_h_exact(table, &x);
    let log_pj = params.log_p + params.j.ln();
    Ok(SaddleCheck {
        n: table.n,
        log_h_exact: exact,
        log_p: params.log_p,
        j: params.j,
        rel_error: (log_pj - exact).exp_m1().abs(),
        params,
    })
}

/// `lambda_n` from its explicit large-`n` form
/// `alpha^{-1/2} alpha^{-(m-1)/(2 alpha)} (xK)^{1/(2 alpha)} n^{-(alpha+1)/(2 alpha)} (ln n)^{(m-1)/(2 alpha)}`.
pub fn lambda_explicit(sing: &SingularData, n: usize, x: f64) -> f64 {
    let (a, m1) = (sing.alpha, f64::from(sing.m - 1));
    let nf = n as f64;
    a.powf(-0.5)
        * a.powf(-m1 / (2.0 * a))
        * (x * sing.k).powf(1.0 / (2.0 * a))
        * nf.powf(-(a + 1.0) / (2.0 * a))
        * nf.ln().powf(m1 / (2.0 * a))
}

/// One point of the major-arc comparison.
#[derive(Clone, Debug, Serialize)]
pub struct MajorArcPoint {
    pub n: usize,
    /// `J_n sqrt(2 pi) / lambda_n`.
    pub ratio: f64,
    pub lambda_n: f64,
    pub lambda_explicit: f64,
}

/// `r_n = J_n sqrt(2 pi)/lambda_n` along a grid; the Gaussian major-arc
/// approximation predicts `r_n -> 1`.
pub fn major_arc_gaussian_check(
    coeffs: &CoeffTable,
    sing: &SingularData,
    n_grid: &[usize],
    x: f64,
    tol: f64,
    quad_tol: f64,
) -> Result<Vec<MajorArcPoint>> {
    n_grid
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::Domain(format!("major-arc check needs n >= 2, got {n}")));
            }
            let p = saddle_params(coeffs, n, x, tol, quad_tol)?;
            Ok(MajorArcPoint {
                n,
                ratio: p.j * std::f64::consts::TAU.sqrt() / p.lambda_n,
                lambda_n: p.lambda_n,
                lambda_explicit: lambda_explicit(sing, n, x),
            })
        })
        .collect()
}

/// `B_n = x W_{-1}(t_n) / Var(K_{G,n})`, expected to drift toward `alpha`.
pub fn b_diagnostic(x_w_minus1: f64, variance: f64) -> f64 {
    x_w_minus1 / variance
}

/// `A_n = (x W_{-1}(t_n) - a_n) / b_n` for a centering `a_n`.
pub fn a_diagnostic(x_w_minus1: f64, a_n: f64, b_n: f64) -> f64 {
    (x_w_minus1 - a_n) / b_n
}

/// `B_n` with the predicted variance in place of the exact one.
pub fn b_predicted(sing: &SingularData, x_w_minus1: f64, n: usize, x: f64) -> Result<f64> {
    Ok(x_w_minus1 / predicted_variance(sing, n, x)?)
}
