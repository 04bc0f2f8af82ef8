//! One row of exact and predicted statistics per `n` along a grid.

use serde::Serialize;

use super::predict::{predicted_mean, predicted_variance, refined_center_scale, SingularData};
use super::saddle::{b_diagnostic, saddle_params};
use crate::error::{Error, Result};
use crate::groups::CoeffTable;
use crate::measure::{exact_moments, kolmogorov_distance, pmf};
use crate::orbits::OrbitRows;
use crate::scalar::Scalar;

/// Columns of the CLT scan; `tol`, `quad_tol`, `coeff_len` and `terms` record
/// how the numeric columns were obtained.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub exact_mean: f64,
    pub exact_var: f64,
    pub predicted_mean: f64,
    pub predicted_var: f64,
    pub refined_a_n: f64,
    pub b_n_sq: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub kolmogorov: f64,
    #[serde(rename = "B_n")]
    pub b_diag: f64,
    pub mean_ratio: f64,
    pub var_ratio: f64,
    pub major_arc_ratio: f64,
    pub tol: f64,
    pub quad_tol: f64,
    pub coeff_len: usize,
    pub terms: usize,
}

impl ScanRow {
    /// Column names in serialization order, for headers of empty tables.
    pub const COLUMNS: [&'static str; 18] = [
        "n",
        "exact_mean",
        "exact_var",
        "predicted_mean",
        "predicted_var",
        "refined_a_n",
        "b_n_sq",
        "skewness",
        "excess_kurtosis",
        "kolmogorov",
        "B_n",
        "mean_ratio",
        "var_ratio",
        "major_arc_ratio",
        "tol",
        "quad_tol",
        "coeff_len",
        "terms",
    ];
}

/// Scan rows for every `n` of a nondecreasing grid of integers `>= 2`.
pub fn clt_scan(
    coeffs: &CoeffTable,
    sing: &SingularData,
    rows: &OrbitRows,
    grid: &[usize],
    x: &Scalar,
    tol: f64,
    quad_tol: f64,
) -> Result<Vec<ScanRow>> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("the n grid must be nondecreasing".into()));
    }
    let x = x.clone().positive()?;
    let xf = x.to_f64();
    grid.iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::Domain(format!("scan points need n >= 2, got {n}")));
            }
            let table = rows.table(n).ok_or(Error::InsufficientCoefficients {
                needed: n,
                have: rows.n_max(),
            })?;
            let law = pmf(&table, &x)?;
            let m = exact_moments(&law);
            let (mean, var) = (m.mean.to_f64(), m.variance.to_f64());
            let (a_n, b_n) = refined_center_scale(coeffs, sing, n, xf, tol)?;
            let saddle = saddle_params(coeffs, n, xf, tol, quad_tol)?;
            Ok(ScanRow {
                n,
                exact_mean: mean,
                exact_var: var,
                predicted_mean: predicted_mean(sing, n, xf)?,
                predicted_var: predicted_variance(sing, n, xf)?,
                refined_a_n: a_n,
                b_n_sq: b_n * b_n,
                skewness: m.skewness.unwrap_or(f64::NAN),
                excess_kurtosis: m.excess_kurtosis.unwrap_or(f64::NAN),
                kolmogorov: kolmogorov_distance(&law, mean, var.sqrt())?,
                b_diag: b_diagnostic(saddle.x_w_minus1, var),
                mean_ratio: mean / a_n,
                var_ratio: var / (b_n * b_n),
                major_arc_ratio: saddle.j * std::f64::consts::TAU.sqrt() / saddle.lambda_n,
                tol,
                quad_tol,
                coeff_len: coeffs.len(),
                terms: saddle.terms,
            })
        })
        .collect()
}
