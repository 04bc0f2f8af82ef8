//! Numerics around the singular behaviour of the subgroup-growth series: the
//! `W_beta` sums, leading-order predictions, and saddle-point diagnostics.

mod predict;
mod saddle;
mod scan;
mod w;
mod zeta;

pub use predict::{
    partial_sum_ratio, predicted_mean, predicted_variance, refined_center_scale, tauberian_ratio,
    SingularData,
};
pub use saddle::{
    a_diagnostic, b_diagnostic, b_predicted, lambda_explicit, log_h_exact,
    major_arc_gaussian_check, saddle_factorization_check, saddle_params, MajorArcPoint,
    SaddleCheck, SaddleParams, MAX_NODES,
};
pub use scan::{clt_scan, ScanRow};
pub use w::{
    envelope_constant, needed_terms, required_len, tail_bound, w0_inverse, w_eval,
    w_eval_detailed, w_partial, WEval, U_MAX, U_MIN,
};
pub use zeta::zeta_real;

use crate::error::{Error, Result};
use crate::groups::{coeffs, CoeffTable, GroupSpec};

/// Largest coefficient table [`with_certified_coeffs`] will build.
pub const MAX_AUTO_LEN: usize = 2_000_000;

/// Runs `f` on a coefficient table of at least `len` entries, rebuilding a
/// longer table whenever `f` reports that the current one is too short.
pub fn with_certified_coeffs<T>(
    spec: &GroupSpec,
    len: usize,
    mut f: impl FnMut(&CoeffTable) -> Result<T>,
) -> Result<(T, CoeffTable)> {
    let mut len = len.max(1);
    loop {
        let table = coeffs(spec, len)?;
        let needed = match f(&table) {
            Err(Error::TableTooShort { needed, .. }) => needed,
            Err(Error::InsufficientCoefficients { needed, .. }) => needed,
            other => return other.map(|v| (v, table)),
        };
        let next = needed.saturating_add(needed / 8 + 16);
        if needed <= len || next > MAX_AUTO_LEN {
            return f(&table).map(|v| (v, table));
        }
        len = next;
    }
}
