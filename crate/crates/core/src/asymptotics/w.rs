//! `W_beta(u) = sum_d d^beta a_d e^{-d u}` with a certified truncation, and the
//! inverse of the decreasing bijection `W_0`.
//!
//! The tail past `N` is bounded with the envelope `a_d <= C d^(alpha+1)`, where
//! `C` is twice the largest ratio `a_d / d^(alpha+1)` over the whole table.
//! The constant is fitted, not proved: polynomial growth is known but no
//! explicit constant is.

use crate::error::{Error, Result};
use crate::groups::CoeffTable;

/// Lower end of the bracket search in [`w0_inverse`].
pub const U_MIN: f64 = 1e-8;
/// Upper end of the bracket search in [`w0_inverse`]; `e^{-700}` is near underflow.
pub const U_MAX: f64 = 700.0;

/// A `W_beta(u)` value with its truncation certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WEval {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Upper bound on the omitted tail.
    pub tail_bound: f64,
    /// Envelope constant `C`.
    pub envelope: f64,
}

/// `C = 2 max_d a_d / d^(alpha+1)` over the table.
pub fn envelope_constant(coeffs: &CoeffTable) -> f64 {
    let p = coeffs.alpha + 1.0;
    2.0 * coeffs
        .floats()
        .iter()
        .enumerate()
        .map(|(i, a)| a / ((i + 1) as f64).powf(p))
        .fold(0.0, f64::max)
}

/// Bound on `sum_{d > N} C d^p e^{-d u}`; infinite when not yet decreasing.
pub fn tail_bound(c: f64, p: f64, u: f64, n: usize) -> f64 {
    let nf = n as f64;
    let head = c * (p * nf.ln() - nf * u).exp();
    if p <= 0.0 {
        // d^p <= N^p past N, geometric sum of e^{-d u}
        head / u.exp_m1()
    } else if nf * u > p {
        // t^p e^{-tu} has log-derivative <= -(u - p/N) on [N, inf)
        head / (u * (1.0 - p / (nf * u)))
    } else {
        f64::INFINITY
    }
}

/// Smallest `N` with `tail_bound(c, p, u, N) <= target`.
pub fn needed_terms(c: f64, p: f64, u: f64, target: f64) -> usize {
    let mut hi = ((p.max(0.0) / u).ceil() as usize + 1).max(1);
    while tail_bound(c, p, u, hi) > target {
        if hi > usize::MAX / 4 {
            return usize::MAX;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(c, p, u, mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `W_beta(u)` summed until the certified tail is at most `tol` times the
/// partial sum.
pub fn w_eval_detailed(coeffs: &CoeffTable, beta: f64, u: f64, tol: f64) -> Result<WEval> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("W needs u > 0, got {u}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let c = envelope_constant(coeffs);
    let p = coeffs.alpha + 1.0 + beta;
    let a = coeffs.floats();
    let mut sum = 0.0;
    for (i, &ad) in a.iter().enumerate() {
        let d = (i + 1) as f64;
        sum += ad * (beta * d.ln() - d * u).exp();
        let tail = tail_bound(c, p, u, i + 1);
        if tail <= tol * sum {
            return Ok(WEval {
                value: sum,
                terms: i + 1,
                tail_bound: tail,
                envelope: c,
            });
        }
    }
    Err(Error::TableTooShort {
        u,
        have: a.len(),
        needed: needed_terms(c, p, u, tol * sum),
    })
}

/// `W_beta(u)`; see [`w_eval_detailed`].
pub fn w_eval(coeffs: &CoeffTable, beta: f64, u: f64, tol: f64) -> Result<f64> {
    w_eval_detailed(coeffs, beta, u, tol).map(|w| w.value)
}

/// `W_beta(u)` summed over exactly the first `terms` coefficients.
pub fn w_partial(coeffs: &CoeffTable, beta: f64, u: f64, terms: usize) -> f64 {
    coeffs.floats()[..terms]
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let d = (i + 1) as f64;
            a * (beta * d.ln() - d * u).exp()
        })
        .sum()
}

/// Coefficient count that certifies `W_beta(u)` to relative `tol`, estimated
/// from the leading singular behaviour `W_beta(u) >= a_1 e^{-u}`.
pub fn required_len(coeffs: &CoeffTable, beta: f64, u: f64, tol: f64) -> usize {
    let c = envelope_constant(coeffs);
    let p = coeffs.alpha + 1.0 + beta;
    needed_terms(c, p, u, tol * coeffs.floats()[0] * (-u).exp())
}

/// `u > 0` with `|W_0(u) - w| <= tol * w`.
///
/// Brackets by factors of two from `u = 1` inside `[U_MIN, U_MAX]`, then
/// bisects in `ln u`, taking a Newton step (`W_0' = -W_1`) whenever it stays
/// inside the bracket.
pub fn w0_inverse(coeffs: &CoeffTable, w: f64, tol: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain(format!("W_0 inverse needs w > 0, got {w}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0,1), got {tol}")));
    }
    let inner = (tol * 1e-2).max(1e-15);
    let w0 = |u: f64| w_eval(coeffs, 0.0, u, inner);
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let f1 = w0(1.0)?;
    if (f1 - w).abs() <= tol * w {
        return Ok(1.0);
    }
    if f1 > w {
        // W_0(lo) > w; push hi up until W_0(hi) < w
        loop {
            hi *= 2.0;
            if hi > U_MAX {
                return Err(Error::BracketNotFound { w });
            }
            if w0(hi)? < w {
                break;
            }
            lo = hi;
        }
    } else {
        loop {
            lo /= 2.0;
            if lo < U_MIN {
                return Err(Error::BracketNotFound { w });
            }
            if w0(lo)? > w {
                break;
            }
            hi = lo;
        }
    }
    let mut u = (lo * hi).sqrt();
    for _ in 0..400 {
        let f = w0(u)?;
        if (f - w).abs() <= tol * w {
            return Ok(u);
        }
        if f > w {
            lo = u;
        } else {
            hi = u;
        }
        if hi / lo - 1.0 < 1e-15 {
            return Ok(u);
        }
        let mut next = (lo * hi).sqrt();
        if hi / lo - 1.0 < 1e-3 {
            let slope = w_eval(coeffs, 1.0, u, inner)?;
            let newton = u + (f - w) / slope;
            if newton > lo && newton < hi {
                next = newton;
            }
        }
        u = next;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::zeta_real;
    use crate::groups::{coeffs, Catalog};
    use proptest::prelude::*;

    fn table(name: &str, len: usize) -> CoeffTable {
        coeffs(Catalog::builtin().get(name).unwrap(), len).unwrap()
    }

    #[test]
    fn large_u_is_dominated_by_first_terms() {
        let a = table("Z2", 200);
        let v = w_eval(&a, 0.0, 10.0, 1e-14).unwrap();
        let hand = (-10.0f64).exp() + 3.0 * (-20.0f64).exp() + 4.0 * (-30.0f64).exp();
        assert!((v - hand).abs() / hand < 1e-12);
        assert!((v - 4.54e-5).abs() < 1e-8);
    }

    #[test]
    fn decreasing_in_u() {
        let a = table("heis", 4000);
        let mut prev = f64::INFINITY;
        for &u in &[0.02, 0.05, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = w_eval(&a, 0.0, u, 1e-10).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn small_u_matches_singular_behaviour() {
        let a = table("Z2", 50_000);
        let v = w_eval(&a, 0.0, 1e-3, 1e-8).unwrap();
        let z2 = zeta_real(2.0, 1e-15).unwrap();
        assert!((v / (z2 / 1e-6) - 1.0).abs() < 0.01);
    }

    #[test]
    fn short_table_reports_needed_length() {
        let a = table("Z2", 2000);
        match w_eval(&a, 0.0, 1e-3, 1e-8) {
            Err(Error::TableTooShort { have, needed, .. }) => {
                assert_eq!(have, 2000);
                assert!(needed > 2000);
                let longer = table("Z2", needed + 10);
                assert!(w_eval(&longer, 0.0, 1e-3, 1e-8).is_ok());
            }
            other => panic!("{other:?}"),
        }
        let need = required_len(&a, 0.0, 1e-3, 1e-8);
        assert!(need > 2000 && need < 100_000, "{need}");
    }

    #[test]
    fn certificate_is_honest() {
        // a much longer sum agrees with the certified value
        let a = table("heis", 20_000);
        for &(beta, u) in &[(-1.0, 0.05), (0.0, 0.02), (1.0, 0.1), (2.0, 0.3)] {
            let e = w_eval_detailed(&a, beta, u, 1e-9).unwrap();
            let full = w_partial(&a, beta, u, 20_000);
            assert!(full >= e.value);
            assert!(full - e.value <= e.tail_bound * (1.0 + 1e-9), "beta={beta} u={u}");
        }
    }

    #[test]
    fn inverse_examples() {
        let a = table("Z2", 20_000);
        let z2 = zeta_real(2.0, 1e-15).unwrap();
        for &n in &[1e3, 1e4, 1e5] {
            let u = w0_inverse(&a, n, 1e-12).unwrap();
            assert!(((u / (z2 / n).sqrt()) - 1.0).abs() < 0.05, "n={n} u={u}");
            let back = w_eval(&a, 0.0, u, 1e-14).unwrap();
            assert!((back - n).abs() <= 1e-11 * n);
        }
        let u1 = w0_inverse(&a, 50.0, 1e-12).unwrap();
        let u2 = w0_inverse(&a, 500.0, 1e-12).unwrap();
        assert!(u1 > u2);
        assert!(matches!(w0_inverse(&a, 1e-320, 1e-9), Err(Error::BracketNotFound { .. })));
        assert!(w0_inverse(&a, -1.0, 1e-9).is_err());
    }

    #[test]
    fn round_trip_over_the_u_range() {
        // bracketing probes down to u/2, hence the long table
        let a = table("Z2", 1_100_000);
        let mut u = 1e-4;
        while u <= 10.0 {
            let w = w_eval(&a, 0.0, u, 1e-12).unwrap();
            let back = w0_inverse(&a, w, 1e-10).unwrap();
            let w_back = w_eval(&a, 0.0, back, 1e-12).unwrap();
            assert!((w_back - w).abs() <= 1.1e-10 * w, "u={u}");
            u *= 3.7;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// (W_b(u) - W_b(u+h))/h -> W_{b+1}(u) at first order: halving h halves
        /// the error, and the Richardson combination removes the leading term.
        #[test]
        fn difference_quotient_has_first_order_error(
            name in prop::sample::select(vec!["Z2", "Z3", "heis"]),
            beta in -1.0f64..1.5,
            u in 0.2f64..3.0,
        ) {
            let a = table(name, 4000);
            let w = |b: f64, v: f64| w_eval(&a, b, v, 1e-15).unwrap();
            let exact = w(beta + 1.0, u);
            let dq = |h: f64| (w(beta, u) - w(beta, u + h)) / h;
            let (h1, h2, h3) = (0.02 * u, 0.01 * u, 0.005 * u);
            let (e1, e2, e3) = (dq(h1) - exact, dq(h2) - exact, dq(h3) - exact);
            let order1 = (e1 / e2).log2();
            let order2 = (e2 / e3).log2();
            prop_assert!((order1 - 1.0).abs() < 0.05 && (order2 - 1.0).abs() < 0.05,
                "orders {order1} {order2}");
            let richardson = 2.0 * dq(h2) - dq(h1);
            prop_assert!((richardson - exact).abs() < e2.abs() * 0.1);
        }
    }
}
