//! Riemann zeta on the real half-line `s > 1` by Euler–Maclaurin summation.

use crate::error::{Error, Result};

/// `B_2, B_4, ..., B_24`.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Riemann zeta at real `s > 1` to absolute error `tol` (down to about 1e-15).
///
/// Sums `k^{-s}` for `k < N`, adds the integral and endpoint terms at `N`, then
/// Bernoulli corrections `B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}`. For real `s`
/// the remainder after `p` corrections is bounded by the magnitude of correction
/// `p+1`, so the loop stops at the first `p` whose next term is below `tol`, and
/// doubles `N` if the available Bernoulli numbers run out first.
pub fn zeta_real(s: f64, tol: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta_real needs s > 1, got {s}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut n_cut = 10usize;
    loop {
        if let Some(v) = euler_maclaurin(s, n_cut, tol) {
            return Ok(v);
        }
        n_cut *= 2;
        if n_cut > 1 << 20 {
            return Err(Error::Domain(format!("zeta_real could not reach tol={tol:e} at s={s}")));
        }
    }
}

fn euler_maclaurin(s: f64, n_cut: usize, tol: f64) -> Option<f64> {
    let nf = n_cut as f64;
    // small terms first
    let head: f64 = (1..n_cut).rev().map(|k| (k as f64).powf(-s)).sum();
    let mut total = head + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);

    // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2) for j = 1
    let mut fact = 2.0; // (2j)!
    let mut npow = nf.powf(-s - 1.0);
    for j in 1..=BERNOULLI_EVEN.len() {
        let term = BERNOULLI_EVEN[j - 1] / fact * rising * npow;
        // advance to j+1 to bound the remainder
        let next_rising = rising * (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        let next_fact = fact * (2 * j + 1) as f64 * (2 * j + 2) as f64;
        let next_npow = npow / (nf * nf);
        total += term;
        if j < BERNOULLI_EVEN.len() {
            let next = BERNOULLI_EVEN[j] / next_fact * next_rising * next_npow;
            if next.abs() <= tol {
                return Some(total);
            }
        }
        rising = next_rising;
        fact = next_fact;
        npow = next_npow;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        assert!((zeta_real(2.0, 1e-14).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_real(4.0, 1e-14).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        // mpmath: zeta(3) = 1.2020569031595942853997...
        assert!((zeta_real(3.0, 1e-14).unwrap() - 1.2020569031595942).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_with_tail_bound_agree() {
        // partial sum to K plus the trapezoid tail estimate; its error is O(K^{-s-1})
        for &s in &[1.5, 2.5, 3.0, 7.25] {
            let k_max = 200_000usize;
            let partial: f64 = (1..=k_max).rev().map(|k| (k as f64).powf(-s)).sum();
            let kf = k_max as f64;
            let tail_mid = kf.powf(1.0 - s) / (s - 1.0) - 0.5 * kf.powf(-s);
            let got = zeta_real(s, 1e-14).unwrap();
            assert!((got - (partial + tail_mid)).abs() < 1e-10, "s={s}");
        }
    }

    #[test]
    fn rejects_pole_and_left_half_line() {
        assert!(zeta_real(1.0, 1e-12).is_err());
        assert!(zeta_real(0.5, 1e-12).is_err());
        assert!(zeta_real(f64::NAN, 1e-12).is_err());
    }

    #[test]
    fn large_argument_tends_to_one() {
        let v = zeta_real(40.0, 1e-15).unwrap();
        assert!((v - 1.0 - 2f64.powi(-40)).abs() < 1e-15);
    }
}
