//! Small helpers on arbitrary-precision integers and rationals.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer, accurate to f64 rounding.
///
/// Returns `-inf` for zero and `NaN` for negative input.
pub fn ln_bigint(v: &BigInt) -> f64 {
    match v.sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => {
            let bits = v.bits();
            if bits <= 1000 {
                return v.to_f64().map(f64::ln).unwrap_or(f64::NAN);
            }
            // keep the top 64 bits as mantissa
            let shift = bits - 64;
            let top: BigInt = v >> shift;
            top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Natural log of a positive big rational.
pub fn ln_ratio(v: &BigRational) -> f64 {
    ln_bigint(v.numer()) - ln_bigint(v.denom())
}

/// Converts a big rational to the nearest-ish f64 without overflowing intermediates.
pub fn ratio_to_f64(v: &BigRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    if let Some(f) = v.to_f64() {
        if f.is_finite() && f != 0.0 {
            return f;
        }
    }
    let sign = if v.is_negative() { -1.0 } else { 1.0 };
    sign * ln_ratio(&v.abs()).exp()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n (n-1) ... (n-j+1)`, the falling factorial with `j` factors.
pub fn falling_factorial(n: usize, j: usize) -> BigInt {
    debug_assert!(j <= n);
    ((n - j + 1)..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Decimal rendering used by every file format: plain integer strings.
pub fn to_decimal(v: &BigInt) -> String {
    v.to_str_radix(10)
}

/// `p/q` rendering of a rational (`p` alone when `q = 1`).
pub fn ratio_string(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
