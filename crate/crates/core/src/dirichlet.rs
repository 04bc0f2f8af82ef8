//! Exact algebra of truncated Dirichlet-series coefficient sequences.
//!
//! A sequence `u(1), ..., u(N)` stands for the truncated series `sum u(n) n^{-s}`.
//! Products are Dirichlet convolutions, computed with the divisor-loop schedule
//! (`sum_d N/d` work) and skipping zero entries on both sides, which matters for
//! the sparse factors `zeta(cs - d)` with `c >= 2`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficients `u(1..=N)` of a truncated Dirichlet series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeq {
    values: Vec<BigInt>,
}

impl IntSeq {
    /// Wraps `values`, where `values[0]` is the coefficient of `1^{-s}`.
    pub fn new(values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a coefficient sequence needs N >= 1".into()));
        }
        Ok(IntSeq { values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The multiplicative identity `e = (1, 0, 0, ...)`.
    pub fn identity(len: usize) -> Self {
        assert!(len >= 1);
        let mut values = vec![BigInt::zero(); len];
        values[0] = BigInt::one();
        IntSeq { values }
    }

    /// Coefficients of the Riemann zeta function, all ones.
    pub fn ones(len: usize) -> Self {
        assert!(len >= 1);
        IntSeq {
            values: vec![BigInt::one(); len],
        }
    }

    /// Truncation length `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient at index `n` (1-based).
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    pub fn truncated(&self, len: usize) -> IntSeq {
        assert!(len >= 1 && len <= self.len());
        IntSeq {
            values: self.values[..len].to_vec(),
        }
    }

    fn nonzero_indices(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&n| !self.get(n).is_zero()).collect()
    }
}

/// The factor `zeta(scale * s - shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZetaFactor {
    scale: u32,
    shift: u32,
}

impl ZetaFactor {
    pub fn new(scale: u32, shift: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidFactor { scale, shift });
        }
        Ok(ZetaFactor { scale, shift })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Abscissa of convergence `(shift + 1) / scale`, where the factor has its pole.
    pub fn abscissa(&self) -> Ratio<i64> {
        Ratio::new(self.shift as i64 + 1, self.scale as i64)
    }
}

/// Coefficients of `zeta(c s - d) = sum_m m^d (m^c)^{-s}`: `m^d` at `n = m^c`, zero elsewhere.
pub fn factor_coeffs(f: ZetaFactor, len: usize) -> IntSeq {
    assert!(len >= 1);
    let mut values = vec![BigInt::zero(); len];
    let mut m: usize = 1;
    loop {
        let Some(n) = m.checked_pow(f.scale) else { break };
        if n > len {
            break;
        }
        values[n - 1] = BigInt::from(m).pow(f.shift);
        m += 1;
    }
    IntSeq { values }
}

/// Dirichlet convolution `(u * v)(n) = sum_{d | n} u(d) v(n/d)`, exact.
pub fn dirichlet_mul(u: &IntSeq, v: &IntSeq) -> Result<IntSeq> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let len = u.len();
    let mut out = vec![BigInt::zero(); len];
    let nz_v = v.nonzero_indices();
    for d in 1..=len {
        let ud = u.get(d);
        if ud.is_zero() {
            continue;
        }
        let limit = len / d;
        for &m in nz_v.iter().take_while(|&&m| m <= limit) {
            out[d * m - 1] += ud * v.get(m);
        }
    }
    Ok(IntSeq { values: out })
}

/// Dirichlet inverse by triangular back-substitution; needs `u(1) = 1`.
pub fn dirichlet_inverse(u: &IntSeq) -> Result<IntSeq> {
    if !u.get(1).is_one() {
        return Err(Error::NonUnitLead(u.get(1).clone()));
    }
    let len = u.len();
    let nz_u: Vec<usize> = u.nonzero_indices().into_iter().filter(|&d| d > 1).collect();
    // acc[n] collects sum_{d | n, d > 1} u(d) r(n/d) from already-finished r values
    let mut acc = vec![BigInt::zero(); len];
    let mut out = Vec::with_capacity(len);
    for n in 1..=len {
        let r = if n == 1 {
            BigInt::one()
        } else {
            -std::mem::take(&mut acc[n - 1])
        };
        if !r.is_zero() {
            let limit = len / n;
            for &d in nz_u.iter().take_while(|&&d| d <= limit) {
                acc[n * d - 1] += u.get(d) * &r;
            }
        }
        out.push(r);
    }
    Ok(IntSeq { values: out })
}

/// Product of the coefficient sequences of several factors.
pub fn product_of_factors(factors: &[ZetaFactor], len: usize) -> Result<IntSeq> {
    factors
        .iter()
        .try_fold(IntSeq::identity(len), |acc, &f| {
            dirichlet_mul(&acc, &factor_coeffs(f, len))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn seq(v: &[i64]) -> IntSeq {
        IntSeq::from_i64(v).unwrap()
    }

    #[test]
    fn factor_examples() {
        let f = |c, d| ZetaFactor::new(c, d).unwrap();
        assert_eq!(factor_coeffs(f(1, 0), 5), seq(&[1, 1, 1, 1, 1]));
        assert_eq!(
            factor_coeffs(f(2, 3), 9),
            seq(&[1, 0, 0, 8, 0, 0, 0, 0, 27])
        );
        assert_eq!(factor_coeffs(f(1, 1), 4), seq(&[1, 2, 3, 4]));
        assert_eq!(f(2, 3).abscissa(), Ratio::new(2, 1));
        assert_eq!(f(3, 3).abscissa(), Ratio::new(4, 3));
        assert!(ZetaFactor::new(0, 1).is_err());
    }

    #[test]
    fn mul_examples() {
        let ones = IntSeq::ones(6);
        assert_eq!(dirichlet_mul(&ones, &ones).unwrap(), seq(&[1, 2, 2, 3, 2, 4]));
        let id = factor_coeffs(ZetaFactor::new(1, 1).unwrap(), 6);
        assert_eq!(dirichlet_mul(&ones, &id).unwrap(), seq(&[1, 3, 4, 7, 6, 12]));
        let v = seq(&[3, -1, 4, 1, -5, 9]);
        assert_eq!(dirichlet_mul(&IntSeq::identity(6), &v).unwrap(), v);
        assert!(matches!(
            dirichlet_mul(&IntSeq::ones(3), &IntSeq::ones(4)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(dirichlet_inverse(&IntSeq::ones(4)).unwrap(), seq(&[1, -1, -1, 0]));
        assert_eq!(
            dirichlet_inverse(&IntSeq::identity(7)).unwrap(),
            IntSeq::identity(7)
        );
        let cube = factor_coeffs(ZetaFactor::new(3, 3).unwrap(), 8);
        assert_eq!(dirichlet_inverse(&cube).unwrap().get(8), &BigInt::from(-8));
        assert!(matches!(
            dirichlet_inverse(&seq(&[2, 1])),
            Err(Error::NonUnitLead(_))
        ));
    }

    #[test]
    fn inverse_of_ones_is_mobius() {
        // independent Möbius by trial factorization
        fn mobius(mut n: u64) -> i64 {
            let mut sign = 1;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    sign = -sign;
                }
                p += 1;
            }
            if n > 1 {
                sign = -sign;
            }
            sign
        }
        let inv = dirichlet_inverse(&IntSeq::ones(500)).unwrap();
        for n in 1..=500 {
            assert_eq!(inv.get(n), &BigInt::from(mobius(n as u64)), "n={n}");
        }
    }

    #[test]
    fn inverse_round_trip_at_ten_thousand() {
        let len = 10_000;
        let u = product_of_factors(
            &[ZetaFactor::new(1, 0).unwrap(), ZetaFactor::new(2, 3).unwrap()],
            len,
        )
        .unwrap();
        let inv = dirichlet_inverse(&u).unwrap();
        assert_eq!(dirichlet_mul(&u, &inv).unwrap(), IntSeq::identity(len));
    }

    fn arb_seq(len: usize) -> impl Strategy<Value = IntSeq> {
        prop::collection::vec(-20i64..20, len).prop_map(|v| IntSeq::from_i64(&v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mul_commutes_and_associates(
            (a, b, c) in (1usize..=256).prop_flat_map(|len| (arb_seq(len), arb_seq(len), arb_seq(len)))
        ) {
            prop_assert_eq!(dirichlet_mul(&a, &b).unwrap(), dirichlet_mul(&b, &a).unwrap());
            let left = dirichlet_mul(&dirichlet_mul(&a, &b).unwrap(), &c).unwrap();
            let right = dirichlet_mul(&a, &dirichlet_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_is_two_sided(mut u in arb_seq(120)) {
            u.values[0] = BigInt::one();
            let inv = dirichlet_inverse(&u).unwrap();
            prop_assert_eq!(dirichlet_mul(&u, &inv).unwrap(), IntSeq::identity(120));
            prop_assert_eq!(dirichlet_mul(&inv, &u).unwrap(), IntSeq::identity(120));
        }

        #[test]
        fn factor_coeffs_multiplicative(c in 1u32..4, d in 0u32..4, m in 1usize..40, n in 1usize..40) {
            prop_assume!(m.gcd(&n) == 1);
            let f = factor_coeffs(ZetaFactor::new(c, d).unwrap(), m * n);
            prop_assert_eq!(f.get(m * n), &(f.get(m) * f.get(n)));
        }
    }
}
