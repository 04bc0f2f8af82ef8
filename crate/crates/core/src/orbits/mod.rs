//! Orbit-count tables `A(G,n,k)`: the number of homomorphisms `G -> S_n`
//! whose action has exactly `k` orbits.
//!
//! Rows come from the integer recurrence obtained by differentiating the
//! exponential generating function `exp(x * sum a_d z^d / d)`:
//!
//! ```text
//! P_n(x) = x * sum_{d=1..n} a_d (n-1)!/(n-d)! P_{n-d}(x),   P_0 = 1,
//! ```
//!
//! where `P_n(x) = n! H_n(x) = sum_k A(n,k) x^k`.

mod cache;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use cache::{CacheStatus, OrbitCache, CACHE_FORMAT, CACHE_VERSION};

use crate::bigmath::{factorial, ln_bigint, ln_factorial};
use crate::error::{Error, Result};
use crate::groups::CoeffTable;
use crate::scalar::Scalar;

/// Largest `n` accepted by [`polymer_oracle`]; compositions grow like `2^n`.
pub const POLYMER_MAX_N: usize = 20;

/// Row `n` of the orbit-count table: `A(G,n,k)` for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    pub group: String,
    pub n: usize,
    counts: Vec<BigInt>,
}

impl OrbitTable {
    pub fn new(group: impl Into<String>, counts: Vec<BigInt>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Domain("an orbit row has at least one entry".into()));
        }
        Ok(OrbitTable {
            group: group.into(),
            n: counts.len() - 1,
            counts,
        })
    }

    /// `A(G,n,k)`, zero outside `0..=n`.
    pub fn get(&self, k: usize) -> BigInt {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }
}

/// Rows `P_0, ..., P_{n}` of one group, extendable in place.
#[derive(Clone, Debug)]
pub struct OrbitRows {
    pub group: String,
    rows: Vec<Vec<BigInt>>,
}

impl OrbitRows {
    /// Only `P_0 = 1`.
    pub fn new(group: impl Into<String>) -> Self {
        OrbitRows {
            group: group.into(),
            rows: vec![vec![BigInt::one()]],
        }
    }

    pub(crate) fn from_rows(group: impl Into<String>, rows: Vec<Vec<BigInt>>) -> Self {
        OrbitRows {
            group: group.into(),
            rows,
        }
    }

    /// Largest `n` computed so far.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn table(&self, n: usize) -> Option<OrbitTable> {
        self.rows.get(n).map(|r| OrbitTable {
            group: self.group.clone(),
            n,
            counts: r.clone(),
        })
    }

    /// Keeps rows `0..=n`.
    pub fn truncate(&mut self, n: usize) {
        self.rows.truncate(n + 1);
    }

    /// Computes rows up to `n_max` from `a_1..a_{n_max}`.
    pub fn extend_to(&mut self, coeffs: &CoeffTable, n_max: usize) -> Result<()> {
        if n_max > coeffs.len() {
            return Err(Error::InsufficientCoefficients {
                needed: n_max,
                have: coeffs.len(),
            });
        }
        for n in self.rows.len()..=n_max {
            let row = next_row(coeffs, &self.rows, n);
            self.rows.push(row);
        }
        Ok(())
    }
}

/// `A(n, k) = sum_d w_d A(n-d, k-1)` with `w_d = a_d (n-1)!/(n-d)!`.
fn next_row(coeffs: &CoeffTable, rows: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    let mut falling = BigInt::one(); // (n-1)!/(n-d)! at d = 1
    for d in 1..=n {
        if d > 1 {
            falling *= n - d + 1;
        }
        let a = coeffs.get(d);
        if a.is_zero() {
            continue;
        }
        let w = a * &falling;
        let prev = &rows[n - d];
        // A(n-d, j) is zero for j = 0 unless n = d
        for (j, p) in prev.iter().enumerate() {
            if !p.is_zero() {
                out[j + 1] += &w * p;
            }
        }
    }
    out
}

/// Orbit tables for `n = 0..=n_max`.
pub fn orbit_tables(coeffs: &CoeffTable, n_max: usize) -> Result<Vec<OrbitTable>> {
    let mut rows = OrbitRows::new(coeffs.group.clone());
    rows.extend_to(coeffs, n_max)?;
    Ok(rows
        .rows
        .into_iter()
        .enumerate()
        .map(|(n, counts)| OrbitTable {
            group: coeffs.group.clone(),
            n,
            counts,
        })
        .collect())
}

/// `A(G,n,k) = (n!/k!) * sum over compositions n_1+...+n_k = n of prod a_{n_i}/n_i`,
/// evaluated with exact rationals.
pub fn polymer_oracle(coeffs: &CoeffTable, n: usize, k: usize) -> Result<BigInt> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("polymer oracle needs 1 <= k <= n, got n={n}, k={k}")));
    }
    if n > POLYMER_MAX_N {
        return Err(Error::Domain(format!("polymer oracle is limited to n <= {POLYMER_MAX_N}")));
    }
    if n > coeffs.len() {
        return Err(Error::InsufficientCoefficients {
            needed: n,
            have: coeffs.len(),
        });
    }
    let activity: Vec<BigRational> = (1..=n)
        .map(|m| BigRational::new(coeffs.get(m).clone(), BigInt::from(m)))
        .collect();
    fn compositions(
        rest: usize,
        parts: usize,
        acc: &BigRational,
        activity: &[BigRational],
        total: &mut BigRational,
    ) {
        if parts == 0 {
            if rest == 0 {
                *total += acc;
            }
            return;
        }
        // each remaining part needs at least 1
        for first in 1..=rest + 1 - parts {
            let next = acc * &activity[first - 1];
            compositions(rest - first, parts - 1, &next, activity, total);
        }
    }
    let mut sum = BigRational::zero();
    compositions(n, k, &BigRational::one(), &activity, &mut sum);
    let value = sum * BigRational::new(factorial(n), factorial(k));
    if !value.is_integer() {
        return Err(Error::NonIntegerPolymer {
            n,
            k,
            value: value.to_string(),
        });
    }
    Ok(value.to_integer())
}

/// `|Hom(G, S_n)| = sum_k A(G,n,k)`.
pub fn hom_count(table: &OrbitTable) -> BigInt {
    table.counts.iter().sum()
}

/// `H_{G,n}(x) = (1/n!) sum_k A(G,n,k) x^k`; exact for rational `x`.
pub fn h_poly_eval(table: &OrbitTable, x: &Scalar) -> Scalar {
    match x {
        Scalar::Exact(r) => {
            let mut acc = BigRational::zero();
            for a in table.counts.iter().rev() {
                acc = acc * r + BigRational::from_integer(a.clone());
            }
            Scalar::Exact(acc / BigRational::from_integer(factorial(table.n)))
        }
        Scalar::Real(v) => Scalar::Real(ln_h_real(table, *v).exp()),
    }
}

/// `ln H_{G,n}(x)` for real `x > 0` by log-sum-exp over the row.
pub fn ln_h_real(table: &OrbitTable, x: f64) -> f64 {
    let lx = x.ln();
    let logs: Vec<f64> = table
        .counts
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| ln_bigint(a) + k as f64 * lx)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    top + s.ln() - ln_factorial(table.n)
}

/// Float view of a row, `None` where an entry overflows `f64`.
pub fn row_f64(table: &OrbitTable) -> Vec<Option<f64>> {
    table
        .counts
        .iter()
        .map(|a| a.to_f64().filter(|v| v.is_finite()))
        .collect()
}
