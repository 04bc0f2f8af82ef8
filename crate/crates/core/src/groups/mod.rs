//! Group records, subgroup-growth coefficient tables, and independent oracles.

mod catalog;
mod census;

pub use catalog::{Catalog, CATALOG_VERSION};
pub use census::{brute_force_census, census_to_a_n, HomCensus, MAX_ENUMERATION};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};

use crate::asymptotics::zeta_real;
use crate::bigmath::ratio_to_f64;
use crate::dirichlet::{dirichlet_inverse, dirichlet_mul, product_of_factors, IntSeq, ZetaFactor};
use crate::error::{Error, Result};

/// Presentation used by the brute-force census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// `Z^rank`: commuting `rank`-tuples of permutations.
    FreeAbelian(u32),
    /// `Heis(Z)`: pairs whose commutator is central in the pair.
    Heisenberg,
    /// `Z`: single permutations.
    InfiniteCyclic,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::FreeAbelian(r) => write!(f, "free-abelian:{r}"),
            Presentation::Heisenberg => f.write_str("heisenberg"),
            Presentation::InfiniteCyclic => f.write_str("infinite-cyclic"),
        }
    }
}

impl std::str::FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(Presentation::Heisenberg),
            "infinite-cyclic" => Ok(Presentation::InfiniteCyclic),
            _ => s
                .strip_prefix("free-abelian:")
                .and_then(|r| r.parse::<u32>().ok())
                .filter(|&r| r >= 1)
                .map(Presentation::FreeAbelian)
                .ok_or_else(|| Error::Catalog(format!("unknown presentation tag `{s}`"))),
        }
    }
}

/// `rational * prod zeta(arg)^exp` with integer arguments `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaExpr {
    pub rational: BigRational,
    pub zeta_factors: Vec<(u32, i32)>,
}

impl GammaExpr {
    pub fn new(rational: BigRational, zeta_factors: Vec<(u32, i32)>) -> Result<Self> {
        if !rational.is_positive() {
            return Err(Error::Catalog(format!("gamma rational factor must be positive, got {rational}")));
        }
        if let Some(&(arg, _)) = zeta_factors.iter().find(|(arg, _)| *arg < 2) {
            return Err(Error::Catalog(format!("gamma uses zeta({arg}); arguments must be >= 2")));
        }
        Ok(GammaExpr {
            rational,
            zeta_factors,
        })
    }

    /// Numeric value, zeta evaluated to near machine precision.
    pub fn value(&self) -> f64 {
        self.zeta_factors
            .iter()
            .fold(ratio_to_f64(&self.rational), |acc, &(arg, exp)| {
                acc * zeta_real(arg as f64, 1e-16).expect("argument >= 2").powi(exp)
            })
    }

    /// Merges repeated arguments and drops zero exponents, sorted by argument.
    pub fn normalized(&self) -> GammaExpr {
        let mut merged: BTreeMap<u32, i32> = BTreeMap::new();
        for &(arg, exp) in &self.zeta_factors {
            *merged.entry(arg).or_default() += exp;
        }
        GammaExpr {
            rational: self.rational.clone(),
            zeta_factors: merged.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }
}

/// Declarative record for one group of the catalog.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub name: String,
    pub zeta_numer: Vec<ZetaFactor>,
    pub zeta_denom: Vec<ZetaFactor>,
    /// Abscissa of convergence.
    pub alpha: Ratio<i64>,
    /// Order of the pole at `alpha`.
    pub pole_order: u32,
    pub gamma: GammaExpr,
    pub presentation: Presentation,
    pub linear_growth: bool,
    pub hirsch_ab: u32,
}

impl GroupSpec {
    pub fn alpha_f64(&self) -> f64 {
        *self.alpha.numer() as f64 / *self.alpha.denom() as f64
    }

    /// Checks the record invariants and that `(alpha, m, gamma)` agree with the
    /// zeta expression's rightmost pole.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Catalog(format!("group `{}`: {msg}", self.name)));
        if self.zeta_numer.is_empty() {
            return err("numerator has no zeta factors".into());
        }
        if self.pole_order < 1 {
            return err("pole_order must be >= 1".into());
        }
        if self.linear_growth && self.alpha < Ratio::from_integer(2) {
            return err(format!("linear growth requires alpha >= 2, got {}", self.alpha));
        }
        let (alpha, m, gamma) = derive_singular_data(&self.zeta_numer, &self.zeta_denom)
            .map_err(|e| Error::Catalog(format!("group `{}`: {e}", self.name)))?;
        if alpha != self.alpha || m != self.pole_order {
            return err(format!(
                "declared pole (alpha={}, m={}) but the zeta factors give (alpha={alpha}, m={m})",
                self.alpha, self.pole_order
            ));
        }
        if gamma != self.gamma.normalized() {
            return err(format!(
                "declared gamma {:?} but the zeta factors give {:?}",
                self.gamma.normalized(),
                gamma
            ));
        }
        Ok(())
    }
}

/// Rightmost pole `(alpha, m, gamma)` of `prod numer / prod denom`.
///
/// Each numerator factor `zeta(cs - d)` contributes a simple pole at
/// `(d+1)/c` with residue `1/c`; the others are evaluated there. Denominators
/// must be regular and nonzero at `alpha`, i.e. have their own abscissa below it.
pub fn derive_singular_data(
    numer: &[ZetaFactor],
    denom: &[ZetaFactor],
) -> Result<(Ratio<i64>, u32, GammaExpr)> {
    let alpha = numer
        .iter()
        .map(ZetaFactor::abscissa)
        .max()
        .ok_or_else(|| Error::Domain("empty numerator".into()))?;
    let mut rational = BigRational::one();
    let mut zetas = Vec::new();
    let mut m = 0;
    let arg_at = |f: &ZetaFactor| -> Result<u32> {
        let arg = alpha * Ratio::from_integer(f.scale() as i64) - Ratio::from_integer(f.shift() as i64);
        if !arg.is_integer() || arg.to_integer() < 2 {
            return Err(Error::Domain(format!(
                "zeta({}s-{}) at s={alpha} has argument {arg}, not an integer >= 2",
                f.scale(),
                f.shift()
            )));
        }
        Ok(arg.to_integer() as u32)
    };
    for f in numer {
        if f.abscissa() == alpha {
            m += 1;
            rational /= BigRational::from_integer(BigInt::from(f.scale()));
        } else {
            zetas.push((arg_at(f)?, 1));
        }
    }
    for f in denom {
        if f.abscissa() >= alpha {
            return Err(Error::Domain(format!(
                "denominator zeta({}s-{}) is singular at or right of alpha={alpha}",
                f.scale(),
                f.shift()
            )));
        }
        zetas.push((arg_at(f)?, -1));
    }
    let gamma = GammaExpr {
        rational,
        zeta_factors: zetas,
    }
    .normalized();
    Ok((alpha, m, gamma))
}

/// Exact subgroup counts `a_1(G), ..., a_N(G)` with a float view for numerics.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub group: String,
    /// Abscissa `alpha_G`, used by the tail envelope of the series numerics.
    pub alpha: f64,
    values: IntSeq,
    floats: Vec<f64>,
}

impl CoeffTable {
    pub fn new(group: impl Into<String>, alpha: f64, values: IntSeq) -> Self {
        let floats = values
            .values()
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::INFINITY))
            .collect();
        CoeffTable {
            group: group.into(),
            alpha,
            values,
            floats,
        }
    }

    /// Truncation length `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_n(G)`, 1-based.
    pub fn get(&self, n: usize) -> &BigInt {
        self.values.get(n)
    }

    pub fn values(&self) -> &IntSeq {
        &self.values
    }

    /// `a_n(G)` as floats, index 0 holding `a_1`.
    pub fn floats(&self) -> &[f64] {
        &self.floats
    }

    pub fn truncated(&self, len: usize) -> CoeffTable {
        CoeffTable {
            group: self.group.clone(),
            alpha: self.alpha,
            values: self.values.truncated(len),
            floats: self.floats[..len].to_vec(),
        }
    }
}

/// `a_n(G)` for `n <= len` from the zeta expression: numerator product times the
/// Dirichlet inverse of the denominator product.
pub fn coeffs(spec: &GroupSpec, len: usize) -> Result<CoeffTable> {
    if len == 0 {
        return Err(Error::Domain("coefficient table length must be >= 1".into()));
    }
    let numer = product_of_factors(&spec.zeta_numer, len)?;
    let values = if spec.zeta_denom.is_empty() {
        numer
    } else {
        let denom = product_of_factors(&spec.zeta_denom, len)?;
        dirichlet_mul(&numer, &dirichlet_inverse(&denom)?)?
    };
    debug_assert!(values.get(1).is_one());
    debug_assert!(values.values().iter().all(|v| !v.is_negative()));
    Ok(CoeffTable::new(spec.name.clone(), spec.alpha_f64(), values))
}

/// `a_n(Z^l)` by direct enumeration of ordered factorizations
/// `n = d_1 ... d_l` weighted by `d_1^{l-1} d_2^{l-2} ... d_l^0`.
///
/// Shares no code with the Dirichlet-product route.
pub fn hermite_eisenstein(rank: u32, len: usize) -> Result<CoeffTable> {
    if rank == 0 || len == 0 {
        return Err(Error::Domain("hermite_eisenstein needs rank >= 1 and N >= 1".into()));
    }
    let mut divisors: Vec<Vec<usize>> = vec![Vec::new(); len + 1];
    for d in 1..=len {
        for m in (d..=len).step_by(d) {
            divisors[m].push(d);
        }
    }
    fn weighted(rank: u32, n: usize, divisors: &[Vec<usize>]) -> BigInt {
        if rank == 1 {
            return BigInt::one();
        }
        divisors[n]
            .iter()
            .map(|&d| BigInt::from(d).pow(rank - 1) * weighted(rank - 1, n / d, divisors))
            .sum()
    }
    let values: Vec<BigInt> = (1..=len).map(|n| weighted(rank, n, &divisors)).collect();
    Ok(CoeffTable::new(
        format!("Z{rank}"),
        rank as f64,
        IntSeq::new(values)?,
    ))
}

/// Divisor sums `sigma(n)` by a sieve; the `a_n(Z^2)` reference.
pub fn divisor_sums(len: usize) -> Vec<BigInt> {
    let mut out = vec![0u64; len];
    for d in 1..=len {
        for m in (d..=len).step_by(d) {
            out[m - 1] += d as u64;
        }
    }
    out.into_iter().map(BigInt::from).collect()
}
