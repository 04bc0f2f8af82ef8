//! Oracle-equivalence suites: every check compares two independent routes to
//! the same exact integers.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{
    brute_force_census, census_to_a_n, coeffs, divisor_sums, hermite_eisenstein, Catalog,
};
use crate::measure::{exact_moments, pmf};
use crate::orbits::{orbit_tables, polymer_oracle, OrbitCache, OrbitRows};
use crate::scalar::Scalar;

/// Suite names in their default run order.
pub const SUITES: [&str; 5] = ["hermite", "brute", "polymer", "stirling", "cache"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checks: usize,
    /// First mismatch, if any.
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

struct Tally {
    checks: usize,
    counterexample: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    fn check<T: PartialEq + std::fmt::Display>(&mut self, what: impl FnOnce() -> String, left: &T, right: &T) {
        self.checks += 1;
        if left != right && self.counterexample.is_none() {
            self.counterexample = Some(format!("{}: {left} != {right}", what()));
        }
    }

    fn finish(self, name: &str) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            passed: self.counterexample.is_none(),
            checks: self.checks,
            counterexample: self.counterexample,
            notes: self.notes,
        }
    }
}

/// Options shared by the suites.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest `n` for the brute-force census.
    pub brute_n: usize,
    /// Directory for the cache suite; a per-process temporary directory if `None`.
    pub cache_dir: Option<std::path::PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            brute_n: 5,
            cache_dir: None,
        }
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, catalog: &Catalog, opts: &VerifyOptions) -> Result<SuiteResult> {
    match name {
        "hermite" => hermite(catalog),
        "brute" => brute(catalog, opts.brute_n),
        "polymer" => polymer(catalog),
        "stirling" => stirling(catalog),
        "cache" => match &opts.cache_dir {
            Some(dir) => cache(catalog, dir),
            None => {
                let dir = std::env::temp_dir().join(format!("subgrowth-verify-{}", std::process::id()));
                let out = cache(catalog, &dir);
                let _ = std::fs::remove_dir_all(&dir);
                out
            }
        },
        other => Err(Error::Domain(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// Zeta-product coefficients against Hermite-Eisenstein sums and the divisor sieve.
fn hermite(catalog: &Catalog) -> Result<SuiteResult> {
    let mut t = Tally::new();
    const N: usize = 2000;
    for rank in 1..=4u32 {
        let name = format!("Z{rank}");
        let via_zeta = coeffs(catalog.get(&name)?, N)?;
        let direct = hermite_eisenstein(rank, N)?;
        for n in 1..=N {
            t.check(|| format!("{name} a_{n}"), via_zeta.get(n), direct.get(n));
        }
    }
    const SIGMA_N: usize = 10_000;
    let z2 = coeffs(catalog.get("Z2")?, SIGMA_N)?;
    for (i, s) in divisor_sums(SIGMA_N).iter().enumerate() {
        t.check(|| format!("Z2 a_{} vs sigma", i + 1), z2.get(i + 1), s);
    }
    Ok(t.finish("hermite"))
}

/// Census over `S_n` against orbit rows and coefficients.
fn brute(catalog: &Catalog, n_max: usize) -> Result<SuiteResult> {
    let mut t = Tally::new();
    for name in ["Z2", "Z3", "heis"] {
        let spec = catalog.get(name)?;
        let a = coeffs(spec, n_max.max(1))?;
        let rows = orbit_tables(&a, n_max)?;
        for n in 1..=n_max {
            let census = brute_force_census(spec, n)?;
            t.check(|| format!("{name} n={n} a_n"), &census_to_a_n(&census)?, a.get(n));
            for k in 0..=n {
                let from_census = census.orbit_histogram.get(&k).cloned().unwrap_or_default();
                t.check(|| format!("{name} A({n},{k})"), &rows[n].get(k), &from_census);
            }
        }
    }
    Ok(t.finish("brute"))
}

/// Composition sums against the recurrence.
fn polymer(catalog: &Catalog) -> Result<SuiteResult> {
    let mut t = Tally::new();
    const N: usize = 8;
    for name in ["Z2", "Z3", "heis"] {
        let a = coeffs(catalog.get(name)?, N)?;
        let rows = orbit_tables(&a, N)?;
        for n in 1..=N {
            for k in 1..=n {
                t.check(|| format!("{name} A({n},{k})"), &polymer_oracle(&a, n, k)?, &rows[n].get(k));
            }
        }
    }
    Ok(t.finish("polymer"))
}

/// Orbit rows of `Z` against the two-term Stirling recurrence, and the mean
/// at `x = 1` against the harmonic numbers.
fn stirling(catalog: &Catalog) -> Result<SuiteResult> {
    let mut t = Tally::new();
    const N: usize = 30;
    let rows = orbit_tables(&coeffs(catalog.get("Z1")?, N)?, N)?;
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    let mut harmonic = BigRational::zero();
    for n in 1..=N {
        let mut next = vec![BigInt::zero(); n + 1];
        for k in 1..=n {
            next[k] = c[k - 1].clone() + c.get(k).cloned().unwrap_or_default() * (n - 1);
        }
        c = next;
        for k in 0..=n {
            t.check(|| format!("c({n},{k})"), &rows[n].get(k), &c[k]);
        }
        harmonic += BigRational::new(BigInt::one(), BigInt::from(n));
        let mean = exact_moments(&pmf(&rows[n], &Scalar::one())?).mean;
        t.check(|| format!("mean at n={n}"), &mean, &Scalar::Exact(harmonic.clone()));
    }
    Ok(t.finish("stirling"))
}

/// Rows read through the cache (repairing a damaged file if needed) against a
/// fresh computation.
fn cache(catalog: &Catalog, dir: &Path) -> Result<SuiteResult> {
    let mut t = Tally::new();
    const N: usize = 30;
    let cache = OrbitCache::new(dir);
    for name in ["Z2", "heis"] {
        let a = coeffs(catalog.get(name)?, N)?;
        let (cached, status) = cache.rows(&a, N)?;
        t.notes.push(format!("{name}: {}", serde_json::to_value(status)?.as_str().unwrap_or("?")));
        let (again, second) = cache.rows(&a, N)?;
        t.check(|| format!("{name} reload status"), &format!("{second:?}"), &"Hit".to_string());
        let mut fresh = OrbitRows::new(name);
        fresh.extend_to(&a, N)?;
        for n in 0..=N {
            for (label, rows) in [("first read", &cached), ("reload", &again)] {
                let (got, want) = (rows.table(n), fresh.table(n));
                t.check(
                    || format!("{name} row {n} ({label})"),
                    &format!("{:?}", got.map(|r| r.counts().to_vec())),
                    &format!("{:?}", want.map(|r| r.counts().to_vec())),
                );
            }
        }
    }
    Ok(t.finish("cache"))
}
