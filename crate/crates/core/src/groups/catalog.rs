use std::path::Path;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::Deserialize;

use super::{GammaExpr, GroupSpec};
use crate::dirichlet::ZetaFactor;
use crate::error::{Error, Result};

/// Catalog file format version understood by this build.
pub const CATALOG_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../../catalog/groups.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: u32,
    #[serde(default)]
    group: Vec<RawGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    name: String,
    numerator: Vec<[u32; 2]>,
    #[serde(default)]
    denominator: Vec<[u32; 2]>,
    alpha: String,
    pole_order: u32,
    gamma: RawGamma,
    presentation: String,
    linear_growth: bool,
    hirsch_ab: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGamma {
    rational: String,
    #[serde(default)]
    zeta: Vec<(u32, i32)>,
}

/// Validated set of group records.
#[derive(Clone, Debug)]
pub struct Catalog {
    groups: Vec<GroupSpec>,
}

impl Catalog {
    /// The catalog shipped with the crate (Z, Z^2, Z^3, Z^4, Heis(Z)).
    pub fn builtin() -> Catalog {
        Self::from_toml_str(BUILTIN).expect("builtin catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Catalog> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if raw.version != CATALOG_VERSION {
            return Err(Error::Catalog(format!(
                "unsupported catalog version {} (expected {CATALOG_VERSION})",
                raw.version
            )));
        }
        let mut groups: Vec<GroupSpec> = Vec::with_capacity(raw.group.len());
        for g in raw.group {
            let spec = convert(g)?;
            if groups.iter().any(|o| o.name.eq_ignore_ascii_case(&spec.name)) {
                return Err(Error::Catalog(format!("duplicate group `{}`", spec.name)));
            }
            spec.validate()?;
            groups.push(spec);
        }
        Ok(Catalog { groups })
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Result<&GroupSpec> {
        self.groups
            .iter()
            .find(|g| g.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn groups(&self) -> &[GroupSpec] {
        &self.groups
    }
}

fn parse_ratio(s: &str, what: &str) -> Result<BigRational> {
    let bad = || Error::Catalog(format!("cannot parse {what} `{s}` as p/q"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn convert(g: RawGroup) -> Result<GroupSpec> {
    let factors = |list: &[[u32; 2]]| -> Result<Vec<ZetaFactor>> {
        list.iter().map(|&[c, d]| ZetaFactor::new(c, d)).collect()
    };
    let alpha = parse_ratio(&g.alpha, "alpha")?;
    let small = |v: &BigInt| -> Result<i64> {
        i64::try_from(v).map_err(|_| Error::Catalog(format!("alpha `{}` out of range", g.alpha)))
    };
    let alpha = Ratio::new(small(alpha.numer())?, small(alpha.denom())?);
    Ok(GroupSpec {
        zeta_numer: factors(&g.numerator)?,
        zeta_denom: factors(&g.denominator)?,
        alpha,
        pole_order: g.pole_order,
        gamma: GammaExpr::new(parse_ratio(&g.gamma.rational, "gamma")?, g.gamma.zeta)?,
        presentation: g.presentation.parse()?,
        linear_growth: g.linear_growth,
        hirsch_ab: g.hirsch_ab,
        name: g.name,
    })
}
