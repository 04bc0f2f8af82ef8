//! Brute-force enumeration of `Hom(G, S_n)` from a presentation.
//!
//! Permutations are index arrays; a homomorphism is the tuple of generator
//! images. Orbits of the generated action come from a disjoint-set union over
//! the generator images.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{GroupSpec, Presentation};
use crate::bigmath::factorial;
use crate::error::{Error, Result};

/// Upper bound on the raw tuple space `(n!)^generators` the census will attempt.
pub const MAX_ENUMERATION: f64 = 2e9;

/// Counts over `Hom(G, S_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCensus {
    pub n: usize,
    /// `|Hom(G, S_n)|`.
    pub total: BigInt,
    /// Transitive actions, `|T_n(G)|`.
    pub transitive: BigInt,
    /// Number of homomorphisms with `k` orbits, keyed by `k`.
    pub orbit_histogram: BTreeMap<usize, BigInt>,
}

type Perm = Vec<u8>;

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn commute(a: &[u8], b: &[u8]) -> bool {
    a.iter()
        .zip(b)
        .all(|(&ai, &bi)| a[bi as usize] == b[ai as usize])
}

fn inverse(p: &[u8]) -> Perm {
    let mut inv = vec![0u8; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

/// Number of orbits of the group generated by `gens` on `{0..n-1}`.
fn orbit_count(n: usize, gens: &[&[u8]]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut orbits = n;
    for g in gens {
        for (i, &gi) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, gi as usize));
            if a != b {
                parent[a] = b;
                orbits -= 1;
            }
        }
    }
    orbits
}

struct Tally {
    counts: Vec<u64>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            counts: vec![0; n + 1],
        }
    }

    fn record(&mut self, n: usize, gens: &[&[u8]]) {
        self.counts[orbit_count(n, gens)] += 1;
    }

    fn finish(self, n: usize) -> HomCensus {
        let orbit_histogram: BTreeMap<usize, BigInt> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k, BigInt::from(c)))
            .collect();
        HomCensus {
            n,
            total: orbit_histogram.values().sum(),
            transitive: orbit_histogram.get(&1).cloned().unwrap_or_default(),
            orbit_histogram,
        }
    }
}

fn commuting_tuples(n: usize, rank: usize, perms: &[Perm], tally: &mut Tally) {
    fn rec<'a>(
        n: usize,
        rank: usize,
        candidates: &[&'a Perm],
        chosen: &mut Vec<&'a [u8]>,
        tally: &mut Tally,
    ) {
        if chosen.len() == rank {
            tally.record(n, chosen);
            return;
        }
        for &p in candidates {
            let next: Vec<&Perm> = candidates
                .iter()
                .copied()
                .filter(|q| commute(p, q))
                .collect();
            chosen.push(p);
            rec(n, rank, &next, chosen, tally);
            chosen.pop();
        }
    }
    let all: Vec<&Perm> = perms.iter().collect();
    rec(n, rank, &all, &mut Vec::with_capacity(rank), tally);
}

fn heisenberg_pairs(n: usize, perms: &[Perm], tally: &mut Tally) {
    let inverses: Vec<Perm> = perms.iter().map(|p| inverse(p)).collect();
    let mut comm = vec![0u8; n];
    for (s, s_inv) in perms.iter().zip(&inverses) {
        for (t, t_inv) in perms.iter().zip(&inverses) {
            // [s, t] = s^-1 t^-1 s t, composed right to left
            for (i, c) in comm.iter_mut().enumerate() {
                *c = s_inv[t_inv[s[t[i] as usize] as usize] as usize];
            }
            if commute(&comm, s) && commute(&comm, t) {
                tally.record(n, &[s, t]);
            }
        }
    }
}

/// Enumerates `Hom(G, S_n)` through generator images satisfying the relations.
pub fn brute_force_census(spec: &GroupSpec, n: usize) -> Result<HomCensus> {
    if n == 0 {
        return Err(Error::Domain("census needs n >= 1".into()));
    }
    let generators = match spec.presentation {
        Presentation::InfiniteCyclic => 1,
        Presentation::FreeAbelian(r) => r as usize,
        Presentation::Heisenberg => 2,
    };
    let size = (1..=n).map(|k| k as f64).product::<f64>().powi(generators as i32);
    if size > MAX_ENUMERATION || n > u8::MAX as usize {
        return Err(Error::EnumerationTooLarge {
            n,
            size,
            limit: MAX_ENUMERATION,
        });
    }
    let perms = all_perms(n);
    let mut tally = Tally::new(n);
    match spec.presentation {
        Presentation::InfiniteCyclic => commuting_tuples(n, 1, &perms, &mut tally),
        Presentation::FreeAbelian(r) => commuting_tuples(n, r as usize, &perms, &mut tally),
        Presentation::Heisenberg => heisenberg_pairs(n, &perms, &mut tally),
    }
    Ok(tally.finish(n))
}

/// `a_n(G) = |T_n(G)| / (n-1)!`.
pub fn census_to_a_n(census: &HomCensus) -> Result<BigInt> {
    let fact = factorial(census.n.saturating_sub(1));
    let (q, r) = census.transitive.div_rem(&fact);
    if !r.is_zero() {
        return Err(Error::NotDivisible {
            n: census.n,
            transitive: census.transitive.clone(),
        });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{coeffs, Catalog};

    fn hist(pairs: &[(usize, i64)]) -> BTreeMap<usize, BigInt> {
        pairs.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    #[test]
    fn z2_at_two() {
        let c = Catalog::builtin();
        let census = brute_force_census(c.get("Z2").unwrap(), 2).unwrap();
        assert_eq!(census.total, BigInt::from(4));
        assert_eq!(census.transitive, BigInt::from(3));
        assert_eq!(census.orbit_histogram, hist(&[(1, 3), (2, 1)]));
        assert_eq!(census_to_a_n(&census).unwrap(), BigInt::from(3));
    }

    #[test]
    fn cyclic_at_four_is_cycle_type_count() {
        let c = Catalog::builtin();
        let census = brute_force_census(c.get("Z1").unwrap(), 4).unwrap();
        assert_eq!(census.orbit_histogram, hist(&[(1, 6), (2, 11), (3, 6), (4, 1)]));
        assert_eq!(census_to_a_n(&census).unwrap(), BigInt::from(1));
    }

    #[test]
    fn trivial_symmetric_group() {
        for spec in Catalog::builtin().groups() {
            let census = brute_force_census(spec, 1).unwrap();
            assert_eq!(census.total, BigInt::from(1));
            assert_eq!(census.transitive, BigInt::from(1));
            assert_eq!(census_to_a_n(&census).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn heisenberg_small_cases() {
        let c = Catalog::builtin();
        let h = c.get("heis").unwrap();
        // S_2 is abelian: every pair satisfies the relations
        assert_eq!(brute_force_census(h, 2).unwrap().total, BigInt::from(4));
        let t = coeffs(h, 4).unwrap();
        for n in 1..=4 {
            let census = brute_force_census(h, n).unwrap();
            assert_eq!(&census_to_a_n(&census).unwrap(), t.get(n), "n={n}");
            assert_eq!(census.orbit_histogram.get(&n), Some(&BigInt::from(1)));
        }
    }

    #[test]
    fn guards() {
        let c = Catalog::builtin();
        assert!(matches!(
            brute_force_census(c.get("Z4").unwrap(), 8),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert!(brute_force_census(c.get("Z2").unwrap(), 0).is_err());
        let odd = HomCensus {
            n: 3,
            total: BigInt::from(5),
            transitive: BigInt::from(3),
            orbit_histogram: BTreeMap::new(),
        };
        assert!(matches!(census_to_a_n(&odd), Err(Error::NotDivisible { .. })));
    }
}
