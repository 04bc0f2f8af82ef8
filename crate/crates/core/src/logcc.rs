//! Scan of the inequalities `A(n,k)^2 >= A(n,k-1) A(n,k+1)` for `2 <= k <= n-1`,
//! compared exactly.

use serde::Serialize;

use crate::bigmath::to_decimal;
use crate::orbits::OrbitRows;

pub const LOGCC_SCHEMA_VERSION: u32 = 1;

/// One failing `k`, with both sides as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub k: usize,
    /// `A(n,k)^2`.
    pub lhs: String,
    /// `A(n,k-1) A(n,k+1)`.
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogccRow {
    pub n: usize,
    pub comparisons: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogccSummary {
    pub comparisons: usize,
    pub violations: usize,
    pub k2_ever_violates: bool,
    pub any_k_ge3_violates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogccReport {
    pub schema_version: u32,
    pub group: String,
    pub n_min: usize,
    pub n_max: usize,
    pub rows: Vec<LogccRow>,
    pub summary: LogccSummary,
}

/// Checks every row `n_min..=n_max` (capped at the rows available).
pub fn logcc_scan(rows: &OrbitRows, n_min: usize, n_max: usize) -> LogccReport {
    let n_max = n_max.min(rows.n_max());
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let a = rows.row(n).expect("row within range");
        let mut violations = Vec::new();
        let mut comparisons = 0;
        for k in 2..n {
            comparisons += 1;
            let lhs = &a[k] * &a[k];
            let rhs = &a[k - 1] * &a[k + 1];
            if lhs < rhs {
                violations.push(Violation {
                    k,
                    lhs: to_decimal(&lhs),
                    rhs: to_decimal(&rhs),
                });
            }
        }
        out.push(LogccRow {
            n,
            comparisons,
            violations,
        });
    }
    let summary = LogccSummary {
        comparisons: out.iter().map(|r| r.comparisons).sum(),
        violations: out.iter().map(|r| r.violations.len()).sum(),
        k2_ever_violates: out.iter().any(|r| r.violations.iter().any(|v| v.k == 2)),
        any_k_ge3_violates: out.iter().any(|r| r.violations.iter().any(|v| v.k >= 3)),
    };
    LogccReport {
        schema_version: LOGCC_SCHEMA_VERSION,
        group: rows.group.clone(),
        n_min,
        n_max,
        rows: out,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{coeffs, Catalog};
    use num_bigint::BigInt;

    fn rows(name: &str, n: usize) -> OrbitRows {
        let a = coeffs(Catalog::builtin().get(name).unwrap(), n).unwrap();
        let mut r = OrbitRows::new(name);
        r.extend_to(&a, n).unwrap();
        r
    }

    #[test]
    fn stirling_row_four() {
        let rep = logcc_scan(&rows("Z1", 4), 4, 4);
        assert_eq!(rep.rows[0].comparisons, 2);
        assert!(rep.rows[0].violations.is_empty());
    }

    #[test]
    fn short_rows_have_no_comparisons() {
        let rep = logcc_scan(&rows("Z2", 2), 0, 2);
        assert_eq!(rep.summary.comparisons, 0);
        assert!(!rep.summary.k2_ever_violates && !rep.summary.any_k_ge3_violates);
    }

    #[test]
    fn z2_scan_counts_every_comparison() {
        let rep = logcc_scan(&rows("Z2", 60), 1, 60);
        let expected: usize = (1..=60usize).map(|n| n.saturating_sub(2)).sum();
        assert_eq!(rep.summary.comparisons, expected);
        for r in &rep.rows {
            for v in &r.violations {
                let (l, rr): (BigInt, BigInt) = (v.lhs.parse().unwrap(), v.rhs.parse().unwrap());
                assert!(l < rr);
            }
        }
    }

    #[test]
    fn violations_carry_witnesses() {
        // a row that is not log-concave at k = 2: 1, 1, 5
        let bad = OrbitRows::from_rows(
            "toy",
            vec![
                vec![1.into()],
                vec![0.into(), 1.into()],
                vec![0.into(), 1.into(), 1.into()],
                vec![0.into(), 1.into(), 1.into(), 5.into()],
            ],
        );
        let rep = logcc_scan(&bad, 3, 3);
        assert_eq!(
            rep.rows[0].violations,
            vec![Violation { k: 2, lhs: "1".into(), rhs: "5".into() }]
        );
        assert!(rep.summary.k2_ever_violates && !rep.summary.any_k_ge3_violates);
    }
}
