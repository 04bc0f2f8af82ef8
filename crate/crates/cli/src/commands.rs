use serde::Serialize;

use subgrowth::asymptotics::{
    clt_scan, lambda_explicit, predicted_mean, predicted_variance, refined_center_scale,
    saddle_factorization_check, saddle_params, with_certified_coeffs,
};
use subgrowth::groups::coeffs;
use subgrowth::logcc::logcc_scan;
use subgrowth::measure::{pmf, MeasureReport};
use subgrowth::verify::{run_suite, VerifyOptions, SUITES};
use subgrowth::{Catalog, GroupSpec, OrbitCache, OrbitRows, OrbitTable, Scalar, ScanRow, SingularData};

use crate::output::{csv, json, render};
use crate::{Cli, Command, Failure, Format, Outcome};

/// Largest coefficient listing `coeffs` will produce.
const MAX_LISTING: usize = 10_000_000;
/// Default row limit for `logcc`.
const LOGCC_DEFAULT_MAX: usize = 60;
/// Smallest coefficient table used for the analytic quantities.
const MIN_NUMERIC_LEN: usize = 1024;

pub fn run(command: Command, cli: &Cli) -> Result<Outcome, Failure> {
    check_tolerances(cli)?;
    let catalog = match &cli.catalog {
        Some(path) => Catalog::load(path)?,
        None => Catalog::builtin(),
    };
    let ok = |bytes| Ok(Outcome { bytes, failed: false });
    match command {
        Command::Coeffs => ok(cmd_coeffs(cli, &catalog)?),
        Command::OrbitTable => ok(cmd_orbit_table(cli, &catalog)?),
        Command::Moments => ok(cmd_moments(cli, &catalog)?),
        Command::Predict => ok(cmd_predict(cli, &catalog)?),
        Command::CltScan => ok(cmd_clt_scan(cli, &catalog)?),
        Command::SaddleCheck => ok(cmd_saddle_check(cli, &catalog)?),
        Command::Logcc => ok(cmd_logcc(cli, &catalog)?),
        Command::Verify => cmd_verify(cli, &catalog),
    }
}

fn check_tolerances(cli: &Cli) -> Result<(), Failure> {
    for (name, v) in [("--tol", cli.tol), ("--quad-tol", cli.quad_tol)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Failure::Usage(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    Ok(())
}

fn group<'c>(cli: &Cli, catalog: &'c Catalog) -> Result<&'c GroupSpec, Failure> {
    let name = cli
        .group
        .as_deref()
        .ok_or_else(|| Failure::Usage("--group is required".into()))?;
    Ok(catalog.get(name)?)
}

fn need_n(cli: &Cli) -> Result<usize, Failure> {
    cli.n.ok_or_else(|| Failure::Usage("--n is required".into()))
}

fn x_value(cli: &Cli) -> Result<Scalar, Failure> {
    Ok(cli.x.parse::<Scalar>()?.positive()?)
}

fn n_grid(cli: &Cli) -> Result<Vec<usize>, Failure> {
    let Some(text) = &cli.n_grid else {
        return Ok(cli.n.into_iter().collect());
    };
    let grid = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("--n-grid entry `{s}` is not a nonnegative integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Failure::Usage("--n-grid must be nondecreasing".into()));
    }
    Ok(grid)
}

/// Orbit rows `0..=n_max`, through the cache when `--cache-dir` is set.
fn orbit_rows(cli: &Cli, spec: &GroupSpec, n_max: usize) -> Result<OrbitRows, Failure> {
    let a = coeffs(spec, n_max.max(1))?;
    match &cli.cache_dir {
        Some(dir) => {
            let cache = OrbitCache::new(dir);
            let (rows, status) = cache.rows(&a, n_max)?;
            let status = serde_json::to_value(status)?;
            eprintln!(
                "cache {}: {}",
                cache.path_for(&spec.name).display(),
                status.as_str().unwrap_or("?")
            );
            Ok(rows)
        }
        None => {
            let mut rows = OrbitRows::new(spec.name.clone());
            rows.extend_to(&a, n_max)?;
            Ok(rows)
        }
    }
}

fn row_at(rows: &OrbitRows, n: usize) -> Result<OrbitTable, Failure> {
    rows.table(n)
        .ok_or_else(|| Failure::Usage(format!("no orbit row for n={n}")))
}

#[derive(Serialize)]
struct CoeffRow {
    n: usize,
    a_n: String,
}

#[derive(Serialize)]
struct CoeffDoc<'a> {
    group: &'a str,
    max_n: usize,
    rows: &'a [CoeffRow],
}

fn cmd_coeffs(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let max_n = cli
        .max_n
        .or(cli.n)
        .ok_or_else(|| Failure::Usage("--max-n is required".into()))?;
    if max_n > MAX_LISTING {
        return Err(Failure::Usage(format!(
            "--max-n {max_n} exceeds the listing limit {MAX_LISTING}"
        )));
    }
    let rows: Vec<CoeffRow> = if max_n == 0 {
        Vec::new()
    } else {
        let table = coeffs(spec, max_n)?;
        (1..=max_n)
            .map(|n| CoeffRow {
                n,
                a_n: table.get(n).to_string(),
            })
            .collect()
    };
    let doc = CoeffDoc {
        group: &spec.name,
        max_n,
        rows: &rows,
    };
    render(cli.format, &rows, &["n", "a_n"], &doc)
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    k: usize,
    count: String,
}

#[derive(Serialize)]
struct RowDoc {
    n: usize,
    counts: Vec<String>,
}

#[derive(Serialize)]
struct OrbitDoc<'a> {
    group: &'a str,
    rows: Vec<RowDoc>,
}

fn cmd_orbit_table(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let (lo, hi) = match (cli.n, cli.max_n) {
        (Some(n), _) => (n, n),
        (None, Some(m)) => (0, m),
        (None, None) => return Err(Failure::Usage("--n or --max-n is required".into())),
    };
    let rows = orbit_rows(cli, spec, hi)?;
    let mut flat = Vec::new();
    let mut docs = Vec::new();
    for n in lo..=hi {
        let counts: Vec<String> = row_at(&rows, n)?.counts().iter().map(|c| c.to_string()).collect();
        flat.extend(counts.iter().enumerate().map(|(k, c)| CountRow {
            n,
            k,
            count: c.clone(),
        }));
        docs.push(RowDoc { n, counts });
    }
    let doc = OrbitDoc {
        group: &spec.name,
        rows: docs,
    };
    render(cli.format, &flat, &["n", "k", "count"], &doc)
}

fn cmd_moments(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let n = need_n(cli)?;
    let x = x_value(cli)?;
    let rows = orbit_rows(cli, spec, n)?;
    let law = pmf(&row_at(&rows, n)?, &x)?;
    let mut report = MeasureReport::new(&law)?;
    if cli.samples > 0 {
        report = report.with_sample(&law, cli.samples, cli.seed.unwrap_or(0));
    }
    render(cli.format, std::slice::from_ref(&report), &[], &report)
}

#[derive(Serialize)]
struct PredictRow {
    group: String,
    n: usize,
    x: String,
    alpha: f64,
    m: u32,
    gamma: f64,
    #[serde(rename = "K")]
    k: f64,
    predicted_mean: f64,
    predicted_var: f64,
    refined_a_n: f64,
    b_n: f64,
    t_n: f64,
    lambda_n: f64,
    lambda_explicit: f64,
    tol: f64,
    quad_tol: f64,
    coeff_len: usize,
    terms: usize,
}

fn cmd_predict(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let n = need_n(cli)?;
    let x = x_value(cli)?;
    let xf = x.to_f64();
    let sing = SingularData::from_spec(spec);
    let ((center, saddle), table) = with_certified_coeffs(spec, n.max(MIN_NUMERIC_LEN), |c| {
        let center = refined_center_scale(c, &sing, n, xf, cli.tol)?;
        Ok((center, saddle_params(c, n, xf, cli.tol, cli.quad_tol)?))
    })?;
    let row = PredictRow {
        group: spec.name.clone(),
        n,
        x: x.to_string(),
        alpha: sing.alpha,
        m: sing.m,
        gamma: sing.gamma,
        k: sing.k,
        predicted_mean: predicted_mean(&sing, n, xf)?,
        predicted_var: predicted_variance(&sing, n, xf)?,
        refined_a_n: center.0,
        b_n: center.1,
        t_n: saddle.t_n,
        lambda_n: saddle.lambda_n,
        lambda_explicit: lambda_explicit(&sing, n, xf),
        tol: cli.tol,
        quad_tol: cli.quad_tol,
        coeff_len: table.len(),
        terms: saddle.terms,
    };
    render(cli.format, std::slice::from_ref(&row), &[], &row)
}

fn cmd_clt_scan(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let grid = n_grid(cli)?;
    let x = x_value(cli)?;
    let scan: Vec<ScanRow> = match grid.last() {
        None => Vec::new(),
        Some(&n_max) => {
            if let Some(&bad) = grid.iter().find(|&&n| n < 2) {
                return Err(Failure::Usage(format!("scan points need n >= 2, got {bad}")));
            }
            let rows = orbit_rows(cli, spec, n_max)?;
            let sing = SingularData::from_spec(spec);
            with_certified_coeffs(spec, n_max.max(MIN_NUMERIC_LEN), |c| {
                clt_scan(c, &sing, &rows, &grid, &x, cli.tol, cli.quad_tol)
            })?
            .0
        }
    };
    render(cli.format, &scan, &ScanRow::COLUMNS, &scan)
}

#[derive(Serialize)]
struct SaddleRow {
    group: String,
    n: usize,
    x: String,
    log_h_exact: f64,
    log_p: f64,
    j: f64,
    rel_error: f64,
    t_n: f64,
    lambda_n: f64,
    tol: f64,
    quad_tol: f64,
    coeff_len: usize,
    terms: usize,
    nodes: usize,
}

fn cmd_saddle_check(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let n = need_n(cli)?;
    if n == 0 {
        return Err(Failure::Usage("saddle-check needs n >= 1".into()));
    }
    let x = x_value(cli)?;
    let table = row_at(&orbit_rows(cli, spec, n)?, n)?;
    let (check, coeff_table) = with_certified_coeffs(spec, n.max(MIN_NUMERIC_LEN), |c| {
        saddle_factorization_check(c, &table, &x, cli.tol, cli.quad_tol)
    })?;
    let row = SaddleRow {
        group: spec.name.clone(),
        n,
        x: x.to_string(),
        log_h_exact: check.log_h_exact,
        log_p: check.log_p,
        j: check.j,
        rel_error: check.rel_error,
        t_n: check.params.t_n,
        lambda_n: check.params.lambda_n,
        tol: cli.tol,
        quad_tol: cli.quad_tol,
        coeff_len: coeff_table.len(),
        terms: check.params.terms,
        nodes: check.params.nodes,
    };
    render(cli.format, std::slice::from_ref(&row), &[], &row)
}

#[derive(Serialize)]
struct LogccCsvRow {
    n: usize,
    comparisons: usize,
    violations: usize,
    /// Violating `k`, space separated.
    violating_k: String,
}

fn cmd_logcc(cli: &Cli, catalog: &Catalog) -> Result<Vec<u8>, Failure> {
    let spec = group(cli, catalog)?;
    let (lo, hi) = match cli.n {
        Some(n) => (n, n),
        None => (1, cli.max_n.unwrap_or(LOGCC_DEFAULT_MAX)),
    };
    let rows = orbit_rows(cli, spec, hi)?;
    let report = logcc_scan(&rows, lo, hi);
    match cli.format {
        Format::Json => json(&report),
        Format::Csv => {
            let flat: Vec<LogccCsvRow> = report
                .rows
                .iter()
                .map(|r| LogccCsvRow {
                    n: r.n,
                    comparisons: r.comparisons,
                    violations: r.violations.len(),
                    violating_k: r
                        .violations
                        .iter()
                        .map(|v| v.k.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                })
                .collect();
            csv(&flat, &["n", "comparisons", "violations", "violating_k"])
        }
    }
}

#[derive(Serialize)]
struct SuiteRow {
    suite: String,
    passed: bool,
    checks: usize,
    counterexample: String,
    notes: String,
}

fn cmd_verify(cli: &Cli, catalog: &Catalog) -> Result<Outcome, Failure> {
    let names: Vec<String> = match &cli.suite {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        None => SUITES.iter().map(|s| s.to_string()).collect(),
    };
    if let Some(bad) = names.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Failure::Usage(format!(
            "unknown suite `{bad}` (expected one of {})",
            SUITES.join(", ")
        )));
    }
    let opts = VerifyOptions {
        brute_n: cli.n.unwrap_or(VerifyOptions::default().brute_n),
        cache_dir: cli.cache_dir.clone(),
    };
    let results = names
        .iter()
        .map(|name| run_suite(name, catalog, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &results {
        eprintln!(
            "{} {} ({} checks){}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.checks,
            r.counterexample
                .as_deref()
                .map(|c| format!(": {c}"))
                .unwrap_or_default()
        );
    }
    let flat: Vec<SuiteRow> = results
        .iter()
        .map(|r| SuiteRow {
            suite: r.name.clone(),
            passed: r.passed,
            checks: r.checks,
            counterexample: r.counterexample.clone().unwrap_or_default(),
            notes: r.notes.join("; "),
        })
        .collect();
    let bytes = render(
        cli.format,
        &flat,
        &["suite", "passed", "checks", "counterexample", "notes"],
        &results,
    )?;
    Ok(Outcome {
        bytes,
        failed: results.iter().any(|r| !r.passed),
    })
}
