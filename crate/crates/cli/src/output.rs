use std::io::Write;

use serde::Serialize;

use crate::{Cli, Failure, Format, Outcome};

/// CSV with a header row; `columns` is written when `rows` is empty.
pub fn csv<T: Serialize>(rows: &[T], columns: &[&str]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(columns)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Failure::Csv(csv::Error::from(e.into_error())))
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Renders CSV rows or a JSON document depending on `--format`.
pub fn render<T: Serialize, J: Serialize>(
    format: Format,
    rows: &[T],
    columns: &[&str],
    doc: &J,
) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Csv => csv(rows, columns),
        Format::Json => json(doc),
    }
}

/// Writes the outcome to `--out` or standard output; returns whether a
/// verification failed.
pub fn emit(cli: &Cli, outcome: Outcome) -> Result<bool, Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.bytes).map_err(|source| Failure::Write {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&outcome.bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Failure::Write {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(outcome.failed)
}
