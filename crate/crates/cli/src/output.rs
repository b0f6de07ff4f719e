use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Reals in CSV output: 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// Row of the summary table shared by radius, index and min-degree runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub k: usize,
    pub norm: String,
    pub estimate: f64,
    pub certified: bool,
    pub seed: u64,
    pub witness_angle: Option<f64>,
}

pub const TABLE_HEADER: [&str; 6] = ["k", "norm", "estimate", "certified", "seed", "witness_angle"];

/// CSV text of `rows` under `header`; an empty row set gives the header only.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn emit_table(rows: &[TableRow]) -> Result<String, CliError> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.norm.clone(),
                real(r.estimate),
                r.certified.to_string(),
                r.seed.to_string(),
                opt_real(r.witness_angle),
            ]
        })
        .collect();
    csv_text(&TABLE_HEADER, &body)
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a C,
    result: &'a R,
}

pub fn json_text<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Result<String, CliError> {
    let env = Envelope {
        schema: 1,
        command,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Write to `path` through a temporary file in the same directory and a
/// rename, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).map_err(io)?;
        return out.flush().map_err(io);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}
