//! Plot-ready tables with a provenance header, rendered as CSV or JSON.
//!
//! CSV files open with `#` comment lines: the command, unit notes, and the
//! resolved config as TOML between `# --- config ---` markers. JSON files carry
//! the same information as fields. Either form can be fed back to `rerun`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::{ExperimentConfig, Format};
use super::CliError;

const CONFIG_BEGIN: &str = "# --- config ---";
const CONFIG_END: &str = "# --- end config ---";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // shortest representation that parses back to the same f64
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    /// Free-form header lines: units, summary statistics.
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Table {
            command: command.to_string(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    program: &'static str,
    command: &'a str,
    notes: &'a [String],
    config: &'a ExperimentConfig,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
}

pub fn render(table: &Table, config: &ExperimentConfig, format: Format) -> Result<Vec<u8>, CliError> {
    let provenance = config.provenance();
    match format {
        Format::Csv => render_csv(table, &provenance),
        Format::Json => {
            let doc = JsonDocument {
                program: env!("CARGO_PKG_NAME"),
                command: &table.command,
                notes: &table.notes,
                config: &provenance,
                columns: &table.columns,
                rows: &table.rows,
            };
            let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Other(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

fn render_csv(table: &Table, config: &ExperimentConfig) -> Result<Vec<u8>, CliError> {
    let mut head = String::new();
    head.push_str(&format!("# {}\n", env!("CARGO_PKG_NAME")));
    head.push_str(&format!("# command: {}\n", table.command));
    for n in &table.notes {
        head.push_str(&format!("# {n}\n"));
    }
    head.push_str(CONFIG_BEGIN);
    head.push('\n');
    for line in config.to_toml()?.lines() {
        if line.is_empty() {
            head.push_str("#\n");
        } else {
            head.push_str(&format!("# {line}\n"));
        }
    }
    head.push_str(CONFIG_END);
    head.push('\n');

    let mut w = csv::Writer::from_writer(head.into_bytes());
    let io = |e: csv::Error| CliError::Other(e.to_string());
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Other(e.to_string()))
}

/// Command and config recovered from a previously written file.
pub fn parse_header(text: &str) -> Result<(String, ExperimentConfig), CliError> {
    if text.trim_start().starts_with('{') {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("not a valid output file: {e}")))?;
        let command = doc
            .get("command")
            .and_then(|c| c.as_str())
            .ok_or_else(|| CliError::Config("output file has no command field".into()))?
            .to_string();
        let config = doc
            .get("config")
            .cloned()
            .ok_or_else(|| CliError::Config("output file has no config field".into()))?;
        let config: ExperimentConfig =
            serde_json::from_value(config).map_err(|e| CliError::Config(format!("embedded config: {e}")))?;
        return Ok((command, config));
    }
    let mut command = None;
    let mut toml_text = String::new();
    let mut inside = false;
    let mut closed = false;
    for line in text.lines() {
        if !line.starts_with('#') {
            break;
        }
        if line == CONFIG_BEGIN {
            inside = true;
        } else if line == CONFIG_END {
            closed = true;
            break;
        } else if inside {
            let body = line.strip_prefix('#').unwrap_or(line);
            toml_text.push_str(body.strip_prefix(' ').unwrap_or(body));
            toml_text.push('\n');
        } else if let Some(c) = line.strip_prefix("# command: ") {
            command = Some(c.trim().to_string());
        }
    }
    let command = command.ok_or_else(|| CliError::Config("output file has no `# command:` header line".into()))?;
    if !closed {
        return Err(CliError::Config("output file has no complete embedded config block".into()));
    }
    Ok((command, ExperimentConfig::from_toml(&toml_text)?))
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Table, ExperimentConfig) {
        let mut t = Table::new("spectrum", &["index", "quasienergy", "label"]);
        t.note("units: quasienergy in rad per unit time");
        t.push(vec![0usize.into(), (-0.1f64).into(), "a,b".into()]);
        t.push(vec![1usize.into(), (1.0 / 3.0f64).into(), "c".into()]);
        let mut c = ExperimentConfig::default();
        c.lattice.n_x = 2;
        c.output.path = Some("somewhere.csv".into());
        (t, c)
    }

    #[test]
    fn csv_header_round_trips() {
        let (t, c) = sample();
        let bytes = render(&t, &c, Format::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"a,b\""));
        assert!(text.contains("0.3333333333333333"));
        let (cmd, parsed) = parse_header(&text).unwrap();
        assert_eq!(cmd, "spectrum");
        assert_eq!(parsed, c.provenance());
    }

    #[test]
    fn json_header_round_trips() {
        let (t, c) = sample();
        let text = String::from_utf8(render(&t, &c, Format::Json).unwrap()).unwrap();
        let (cmd, parsed) = parse_header(&text).unwrap();
        assert_eq!(cmd, "spectrum");
        assert_eq!(parsed, c.provenance());
    }

    #[test]
    fn headerless_file_is_rejected() {
        assert!(parse_header("index,quasienergy\n0,1\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
