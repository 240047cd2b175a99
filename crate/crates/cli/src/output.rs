//! CSV emission. Every file starts with one `#` comment line holding the
//! tool version, schema version, unit conventions and the resolved config,
//! and is written to a temporary file that is renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{CliError, Config, VERSION};

/// Bumped whenever a column is added, removed or reinterpreted.
pub const SCHEMA_VERSION: u32 = 1;

pub const UNITS: &str = "config frequencies in kHz, omega = 2*pi*f*1e3 rad/s; \
energies in rad/s (hbar = 1); times in s; rates and powers in 1/s and rad/s^2";

/// Scientific notation with 15 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// Empty field for undefined quantities.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn header_line(command: &str, cfg: &Config) -> String {
    format!(
        "# otto-cli {VERSION} schema={SCHEMA_VERSION} command={command}; units: {UNITS}; config: {}",
        cfg.one_line()
    )
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self, header: &str) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        write!(buf, "{header}\r\n")?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(&mut buf);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        drop(w);
        Ok(buf)
    }
}

/// Writes `bytes` to `dir/name` via a sibling temp file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).map_err(|e| CliError::Io(e.error))?;
    Ok(target)
}

pub fn write_table(
    dir: &Path,
    name: &str,
    header: &str,
    table: &Table,
) -> Result<PathBuf, CliError> {
    write_atomic(dir, name, &table.to_bytes(header)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_keeps_fifteen_digits() {
        assert_eq!(num(1.0), "1.00000000000000e0");
        assert_eq!(num(-2.5e-7), "-2.50000000000000e-7");
        let x = std::f64::consts::PI;
        let back: f64 = num(x).parse().unwrap();
        assert!((back - x).abs() < 1e-14);
        assert_eq!(opt(None), "");
    }

    #[test]
    fn table_bytes_and_atomic_write() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.0), "x,y".into()]);
        let bytes = t.to_bytes("# h").unwrap();
        assert_eq!(
            String::from_utf8(bytes.clone()).unwrap(),
            "# h\r\na,b\r\n1.00000000000000e0,\"x,y\"\r\n"
        );
        let dir = tempfile::tempdir().unwrap();
        let p = write_atomic(dir.path(), "t.csv", &bytes).unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), bytes);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn header_is_one_line() {
        let h = header_line("cycle", &Config::default());
        assert!(h.starts_with("# otto-cli "));
        assert!(!h.contains('\n'));
    }
}
