use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

/// Formats like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const P: i32 = 12;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn fmt_bool(b: bool) -> String {
    b.to_string()
}

/// The tabular result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the resolved configuration and overrides.
    pub inputs_digest: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Whether each row is certified (or passed, for checks).
    pub certifications: Vec<bool>,
}

impl RunReport {
    pub fn new(command: &str, resolved: &str, header: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            inputs_digest: hex::encode(Sha256::digest(resolved.as_bytes())),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            certifications: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>, certified: bool) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
        self.certifications.push(certified);
    }

    pub fn success(&self) -> bool {
        self.certifications.iter().all(|&c| c)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# inputs-sha256: {}\n", self.inputs_digest));
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes the CSV to `path` through a temporary file in the same
    /// directory, so readers never see a partial report.
    pub fn write_atomic(&self, path: &Path) -> std::io::Result<()> {
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or_else(|| Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_csv().as_bytes())?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
