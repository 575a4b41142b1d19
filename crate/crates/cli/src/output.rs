//! Deterministic CSV tables with `#` metadata lines.

use std::io::Write;

use sha2::{Digest, Sha256};

use crate::CliError;

const SIGNIFICANT: usize = 9;

/// `%.9g`-style formatting: fixed notation for exponents in [−4, 9), scientific
/// otherwise, trailing zeros removed. Independent of locale.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Hash over everything that determines a table: subcommand, resolved parameters and
/// input file contents.
#[derive(Default)]
pub struct Provenance(Sha256);

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Provenance(Sha256::new());
        p.feed(command.as_bytes());
        p
    }

    pub fn feed(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    fn hex(self) -> String {
        self.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub struct Table {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// `#` lines written after the data rows.
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.meta.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write_body(&self, out: &mut Vec<u8>) -> Result<(), CliError> {
        for m in &self.meta {
            writeln!(out, "# {m}").map_err(io)?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        out.extend(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?);
        for m in &self.footer {
            writeln!(out, "# {m}").map_err(io)?;
        }
        Ok(())
    }
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Renders tables in order; the first carries the version and hash lines, later ones are
/// introduced by a `# section` line.
pub fn render(provenance: Provenance, tables: &[(&str, Table)]) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    writeln!(out, "# kpo4 {}", env!("CARGO_PKG_VERSION")).map_err(io)?;
    writeln!(out, "# config_sha256 {}", provenance.hex()).map_err(io)?;
    for (i, (name, t)) in tables.iter().enumerate() {
        if i > 0 {
            writeln!(out, "# section {name}").map_err(io)?;
        }
        t.write_body(&mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(10.0), "10");
        assert_eq!(num(20.000_000_04), "20");
        assert_eq!(num(1.0e-3), "0.001");
        assert_eq!(num(-2.0e-5), "-2e-5");
        assert_eq!(num(1.234_567_891_2e-7), "1.23456789e-7");
        assert_eq!(num(9_999.873_814_729_88), "9999.87381");
        assert_eq!(num(1.0e9), "1e9");
        assert_eq!(num(123_456_789.4), "123456789");
        assert_eq!(num(f64::NAN), "NaN");
    }
}
