//! CSV tables with a provenance header.
//!
//! Every file starts with
//!
//! ```text
//! # ratecorr <subcommand>
//! # seed: <seed or none>
//! # config: <resolved config as one line of JSON>
//! ```
//!
//! followed by optional `#` notes, the column line and the records.

use std::fmt::Write as _;

/// One CSV file's worth of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File name used when a subcommand writes several tables into a directory.
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, header: &Header) -> String {
        let mut s = header.render();
        for note in &self.notes {
            writeln!(s, "# {note}").unwrap();
        }
        writeln!(s, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }
}

/// Subcommand, seed and config needed to regenerate a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    pub seed: Option<u64>,
    pub config: String,
}

const COMMAND: &str = "# ratecorr ";
const SEED: &str = "# seed: ";
const CONFIG: &str = "# config: ";

impl Header {
    pub fn render(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!("{COMMAND}{}\n{SEED}{seed}\n{CONFIG}{}\n", self.command, self.config)
    }

    /// Reads the header back from the start of a CSV file.
    pub fn parse(text: &str) -> Option<Header> {
        let mut lines = text.lines();
        let command = lines.next()?.strip_prefix(COMMAND)?.to_string();
        let seed = lines.next()?.strip_prefix(SEED)?;
        let seed = if seed == "none" { None } else { Some(seed.parse().ok()?) };
        let config = lines.next()?.strip_prefix(CONFIG)?.to_string();
        Some(Header { command, seed, config })
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn int(x: usize) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_round_trip() {
        let h = Header { command: "simulate".into(), seed: Some(7), config: r#"{"a":1}"#.into() };
        let mut t = Table::new("x.csv", &["t", "v"]);
        t.notes.push("note".into());
        t.push(vec![num(0.1), num(2.0)]);
        let text = t.render(&h);
        assert_eq!(Header::parse(&text), Some(h));
        assert!(text.ends_with("# note\nt,v\n0.1,2\n"));
        let none = Header { seed: None, ..Header::parse(&text).unwrap() };
        assert_eq!(Header::parse(&none.render()), Some(none));
    }

    proptest! {
        #[test]
        fn numbers_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn special_values() {
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(1e-7), "1e-7");
        assert_eq!(num(-0.0), "-0");
    }
}
