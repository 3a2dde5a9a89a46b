//! Output documents and their csv / json / plain renderings.
//!
//! Every number leaves the program as a decimal string: integers in full,
//! rationals as `p/q` with an optional rounded decimal alongside.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use hyperbell::exact::Rat;
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    BellTable,
    StirlingTable,
    Census,
    VerifyReport,
    AsymptoticReport,
    EgfDump,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::BellTable => "bell-table",
            Kind::StirlingTable => "stirling-table",
            Kind::Census => "census",
            Kind::VerifyReport => "verify-report",
            Kind::AsymptoticReport => "asymptotic-report",
            Kind::EgfDump => "egf-dump",
        }
    }
}

/// A titled grid of string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    pub fn new(columns: Vec<String>) -> Section {
        Section {
            title: None,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: &str) -> Section {
        self.title = Some(title.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct OutputDocument {
    pub kind: Kind,
    pub parameters: Vec<(String, String)>,
    pub sections: Vec<Section>,
    /// Structured form used by the json rendering.
    pub payload: Value,
}

impl OutputDocument {
    pub fn new(kind: Kind, parameters: Vec<(&str, String)>) -> OutputDocument {
        OutputDocument {
            kind,
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            sections: Vec::new(),
            payload: Value::Null,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Plain => self.render_plain(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let titled = self.sections.len() > 1;
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if let (true, Some(t)) = (titled, &s.title) {
                let _ = writeln!(out, "# {t}");
            }
            let _ = writeln!(out, "{}", csv_line(&s.columns));
            for row in &s.rows {
                let _ = writeln!(out, "{}", csv_line(row));
            }
        }
        out
    }

    fn render_plain(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if let Some(t) = &s.title {
                let _ = writeln!(out, "{t}");
            }
            let widths: Vec<usize> = (0..s.columns.len())
                .map(|c| {
                    s.rows
                        .iter()
                        .map(|r| r[c].len())
                        .chain([s.columns[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", line(&s.columns));
            for row in &s.rows {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let params: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let doc = json!({
            "kind": self.kind.name(),
            "metadata": {
                "generator": "hyperbell",
                "version": env!("CARGO_PKG_VERSION"),
                "parameters": params,
                "timestamp": timestamp(),
            },
            "payload": self.payload,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> String {
    if let Ok(v) = std::env::var("SOURCE_DATE_EPOCH") {
        return v;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".into())
}

/// `p/q`, or just `p` for integers.
pub fn exact(r: &Rat) -> String {
    r.to_string()
}

/// `r` rounded half away from zero to `digits` significant digits, in plain
/// positional notation.
pub fn decimal(r: &Rat, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".into();
    }
    let negative = r.is_negative();
    let abs = r.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e: i64 = abs.to_integer().to_string().len() as i64 - 1;
    if abs < Rat::from_integer(BigInt::from(1)) {
        e = -1;
        let mut scaled = abs.clone() * &ten;
        while scaled < Rat::from_integer(BigInt::from(1)) {
            scaled *= &ten;
            e -= 1;
        }
    }
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        abs * Rat::from_integer(ten.pow(shift as u32))
    } else {
        abs / Rat::from_integer(ten.pow((-shift) as u32))
    };
    let half = Rat::new(BigInt::from(1), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if mantissa.to_string().len() > digits {
        mantissa /= &ten;
        shift -= 1;
    }
    let text = mantissa.to_string();
    let body = if shift <= 0 {
        format!("{text}{}", "0".repeat((-shift) as usize))
    } else {
        let shift = shift as usize;
        if text.len() > shift {
            let (int, frac) = text.split_at(text.len() - shift);
            format!("{int}.{frac}")
        } else {
            format!("0.{}{text}", "0".repeat(shift - text.len()))
        }
    };
    match (negative, mantissa.sign()) {
        (true, Sign::Plus) => format!("-{body}"),
        _ => body,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperbell::exact::rat;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rat(53172305, 49314926), 6), "1.07822");
        assert_eq!(decimal(&rat(12485, 7556), 6), "1.65233");
        assert_eq!(decimal(&rat(1, 1), 6), "1.00000");
        assert_eq!(decimal(&rat(0, 1), 6), "0");
        assert_eq!(decimal(&rat(1, 3), 3), "0.333");
        assert_eq!(decimal(&rat(2, 3), 3), "0.667");
        assert_eq!(decimal(&rat(1, 800), 2), "0.0013");
        assert_eq!(decimal(&rat(1234567, 1), 3), "1230000");
        assert_eq!(decimal(&rat(9999, 10000), 2), "1.0");
        assert_eq!(decimal(&rat(-5, 4), 2), "-1.3");
        assert_eq!(decimal(&rat(995, 1), 2), "1000");
    }

    #[test]
    fn exact_rendering_reparses() {
        for r in [rat(53172305, 49314926), rat(12, 1), rat(-7, 3)] {
            assert_eq!(exact(&r).parse::<Rat>().unwrap(), r);
        }
    }

    #[test]
    fn csv_and_plain_layout() {
        let mut doc = OutputDocument::new(Kind::BellTable, vec![("n_max", "2".into())]);
        let mut s = Section::new(vec!["m".into(), "1".into(), "2".into()]);
        s.push(vec!["1".into(), "1".into(), "2".into()]);
        s.push(vec!["2".into(), "1".into(), "3".into()]);
        doc.sections.push(s);
        assert_eq!(doc.render(Format::Csv), "m,1,2\n1,1,2\n2,1,3\n");
        assert_eq!(doc.render(Format::Plain), "m  1  2\n1  1  2\n2  1  3\n");
        let json: Value = serde_json::from_str(&doc.render(Format::Json)).unwrap();
        assert_eq!(json["kind"], "bell-table");
        assert_eq!(json["metadata"]["parameters"]["n_max"], "2");
    }

    #[test]
    fn csv_quotes_when_needed() {
        assert_eq!(csv_line(&["a,b".into(), "c".into()]), "\"a,b\",c");
    }
}
