//! Reports: named tables of values, written as CSV (6 decimals) or JSON
//! (full precision) with a provenance header.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use infolab::{tables, tolerance, StageReport};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::args::{Format, OutputArgs};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Num(f64),
    Int(u64),
    Bool(bool),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as u64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Text(t) => s.serialize_str(t),
            Value::Num(x) => s.serialize_f64(*x),
            Value::Int(i) => s.serialize_u64(*i),
            Value::Bool(b) => s.serialize_bool(*b),
        }
    }
}

/// Round half away from zero to six decimals; negative zero prints as zero.
pub fn fixed6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = (x * 1e6).round() / 1e6;
    format!("{:.6}", if r == 0.0 { 0.0 } else { r })
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
        Value::Text(t) => t.clone(),
        Value::Num(x) => fixed6(*x),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Section {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

struct RowRef<'a>(&'a [String], &'a [Value]);

impl Serialize for RowRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct SectionRows<'a>(&'a Section);

impl Serialize for SectionRows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&RowRef(&self.0.columns, row))?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub threads: u64,
    pub tolerances: BTreeMap<&'static str, f64>,
}

impl Provenance {
    pub fn new(command: impl Into<String>, output: &OutputArgs) -> Self {
        Self {
            tool: "oracle-infolab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed: output.seed,
            threads: output.threads,
            tolerances: BTreeMap::from([
                ("eigen_floor", tolerance::EIGEN_FLOOR),
                ("clamp", tolerance::CLAMP),
                ("discord_agreement", tolerance::DISCORD_AGREEMENT),
                ("orthogonal_overlap", tolerance::ORTHOGONAL_OVERLAP),
                ("commutator", tolerance::COMMUTATOR),
                ("table_printed", tables::PRINTED_TOLERANCE),
                ("table_analytic", tables::ANALYTIC_TOLERANCE),
            ]),
        }
    }

    fn csv_header(&self) -> String {
        let mut out = format!(
            "# {} {} command={} seed={} threads={}\n# tolerances:",
            self.tool, self.version, self.command, self.seed, self.threads
        );
        for (name, value) in &self.tolerances {
            let _ = write!(out, " {name}={value:e}");
        }
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    /// File name stem under `--out`.
    pub stem: String,
    pub provenance: Provenance,
    pub sections: Vec<Section>,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1 + self.sections.len()))?;
        map.serialize_entry("provenance", &self.provenance)?;
        for section in &self.sections {
            map.serialize_entry(&section.name, &SectionRows(section))?;
        }
        map.end()
    }
}

impl Report {
    pub fn new(stem: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            stem: stem.into(),
            provenance,
            sections: Vec::new(),
        }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One CSV document per section, each with the provenance header.
    pub fn csv(&self) -> Vec<(String, String)> {
        let single = self.sections.len() == 1;
        self.sections
            .iter()
            .map(|sec| {
                let file = if single {
                    format!("{}.csv", self.stem)
                } else {
                    format!("{}-{}.csv", self.stem, sec.name)
                };
                (
                    file,
                    format!("{}{}", self.provenance.csv_header(), sec.to_csv()),
                )
            })
            .collect()
    }

    pub fn emit(&self, output: &OutputArgs) -> Result<(), CliError> {
        match &output.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|source| io_error(dir, source))?;
                if output.format != Some(Format::Json) {
                    for (file, body) in self.csv() {
                        write_file(&dir.join(file), &body)?;
                    }
                }
                if output.format != Some(Format::Csv) {
                    write_file(&dir.join(format!("{}.json", self.stem)), &self.json())?;
                }
            }
            None => match output.format.unwrap_or(Format::Csv) {
                Format::Json => print!("{}", self.json()),
                Format::Csv => {
                    let docs = self.csv();
                    for (i, (file, body)) in docs.iter().enumerate() {
                        if docs.len() > 1 {
                            if i > 0 {
                                println!();
                            }
                            println!("# section: {}", file.trim_end_matches(".csv"));
                        }
                        print!("{body}");
                    }
                }
            },
        }
        Ok(())
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| io_error(path, source))
}

pub const STAGE_COLUMNS: [&str; 13] = [
    "stage",
    "H(Y)",
    "S(rho_Y)",
    "C",
    "H(Y|J)",
    "chi",
    "I(J;Y)",
    "D_Y",
    "irrealism",
    "lower_bound",
    "upper_bound",
    "p_success",
    "digest",
];

pub fn stage_section(reports: &[StageReport]) -> Section {
    let mut sec = Section::new("stages", &STAGE_COLUMNS);
    for r in reports {
        let m = &r.metrics;
        sec.push(vec![
            r.stage.as_str().into(),
            m.h_y.into(),
            m.s_rho_y.into(),
            m.coherence.into(),
            m.h_y_given_j.into(),
            m.chi.into(),
            m.mutual_information.into(),
            m.discord.into(),
            m.irrealism.into(),
            m.lower_bound.into(),
            m.upper_bound.into(),
            r.p_success.into(),
            r.ensemble_digest.clone().into(),
        ]);
    }
    sec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn output(format: Option<Format>) -> OutputArgs {
        OutputArgs {
            format,
            out: None,
            seed: 7,
            threads: 1,
        }
    }

    #[test]
    fn six_decimal_rounding() {
        assert_eq!(fixed6(1.0), "1.000000");
        assert_eq!(fixed6(0.1234565), "0.123457");
        assert_eq!(fixed6(-1e-9), "0.000000");
        assert_eq!(fixed6(-0.0), "0.000000");
        assert_eq!(fixed6(2.5e-7), "0.000000");
        assert_eq!(fixed6(-0.5), "-0.500000");
    }

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let mut report = Report::new("x", Provenance::new("test", &output(None)));
        let mut sec = Section::new("rows", &["label", "value", "count", "ok"]);
        sec.push(vec![
            "a,b".into(),
            0.123456789.into(),
            3usize.into(),
            true.into(),
        ]);
        report.sections.push(sec);
        let csv = &report.csv()[0].1;
        assert!(csv.starts_with("# oracle-infolab"));
        assert!(csv.ends_with("label,value,count,ok\n\"a,b\",0.123457,3,true\n"));
        let json: serde_json::Value = serde_json::from_str(&report.json()).unwrap();
        let row = &json["rows"][0];
        assert_eq!(row["value"].as_f64().unwrap(), 0.123456789);
        assert_eq!(fixed6(row["value"].as_f64().unwrap()), "0.123457");
        assert_eq!(json["provenance"]["seed"], 7);
    }

    #[test]
    fn multi_section_csv_names() {
        let mut report = Report::new(
            "opt",
            Provenance::new("optimize", &output(Some(Format::Csv))),
        );
        report.sections.push(Section::new("summary", &["a"]));
        report.sections.push(Section::new("basis", &["a"]));
        let names: Vec<String> = report.csv().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["opt-summary.csv", "opt-basis.csv"]);
    }
}
