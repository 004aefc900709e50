//! Triangle export and import.
//!
//! Triangles are emitted lower-triangular with rows padded by empty cells
//! (CSV) or as nested arrays (JSON). Rationals are always canonical `p/q`
//! strings; symbolic entries are coefficient lists in the deformation
//! parameter, lowest degree first, e.g. `3 - 3*L` prints as `[3, -3]`.
//! Every emitted table re-parses to a value that compares equal to the
//! original, and the parsers are total: malformed input yields an error,
//! never a panic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda_poly::LambdaPoly;
use crate::rational::{format_rat, parse_rat, Rat};
use crate::stirling::{StirlingTriangle, SymStirlingTriangle};

/// Fixed rational parameter or fully symbolic entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaSpec {
    Symbolic,
    Fixed(Rat),
}

impl LambdaSpec {
    fn render(&self) -> String {
        match self {
            LambdaSpec::Symbolic => "symbolic".to_string(),
            LambdaSpec::Fixed(l) => format_rat(l),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        if s == "symbolic" {
            Ok(LambdaSpec::Symbolic)
        } else {
            Ok(LambdaSpec::Fixed(parse_rat(s)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangleEntries {
    Eval(Vec<Vec<Rat>>),
    Sym(Vec<Vec<LambdaPoly>>),
}

/// A materialized (r-)Stirling triangle ready for serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleTable {
    pub r: u32,
    pub lambda: LambdaSpec,
    pub entries: TriangleEntries,
}

impl TriangleTable {
    /// Triangle at a fixed rational parameter, rows `0..=nmax`.
    pub fn evaluated(r: u32, lambda: Rat, nmax: u32) -> Self {
        let mut tri = StirlingTriangle::with_r(r, lambda.clone());
        let rows = (0..=nmax).map(|n| tri.row(n).to_vec()).collect();
        Self {
            r,
            lambda: LambdaSpec::Fixed(lambda),
            entries: TriangleEntries::Eval(rows),
        }
    }

    /// Symbolic triangle, rows `0..=nmax`.
    pub fn symbolic(r: u32, nmax: u32) -> Self {
        let mut tri = SymStirlingTriangle::with_r(r);
        let rows = (0..=nmax).map(|n| tri.row(n).to_vec()).collect();
        Self {
            r,
            lambda: LambdaSpec::Symbolic,
            entries: TriangleEntries::Sym(rows),
        }
    }

    pub fn nmax(&self) -> u32 {
        let rows = match &self.entries {
            TriangleEntries::Eval(rows) => rows.len(),
            TriangleEntries::Sym(rows) => rows.len(),
        };
        rows.saturating_sub(1) as u32
    }

    fn cell(&self, n: usize, k: usize) -> String {
        match &self.entries {
            TriangleEntries::Eval(rows) => format_rat(&rows[n][k]),
            TriangleEntries::Sym(rows) => render_poly(&rows[n][k]),
        }
    }

    pub fn to_csv(&self) -> String {
        let nmax = self.nmax() as usize;
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        w.write_record(["r", &self.r.to_string()])
            .expect("vec sink");
        w.write_record(["lambda", &self.lambda.render()])
            .expect("vec sink");
        let mut header = vec!["n".to_string()];
        header.extend((0..=nmax).map(|k| format!("k={k}")));
        w.write_record(&header).expect("vec sink");
        for n in 0..=nmax {
            let mut record = vec![n.to_string()];
            record.extend((0..=n).map(|k| self.cell(n, k)));
            record.extend((n + 1..=nmax).map(|_| String::new()));
            w.write_record(&record).expect("vec sink");
        }
        String::from_utf8(w.into_inner().expect("vec sink")).expect("utf8 cells")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut records = Vec::new();
        for record in reader.records() {
            records.push(record.map_err(|e| Error::Table(e.to_string()))?);
        }
        if records.len() < 3 {
            return Err(Error::Table("expected metadata, header, and rows".into()));
        }
        let field = |rec: &csv::StringRecord, i: usize| -> Result<String> {
            rec.get(i)
                .map(str::to_string)
                .ok_or_else(|| Error::Table("short record".into()))
        };
        if field(&records[0], 0)? != "r" || field(&records[1], 0)? != "lambda" {
            return Err(Error::Table("missing r/lambda metadata".into()));
        }
        let r: u32 = field(&records[0], 1)?
            .parse()
            .map_err(|_| Error::Table("bad r".into()))?;
        let lambda = LambdaSpec::parse(&field(&records[1], 1)?)?;
        let data = &records[3..];
        let nmax = data
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Table("no rows".into()))?;
        let mut eval_rows = Vec::new();
        let mut sym_rows = Vec::new();
        for (n, rec) in data.iter().enumerate() {
            if field(rec, 0)?.parse::<usize>() != Ok(n) {
                return Err(Error::Table(format!("row {n} has a bad index")));
            }
            if rec.len() != nmax + 2 {
                return Err(Error::Table(format!("row {n} has a bad cell count")));
            }
            for k in n + 1..=nmax {
                if !field(rec, k + 1)?.is_empty() {
                    return Err(Error::Table(format!("row {n} has data past the diagonal")));
                }
            }
            match lambda {
                LambdaSpec::Fixed(_) => {
                    let row: Result<Vec<Rat>> =
                        (0..=n).map(|k| parse_rat(&field(rec, k + 1)?)).collect();
                    eval_rows.push(row?);
                }
                LambdaSpec::Symbolic => {
                    let row: Result<Vec<LambdaPoly>> =
                        (0..=n).map(|k| parse_poly(&field(rec, k + 1)?)).collect();
                    sym_rows.push(row?);
                }
            }
        }
        let entries = match lambda {
            LambdaSpec::Fixed(_) => TriangleEntries::Eval(eval_rows),
            LambdaSpec::Symbolic => TriangleEntries::Sym(sym_rows),
        };
        Ok(Self { r, lambda, entries })
    }

    pub fn to_json(&self) -> String {
        let nmax = self.nmax() as usize;
        let rows = (0..=nmax)
            .map(|n| {
                (0..=n)
                    .map(|k| match &self.entries {
                        TriangleEntries::Eval(rows) => JsonEntry::Scalar(format_rat(&rows[n][k])),
                        TriangleEntries::Sym(rows) => {
                            JsonEntry::Coeffs(rows[n][k].coeffs().iter().map(format_rat).collect())
                        }
                    })
                    .collect()
            })
            .collect();
        let doc = JsonTable {
            r: self.r,
            lambda: self.lambda.render(),
            nmax: nmax as u32,
            rows,
        };
        serde_json::to_string_pretty(&doc).expect("static schema")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonTable = serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))?;
        let lambda = LambdaSpec::parse(&doc.lambda)?;
        if doc.rows.len() != doc.nmax as usize + 1 {
            return Err(Error::Table("row count does not match nmax".into()));
        }
        let mut eval_rows = Vec::new();
        let mut sym_rows = Vec::new();
        for (n, row) in doc.rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::Table(format!("row {n} has a bad entry count")));
            }
            match lambda {
                LambdaSpec::Fixed(_) => {
                    let parsed: Result<Vec<Rat>> = row
                        .iter()
                        .map(|e| match e {
                            JsonEntry::Scalar(s) => parse_rat(s),
                            JsonEntry::Coeffs(_) => {
                                Err(Error::Table("coefficient list in evaluated table".into()))
                            }
                        })
                        .collect();
                    eval_rows.push(parsed?);
                }
                LambdaSpec::Symbolic => {
                    let parsed: Result<Vec<LambdaPoly>> = row
                        .iter()
                        .map(|e| match e {
                            JsonEntry::Coeffs(cs) => {
                                let coeffs: Result<Vec<Rat>> =
                                    cs.iter().map(|s| parse_rat(s)).collect();
                                Ok(LambdaPoly::from_coeffs(coeffs?))
                            }
                            JsonEntry::Scalar(_) => {
                                Err(Error::Table("scalar in symbolic table".into()))
                            }
                        })
                        .collect();
                    sym_rows.push(parsed?);
                }
            }
        }
        let entries = match lambda {
            LambdaSpec::Fixed(_) => TriangleEntries::Eval(eval_rows),
            LambdaSpec::Symbolic => TriangleEntries::Sym(sym_rows),
        };
        Ok(Self {
            r: doc.r,
            lambda,
            entries,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    r: u32,
    lambda: String,
    nmax: u32,
    rows: Vec<Vec<JsonEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonEntry {
    Scalar(String),
    Coeffs(Vec<String>),
}

/// `[c0, c1, ...]`, lowest degree first; the zero polynomial is `[]`.
fn render_poly(p: &LambdaPoly) -> String {
    let inner: Vec<String> = p.coeffs().iter().map(format_rat).collect();
    format!("[{}]", inner.join(", "))
}

fn parse_poly(s: &str) -> Result<LambdaPoly> {
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| Error::Table(format!("expected a [..] coefficient list, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(LambdaPoly::zero());
    }
    let coeffs: Result<Vec<Rat>> = inner.split(',').map(parse_rat).collect();
    Ok(LambdaPoly::from_coeffs(coeffs?))
}
