//! Output records for the command-line front end.
//!
//! Counts are always decimal strings in JSON. CSV has a fixed header and
//! packs the ragged `a_t` list into one semicolon-joined field.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::stats::{ExactRational, StatRow};

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "a_t",
    "c",
    "E",
    "O",
    "T",
    "L",
    "F",
    "late_exists",
    "avg_num",
    "avg_den",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Numeric,
    Oracle,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Numeric => "numeric",
            Engine::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputMeta {
    pub k: u32,
    pub ell: u32,
    pub engine: Engine,
    pub version: String,
}

impl OutputMeta {
    pub fn new(k: u32, ell: u32, engine: Engine) -> Self {
        Self {
            k,
            ell,
            engine,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub meta: OutputMeta,
    pub rows: Vec<StatRow>,
}

impl OutputRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record(csv_fields(r)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Rows back from CSV produced by [`OutputRecord::to_csv`].
    pub fn rows_from_csv(s: &str) -> Result<Vec<StatRow>, String> {
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        let header = rd.headers().map_err(|e| e.to_string())?;
        if header.iter().ne(CSV_HEADER) {
            return Err(format!("unexpected header {header:?}"));
        }
        rd.records()
            .map(|rec| {
                let rec = rec.map_err(|e| e.to_string())?;
                parse_csv_row(&rec)
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let m = &self.meta;
        let mut out = format!(
            "# k={} ell={} engine={} version={}\n",
            m.k,
            m.ell,
            m.engine.as_str(),
            m.version
        );
        let cells: Vec<Vec<String>> = std::iter::once(CSV_HEADER.map(String::from).to_vec())
            .chain(self.rows.iter().map(|r| {
                csv_fields(r)
                    .into_iter()
                    .map(|s| if s.is_empty() { "-".into() } else { s })
                    .collect()
            }))
            .collect();
        let widths: Vec<usize> = (0..CSV_HEADER.len())
            .map(|i| cells.iter().map(|row| row[i].len()).max().unwrap_or(0))
            .collect();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map(BigInt::to_string).unwrap_or_default()
}

fn csv_fields(r: &StatRow) -> Vec<String> {
    let a: Vec<String> = r.a.iter().map(BigInt::to_string).collect();
    vec![
        r.n.to_string(),
        a.join(";"),
        r.c.to_string(),
        opt(&r.even),
        opt(&r.odd),
        r.total.to_string(),
        r.late.to_string(),
        r.first_at.to_string(),
        r.late_exists.to_string(),
        r.avg.as_ref().map(|q| q.numer().to_string()).unwrap_or_default(),
        r.avg.as_ref().map(|q| q.denom().to_string()).unwrap_or_default(),
    ]
}

fn parse_csv_row(rec: &csv::StringRecord) -> Result<StatRow, String> {
    let field = |i: usize| rec.get(i).ok_or_else(|| format!("missing column {i}"));
    let int = |i: usize| -> Result<BigInt, String> {
        let s = field(i)?;
        BigInt::from_str(s).map_err(|e| format!("column {}: {e}", CSV_HEADER[i]))
    };
    let opt_int = |i: usize| -> Result<Option<BigInt>, String> {
        if field(i)?.is_empty() {
            Ok(None)
        } else {
            int(i).map(Some)
        }
    };
    let a_field = field(1)?;
    let a = if a_field.is_empty() {
        vec![]
    } else {
        a_field
            .split(';')
            .map(|s| BigInt::from_str(s).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?
    };
    let avg = match (opt_int(9)?, opt_int(10)?) {
        (Some(n), Some(d)) => Some(ExactRational::new(n, d)),
        _ => None,
    };
    Ok(StatRow {
        n: field(0)?.parse().map_err(|e| format!("column n: {e}"))?,
        a,
        c: int(2)?,
        even: opt_int(3)?,
        odd: opt_int(4)?,
        total: int(5)?,
        late: int(6)?,
        first_at: int(7)?,
        late_exists: int(8)?,
        avg,
    })
}

pub mod decimal {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(D::Error::custom)
    }
}

pub mod decimal_opt {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| BigInt::from_str(&s).map_err(D::Error::custom))
            .transpose()
    }
}

pub mod decimal_vec {
    use super::*;
    use serde::{de::Error, ser::SerializeSeq, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| BigInt::from_str(s).map_err(D::Error::custom))
            .collect()
    }
}

/// `{"num": "...", "den": "..."}` or `null`.
pub mod ratio_opt {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(v: &Option<ExactRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_some(&Repr {
                num: q.numer().to_string(),
                den: q.denom().to_string(),
            }),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ExactRational>, D::Error> {
        Option::<Repr>::deserialize(d)?
            .map(|r| {
                let num = BigInt::from_str(&r.num).map_err(D::Error::custom)?;
                let den = BigInt::from_str(&r.den).map_err(D::Error::custom)?;
                if den == BigInt::from(0) {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(ExactRational::new(num, den))
            })
            .transpose()
    }
}
