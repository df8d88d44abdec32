//! Serialization of exact results.
//!
//! Rationals go to JSON as `{"num": "...", "den": "..."}` with decimal
//! strings, and to CSV as fraction strings such as `5/4`. Nothing exact is
//! ever written as a float.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{domain, Result};

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &q.numer().to_string())?;
    st.serialize_field("den", &q.denom().to_string())?;
    st.end()
}

pub fn ser_opt_rational<S: Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_rational(q, s),
        None => s.serialize_none(),
    }
}

pub fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rational_json(q: &BigRational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    let part = |key: &str| -> Result<BigInt> {
        let s = v
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| domain(format!("rational field `{key}` missing")))?;
        BigInt::from_str(s).map_err(|e| domain(format!("bad integer `{s}`: {e}")))
    };
    let den = part("den")?;
    if den == BigInt::from(0) {
        return Err(domain("zero denominator"));
    }
    Ok(BigRational::new(part("num")?, den))
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn fraction_string(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_fraction(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| domain(format!("bad fraction `{s}`: {e}")))
}

/// Output format for report streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A row type that knows its CSV header and cells.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// Writes line-delimited JSON or RFC-4180 CSV.
pub fn write_rows<R: Serialize + CsvRow, W: std::io::Write>(rows: &[R], format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in rows {
                let line = serde_json::to_string(r).map_err(|e| domain(e.to_string()))?;
                writeln!(out, "{line}").map_err(|e| domain(e.to_string()))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::header()).map_err(|e| domain(e.to_string()))?;
            for r in rows {
                w.write_record(r.cells()).map_err(|e| domain(e.to_string()))?;
            }
            w.flush().map_err(|e| domain(e.to_string()))?;
        }
    }
    Ok(())
}
