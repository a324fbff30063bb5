//! JSON and CSV formats for graphs, functions, count series and reports.
//!
//! Exact numbers travel as strings (`"0.25"`, `"1/3"`) so that nothing is
//! rounded on the way through a file; floating-point weights travel as JSON
//! numbers. Zero log-values are written as `null` in JSON and `-inf` in CSV.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::graph::{Graph, Side};
use crate::walks::{CountEntry, CountSeries, NormProfile, SeriesKind};
use crate::weight::{parse_decimal, Weight};

fn format_error(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

/// A terminating decimal when the denominator allows one, otherwise `p/q`.
pub fn rational_to_string(q: &BigRational) -> String {
    let mut denom = q.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return q.numer().to_string();
    }
    let scaled = q.numer() * num_traits::pow(BigInt::from(10), places) / q.denom();
    let digits = scaled.abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = padded.split_at(padded.len() - places);
    let sign = if scaled.is_negative() { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}

pub fn weight_to_json(w: &Weight) -> Value {
    match w {
        Weight::Exact(q) => Value::String(rational_to_string(q)),
        Weight::Real(x) => serde_json::json!(x),
    }
}

pub fn weight_from_json(v: &Value) -> Result<Weight> {
    match v {
        Value::String(s) => Weight::parse(s),
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Format(format!("unrepresentable number {n}")))
            .and_then(|x| Weight::Real(x).validated()),
        other => Err(Error::Format(format!(
            "expected a number or decimal string, got {other}"
        ))),
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<Vec<Side>>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let file = GraphFile {
        vertex_count: g.vertex_count(),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        side: g.sides().map(<[Side]>::to_vec),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text).map_err(format_error)?;
    let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::build(file.vertex_count, &edges, file.side)
}

fn weights_to_json(ws: &[Weight]) -> Value {
    Value::Array(ws.iter().map(weight_to_json).collect())
}

fn weights_from_json(v: Option<&Value>, field: &str) -> Result<Vec<Weight>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::Format(format!("missing array field {field:?}")))?
        .iter()
        .map(weight_from_json)
        .collect()
}

pub fn function_to_json(f: &FunctionSpec) -> String {
    let value = match f {
        FunctionSpec::Dense(ws) => serde_json::json!({"kind": "dense", "values": weights_to_json(ws)}),
        FunctionSpec::Radial(ws) => serde_json::json!({"kind": "radial", "profile": weights_to_json(ws)}),
        FunctionSpec::Geometric(c) => serde_json::json!({"kind": "geometric", "base": weight_to_json(c)}),
        FunctionSpec::Indicator(vs) => serde_json::json!({"kind": "indicator", "vertices": vs}),
    };
    serde_json::to_string_pretty(&value).expect("function serializes")
}

pub fn function_from_json(text: &str) -> Result<FunctionSpec> {
    let v: Value = serde_json::from_str(text).map_err(format_error)?;
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Format("missing \"kind\"".into()))?;
    match kind {
        "dense" => Ok(FunctionSpec::Dense(weights_from_json(v.get("values"), "values")?)),
        "radial" => Ok(FunctionSpec::Radial(weights_from_json(v.get("profile"), "profile")?)),
        "geometric" => {
            let base = v.get("base").ok_or_else(|| Error::Format("missing \"base\"".into()))?;
            Ok(FunctionSpec::Geometric(weight_from_json(base)?))
        }
        "indicator" => {
            let vertices =
                serde_json::from_value(v.get("vertices").cloned().unwrap_or(Value::Null)).map_err(format_error)?;
            Ok(FunctionSpec::Indicator(vertices))
        }
        other => Err(Error::Format(format!("unknown function kind {other:?}"))),
    }
}

fn split_list(body: &str) -> Vec<&str> {
    body.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Command-line shorthand: `geometric:1.2`, `radial:1,0,1/2`, `dense:...`,
/// `indicator:0,4,7`, `delta:3` or `ones`.
pub fn parse_function_shorthand(text: &str) -> Result<FunctionSpec> {
    if text == "ones" {
        return Ok(FunctionSpec::Geometric(Weight::one()));
    }
    let (kind, body) = text
        .split_once(':')
        .ok_or_else(|| Error::Format(format!("function {text:?} is not kind:values")))?;
    let weights = || {
        split_list(body)
            .into_iter()
            .map(Weight::parse)
            .collect::<Result<Vec<_>>>()
    };
    let vertices = || {
        split_list(body)
            .into_iter()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Format(format!("bad vertex {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
    };
    match kind {
        "geometric" => Ok(FunctionSpec::Geometric(Weight::parse(body.trim())?)),
        "radial" => Ok(FunctionSpec::Radial(weights()?)),
        "dense" => Ok(FunctionSpec::Dense(weights()?)),
        "indicator" => Ok(FunctionSpec::Indicator(vertices()?)),
        "delta" => {
            let v = vertices()?;
            if v.len() != 1 {
                return Err(Error::Format("delta takes exactly one vertex".into()));
            }
            Ok(FunctionSpec::Indicator(v))
        }
        other => Err(Error::Format(format!("unknown function kind {other:?}"))),
    }
}

fn finite_or_null(xs: &[f64]) -> Vec<Option<f64>> {
    xs.iter().map(|&x| x.is_finite().then_some(x)).collect()
}

fn null_as_zero_log(xs: Vec<Option<f64>>) -> Vec<f64> {
    xs.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect()
}

#[derive(Serialize, Deserialize)]
struct NormFile {
    ln_f: Vec<Option<f64>>,
    ln_root: Vec<Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    r: usize,
    value: String,
    log_value: Option<f64>,
    exact_flag: bool,
    within_horizon: bool,
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    kind: SeriesKind,
    base: usize,
    provenance: String,
    support_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    norms: Option<NormFile>,
    entries: Vec<EntryFile>,
}

/// Decimal rendering of `exp(log_value)` in scientific notation.
fn log_to_string(log_value: f64) -> String {
    if log_value == f64::NEG_INFINITY {
        return "0".into();
    }
    let log10 = log_value / std::f64::consts::LN_10;
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    format!("{mantissa:.15}e{exponent}")
}

fn entry_value(e: &CountEntry) -> String {
    match &e.exact {
        Some(q) => rational_to_string(q),
        None => log_to_string(e.log_value),
    }
}

fn entry_from_parts(value: &str, log_value: f64, exact: bool, within_horizon: bool) -> Result<CountEntry> {
    let exact = if exact { Some(parse_decimal(value)?) } else { None };
    Ok(CountEntry {
        exact,
        log_value,
        within_horizon,
    })
}

pub fn series_to_json(s: &CountSeries) -> String {
    let file = SeriesFile {
        kind: s.kind,
        base: s.base,
        provenance: s.provenance.clone(),
        support_radius: s.support_radius,
        norms: s.norms.as_ref().map(|n| NormFile {
            ln_f: finite_or_null(&n.ln_f),
            ln_root: finite_or_null(&n.ln_root),
        }),
        entries: s
            .entries
            .iter()
            .enumerate()
            .map(|(r, e)| EntryFile {
                r,
                value: entry_value(e),
                log_value: e.log_value.is_finite().then_some(e.log_value),
                exact_flag: e.exact.is_some(),
                within_horizon: e.within_horizon,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("series serializes")
}

pub fn series_from_json(text: &str) -> Result<CountSeries> {
    let file: SeriesFile = serde_json::from_str(text).map_err(format_error)?;
    let entries = file
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.r != i {
                return Err(Error::Format(format!("entry {i} is labelled r = {}", e.r)));
            }
            entry_from_parts(
                &e.value,
                e.log_value.unwrap_or(f64::NEG_INFINITY),
                e.exact_flag,
                e.within_horizon,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountSeries {
        kind: file.kind,
        base: file.base,
        provenance: file.provenance,
        entries,
        support_radius: file.support_radius,
        norms: file.norms.map(|n| NormProfile {
            ln_f: null_as_zero_log(n.ln_f),
            ln_root: null_as_zero_log(n.ln_root),
        }),
    })
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    r: usize,
    value: String,
    log_value: f64,
    exact_flag: bool,
    within_horizon: bool,
}

/// Columns `r, value, log_value, exact_flag, within_horizon`.
pub fn series_to_csv(s: &CountSeries) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (r, e) in s.entries.iter().enumerate() {
        w.serialize(CsvRow {
            r,
            value: entry_value(e),
            log_value: e.log_value,
            exact_flag: e.exact.is_some(),
            within_horizon: e.within_horizon,
        })
        .expect("csv row serializes");
    }
    String::from_utf8(w.into_inner().expect("csv flushes")).expect("csv is utf-8")
}

/// The CSV carries only the entries; kind and base come from the caller.
pub fn series_from_csv(text: &str, kind: SeriesKind, base: usize) -> Result<CountSeries> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(format_error)?;
        if row.r != i {
            return Err(Error::Format(format!("row {i} is labelled r = {}", row.r)));
        }
        entries.push(entry_from_parts(
            &row.value,
            row.log_value,
            row.exact_flag,
            row.within_horizon,
        )?);
    }
    Ok(CountSeries {
        kind,
        base,
        provenance: "csv".into(),
        entries,
        support_radius: None,
        norms: None,
    })
}

/// `r,log_value` rows for external plotting.
pub fn plot_data_csv(s: &CountSeries) -> String {
    let mut out = String::from("r,log_value\n");
    for (r, e) in s.entries.iter().enumerate() {
        out.push_str(&format!("{r},{}\n", e.log_value));
    }
    out
}
