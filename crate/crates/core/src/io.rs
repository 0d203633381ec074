//! JSON instance and graph files, and CSV/JSON report output.
//!
//! Instance file: `{"values": [[...], ...], "offset": [[...], ...]}` with
//! `offset` optional. Graph file: `{"weights": [[...], ...]}`. Numbers may be
//! JSON integers or decimals, or strings holding an integer, a fraction
//! `"p/q"`, or a finite decimal. Every rational is written as a `"p/q"` or
//! `"p"` string.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explore::GapReport;
use crate::model::{Allocation, Cycle, Instance, Solution, WeightGraph};
use crate::rational::{parse_rational, render, Rational};

/// An instance together with its offset graph (all zero when absent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub offset: WeightGraph,
}

impl InstanceFile {
    pub fn has_offset(&self) -> bool {
        !self.offset.is_zero()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    Ok(parse_instance_file(text)?.instance)
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let doc = parse_json(text)?;
    let values = doc
        .get("values")
        .ok_or_else(|| Error::Invalid("missing \"values\" matrix".into()))?;
    let instance = Instance::new(parse_matrix("values", values)?)?;
    let offset = match doc.get("offset") {
        None | Some(Value::Null) => WeightGraph::zero(instance.n()),
        Some(m) => offset_graph(parse_matrix("offset", m)?)?,
    };
    if offset.n() != instance.n() {
        return Err(Error::DimensionMismatch {
            expected: instance.n(),
            actual: offset.n(),
        });
    }
    Ok(InstanceFile { instance, offset })
}

fn offset_graph(rows: Vec<Vec<Rational>>) -> Result<WeightGraph> {
    WeightGraph::new(rows).map_err(|e| match e {
        Error::NonZeroDiagonal { index, .. } => Error::NonZeroDiagonal { what: "offset", index },
        Error::NotSquare { row, len, expected, .. } => Error::NotSquare { what: "offset", row, len, expected },
        Error::Empty { .. } => Error::Empty { what: "offset" },
        other => other,
    })
}

pub fn parse_graph(text: &str) -> Result<WeightGraph> {
    let doc = parse_json(text)?;
    let weights = doc
        .get("weights")
        .ok_or_else(|| Error::Invalid("missing \"weights\" matrix".into()))?;
    WeightGraph::new(parse_matrix("weights", weights)?)
}

fn parse_json(text: &str) -> Result<Value> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))?;
    if !doc.is_object() {
        return Err(Error::Invalid("expected a JSON object".into()));
    }
    Ok(doc)
}

fn parse_matrix(what: &'static str, value: &Value) -> Result<Vec<Vec<Rational>>> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("\"{what}\" must be an array of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(row, r)| {
            let cells = r
                .as_array()
                .ok_or_else(|| Error::Invalid(format!("\"{what}\" row {row} must be an array")))?;
            cells
                .iter()
                .enumerate()
                .map(|(col, cell)| {
                    parse_cell(cell).map_err(|reason| Error::MalformedEntry { what, row, col, reason })
                })
                .collect()
        })
        .collect()
}

fn parse_cell(cell: &Value) -> std::result::Result<Rational, String> {
    let text = match cell {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(format!("expected a number or numeric string, got {other}")),
    };
    parse_rational(&text).map_err(|e| e.to_string())
}

fn matrix_json<'a>(rows: impl Iterator<Item = &'a [Rational]>) -> Value {
    Value::Array(rows.map(|r| Value::Array(r.iter().map(|x| Value::String(render(x))).collect())).collect())
}

pub fn instance_file_json(file: &InstanceFile) -> Value {
    let mut doc = json!({ "values": matrix_json(file.instance.rows()) });
    if file.has_offset() {
        doc["offset"] = matrix_json(file.offset.rows());
    }
    doc
}

pub fn graph_json(g: &WeightGraph) -> Value {
    json!({ "weights": matrix_json(g.rows()) })
}

pub fn allocation_json(a: &Allocation) -> Value {
    json!(a.as_slice())
}

pub fn cycle_json(c: &Cycle) -> Value {
    json!({
        "nodes": c.nodes(),
        "total_weight": render(c.total_weight()),
        "average_weight": render(c.average_weight()),
    })
}

pub fn solution_json(s: &Solution) -> Value {
    json!({
        "allocation": allocation_json(&s.allocation),
        "allocation_label": s.allocation.to_string(),
        "macw": render(&s.macw),
        "witness": cycle_json(&s.witness),
        "witness_label": s.witness.to_string(),
        "total_value": render(&s.total_value),
        "method": s.method.as_str(),
        "optimal": s.optimal,
    })
}

pub fn report_json(r: &GapReport) -> Value {
    json!({
        "pair": r.pair,
        "seed": r.seed,
        "n": r.instance.n(),
        "exact_macw": render(&r.exact_macw),
        "exact_allocation": allocation_json(&r.exact_allocation),
        "best_matching_macw": render(&r.best_matching_macw),
        "best_matching": allocation_json(&r.best_matching),
        "gap": render(&r.gap),
        "values": matrix_json(r.instance.rows()),
        "offset": matrix_json(r.offset.rows()),
    })
}

pub const REPORT_CSV_HEADER: [&str; 9] = [
    "pair",
    "seed",
    "n",
    "gap",
    "exact_macw",
    "best_matching_macw",
    "exact_allocation",
    "best_matching",
    "instance",
];

/// One CSV row per report; the `instance` column holds the instance file JSON.
pub fn write_reports_csv<W: std::io::Write>(reports: &[GapReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in reports {
        let file = InstanceFile {
            instance: r.instance.clone(),
            offset: r.offset.clone(),
        };
        w.write_record([
            r.pair.map(|p| p.to_string()).unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.instance.n().to_string(),
            render(&r.gap),
            render(&r.exact_macw),
            render(&r.best_matching_macw),
            r.exact_allocation.to_string(),
            r.best_matching.to_string(),
            instance_file_json(&file).to_string(),
        ])?;
    }
    w.flush()
}
