use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Report, ScenarioError};
use crate::gh::SequenceDiagnosis;
use crate::glued::GluedSpace;
use crate::metric::{space_to_json, FiniteMetricSpace};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Json,
    Csv,
    /// Per-point rows ready for a scatter plot.
    Plotdata,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "plotdata" => Ok(Self::Plotdata),
            _ => Err(format!("unknown format {s:?}, expected json, csv or plotdata")),
        }
    }
}

fn io(e: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, ScenarioError> {
    String::from_utf8(w.into_inner().map_err(io)?).map_err(io)
}

/// JSON is the loadable space format; CSV is the full matrix; plotdata
/// needs coordinates and writes `index,x0,x1,...`.
pub fn export_space<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    coords: Option<&[Vec<f64>]>,
    format: ExportFormat,
) -> Result<String, ScenarioError> {
    match format {
        ExportFormat::Json => serde_json::to_string(&space_to_json(space)).map_err(io),
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for i in 0..space.len() {
                w.write_record(space.row(i).iter().map(|d| d.as_f64().to_string())).map_err(io)?;
            }
            finish(w)
        }
        ExportFormat::Plotdata => {
            let coords = coords.ok_or_else(|| io("plotdata needs coordinates"))?;
            let dim = coords.first().map_or(0, Vec::len);
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["index".to_string()];
            header.extend((0..dim).map(|k| format!("x{k}")));
            w.write_record(&header).map_err(io)?;
            for (i, c) in coords.iter().enumerate() {
                let mut row = vec![i.to_string()];
                row.extend(c.iter().map(f64::to_string));
                w.write_record(&row).map_err(io)?;
            }
            finish(w)
        }
    }
}

/// JSON is the full report; CSV is one summary row per step; plotdata is
/// every numeric result as `index,op,key,value`.
pub fn export_report(report: &Report, format: ExportFormat) -> Result<String, ScenarioError> {
    match format {
        ExportFormat::Json => Ok(report.to_json()),
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "op", "passed", "failed_checks"]).map_err(io)?;
            for s in &report.steps {
                let failed: Vec<&str> = s.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                w.write_record([s.index.to_string(), s.op.clone(), s.passed.to_string(), failed.join(";")])
                    .map_err(io)?;
            }
            finish(w)
        }
        ExportFormat::Plotdata => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "op", "key", "value"]).map_err(io)?;
            for s in &report.steps {
                let mut rows = Vec::new();
                flatten("", &s.results, &mut rows);
                for (k, v) in rows {
                    w.write_record([s.index.to_string(), s.op.clone(), k, v.to_string()]).map_err(io)?;
                }
            }
            finish(w)
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, f64)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Number(n) => out.extend(n.as_f64().map(|x| (prefix.to_string(), x))),
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        _ => {}
    }
}

/// Packing curves as `epsilon,space_index,count`.
pub fn packing_csv(diag: &SequenceDiagnosis) -> Result<String, ScenarioError> {
    let mut buf = Vec::new();
    diag.write_csv(&mut buf).map_err(io)?;
    String::from_utf8(buf).map_err(io)
}

/// `index,stratum,x,y` per glued point; coordinates are left empty when the
/// tower carries none.
pub fn glued_plotdata<T: Scalar>(g: &GluedSpace<T>) -> Result<String, ScenarioError> {
    let coords = g.coords();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "stratum", "x", "y"]).map_err(io)?;
    for (i, &(level, _)) in g.origin.iter().enumerate() {
        let (x, y) = match &coords {
            Some(c) => (c[i][0].to_string(), c[i][1].to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([i.to_string(), level.to_string(), x, y]).map_err(io)?;
    }
    finish(w)
}
