use super::{Format, HarnessError};
use crate::schemes::SchemeTag;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// One row of a study. `rate` is empty on the coarsest row of each block;
/// `error` is empty for timing-only rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scheme: SchemeTag,
    pub alpha0: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub error: Option<f64>,
    pub rate: Option<f64>,
    pub seconds: f64,
    #[serde(default)]
    pub config_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    scheme: SchemeTag,
    alpha0: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    error: Option<f64>,
    rate: Option<f64>,
    seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Time,
    Space,
    Bench,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub axis: Axis,
    pub rows: Vec<RunRecord>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["scheme", "alpha0", "N", "M", "error", "rate", "seconds"])?;
        }
        for r in &self.rows {
            w.serialize(CsvRow {
                scheme: r.scheme,
                alpha0: r.alpha0,
                n: r.n,
                m: r.m,
                error: r.error,
                rate: r.rate,
                seconds: r.seconds,
            })?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn render(&self, format: Format) -> Result<String, HarnessError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Reads back what `render` produced. CSV carries no axis or hash, so
    /// those come from `axis` and stay empty respectively.
    pub fn parse(text: &str, format: Format, axis: Axis) -> Result<Self, HarnessError> {
        match format {
            Format::Json => Ok(serde_json::from_str(text)?),
            Format::Csv => {
                let mut rdr = csv::Reader::from_reader(text.as_bytes());
                let rows = rdr
                    .deserialize::<CsvRow>()
                    .map(|r| {
                        r.map(|r| RunRecord {
                            scheme: r.scheme,
                            alpha0: r.alpha0,
                            n: r.n,
                            m: r.m,
                            error: r.error,
                            rate: r.rate,
                            seconds: r.seconds,
                            config_hash: String::new(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self { axis, rows })
            }
        }
    }

    /// Aligned plain-text rendering, one block per scheme and `alpha0`.
    pub fn to_text(&self) -> String {
        let head = match self.axis {
            Axis::Time => "E(tau,h)",
            Axis::Space => "S(tau,h)",
            Axis::Bench => "error",
        };
        let mut out = format!(
            "{:<8} {:>7} {:>6} {:>6} {:>12} {:>6} {:>10}\n",
            "scheme", "alpha0", "N", "M", head, "rate", "seconds"
        );
        let mut last: Option<(SchemeTag, u64)> = None;
        for r in &self.rows {
            let key = (r.scheme, r.alpha0.to_bits());
            if last.is_some() && last != Some(key) {
                out.push('\n');
            }
            last = Some(key);
            let err = r.error.map_or("-".to_string(), |e| format!("{e:.4e}"));
            let rate = r.rate.map_or("*".to_string(), |v| format!("{v:.2}"));
            let _ = writeln!(
                out,
                "{:<8} {:>7.2} {:>6} {:>6} {:>12} {:>6} {:>10.4}",
                r.scheme.as_str(),
                r.alpha0,
                r.n,
                r.m,
                err,
                rate,
                r.seconds
            );
        }
        out
    }
}

pub fn emit(table: &ConvergenceTable, path: impl AsRef<Path>, format: Format) -> Result<(), HarnessError> {
    std::fs::write(path, table.render(format)?)?;
    Ok(())
}
