//! Experiment output records and their CSV/JSON serialization.
//!
//! One [`ExperimentRecord`] is one row of experiment output: the experiment
//! name, the seed that reproduces the row, the swept parameters, and the
//! measured statistics. All real values are printed with 17 significant
//! digits so they round-trip losslessly through text.

use std::io::Write;

use crate::error::{Error, Result};

/// Output encodings for a batch of records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// RFC-4180 style: `,` separator, `\n` line endings, first line a header.
    Csv,
    /// A JSON array of flat objects.
    Json,
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub seed: u64,
    params: Vec<(String, f64)>,
    stats: Vec<(String, f64)>,
}

impl ExperimentRecord {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        ExperimentRecord {
            experiment: experiment.into(),
            seed,
            params: Vec::new(),
            stats: Vec::new(),
        }
    }

    pub fn with_param(mut self, name: impl Into<String>, value: f64) -> Self {
        self.params.push((name.into(), value));
        self
    }

    pub fn with_stat(mut self, name: impl Into<String>, value: f64) -> Self {
        self.stats.push((name.into(), value));
        self
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn stats(&self) -> &[(String, f64)] {
        &self.stats
    }

    /// All named columns in output order (params then stats).
    pub fn columns(&self) -> impl Iterator<Item = (&str, f64)> {
        self.params
            .iter()
            .chain(self.stats.iter())
            .map(|(n, v)| (n.as_str(), *v))
    }

    /// Value of a named column, if present.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.columns().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    fn column_names(&self) -> Vec<&str> {
        self.columns().map(|(n, _)| n).collect()
    }
}

/// Formats a real with 17 significant digits (enough to identify an `f64`
/// uniquely, so parsing the text recovers the exact bits).
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn check_homogeneous(records: &[ExperimentRecord]) -> Result<()> {
    if let Some(first) = records.first() {
        let names = first.column_names();
        for r in &records[1..] {
            if r.experiment != first.experiment || r.column_names() != names {
                return Err(Error::HeterogeneousColumns);
            }
        }
    }
    Ok(())
}

/// Writes records in the requested format.
///
/// All records must share an experiment name and column set. An empty batch
/// yields a header-only CSV (fixed columns only) or an empty JSON array.
pub fn write_records(
    records: &[ExperimentRecord],
    format: OutputFormat,
    sink: &mut dyn Write,
) -> Result<()> {
    check_homogeneous(records)?;
    match format {
        OutputFormat::Csv => write_csv(records, sink),
        OutputFormat::Json => write_json(records, sink),
    }
}

fn write_csv(records: &[ExperimentRecord], sink: &mut dyn Write) -> Result<()> {
    let mut header = vec!["experiment".to_string(), "seed".to_string()];
    if let Some(first) = records.first() {
        header.extend(first.columns().map(|(n, _)| csv_quote(n)));
    }
    writeln!(sink, "{}", header.join(","))?;
    for r in records {
        let mut row = vec![csv_quote(&r.experiment), r.seed.to_string()];
        row.extend(r.columns().map(|(_, v)| fmt_real(v)));
        writeln!(sink, "{}", row.join(","))?;
    }
    Ok(())
}

fn json_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_json(records: &[ExperimentRecord], sink: &mut dyn Write) -> Result<()> {
    writeln!(sink, "[")?;
    for (i, r) in records.iter().enumerate() {
        let mut fields = vec![
            format!("\"experiment\": {}", json_quote(&r.experiment)),
            format!("\"seed\": {}", r.seed),
        ];
        fields.extend(
            r.columns()
                .map(|(n, v)| format!("{}: {}", json_quote(n), fmt_real(v))),
        );
        let sep = if i + 1 == records.len() { "" } else { "," };
        writeln!(sink, "  {{{}}}{}", fields.join(", "), sep)?;
    }
    writeln!(sink, "]")?;
    Ok(())
}

/// Parses a JSON array of flat objects back into records.
///
/// The params/stats split is not encoded in the flat objects, so every named
/// column comes back as a statistic; compare via [`ExperimentRecord::columns`].
pub fn read_records_json(input: &str) -> Result<Vec<ExperimentRecord>> {
    let value: serde_json::Value =
        serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
    let array = value
        .as_array()
        .ok_or_else(|| Error::Parse("expected a JSON array".into()))?;
    let mut records = Vec::with_capacity(array.len());
    for item in array {
        let obj = item
            .as_object()
            .ok_or_else(|| Error::Parse("expected an object".into()))?;
        let experiment = obj
            .get("experiment")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("missing experiment name".into()))?;
        let seed = obj
            .get("seed")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse("missing seed".into()))?;
        let mut record = ExperimentRecord::new(experiment, seed);
        for (name, v) in obj {
            if name == "experiment" || name == "seed" {
                continue;
            }
            let x = v
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("column {name} is not a number")))?;
            record = record.with_stat(name.clone(), x);
        }
        records.push(record);
    }
    Ok(records)
}
