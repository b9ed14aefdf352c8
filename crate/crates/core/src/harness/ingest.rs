use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::domain::{Dataset, Label, LabeledExample};
use crate::error::{Error, Result};
use crate::noise::StreamId;

/// What to read from a CSV file and how to encode it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub label_column: String,
    /// Label value (after trimming) that maps to +1; every other value maps to −1.
    pub positive_label: String,
    /// One-hot encoded, one feature per distinct value in sorted order.
    pub categorical: Vec<String>,
    /// Parsed as `f64` and used as is. Empty means every column that is neither the label
    /// nor categorical.
    pub numeric: Vec<String>,
    /// Keep every minority-class row and an equal number of majority rows picked at random.
    pub balance: bool,
    /// Restricts the listed columns to this subset when non-empty.
    pub features: Vec<String>,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>, label_column: &str, positive_label: &str) -> Self {
        Self {
            path: path.into(),
            label_column: label_column.to_string(),
            positive_label: positive_label.to_string(),
            categorical: Vec::new(),
            numeric: Vec::new(),
            balance: false,
            features: Vec::new(),
        }
    }
}

/// An encoded dataset and the name of every feature.
#[derive(Clone, Debug, PartialEq)]
pub struct Ingested {
    pub data: Dataset<LabeledExample>,
    /// `column` for numeric features, `column=value` for one-hot ones.
    pub features: Vec<String>,
    pub rows_read: usize,
}

enum Column {
    Numeric(usize),
    Categorical(usize, Vec<String>),
}

/// Reads and encodes `spec.path`. Balancing draws from `seed`.
///
/// Columns appear in header order. Row numbers in errors count the header as line 1.
pub fn ingest_csv(spec: &IngestSpec, seed: u64) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(&spec.path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let find = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let label_idx = find(&spec.label_column)?;
    for c in spec.categorical.iter().chain(&spec.numeric).chain(&spec.features) {
        find(c)?;
    }
    let keep = |name: &str| spec.features.is_empty() || spec.features.iter().any(|f| f == name);
    let numeric: Vec<&String> = if spec.numeric.is_empty() {
        header
            .iter()
            .filter(|h| **h != spec.label_column && !spec.categorical.contains(h))
            .collect()
    } else {
        spec.numeric.iter().collect()
    };

    let rows: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;

    let mut columns = Vec::new();
    let mut features = Vec::new();
    for (j, name) in header.iter().enumerate() {
        if j == label_idx || !keep(name) {
            continue;
        }
        if spec.categorical.contains(name) {
            let levels: BTreeSet<String> = rows.iter().map(|r| r.get(j).unwrap_or("").to_string()).collect();
            let levels: Vec<String> = levels.into_iter().collect();
            features.extend(levels.iter().map(|l| format!("{name}={l}")));
            columns.push(Column::Categorical(j, levels));
        } else if numeric.contains(&name) {
            features.push(name.clone());
            columns.push(Column::Numeric(j));
        }
    }
    if features.is_empty() {
        return Err(Error::invalid("features", "no feature columns selected"));
    }

    let mut items = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let line = r + 2;
        let mut x = Vec::with_capacity(features.len());
        for col in &columns {
            match col {
                Column::Numeric(j) => {
                    let raw = row.get(*j).unwrap_or("");
                    let v: f64 = raw.parse().map_err(|_| Error::BadRow {
                        row: line,
                        message: format!("column `{}`: `{raw}` is not a number", header[*j]),
                    })?;
                    if !v.is_finite() {
                        return Err(Error::BadRow { row: line, message: format!("column `{}` is not finite", header[*j]) });
                    }
                    x.push(v);
                }
                Column::Categorical(j, levels) => {
                    let v = row.get(*j).unwrap_or("");
                    x.extend(levels.iter().map(|l| if l == v { 1.0 } else { 0.0 }));
                }
            }
        }
        let y = if row.get(label_idx).unwrap_or("") == spec.positive_label {
            Label::Positive
        } else {
            Label::Negative
        };
        items.push(LabeledExample::new(x, y)?);
    }
    let rows_read = items.len();
    if spec.balance {
        items = balance(items, seed)?;
    }
    Ok(Ingested { data: Dataset::with_dim(features.len(), items)?, features, rows_read })
}

/// All minority rows plus a seeded random subset of majority rows of the same size, in
/// their original order.
pub fn balance(items: Vec<LabeledExample>, seed: u64) -> Result<Vec<LabeledExample>> {
    let pos: Vec<usize> = (0..items.len()).filter(|&i| items[i].y == Label::Positive).collect();
    let neg: Vec<usize> = (0..items.len()).filter(|&i| items[i].y == Label::Negative).collect();
    if pos.is_empty() {
        return Err(Error::EmptyClass("positive".into()));
    }
    if neg.is_empty() {
        return Err(Error::EmptyClass("negative".into()));
    }
    let (minority, majority) = if pos.len() <= neg.len() { (pos, neg) } else { (neg, pos) };
    let mut rng = StreamId::new(seed, 0).child(BALANCE_STREAM).open();
    let mut keep: Vec<usize> = sample(&mut rng, majority.len(), minority.len())
        .into_iter()
        .map(|k| majority[k])
        .chain(minority)
        .collect();
    keep.sort_unstable();
    let mut slots: Vec<Option<LabeledExample>> = items.into_iter().map(Some).collect();
    Ok(keep.into_iter().map(|i| slots[i].take().expect("indices are distinct")).collect())
}

const BALANCE_STREAM: u64 = 0xba1a;

/// Writes `x0, …, x{d−1}, y` with `y ∈ {−1, 1}`, numbers in shortest round-trip form.
pub fn write_dataset_csv(data: &Dataset<LabeledExample>, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_dataset(data, std::io::BufWriter::new(file))
}

pub fn write_dataset<W: Write>(data: &Dataset<LabeledExample>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..data.dim()).map(|j| format!("x{j}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for e in data.iter() {
        let mut rec: Vec<String> = e.x.iter().map(|v| format!("{v:?}")).collect();
        rec.push(if e.y == Label::Positive { "1" } else { "-1" }.into());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Spec for files produced by [`write_dataset_csv`].
pub fn dataset_csv_spec(path: impl Into<PathBuf>) -> IngestSpec {
    IngestSpec::new(path, "y", "1")
}

/// Counts per label, `(positive, negative)`.
pub fn class_counts(data: &Dataset<LabeledExample>) -> (usize, usize) {
    let pos = data.iter().filter(|e| e.y == Label::Positive).count();
    (pos, data.len() - pos)
}
