use std::io::Read;

use crate::error::{Error, Result};
use crate::pipeline::Dataset;

/// Cells read as missing.
pub const MISSING_TOKENS: [&str; 2] = ["", "NA"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestSpec {
    /// Predictor columns; empty means every numeric column.
    pub x: Vec<String>,
    pub class: String,
    pub subgroup: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub dataset: Dataset,
    /// Missing cells per column, in header order.
    pub missing: Vec<(String, usize)>,
}

fn is_missing(cell: &str) -> bool {
    MISSING_TOKENS.contains(&cell.trim())
}

/// Read a headed CSV table and check it against `spec`.
pub fn ingest_csv(input: impl Read, spec: &IngestSpec) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Data(format!("header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut columns: Vec<Vec<Option<String>>> = vec![Vec::new(); header.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data(format!("line {}: {e}", i + 2)))?;
        for (col, cell) in columns.iter_mut().zip(record.iter()) {
            col.push((!is_missing(cell)).then(|| cell.trim().to_string()));
        }
    }
    let missing = header
        .iter()
        .zip(&columns)
        .map(|(h, c)| (h.clone(), c.iter().filter(|v| v.is_none()).count()))
        .collect();
    let mut dataset = Dataset::new();
    for (name, cells) in header.into_iter().zip(columns) {
        dataset.push(name, cells)?;
    }

    let class = dataset.column(&spec.class)?;
    let mut labels: Vec<&str> = class.cells.iter().flatten().map(String::as_str).collect();
    labels.sort_unstable();
    labels.dedup();
    match labels.len() {
        2 => {}
        0 | 1 => return Err(Error::DegenerateClasses),
        found => return Err(Error::ClassCount { found }),
    }
    if let Some(g) = &spec.subgroup {
        dataset.column(g)?;
    }
    for x in &spec.x {
        dataset.numeric(x)?;
    }
    Ok(Ingested { dataset, missing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(x: &[&str]) -> IngestSpec {
        IngestSpec {
            x: x.iter().map(|s| s.to_string()).collect(),
            class: "y".into(),
            subgroup: None,
        }
    }

    #[test]
    fn three_rows() {
        let csv = "x,y\n1.5,a\n-2,b\n3e1,a\n";
        let got = ingest_csv(csv.as_bytes(), &spec(&["x"])).unwrap();
        assert_eq!(got.dataset.numeric("x").unwrap(), [1.5, -2.0, 30.0]);
        assert_eq!(got.dataset.n_rows(), 3);
    }

    #[test]
    fn missing_tokens_are_counted() {
        let csv = "x,y\nNA,a\n2,b\n,a\n4,b\n";
        let got = ingest_csv(csv.as_bytes(), &spec(&["x"])).unwrap();
        assert_eq!(got.missing, [("x".to_string(), 2), ("y".to_string(), 0)]);
    }

    #[test]
    fn diagnostics() {
        let bad_number = ingest_csv("x,y\n1,a\n1,5,b\n".as_bytes(), &spec(&["x"])).unwrap_err();
        assert!(bad_number.to_string().contains("line 3"), "{bad_number}");
        let bad_cell = ingest_csv("x,y\n1,a\n1;5,b\n".as_bytes(), &spec(&["x"])).unwrap_err();
        assert!(bad_cell.to_string().contains("row 2"), "{bad_cell}");
        let three = ingest_csv("x,y\n1,a\n2,b\n3,c\n".as_bytes(), &spec(&["x"])).unwrap_err();
        assert_eq!(three, Error::ClassCount { found: 3 });
        let absent = ingest_csv("x,y\n1,a\n2,b\n".as_bytes(), &spec(&["z"])).unwrap_err();
        assert!(absent.to_string().contains("'z'"));
    }
}
