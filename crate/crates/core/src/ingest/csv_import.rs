use std::path::Path;

use crate::error::{Error, Result};
use crate::numcore::Matrix;

/// Reads a numeric CSV with a mandatory header row.
///
/// Returns the column names and a `rows × columns` matrix.
pub fn read_csv_matrix(path: impl AsRef<Path>) -> Result<(Vec<String>, Matrix)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv_matrix(file).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_csv_matrix(reader: impl std::io::Read) -> Result<(Vec<String>, Matrix)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::Parse("missing header row".into()));
    }
    let mut data = Vec::new();
    let mut rows = 0;
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, header has {}",
                line + 1,
                record.len(),
                header.len()
            )));
        }
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "row {}, column `{}`: `{field}` is not a number",
                    line + 1,
                    header[col]
                ))
            })?;
            data.push(v);
        }
        rows += 1;
    }
    let m = Matrix::new(rows, header.len(), data)?;
    Ok((header, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quoted_header() {
        let text = "\"a\",b\n1,2\n3.5,-4e-1\n";
        let (h, m) = parse_csv_matrix(text.as_bytes()).unwrap();
        assert_eq!(h, vec!["a", "b"]);
        assert_eq!(m.as_slice(), &[1.0, 2.0, 3.5, -0.4]);
    }

    #[test]
    fn rejects_non_numeric_and_ragged() {
        assert!(matches!(
            parse_csv_matrix("a,b\n1,x\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(parse_csv_matrix("a,b\n1\n".as_bytes()).is_err());
        assert!(matches!(
            parse_csv_matrix("a\nNaN\n".as_bytes()),
            Err(Error::NonFinite(_))
        ));
    }
}
