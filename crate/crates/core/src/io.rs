//! File formats: matrix JSON / real CSV, two-column CSV samples.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    fn from_matrix(m: &HermitianMatrix) -> Self {
        let n = m.dim();
        MatrixFile {
            n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
                .collect(),
        }
    }

    fn into_matrix(self) -> Result<HermitianMatrix> {
        let n = self.n;
        if self.entries.len() != n || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::usage(format!("matrix JSON: 'entries' must be {n}x{n}")));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.entries[i][j];
            Complex64::new(re, im)
        });
        HermitianMatrix::new(m)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from_matrix(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixFile::deserialize(d)?
            .into_matrix()
            .map_err(D::Error::custom)
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("{}: cannot read: {e}", path.display())))
}

/// Parses a matrix from JSON (`{"n":…, "entries":[[[re,im],…],…]}`) or real CSV.
pub fn parse_matrix(text: &str, origin: &str) -> Result<HermitianMatrix> {
    if text.trim_start().starts_with('{') {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| {
            Error::usage(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
        })?;
        return file
            .into_matrix()
            .map_err(|e| Error::usage(format!("{origin}: {e}")));
    }
    let rows = parse_csv_rows(text, origin)?;
    let n = rows.len();
    for (line, row) in &rows {
        if row.len() != n {
            return Err(Error::usage(format!(
                "{origin}:{line}: expected {n} values, found {}",
                row.len()
            )));
        }
    }
    let data: Vec<Vec<f64>> = rows.into_iter().map(|(_, r)| r).collect();
    HermitianMatrix::from_real_rows(&data).map_err(|e| Error::usage(format!("{origin}: {e}")))
}

pub fn read_matrix(path: &Path) -> Result<HermitianMatrix> {
    parse_matrix(&read_text(path)?, &path.display().to_string())
}

pub fn matrix_to_json(m: &HermitianMatrix) -> String {
    serde_json::to_string_pretty(m).expect("matrix serialisation is infallible")
}

/// Numeric CSV rows with their 1-based line numbers. Blank lines, `#`
/// comments and a non-numeric first line (header) are skipped.
fn parse_csv_rows(text: &str, origin: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(v) => {
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    return Err(Error::usage(format!(
                        "{origin}:{}: non-finite value {bad}",
                        idx + 1
                    )));
                }
                rows.push((idx + 1, v));
            }
            Err(_) if rows.is_empty() && idx == first_content_line(text) => continue,
            Err(e) => {
                return Err(Error::usage(format!("{origin}:{}: {e}: '{line}'", idx + 1)));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::usage(format!("{origin}: no numeric rows")));
    }
    Ok(rows)
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .unwrap_or(0)
}

/// Two-column CSV (`x,y` per line, optional header).
pub fn parse_pairs(text: &str, origin: &str) -> Result<Vec<(f64, f64)>> {
    parse_csv_rows(text, origin)?
        .into_iter()
        .map(|(line, row)| match row.as_slice() {
            [x, y] => Ok((*x, *y)),
            _ => Err(Error::usage(format!(
                "{origin}:{line}: expected 2 columns, found {}",
                row.len()
            ))),
        })
        .collect()
}

pub fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    parse_pairs(&read_text(path)?, &path.display().to_string())
}

pub fn pairs_to_csv(header: (&str, &str), pairs: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (x, y) in pairs {
        out.push_str(&format!("{x:e},{y:e}\n"));
    }
    out
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_matrix_round_trip() {
        let text = r#"{"n": 2, "entries": [[[1,0],[0,2]], [[0,-2],[3,0]]]}"#;
        let m = parse_matrix(text, "a.json").unwrap();
        assert_eq!(m.get(0, 1), Complex64::new(0.0, 2.0));
        let back = parse_matrix(&matrix_to_json(&m), "b.json").unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn csv_matrix() {
        let m = parse_matrix("2, 4\n4, 6\n", "m.csv").unwrap();
        assert!(m.is_real());
        assert_eq!(m.get(1, 0).re, 4.0);
    }

    #[test]
    fn diagnostics_carry_location() {
        let err = parse_matrix("1,2\n2,x\n", "bad.csv").unwrap_err();
        assert!(matches!(&err, Error::Usage(m) if m.contains("bad.csv:2")), "{err}");
        let err = parse_matrix("1,2,3\n2,1\n", "ragged.csv").unwrap_err();
        assert!(matches!(&err, Error::Usage(m) if m.contains("ragged.csv:1")), "{err}");
        let err = parse_matrix("{\"n\": 2,\n \"entries\": [[[1,0]]}", "bad.json").unwrap_err();
        assert!(matches!(&err, Error::Usage(m) if m.contains("bad.json:2")), "{err}");
        let err = parse_matrix(r#"{"n":2,"entries":[[[1,0],[1,0]],[[2,0],[1,0]]]}"#, "nh.json").unwrap_err();
        assert!(matches!(&err, Error::Usage(m) if m.contains("Hermitian")), "{err}");
    }

    #[test]
    fn pairs_with_header() {
        let p = parse_pairs("t,f\n1,2\n# note\n3,4\n", "s.csv").unwrap();
        assert_eq!(p, vec![(1.0, 2.0), (3.0, 4.0)]);
        assert!(parse_pairs("1,2,3\n", "s.csv").is_err());
        assert!(parse_pairs("", "s.csv").is_err());
    }
}
