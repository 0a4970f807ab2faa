//! CurveFileV1: a plain text table with header `s,x1,...,xn` and one
//! sample per line at 17 significant digits, enough for a bit-identical
//! round trip of every double.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ccr_core::CurveSamples;

use crate::CliError;

/// Serializes samples to the table format.
pub fn to_string(samples: &CurveSamples) -> String {
    let n = samples.dim();
    let mut out = String::new();
    out.push('s');
    for i in 1..=n {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (s, p) in samples.grid().iter().zip(samples.points()) {
        let _ = write!(out, "{s:.16e}");
        for x in p {
            let _ = write!(out, ",{x:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn write(path: &Path, samples: &CurveSamples) -> Result<(), CliError> {
    fs::write(path, to_string(samples))
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

/// Parses the table format; grid validity (uniform, increasing) is
/// enforced by [`CurveSamples::new`].
pub fn read(path: &Path) -> Result<CurveSamples, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::validation(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 3 || cols[0] != "s" {
        return Err(CliError::validation(format!(
            "{}: header must be s,x1,...,xn with n >= 2",
            path.display()
        )));
    }
    for (i, c) in cols[1..].iter().enumerate() {
        if *c != format!("x{}", i + 1) {
            return Err(CliError::validation(format!(
                "{}: unexpected header column {c:?}",
                path.display()
            )));
        }
    }
    let mut grid = Vec::new();
    let mut points = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(CliError::validation(format!(
                "{} line {}: expected {} columns, got {}",
                path.display(),
                lineno + 1,
                cols.len(),
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = f.trim().parse().map_err(|_| {
                CliError::validation(format!(
                    "{} line {}: bad number {f:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            row.push(v);
        }
        grid.push(row[0]);
        points.push(row[1..].to_vec());
    }
    CurveSamples::new(grid, points).map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_identical() {
        let grid: Vec<f64> = (0..64).map(|i| 0.1 + i as f64 * 0.017).collect();
        let points: Vec<Vec<f64>> = grid
            .iter()
            .map(|s| vec![s.sin(), s.cos(), (1.0 + s * s).sqrt()])
            .collect();
        let samples = CurveSamples::new(grid, points).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        write(&path, &samples).unwrap();
        let back = read(&path).unwrap();
        assert_eq!(samples.grid(), back.grid());
        assert_eq!(samples.points(), back.points());
        // and the text itself is stable
        write(dir.path().join("again.csv").as_path(), &back).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(dir.path().join("again.csv")).unwrap()
        );
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "s,x1,x2\n0.0,1.0\n").unwrap();
        assert!(read(&path).is_err());
        std::fs::write(&path, "s,x1,x2\n0.0,1.0,abc\n0.1,1.0,2.0\n").unwrap();
        assert!(read(&path).is_err());
        std::fs::write(&path, "t,x1,x2\n0.0,1.0,2.0\n0.1,1.0,2.0\n").unwrap();
        assert!(read(&path).is_err());
    }
}
