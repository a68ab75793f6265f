//! CSV and JSON output files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use twistspec_core::{Complex64, PointCloud};

use crate::error::{CliError, CliResult};

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// `re,im` rows in scientific notation with 17 significant digits.
pub fn points_csv(points: &[Complex64]) -> String {
    let mut out = String::with_capacity(48 * (points.len() + 1));
    out.push_str("re,im\n");
    for p in points {
        let _ = writeln!(out, "{:.16e},{:.16e}", p.re, p.im);
    }
    out
}

/// `x,re,im` rows for point sets tagged by the slice they belong to.
pub fn tagged_points_csv(groups: &[(f64, Vec<Complex64>)]) -> String {
    let mut out = String::from("x,re,im\n");
    for (x, points) in groups {
        for p in points {
            let _ = writeln!(out, "{x:.16e},{:.16e},{:.16e}", p.re, p.im);
        }
    }
    out
}

pub fn write_points(path: &Path, points: &[Complex64]) -> CliResult<()> {
    write_text(path, &points_csv(points))
}

/// Reads a cloud from a CSV whose first two columns are the real and imaginary parts.
/// A non-numeric first line is taken as the header.
pub fn read_points(path: &Path) -> CliResult<PointCloud> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let parsed = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((re, im)) => points.push(Complex64::new(re, im)),
            None if idx == 0 => continue,
            None => {
                return Err(CliError::Input(format!("{}:{}: expected `re,im`, got `{line}`", path.display(), idx + 1)))
            }
        }
    }
    if points.is_empty() {
        return Err(CliError::Input(format!("{}: no points", path.display())));
    }
    Ok(PointCloud::new(points))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("metrics serialise");
    text.push('\n');
    write_text(path, &text)
}
