//! Plain-text file formats.
//!
//! Radial functions and spectra:
//!
//! ```text
//! # kind=radial, n=600, max=12
//! 0,0.0000000000000000e0,1.0000000000000000e0
//! ...
//! ```
//!
//! Sample sets are `phi,tau,weight` rows; densities are
//! `m,kappa_index,kappa,value_re,value_im` rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::density::{DiskDensity, SampleSet};
use crate::error::{Error, Result};
use crate::hypgeo::Coset;
use crate::mft::{RadialFunction, RadialGrid, SpectralGrid, Spectrum};

/// Contents of a radial or spectrum file.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Radial(RadialFunction),
    Spectrum(Spectrum),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `contents`, creating parent directories.
pub fn write(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("not finite: {field:?}")));
    }
    Ok(v)
}

fn parse_usize(path: &Path, line: usize, field: &str) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("not a nonnegative integer: {field:?}")))
}

fn series_text(kind: &str, max: f64, nodes: &[f64], values: &[f64]) -> String {
    let mut out = format!("# kind={kind}, n={}, max={max}\n", nodes.len());
    for (i, (x, v)) in nodes.iter().zip(values).enumerate() {
        writeln!(out, "{i},{x:.16e},{v:.16e}").expect("writing to a String");
    }
    out
}

pub fn radial_to_string(f: &RadialFunction) -> String {
    series_text("radial", f.grid.tau_max(), &f.grid.nodes(), f.values())
}

pub fn spectrum_to_string(c: &Spectrum) -> String {
    series_text("spectrum", c.grid.kappa_max(), &c.grid.nodes(), c.values())
}

pub fn write_radial(path: &Path, f: &RadialFunction) -> Result<()> {
    write(path, &radial_to_string(f))
}

pub fn write_spectrum(path: &Path, c: &Spectrum) -> Result<()> {
    write(path, &spectrum_to_string(c))
}

/// Reads either kind of series file; the header decides which.
pub fn read_series(path: &Path) -> Result<Series> {
    parse_series(path, &read(path)?)
}

pub fn parse_series(path: &Path, text: &str) -> Result<Series> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let header = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| parse_err(path, 1, "missing `# kind=..., n=..., max=...` header"))?;
    let (mut kind, mut n, mut max) = (None, None, None);
    for part in header.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(path, 1, format!("bad header field {part:?}")))?;
        match key.trim() {
            "kind" => kind = Some(value.trim().to_string()),
            "n" => n = Some(parse_usize(path, 1, value)?),
            "max" => max = Some(parse_f64(path, 1, value)?),
            other => return Err(parse_err(path, 1, format!("unknown header field {other:?}"))),
        }
    }
    let kind = kind.ok_or_else(|| parse_err(path, 1, "header lacks kind"))?;
    let n = n.ok_or_else(|| parse_err(path, 1, "header lacks n"))?;
    let max = max.ok_or_else(|| parse_err(path, 1, "header lacks max"))?;
    let grid_err = |e: Error| parse_err(path, 1, e.to_string());
    let nodes = match kind.as_str() {
        "radial" => RadialGrid::new(max, n).map_err(grid_err)?.nodes(),
        "spectrum" => SpectralGrid::new(max, n).map_err(grid_err)?.nodes(),
        other => return Err(parse_err(path, 1, format!("unknown kind {other:?}"))),
    };

    let mut values = vec![None; n];
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(path, lineno, format!("expected 3 fields, found {}", fields.len())));
        }
        let i = parse_usize(path, lineno, fields[0])?;
        if i >= n {
            return Err(parse_err(path, lineno, format!("index {i} out of range for n={n}")));
        }
        let x = parse_f64(path, lineno, fields[1])?;
        if (x - nodes[i]).abs() > 1e-9 * max.max(1.0) {
            return Err(parse_err(
                path,
                lineno,
                format!("coordinate {x} does not match grid node {}", nodes[i]),
            ));
        }
        if values[i].replace(parse_f64(path, lineno, fields[2])?).is_some() {
            return Err(parse_err(path, lineno, format!("duplicate index {i}")));
        }
    }
    let values: Vec<f64> = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse_err(path, 0, format!("missing row for index {i}"))))
        .collect::<Result<_>>()?;
    Ok(match kind.as_str() {
        "radial" => Series::Radial(RadialFunction::new(RadialGrid::new(max, n)?, values)?),
        _ => Series::Spectrum(Spectrum::new(SpectralGrid::new(max, n)?, values)?),
    })
}

pub fn samples_to_string(samples: &SampleSet) -> String {
    let mut out = String::from("phi,tau,weight\n");
    for (p, w) in samples.points().iter().zip(samples.weights()) {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", p.phi, p.tau, w).expect("writing to a String");
    }
    out
}

pub fn write_samples(path: &Path, samples: &SampleSet) -> Result<()> {
    write(path, &samples_to_string(samples))
}

/// Reads `phi,tau[,weight]` rows; a header line is optional.
pub fn read_samples(path: &Path) -> Result<SampleSet> {
    let text = read(path)?;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut weighted = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (lineno == 1 && line.starts_with("phi")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let has_weight = match fields.len() {
            2 => false,
            3 => true,
            k => return Err(parse_err(path, lineno, format!("expected 2 or 3 fields, found {k}"))),
        };
        if *weighted.get_or_insert(has_weight) != has_weight {
            return Err(parse_err(path, lineno, "rows mix weighted and unweighted samples"));
        }
        let phi = parse_f64(path, lineno, fields[0])?;
        let tau = parse_f64(path, lineno, fields[1])?;
        points.push(Coset::new(phi, tau).map_err(|e| parse_err(path, lineno, e.to_string()))?);
        if has_weight {
            weights.push(parse_f64(path, lineno, fields[2])?);
        }
    }
    if points.is_empty() {
        return Err(parse_err(path, 0, "no samples"));
    }
    SampleSet::new(points, weighted.unwrap_or(false).then_some(weights))
        .map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn density_to_string(d: &DiskDensity) -> String {
    let mut out = String::from("m,kappa_index,kappa,value_re,value_im\n");
    let kappas = d.spectral_grid().nodes();
    for m in 0..=d.m_max() {
        let s = d.spectrum(m).expect("m within range");
        for (i, (k, v)) in kappas.iter().zip(&s.values).enumerate() {
            writeln!(out, "{m},{i},{k:.16e},{:.16e},{:.16e}", v.re, v.im).expect("writing to a String");
        }
    }
    out
}

pub fn write_density(path: &Path, d: &DiskDensity) -> Result<()> {
    write(path, &density_to_string(d))
}

/// Rows `phi_index,tau_index,value` of a grid indexed `[phi][tau]`.
pub fn write_contour(path: &Path, values: &[Vec<f64>]) -> Result<()> {
    let mut out = String::from("phi_index,tau_index,value\n");
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            writeln!(out, "{i},{j},{v:.16e}").expect("writing to a String");
        }
    }
    write(path, &out)
}

/// A matrix with an optional header row and an optional leading label column.
pub fn write_matrix(path: &Path, header: Option<&[String]>, labels: Option<&[String]>, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for (i, row) in rows.iter().enumerate() {
        let mut fields: Vec<String> = Vec::with_capacity(row.len() + 1);
        if let Some(l) = labels {
            fields.push(l[i].clone());
        }
        fields.extend(row.iter().map(|v| format!("{v:.16e}")));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    write(path, &out)
}

/// `dir/<stem><suffix>` for the file name stem of `input`.
pub fn derived_path(dir: &Path, input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    dir.join(format!("{stem}{suffix}"))
}
