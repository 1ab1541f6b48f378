//! File formats.
//!
//! A field is a pair of files: `<stem>.json` holds the metadata sidecar
//! (schema "wigner-grid/1") and `<stem>.f64` a raw little-endian IEEE-754
//! float64 raster, row-major with x varying fastest. Real rasters store one
//! value per point, complex rasters interleave (re, im). CSV export writes
//! `x,p,value` lines with 17 significant digits for external plotting.
//! A trajectory adds a run manifest (schema "wigner-run/1") with the config
//! echo and the per-frame diagnostics time series.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GridError;
use crate::field::{Diagnostics, WignerField};
use crate::grid::PhaseSpaceGrid;

pub const GRID_SCHEMA: &str = "wigner-grid/1";
pub const RUN_SCHEMA: &str = "wigner-run/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterKind {
    Real,
    Complex,
}

impl RasterKind {
    fn as_str(self) -> &'static str {
        match self {
            RasterKind::Real => "real",
            RasterKind::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFileMeta {
    pub schema: String,
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
    pub label: String,
    pub kind: String,
}

/// Write `<stem>.json` + `<stem>.f64`; returns the two paths.
pub fn write_field(
    dir: &Path,
    stem: &str,
    w: &WignerField,
    kind: RasterKind,
) -> Result<(PathBuf, PathBuf), GridError> {
    fs::create_dir_all(dir)?;
    let meta = GridFileMeta {
        schema: GRID_SCHEMA.to_string(),
        x_min: w.grid.x_min,
        x_max: w.grid.x_max,
        p_min: w.grid.p_min,
        p_max: w.grid.p_max,
        nx: w.grid.nx,
        np: w.grid.np,
        label: w.label.clone(),
        kind: kind.as_str().to_string(),
    };
    let json_path = dir.join(format!("{stem}.json"));
    fs::write(&json_path, serde_json::to_string_pretty(&meta)?)?;

    let f64_path = dir.join(format!("{stem}.f64"));
    let mut bytes = Vec::with_capacity(
        w.values.len() * 8 * if kind == RasterKind::Complex { 2 } else { 1 },
    );
    // storage is (np, nx) row-major, so plain iteration is x-fastest
    for v in w.values.iter() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        if kind == RasterKind::Complex {
            bytes.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    let mut file = fs::File::create(&f64_path)?;
    file.write_all(&bytes)?;
    Ok((json_path, f64_path))
}

/// Read a field back from its `.json` sidecar (the `.f64` companion must
/// sit next to it).
pub fn read_field(json_path: &Path) -> Result<WignerField, GridError> {
    let meta: GridFileMeta = serde_json::from_str(&fs::read_to_string(json_path)?)?;
    if meta.schema != GRID_SCHEMA {
        return Err(GridError::Format(format!(
            "unsupported schema `{}` (expected {GRID_SCHEMA})",
            meta.schema
        )));
    }
    let kind = match meta.kind.as_str() {
        "real" => RasterKind::Real,
        "complex" => RasterKind::Complex,
        other => return Err(GridError::Format(format!("unknown raster kind `{other}`"))),
    };
    let grid = PhaseSpaceGrid::new(
        meta.x_min, meta.x_max, meta.p_min, meta.p_max, meta.nx, meta.np,
    )?;

    let f64_path = json_path.with_extension("f64");
    let mut bytes = Vec::new();
    fs::File::open(&f64_path)?.read_to_end(&mut bytes)?;
    let per_point = if kind == RasterKind::Complex { 16 } else { 8 };
    let expected = grid.nx * grid.np * per_point;
    if bytes.len() != expected {
        return Err(GridError::Format(format!(
            "raster {} has {} bytes, expected {expected}",
            f64_path.display(),
            bytes.len()
        )));
    }

    let mut values = Array2::zeros((grid.np, grid.nx));
    for (idx, v) in values.iter_mut().enumerate() {
        let at = idx * per_point;
        let re = f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let im = if kind == RasterKind::Complex {
            f64::from_le_bytes(bytes[at + 8..at + 16].try_into().unwrap())
        } else {
            0.0
        };
        *v = Complex64::new(re, im);
    }
    Ok(WignerField { grid, values, label: meta.label })
}

/// CSV export: one `x,p,value` line per grid point, 17 significant digits.
pub fn write_csv(path: &Path, w: &WignerField) -> Result<(), GridError> {
    let mut out = String::with_capacity(w.values.len() * 64);
    let xs = w.grid.xs();
    let ps = w.grid.ps();
    for (j, &p) in ps.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                x,
                p,
                w.values[[j, i]].re
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameMeta {
    pub index: usize,
    pub t: f64,
    pub stem: String,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub schema: &'static str,
    pub config: &'a serde_json::Value,
    pub frames: Vec<FrameMeta>,
}

/// Write one grid-file pair per frame plus the run manifest; returns the
/// manifest path.
pub fn write_run(
    dir: &Path,
    config_echo: &serde_json::Value,
    frames: &[crate::evolve::Frame],
    csv_too: bool,
) -> Result<PathBuf, GridError> {
    fs::create_dir_all(dir)?;
    let mut metas = Vec::with_capacity(frames.len());
    for frame in frames {
        let stem = format!("frame_{:06}", frame.index);
        write_field(dir, &stem, &frame.field, RasterKind::Real)?;
        if csv_too {
            write_csv(&dir.join(format!("{stem}.csv")), &frame.field)?;
        }
        metas.push(FrameMeta {
            index: frame.index,
            t: frame.t,
            stem,
            diagnostics: frame.diag.clone(),
        });
    }
    let manifest = RunManifest { schema: RUN_SCHEMA, config: config_echo, frames: metas };
    let path = dir.join("run.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}
