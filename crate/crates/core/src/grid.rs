//! Uniform-grid paths: the carrier for every sampled process, plus the CSV
//! and binary-sidecar serialization used by the CLI.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform time grid `t_i = t0 + i*dt`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    /// Number of steps; the grid carries `n + 1` points.
    pub n: usize,
}

impl GridSpec {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        if n < 1 {
            return Err(Error::invalid("grid needs at least one step"));
        }
        Ok(GridSpec { t0, dt, n })
    }

    pub fn points(&self) -> usize {
        self.n + 1
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.time(i)).collect()
    }
}

/// Provenance carried alongside sampled values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathMeta {
    pub label: String,
    pub seed: Option<u64>,
}

/// A process sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub meta: PathMeta,
}

impl GridPath {
    pub fn new(grid: GridSpec, values: Vec<f64>, meta: PathMeta) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::invalid(format!(
                "value count {} does not match grid points {}",
                values.len(),
                grid.points()
            )));
        }
        if values.len() < 2 {
            return Err(Error::invalid("a path needs at least two values"));
        }
        Ok(GridPath { grid, values, meta })
    }

    /// Deterministic path `t ↦ f(t)` sampled on the grid.
    pub fn from_fn(grid: GridSpec, label: &str, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=grid.n).map(|i| f(grid.time(i))).collect();
        GridPath {
            grid,
            values,
            meta: PathMeta {
                label: label.to_string(),
                seed: None,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }

    /// Write as CSV with header `t,value`. Values print with Rust's shortest
    /// round-trip formatting, so parsing the file recovers every bit.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.grid.time(i), v)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut w)
    }

    /// Parse the `t,value` CSV format. The grid is reconstructed from the
    /// first two timestamps and checked for uniformity.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut ts: Vec<f64> = Vec::new();
        let mut vs: Vec<f64> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if lineno == 0 {
                if line.trim() != "t,value" {
                    return Err(Error::Parse(format!(
                        "expected header 't,value', got '{line}'"
                    )));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: missing comma", lineno + 1)))?;
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            ts.push(parse(t)?);
            vs.push(parse(v)?);
        }
        if ts.len() < 2 {
            return Err(Error::Parse("need at least two rows".into()));
        }
        let dt = ts[1] - ts[0];
        let grid = GridSpec::new(ts[0], dt, ts.len() - 1)?;
        for (i, &t) in ts.iter().enumerate() {
            if (t - grid.time(i)).abs() > 1e-9 * (1.0 + t.abs()) {
                return Err(Error::Parse(format!("non-uniform grid at row {i}")));
            }
        }
        GridPath::new(grid, vs, PathMeta::default())
    }

    pub fn read_csv_file(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    /// Little-endian f64 sidecar with the raw values; bit-exact round trip.
    pub fn write_f64_sidecar(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_f64_sidecar(path: &Path, grid: GridSpec) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if bytes.len() != grid.points() * 8 {
            return Err(Error::Parse(format!(
                "sidecar holds {} bytes, expected {}",
                bytes.len(),
                grid.points() * 8
            )));
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        GridPath::new(grid, values, PathMeta::default())
    }
}

/// An ensemble of paths sharing one grid (rows = paths).
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub grid: GridSpec,
    pub paths: Vec<Vec<f64>>,
}

impl Ensemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    /// Values at grid index `i` across the ensemble.
    pub fn cross_section(&self, i: usize) -> Vec<f64> {
        self.paths.iter().map(|p| p[i]).collect()
    }

    pub fn path_slices(&self) -> Vec<&[f64]> {
        self.paths.iter().map(|p| p.as_slice()).collect()
    }

    /// CSV matrix: header row carries the grid times, each further row is
    /// one path.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let header: Vec<String> = (0..=self.grid.n)
            .map(|i| self.grid.time(i).to_string())
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for p in &self.paths {
            let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let grid = GridSpec::new(0.0, 0.1, 4).unwrap();
        let p = GridPath::new(
            grid,
            vec![0.0, 0.1234567890123456789, -3.5e-13, 7.0, 1.0 / 3.0],
            PathMeta::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let q = GridPath::read_csv(&buf[..]).unwrap();
        assert_eq!(p.values, q.values);
        assert_eq!(p.grid.n, q.grid.n);
    }

    #[test]
    fn rejects_mismatched_lengths() {
        let grid = GridSpec::new(0.0, 0.5, 3).unwrap();
        assert!(GridPath::new(grid, vec![0.0, 1.0], PathMeta::default()).is_err());
    }

    #[test]
    fn sidecar_round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join("lv_sidecar_test");
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join("p.f64");
        let grid = GridSpec::new(0.0, 0.25, 2).unwrap();
        let p = GridPath::new(grid, vec![0.1, f64::MIN_POSITIVE, -0.0], PathMeta::default()).unwrap();
        p.write_f64_sidecar(&file).unwrap();
        let q = GridPath::read_f64_sidecar(&file, grid).unwrap();
        assert_eq!(p.values[1].to_bits(), q.values[1].to_bits());
        assert_eq!(p.values[2].to_bits(), q.values[2].to_bits());
    }
}
