//! Empirical measures: `n` equally weighted points in `R^d`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Uniform empirical measure `(1/n) Σ δ_{y_i}` stored as a row-major `n × d`
/// buffer. Every coordinate is finite and `n, d ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<f64>,
    dim: usize,
}

impl EmpiricalMeasure {
    pub fn new(points: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("empirical measure dimension must be >= 1"));
        }
        if points.is_empty() {
            return Err(Error::invalid("empirical measure needs at least one point"));
        }
        if !points.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "buffer of length {} is not a multiple of dimension {dim}",
                points.len()
            )));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate at point {} (coordinate {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { points, dim })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut points = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::invalid(format!(
                    "row {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            points.extend_from_slice(r);
        }
        Self::new(points, dim)
    }

    /// One-dimensional measure from scalar samples.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec(), 1)
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.points.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.points
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "this approximation requires equal sample counts, got {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Writes one row per point, `d` comma-separated columns, no header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for row in self.rows() {
            let mut first = true;
            for v in row {
                if !first {
                    out.write_all(b",")?;
                }
                first = false;
                write!(out, "{v}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut dim = 0usize;
        let mut offset = 0usize;
        for line in input.lines() {
            let line = line?;
            let line_len = line.len() + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                offset += line_len;
                continue;
            }
            let before = points.len();
            for field in trimmed.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(offset, format!("not a number: {field:?}")))?;
                points.push(v);
            }
            let cols = points.len() - before;
            if dim == 0 {
                dim = cols;
            } else if cols != dim {
                return Err(Error::parse(
                    offset,
                    format!("row has {cols} columns, expected {dim}"),
                ));
            }
            offset += line_len;
        }
        Self::new(points, dim.max(1))
    }
}
