//! Random directions on the unit sphere and projected measures.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::rng;

/// `L` unit vectors in `R^d`, drawn uniformly on `S^{d-1}` from a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet {
    directions: Vec<f64>,
    dim: usize,
    seed: u64,
}

/// Draws `count` i.i.d. uniform directions on `S^{dim-1}` by normalizing
/// standard Gaussian vectors.
pub fn sample_projections(dim: usize, count: usize, seed: u64) -> Result<ProjectionSet> {
    if dim == 0 {
        return Err(Error::invalid("projection dimension must be >= 1"));
    }
    if count == 0 {
        return Err(Error::invalid("number of projections must be >= 1"));
    }
    let mut rng = rng::seeded(seed);
    let mut directions = Vec::with_capacity(dim * count);
    let mut v = vec![0.0; dim];
    for _ in 0..count {
        loop {
            for c in v.iter_mut() {
                *c = rng.sample(StandardNormal);
            }
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-300 {
                directions.extend(v.iter().map(|c| c / norm));
                break;
            }
        }
    }
    Ok(ProjectionSet {
        directions,
        dim,
        seed,
    })
}

impl ProjectionSet {
    /// Builds a set from explicit directions; each row is normalized.
    pub fn from_directions(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(Error::invalid("need at least one nonempty direction"));
        }
        let mut directions = Vec::with_capacity(dim * rows.len());
        for r in rows {
            if r.len() != dim {
                return Err(Error::invalid("directions have inconsistent dimension"));
            }
            let norm = r.iter().map(|c| c * c).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::invalid("direction must be finite and nonzero"));
            }
            directions.extend(r.iter().map(|c| c / norm));
        }
        Ok(Self {
            directions,
            dim,
            seed: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.directions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn direction(&self, l: usize) -> &[f64] {
        &self.directions[l * self.dim..(l + 1) * self.dim]
    }

    pub fn directions(&self) -> std::slice::ChunksExact<'_, f64> {
        self.directions.chunks_exact(self.dim)
    }

    /// Projects every point on every direction and sorts each slice.
    pub fn project(&self, measure: &EmpiricalMeasure) -> Result<ProjectedMeasure> {
        if measure.dim() != self.dim {
            return Err(Error::invalid(format!(
                "measure dimension {} does not match projection dimension {}",
                measure.dim(),
                self.dim
            )));
        }
        Ok(self.project_flat(measure.as_slice()))
    }

    /// [`ProjectionSet::project`] on row-major points of this set's
    /// dimension, without validation.
    pub(crate) fn project_flat(&self, points: &[f64]) -> ProjectedMeasure {
        let n = points.len() / self.dim;
        let mut values = Vec::with_capacity(n * self.len());
        for u in self.directions() {
            let start = values.len();
            values.extend(points.chunks_exact(self.dim).map(|y| dot(u, y)));
            values[start..].sort_unstable_by(f64::total_cmp);
        }
        ProjectedMeasure { values, len: n }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sorted one-dimensional projections of a measure, one slice per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedMeasure {
    values: Vec<f64>,
    len: usize,
}

impl ProjectedMeasure {
    /// Wraps precomputed per-direction slices; each is sorted here.
    pub fn from_slices(slices: Vec<Vec<f64>>) -> Result<Self> {
        let len = slices.first().map(Vec::len).unwrap_or(0);
        if len == 0 || slices.iter().any(|s| s.len() != len) {
            return Err(Error::invalid(
                "projected slices must be nonempty and equal length",
            ));
        }
        let mut values = Vec::with_capacity(len * slices.len());
        for mut s in slices {
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("projected value is not finite"));
            }
            s.sort_unstable_by(f64::total_cmp);
            values.extend(s);
        }
        Ok(Self { values, len })
    }

    pub fn num_projections(&self) -> usize {
        self.values.len() / self.len
    }

    pub fn sample_len(&self) -> usize {
        self.len
    }

    pub fn slice(&self, l: usize) -> &[f64] {
        &self.values[l * self.len..(l + 1) * self.len]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_have_unit_norm() {
        let set = sample_projections(5, 100, 7).unwrap();
        assert_eq!(set.len(), 100);
        for u in set.directions() {
            let n = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn one_dimensional_sphere_is_plus_minus_one() {
        let set = sample_projections(1, 10, 1).unwrap();
        for u in set.directions() {
            assert!(u[0] == 1.0 || u[0] == -1.0);
        }
    }

    #[test]
    fn uniform_on_sphere_has_zero_mean() {
        // 3σ/√L with σ = 1/√3 and L = 1e5 is about 0.0055; 0.02 leaves margin
        let set = sample_projections(3, 100_000, 2).unwrap();
        for c in 0..3 {
            let mean = set.directions().map(|u| u[c]).sum::<f64>() / set.len() as f64;
            assert!(mean.abs() < 0.02, "coordinate {c} mean {mean}");
        }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(
            sample_projections(4, 8, 11).unwrap(),
            sample_projections(4, 8, 11).unwrap()
        );
        assert_ne!(
            sample_projections(4, 8, 11).unwrap(),
            sample_projections(4, 8, 12).unwrap()
        );
    }

    #[test]
    fn rejects_zero_sizes() {
        assert!(sample_projections(0, 3, 0).is_err());
        assert!(sample_projections(3, 0, 0).is_err());
    }

    #[test]
    fn projections_are_sorted() {
        let m = EmpiricalMeasure::from_rows(&[[3.0, 0.0], [1.0, 1.0], [-2.0, 5.0]]).unwrap();
        let set = ProjectionSet::from_directions(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let p = set.project(&m).unwrap();
        assert_eq!(p.slice(0), &[-2.0, 1.0, 3.0]);
        assert_eq!(p.slice(1), &[0.0, 1.0, 5.0]);
    }
}
