//! Hilbert space-filling curve ordering and the Hilbert matching distance.
//!
//! Indices are computed with Skilling's transpose algorithm ("Programming the
//! Hilbert curve", AIP Conf. Proc. 707, 2004). [`hilbert_index`] returns a
//! `u64` and therefore needs `bits · d ≤ 62`; [`hilbert_key`] produces the same
//! ordering as an arbitrary-length bit string so high-dimensional point clouds
//! can be sorted at full resolution.

use std::cmp::Ordering;

use super::wasserstein1d::{check_order, root};
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;

pub const DEFAULT_HILBERT_BITS: u32 = 16;

const BOX_MARGIN: f64 = 1e-9;

/// In-place axes → transposed Hilbert index.
fn axes_to_transpose(x: &mut [u64], bits: u32) {
    let n = x.len();
    let m: u64 = 1 << (bits - 1);
    let mut q = m;
    while q > 1 {
        let p = q - 1;
        for i in 0..n {
            if x[i] & q != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q >>= 1;
    }
    for i in 1..n {
        x[i] ^= x[i - 1];
    }
    let mut t = 0;
    let mut q = m;
    while q > 1 {
        if x[n - 1] & q != 0 {
            t ^= q - 1;
        }
        q >>= 1;
    }
    for v in x.iter_mut() {
        *v ^= t;
    }
}

fn check_point(point: &[u64], bits: u32) -> Result<()> {
    if point.is_empty() {
        return Err(Error::invalid("Hilbert index needs d >= 1"));
    }
    if bits == 0 || bits > 63 {
        return Err(Error::invalid(format!(
            "bits per coordinate must be in 1..=63, got {bits}"
        )));
    }
    let limit = 1u64 << bits;
    if let Some((i, v)) = point.iter().enumerate().find(|(_, &v)| v >= limit) {
        return Err(Error::invalid(format!(
            "coordinate {i} = {v} is out of range [0, 2^{bits})"
        )));
    }
    Ok(())
}

/// Position of the cell `point ∈ [0, 2^bits)^d` along the order-`bits`
/// Hilbert curve.
pub fn hilbert_index(point: &[u64], bits: u32) -> Result<u64> {
    check_point(point, bits)?;
    if bits as usize * point.len() > 62 {
        return Err(Error::invalid(format!(
            "bits * d = {} exceeds 62; use hilbert_key for long indices",
            bits as usize * point.len()
        )));
    }
    let mut x = point.to_vec();
    axes_to_transpose(&mut x, bits);
    let mut h = 0u64;
    for b in (0..bits).rev() {
        for xi in &x {
            h = (h << 1) | ((xi >> b) & 1);
        }
    }
    Ok(h)
}

/// Big-endian Hilbert index of arbitrary length. Keys of equal `(d, bits)`
/// compare in curve order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HilbertKey(Vec<u64>);

impl HilbertKey {
    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

pub fn hilbert_key(point: &[u64], bits: u32) -> Result<HilbertKey> {
    check_point(point, bits)?;
    let mut x = point.to_vec();
    axes_to_transpose(&mut x, bits);
    Ok(pack_key(&x, bits))
}

fn pack_key(x: &[u64], bits: u32) -> HilbertKey {
    let total = bits as usize * x.len();
    let mut words = vec![0u64; total.div_ceil(64)];
    // left-align: the first emitted bit is the most significant of word 0
    let mut pos = 0usize;
    for b in (0..bits).rev() {
        for xi in x {
            if (xi >> b) & 1 == 1 {
                words[pos / 64] |= 1u64 << (63 - pos % 64);
            }
            pos += 1;
        }
    }
    HilbertKey(words)
}

/// Per-coordinate affine map from a padded bounding box onto `[0, 2^bits)`.
struct Quantizer {
    lo: Vec<f64>,
    scale: Vec<f64>,
    max_cell: f64,
}

impl Quantizer {
    fn joint(a: &EmpiricalMeasure, b: &EmpiricalMeasure, bits: u32) -> Self {
        let d = a.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for row in a.rows().chain(b.rows()) {
            for (c, &v) in row.iter().enumerate() {
                lo[c] = lo[c].min(v);
                hi[c] = hi[c].max(v);
            }
        }
        let cells = (1u64 << bits) as f64;
        let mut scale = vec![0.0; d];
        for c in 0..d {
            let span = hi[c] - lo[c];
            let pad = BOX_MARGIN
                * if span > 0.0 {
                    span
                } else {
                    lo[c].abs().max(1.0)
                };
            lo[c] -= pad;
            scale[c] = cells / (span + 2.0 * pad);
        }
        Self {
            lo,
            scale,
            max_cell: cells - 1.0,
        }
    }

    fn cell(&self, row: &[f64], out: &mut [u64]) {
        for (c, &v) in row.iter().enumerate() {
            let q = ((v - self.lo[c]) * self.scale[c]).floor();
            out[c] = q.clamp(0.0, self.max_cell) as u64;
        }
    }
}

fn curve_order(m: &EmpiricalMeasure, quant: &Quantizer, bits: u32) -> Vec<usize> {
    let mut cell = vec![0u64; m.dim()];
    let keys: Vec<HilbertKey> = m
        .rows()
        .map(|row| {
            quant.cell(row, &mut cell);
            let mut x = cell.clone();
            axes_to_transpose(&mut x, bits);
            pack_key(&x, bits)
        })
        .collect();
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&i, &j| match keys[i].cmp(&keys[j]) {
        Ordering::Equal => i.cmp(&j),
        o => o,
    });
    order
}

/// Assignment `π` (point `i` of `a` ↔ point `π[i]` of `b`) obtained by sorting
/// both measures along the Hilbert curve of their joint bounding box.
pub fn hilbert_matching(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    bits: u32,
) -> Result<Vec<usize>> {
    a.check_same_dim(b)?;
    a.check_same_len(b)?;
    if bits == 0 || bits > 63 {
        return Err(Error::invalid(format!(
            "bits per coordinate must be in 1..=63, got {bits}"
        )));
    }
    let quant = Quantizer::joint(a, b, bits);
    let oa = curve_order(a, &quant, bits);
    let ob = curve_order(b, &quant, bits);
    let mut assignment = vec![0usize; a.len()];
    for (ia, ib) in oa.into_iter().zip(ob) {
        assignment[ia] = ib;
    }
    Ok(assignment)
}

#[inline]
pub(crate) fn point_cost(x: &[f64], y: &[f64], p: f64) -> f64 {
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    if p == 2.0 {
        sq
    } else if p == 1.0 {
        sq.sqrt()
    } else {
        sq.powf(p / 2.0)
    }
}

/// Mean of `‖a_i − b_{π(i)}‖₂^p` over the coupling.
pub(crate) fn coupling_cost_pow(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    assignment: &[usize],
    p: f64,
) -> f64 {
    let total: f64 = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| point_cost(a.point(i), b.point(j), p))
        .sum();
    total / assignment.len() as f64
}

/// Transport cost `((1/n) Σ ‖a_(i) − b_(i)‖^p)^{1/p}` of the Hilbert-sorted
/// matching. Requires equal sample counts; an upper bound on `W_p`.
pub fn hilbert_distance(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    p: f64,
    bits: u32,
) -> Result<f64> {
    check_order(p)?;
    let assignment = hilbert_matching(a, b, bits)?;
    Ok(root(coupling_cost_pow(a, b, &assignment, p), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::wasserstein_1d_unsorted;
    use std::collections::HashSet;

    fn cells(d: usize, bits: u32) -> Vec<Vec<u64>> {
        let side = 1u64 << bits;
        let total = side.pow(d as u32);
        (0..total)
            .map(|mut k| {
                (0..d)
                    .map(|_| {
                        let c = k % side;
                        k /= side;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn order_one_square_is_bijective() {
        let idx: HashSet<u64> = cells(2, 1)
            .iter()
            .map(|c| hilbert_index(c, 1).unwrap())
            .collect();
        assert_eq!(idx, (0..4).collect());
    }

    #[test]
    fn one_dimensional_curve_is_identity() {
        for bits in [1, 3, 8, 20] {
            for x in [0u64, 1, 5, (1 << bits) - 1] {
                if x < 1 << bits {
                    assert_eq!(hilbert_index(&[x], bits).unwrap(), x);
                }
            }
        }
    }

    /// Enumerates all cells, inverts the index, and checks that consecutive
    /// curve positions are grid neighbours.
    fn check_curve(d: usize, bits: u32) {
        let all = cells(d, bits);
        let mut by_index = vec![None; all.len()];
        for c in &all {
            let h = hilbert_index(c, bits).unwrap() as usize;
            assert!(by_index[h].is_none(), "index {h} hit twice");
            by_index[h] = Some(c.clone());
        }
        let path: Vec<Vec<u64>> = by_index.into_iter().map(Option::unwrap).collect();
        for w in path.windows(2) {
            let manhattan: u64 = w[0].iter().zip(&w[1]).map(|(a, b)| a.abs_diff(*b)).sum();
            let chebyshev = w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| a.abs_diff(*b))
                .max()
                .unwrap();
            assert_eq!(manhattan, 1, "{:?} -> {:?}", w[0], w[1]);
            assert!(chebyshev <= 1);
        }
    }

    #[test]
    fn consecutive_cells_are_adjacent() {
        check_curve(2, 2);
        check_curve(2, 4);
        check_curve(3, 2);
        check_curve(4, 2);
    }

    #[test]
    fn keys_agree_with_short_indices() {
        for c in cells(3, 3) {
            let h = hilbert_index(&c, 3).unwrap();
            let key = hilbert_key(&c, 3).unwrap();
            assert_eq!(key.words()[0] >> (64 - 9), h);
        }
    }

    #[test]
    fn out_of_range_and_oversized_indices_fail() {
        assert!(hilbert_index(&[4, 0], 2).is_err());
        assert!(hilbert_index(&[0; 4], 16).is_err());
        assert!(hilbert_key(&[0; 4], 16).is_ok());
        assert!(hilbert_index(&[], 2).is_err());
    }

    #[test]
    fn identical_measures_have_zero_distance() {
        let a = EmpiricalMeasure::from_rows(&[[0.0, 1.0], [2.0, -1.0], [0.5, 0.5]]).unwrap();
        assert_eq!(
            hilbert_distance(&a, &a, 2.0, DEFAULT_HILBERT_BITS).unwrap(),
            0.0
        );
    }

    #[test]
    fn one_dimensional_matches_sorted_wasserstein() {
        let x = [3.0, -1.0, 0.25, 7.5, 2.0];
        let y = [0.0, 1.0, -4.0, 2.5, 2.0];
        let a = EmpiricalMeasure::from_scalars(&x).unwrap();
        let b = EmpiricalMeasure::from_scalars(&y).unwrap();
        for p in [1.0, 2.0] {
            let h = hilbert_distance(&a, &b, p, DEFAULT_HILBERT_BITS).unwrap();
            let w = wasserstein_1d_unsorted(&x, &y, p).unwrap();
            assert!((h - w).abs() < 1e-12);
        }
    }

    #[test]
    fn unequal_sizes_are_rejected() {
        let a = EmpiricalMeasure::from_scalars(&[1.0, 2.0]).unwrap();
        let b = EmpiricalMeasure::from_scalars(&[1.0]).unwrap();
        assert!(hilbert_distance(&a, &b, 2.0, 16).is_err());
    }
}
