//! Square patches with periodic boundary handling.

use rand::seq::index;
use rayon::prelude::*;

use super::{GrayImage, Pos};
use crate::error::{Error, Result};
use crate::rng;

/// `(2r+1) × (2r+1)` window centred at `center`, flattened row-major over
/// offsets `k ∈ {−r..r}²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub values: Vec<f64>,
    pub radius: usize,
    pub center: Pos,
}

impl Patch {
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Value at offset `(dr, dc)` with `|dr|, |dc| ≤ r`.
    pub fn at(&self, dr: isize, dc: isize) -> f64 {
        let r = self.radius as isize;
        self.values[((dr + r) * (2 * r + 1) + dc + r) as usize]
    }
}

#[inline]
pub(crate) fn fill_patch(img: &GrayImage, row: isize, col: isize, radius: usize, out: &mut [f64]) {
    let r = radius as isize;
    let mut k = 0;
    for dr in -r..=r {
        for dc in -r..=r {
            out[k] = img.at(row + dr, col + dc);
            k += 1;
        }
    }
}

/// `P_i(k) = v(i + k)` for `k ∈ {−r..r}²`, wrapping at the borders.
pub fn extract_patch(img: &GrayImage, center: Pos, radius: usize) -> Patch {
    let side = 2 * radius + 1;
    let mut values = vec![0.0; side * side];
    fill_patch(
        img,
        center.row as isize,
        center.col as isize,
        radius,
        &mut values,
    );
    Patch {
        values,
        radius,
        center,
    }
}

/// Every patch of an image, indexed by linear pixel index.
#[derive(Debug, Clone)]
pub(crate) struct PatchTable {
    pub(crate) len: usize,
    values: Vec<f64>,
}

impl PatchTable {
    pub(crate) fn new(img: &GrayImage, radius: usize) -> Self {
        let side = 2 * radius + 1;
        let len = side * side;
        let mut values = vec![0.0; len * img.len()];
        values.par_chunks_mut(len).enumerate().for_each(|(i, out)| {
            let p = img.pos_of(i);
            fill_patch(img, p.row as isize, p.col as isize, radius, out);
        });
        Self { len, values }
    }

    #[inline]
    pub(crate) fn get(&self, index: usize) -> &[f64] {
        &self.values[index * self.len..(index + 1) * self.len]
    }
}

#[inline]
pub(crate) fn sq_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared distance, abandoning the sum once it reaches `bound`.
#[inline]
fn sq_distance_bounded(a: &[f64], b: &[f64], bound: f64) -> f64 {
    let mut s = 0.0;
    for (ca, cb) in a.chunks(8).zip(b.chunks(8)) {
        s += sq_distance(ca, cb);
        if s >= bound {
            return s;
        }
    }
    s
}

/// Sampled dictionary `D` of distinct positions with their patches, kept in
/// lexicographic `(row, col)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchDictionary {
    pub positions: Vec<Pos>,
    pub patches: Vec<Patch>,
    pub seed: u64,
}

/// Samples `dict_size` distinct positions uniformly without replacement and
/// extracts their patches from `img`.
pub fn build_dictionary(
    img: &GrayImage,
    dict_size: usize,
    radius: usize,
    seed: u64,
) -> Result<PatchDictionary> {
    if dict_size == 0 {
        return Err(Error::invalid("dictionary size must be >= 1"));
    }
    if dict_size > img.len() {
        return Err(Error::invalid(format!(
            "dictionary size {dict_size} exceeds the {} pixels of the image",
            img.len()
        )));
    }
    let mut r = rng::seeded(seed);
    let mut picked: Vec<usize> = index::sample(&mut r, img.len(), dict_size).into_vec();
    picked.sort_unstable();
    let positions: Vec<Pos> = picked.into_iter().map(|i| img.pos_of(i)).collect();
    let patches = positions
        .iter()
        .map(|&p| extract_patch(img, p, radius))
        .collect();
    Ok(PatchDictionary {
        positions,
        patches,
        seed,
    })
}

impl PatchDictionary {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Index into the dictionary of the entry closest to `patch`; ties go to
    /// the lexicographically smallest position.
    pub(crate) fn nearest(&self, patch: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.patches.iter().enumerate() {
            let d = sq_distance_bounded(patch, &p.values, best_d);
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }

    /// `φ` for every pixel, as dictionary indices in linear pixel order.
    pub(crate) fn assign_all(&self, table: &PatchTable, pixels: usize) -> Vec<usize> {
        (0..pixels)
            .into_par_iter()
            .map(|i| self.nearest(table.get(i)))
            .collect()
    }
}

/// `φ(i) = argmin_{j ∈ D} ‖P_i − P_j‖₂`.
pub fn phi_map(i: Pos, dict: &PatchDictionary, img: &GrayImage, radius: usize) -> Result<Pos> {
    if dict.is_empty() {
        return Err(Error::invalid("dictionary is empty"));
    }
    let p = extract_patch(img, i, radius);
    Ok(dict.positions[dict.nearest(&p.values)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp4() -> GrayImage {
        GrayImage::from_fn(4, 4, |r, c| (4 * r + c) as f64).unwrap()
    }

    #[test]
    fn constant_and_single_pixel_patches() {
        let img = GrayImage::filled(5, 3, 7.0).unwrap();
        assert!(extract_patch(&img, Pos::new(1, 1), 2)
            .values
            .iter()
            .all(|&v| v == 7.0));
        let ramp = ramp4();
        let p = extract_patch(&ramp, Pos::new(2, 3), 0);
        assert_eq!(p.values, vec![11.0]);
    }

    #[test]
    fn corner_patch_wraps() {
        // ramp value is 4·row + col; row −1 wraps to 3 and col −1 to 3
        let p = extract_patch(&ramp4(), Pos::new(0, 0), 1);
        assert_eq!(
            p.values,
            vec![15.0, 12.0, 13.0, 3.0, 0.0, 1.0, 7.0, 4.0, 5.0]
        );
        assert_eq!(p.at(-1, -1), 15.0);
        assert_eq!(p.at(1, 1), 5.0);
    }

    #[test]
    fn full_dictionary_is_every_position() {
        let img = ramp4();
        let d = build_dictionary(&img, 16, 1, 3).unwrap();
        let all: Vec<Pos> = (0..16).map(|i| img.pos_of(i)).collect();
        assert_eq!(d.positions, all);
        assert!(build_dictionary(&img, 17, 1, 3).is_err());
    }

    #[test]
    fn dictionary_is_reproducible_and_distinct() {
        let img = GrayImage::filled(481, 321, 0.0).unwrap();
        let a = build_dictionary(&img, 1000, 0, 9).unwrap();
        let b = build_dictionary(&img, 1000, 0, 9).unwrap();
        assert_eq!(a, b);
        let mut pos = a.positions.clone();
        pos.dedup();
        assert_eq!(pos.len(), 1000);
        assert!(a.positions.iter().all(|p| p.row < 321 && p.col < 481));
    }

    #[test]
    fn phi_of_dictionary_member_is_itself() {
        let img = GrayImage::from_fn(8, 8, |r, c| ((r * 7 + c * 13) % 17) as f64).unwrap();
        let d = build_dictionary(&img, 10, 1, 4).unwrap();
        for &p in &d.positions {
            // all positions of this pattern have distinct patches
            assert_eq!(phi_map(p, &d, &img, 1).unwrap(), p);
        }
    }

    #[test]
    fn constant_image_ties_break_lexicographically() {
        let img = GrayImage::filled(6, 6, 3.0).unwrap();
        let d = build_dictionary(&img, 5, 1, 11).unwrap();
        let smallest = *d.positions.iter().min().unwrap();
        for i in 0..36 {
            assert_eq!(phi_map(img.pos_of(i), &d, &img, 1).unwrap(), smallest);
        }
    }

    #[test]
    fn phi_matches_exhaustive_search() {
        let img = GrayImage::from_fn(8, 8, |r, c| {
            ((r * r * 3 + c * 5 + r * c) % 23) as f64 * 10.0
        })
        .unwrap();
        let dict = PatchDictionary {
            positions: vec![
                Pos::new(0, 1),
                Pos::new(2, 6),
                Pos::new(5, 3),
                Pos::new(7, 7),
            ],
            patches: [
                Pos::new(0, 1),
                Pos::new(2, 6),
                Pos::new(5, 3),
                Pos::new(7, 7),
            ]
            .iter()
            .map(|&p| extract_patch(&img, p, 1))
            .collect(),
            seed: 0,
        };
        for r in 0..8 {
            for c in 0..8 {
                // independent scan: direct wrapped indexing, explicit minimum
                let mut best = (f64::INFINITY, Pos::new(usize::MAX, 0));
                for &j in &dict.positions {
                    let mut s = 0.0;
                    for dr in -1isize..=1 {
                        for dc in -1isize..=1 {
                            let a = img.at(r as isize + dr, c as isize + dc);
                            let b = img.at(j.row as isize + dr, j.col as isize + dc);
                            s += (a - b) * (a - b);
                        }
                    }
                    if s < best.0 || (s == best.0 && j < best.1) {
                        best = (s, j);
                    }
                }
                assert_eq!(phi_map(Pos::new(r, c), &dict, &img, 1).unwrap(), best.1);
            }
        }
    }
}
