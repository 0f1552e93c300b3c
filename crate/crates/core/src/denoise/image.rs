use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng;

/// Pixel position `(row, col)`; ordering is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Gray-level raster, row-major, extended to `Z²` by periodicity.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be >= 1"));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("pixel values must be finite"));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, pos: Pos) -> f64 {
        self.pixels[pos.row * self.width + pos.col]
    }

    /// Pixel at an arbitrary integer coordinate, wrapped onto the grid.
    #[inline]
    pub fn at(&self, row: isize, col: isize) -> f64 {
        let r = row.rem_euclid(self.height as isize) as usize;
        let c = col.rem_euclid(self.width as isize) as usize;
        self.pixels[r * self.width + c]
    }

    pub fn index_of(&self, pos: Pos) -> usize {
        pos.row * self.width + pos.col
    }

    pub fn pos_of(&self, index: usize) -> Pos {
        Pos::new(index / self.width, index % self.width)
    }

    pub(crate) fn wrap(&self, row: isize, col: isize) -> Pos {
        Pos::new(
            row.rem_euclid(self.height as isize) as usize,
            col.rem_euclid(self.width as isize) as usize,
        )
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Rounds to the nearest integer and clamps to `[0, 255]`.
    pub fn quantized(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self
                .pixels
                .iter()
                .map(|p| p.round().clamp(0.0, 255.0))
                .collect(),
        }
    }

    pub fn clamped(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.clamp(0.0, 255.0)).collect(),
        }
    }

    /// `v = u + w` with `w` i.i.d. `N(0, σ²)`; values are not clamped.
    pub fn with_gaussian_noise(&self, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::invalid("noise level must be finite and >= 0"));
        }
        let mut r = rng::seeded(seed);
        let pixels = self
            .pixels
            .iter()
            .map(|p| p + sigma * r.sample::<f64, _>(StandardNormal))
            .collect();
        Ok(Self {
            width: self.width,
            height: self.height,
            pixels,
        })
    }
}

/// `−10 log₁₀(‖u − û‖² / (255² N M))` in dB; `+∞` for identical images.
pub fn psnr(u: &GrayImage, u_hat: &GrayImage) -> Result<f64> {
    if !u.same_shape(u_hat) {
        return Err(Error::invalid(format!(
            "image sizes differ: {}x{} vs {}x{}",
            u.width, u.height, u_hat.width, u_hat.height
        )));
    }
    let se: f64 = u
        .pixels
        .iter()
        .zip(&u_hat.pixels)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if se == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-10.0 * (se / (255.0 * 255.0 * u.len() as f64)).log10())
}
