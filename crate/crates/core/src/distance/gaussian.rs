//! Closed-form distances between isotropic centred Gaussians.

use crate::error::{Error, Result};

fn check_scales(sigma_star: f64, sigma: f64) -> Result<()> {
    if !(sigma_star > 0.0 && sigma > 0.0) || !sigma_star.is_finite() || !sigma.is_finite() {
        return Err(Error::invalid(format!(
            "standard deviations must be finite and positive, got {sigma_star} and {sigma}"
        )));
    }
    Ok(())
}

/// `W_2(N(0, σ⋆² I_d), N(0, σ² I_d)) = √d · |σ⋆ − σ|`.
pub fn gaussian_w2_analytic(sigma_star: f64, sigma: f64, dim: usize) -> Result<f64> {
    check_scales(sigma_star, sigma)?;
    if dim == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    Ok((dim as f64).sqrt() * (sigma_star - sigma).abs())
}

/// Population `SW_2` between the same pair of Gaussians.
///
/// Every unit-norm projection of `N(0, σ² I_d)` is `N(0, σ²)`, so each sliced
/// `W_2` is `|σ⋆ − σ|` whatever the direction and the value does not depend on
/// `d`.
pub fn gaussian_sw2_oracle(sigma_star: f64, sigma: f64, dim: usize) -> Result<f64> {
    check_scales(sigma_star, sigma)?;
    if dim == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    Ok((sigma_star - sigma).abs())
}
