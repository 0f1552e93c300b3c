//! Exact one-dimensional Wasserstein distances via quantile functions.

use crate::error::{Error, Result};

#[inline]
pub(crate) fn abs_pow(diff: f64, p: f64) -> f64 {
    let a = diff.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

#[inline]
pub(crate) fn root(value: f64, p: f64) -> f64 {
    if p == 1.0 {
        value
    } else if p == 2.0 {
        value.sqrt()
    } else {
        value.powf(1.0 / p)
    }
}

pub(crate) fn check_order(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "Wasserstein order must be a finite real >= 1, got {p}"
        )));
    }
    Ok(())
}

fn check_sorted_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invalid(format!("{name} is empty")));
    }
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid(format!("{name} contains NaN")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!(
            "{name} contains a non-finite value"
        )));
    }
    if v.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid(format!("{name} is not sorted ascending")));
    }
    Ok(())
}

/// `W_p^p` between two sorted samples with uniform weights. Inputs are not
/// validated.
///
/// The quantile functions are step functions with breakpoints at `i/n` and
/// `j/m`; positions are tracked as integers in units of `1/(n·m)` so the
/// merge is exact and symmetric in its arguments.
pub(crate) fn wasserstein_1d_pow_sorted(x: &[f64], y: &[f64], p: f64) -> f64 {
    let (n, m) = (x.len(), y.len());
    if n == m {
        let s: f64 = x.iter().zip(y).map(|(a, b)| abs_pow(a - b, p)).sum();
        return s / n as f64;
    }
    let (nu, mu) = (n as u128, m as u128);
    let total = (nu * mu) as f64;
    let (mut i, mut j) = (0usize, 0usize);
    let mut t: u128 = 0;
    let mut acc = 0.0;
    while i < n && j < m {
        let next_x = (i as u128 + 1) * mu;
        let next_y = (j as u128 + 1) * nu;
        let next = next_x.min(next_y);
        acc += abs_pow(x[i] - y[j], p) * (next - t) as f64;
        t = next;
        if next_x == next {
            i += 1;
        }
        if next_y == next {
            j += 1;
        }
    }
    acc / total
}

/// Exact `W_p` between the empirical measures of two sorted samples.
///
/// Unequal sample sizes are handled by merging the quantile breakpoints
/// `{i/n} ∪ {j/m}`; when `n = m` this is the mean of `|x_(i) − y_(i)|^p`.
pub fn wasserstein_1d(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    check_order(p)?;
    check_sorted_finite("x", x)?;
    check_sorted_finite("y", y)?;
    Ok(root(wasserstein_1d_pow_sorted(x, y, p), p))
}

/// Sorts copies of both samples and returns their `W_p`.
pub fn wasserstein_1d_unsorted(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    if xs.iter().chain(&ys).any(|v| v.is_nan()) {
        return Err(Error::invalid("sample contains NaN"));
    }
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    wasserstein_1d(&xs, &ys, p)
}

/// `W_p` between two weighted one-dimensional samples (any order). Weights
/// are non-negative and normalized internally.
pub fn weighted_wasserstein_1d(
    x: &[f64],
    wx: &[f64],
    y: &[f64],
    wy: &[f64],
    p: f64,
) -> Result<f64> {
    check_order(p)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::invalid(
            "weighted Wasserstein needs nonempty samples",
        ));
    }
    if x.len() != wx.len() || y.len() != wy.len() {
        return Err(Error::invalid("sample and weight lengths differ"));
    }
    let sorted = |v: &[f64], w: &[f64]| -> Result<Vec<(f64, f64)>> {
        let total: f64 = w.iter().sum();
        if w.iter().any(|&wi| !(wi >= 0.0) || !wi.is_finite()) || !(total > 0.0) {
            return Err(Error::invalid(
                "weights must be finite, non-negative, not all zero",
            ));
        }
        if v.iter().any(|vi| !vi.is_finite()) {
            return Err(Error::invalid("sample contains a non-finite value"));
        }
        let mut pairs: Vec<(f64, f64)> = v.iter().zip(w).map(|(&a, &b)| (a, b / total)).collect();
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        Ok(pairs)
    };
    let xs = sorted(x, wx)?;
    let ys = sorted(y, wy)?;
    let (mut i, mut j) = (0usize, 0usize);
    let (mut cx, mut cy) = (xs[0].1, ys[0].1);
    let mut t = 0.0;
    let mut acc = 0.0;
    loop {
        let next = cx.min(cy);
        acc += abs_pow(xs[i].0 - ys[j].0, p) * (next - t).max(0.0);
        t = next;
        let adv_x = cx <= next;
        let adv_y = cy <= next;
        if adv_x {
            i += 1;
        }
        if adv_y {
            j += 1;
        }
        if i >= xs.len() || j >= ys.len() {
            break;
        }
        if adv_x {
            cx += xs[i].1;
        }
        if adv_y {
            cy += ys[j].1;
        }
    }
    // rounding can leave a sliver of mass on one side
    if t < 1.0 {
        let (a, b) = (xs[i.min(xs.len() - 1)].0, ys[j.min(ys.len() - 1)].0);
        acc += abs_pow(a - b, p) * (1.0 - t);
    }
    Ok(root(acc, p))
}
