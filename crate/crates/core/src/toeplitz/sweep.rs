//! Geometric `h` grids, power-law fits and extrapolation to `h → 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `h_0 · ratio^m` for `m = 0..count`.
pub fn geometric_grid(h0: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::NonPositiveH(h0));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("grid ratio must lie in (0, 1), got {ratio}")));
    }
    if count < 3 {
        return Err(Error::InvalidArgument(format!("grid needs at least 3 points, got {count}")));
    }
    Ok((0..count).map(|m| h0 * ratio.powi(m as i32)).collect())
}

/// `|v| ≈ coefficient · h^exponent` from a log-log least-squares line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

fn least_squares(design: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))
}

pub fn fit_power_law(hs: &[f64], values: &[f64]) -> Result<PowerFit> {
    if hs.len() != values.len() || hs.len() < 2 {
        return Err(Error::InvalidArgument("power-law fit needs at least two (h, value) pairs".into()));
    }
    if values.iter().any(|v| !(v.abs() > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("power-law fit needs finite nonzero values".into()));
    }
    let x: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let design = DMatrix::from_fn(x.len(), 2, |i, j| if j == 0 { 1.0 } else { x[i] });
    let sol = least_squares(design, DVector::from_vec(y.clone()))?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - sol[0] - sol[1] * xi).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(PowerFit {
        exponent: sol[1],
        coefficient: sol[0].exp(),
        r_squared,
    })
}

/// Constant term of a degree-`degree` least-squares polynomial in `t` through
/// `(t_i, v_i)`: the value at `t = 0`.
pub fn extrapolate_to_zero(ts: &[f64], values: &[f64], degree: usize) -> Result<f64> {
    if ts.len() != values.len() || ts.len() <= degree {
        return Err(Error::InvalidArgument(format!(
            "extrapolation of degree {degree} needs more than {degree} points"
        )));
    }
    let scale = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument("extrapolation abscissae are all zero".into()));
    }
    let design = DMatrix::from_fn(ts.len(), degree + 1, |i, j| (ts[i] / scale).powi(j as i32));
    Ok(least_squares(design, DVector::from_column_slice(values))?[0])
}
