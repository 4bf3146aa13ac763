use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Power-law fit `y = e^intercept · N^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_range: Vec<f64>,
}

/// Least-squares line through `(ln N, ln y)`.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(Error::Domain(format!("scaling fit needs >= 4 points, got {}", points.len())));
    }
    if let Some(&(n, y)) = points.iter().find(|(n, y)| !(*n > 0.0 && *y > 0.0 && n.is_finite() && y.is_finite())) {
        return Err(Error::Domain(format!("scaling fit needs positive finite values, got ({n}, {y})")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("scaling fit needs at least two distinct N".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(ScalingFit {
        exponent,
        intercept,
        r_squared,
        n_range: points.iter().map(|p| p.0).collect(),
    })
}

/// Large-`N` limit of a sequence by least squares on `y = a + b/N + c/N²`;
/// returns `a`.
pub fn large_n_limit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::Domain(format!("extrapolation needs >= 4 points, got {}", points.len())));
    }
    if points.iter().any(|(n, y)| !(*n > 0.0 && n.is_finite() && y.is_finite())) {
        return Err(Error::Domain("extrapolation needs positive finite N and finite values".into()));
    }
    let a = DMatrix::from_fn(points.len(), 3, |i, j| points[i].0.powi(-(j as i32)));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let coeffs = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Singular(e.to_string()))?;
    Ok(coeffs[0])
}
