//! Analytic bounds on the probability mass lost by truncating the Fock basis.
//!
//! Each `*_tail` function returns an upper bound on `Σ_{n ≥ dim} P(n)`, and
//! each `required_dim_*` the smallest `dim` whose bound meets a tolerance.

use crate::{Error, Result};

/// Largest truncation the dimension search will consider.
pub const MAX_DIM: usize = 1 << 22;

/// `ln n!`, exact summation for small `n`, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// Poisson tail for a coherent state of mean photon number `mean`.
pub fn coherent_tail(mean: f64, dim: usize) -> f64 {
    if dim == 0 {
        return 1.0;
    }
    if mean == 0.0 {
        return 0.0;
    }
    let d = dim as f64;
    if d + 1.0 <= mean {
        return 1.0;
    }
    // P(N >= D) <= P(D) * Σ_k (λ/(D+1))^k
    let ln_p = -mean + d * mean.ln() - ln_factorial(dim);
    (ln_p.exp() * (d + 1.0) / (d + 1.0 - mean)).min(1.0)
}

/// Tail of a squeezed vacuum with squeeze magnitude `r`.
pub fn squeezed_tail(r: f64, dim: usize) -> f64 {
    if dim == 0 {
        return 1.0;
    }
    if r == 0.0 {
        return 0.0;
    }
    // P(2m) = C(m) t^m sech r with C(m) = (2m)!/(4^m m!^2) decreasing in m.
    let m = dim.div_ceil(2);
    let t = r.tanh().powi(2);
    let ln_c = ln_factorial(2 * m) - 2.0 * ln_factorial(m) - m as f64 * 4f64.ln();
    (ln_c + m as f64 * t.ln() + r.cosh().ln()).exp().min(1.0)
}

/// Per-mode tail of a two-mode squeezed vacuum, `tanh(r)^(2 dim)` exactly.
pub fn tmsv_tail(r: f64, dim: usize) -> f64 {
    if dim == 0 {
        return 1.0;
    }
    if r == 0.0 {
        return 0.0;
    }
    (2.0 * dim as f64 * r.tanh().ln()).exp()
}

/// Smallest `dim >= 1` with `tail(dim) <= tolerance`, assuming `tail` is
/// non-increasing.
pub fn required_dim(tail: impl Fn(usize) -> f64, tolerance: f64) -> Result<usize> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("truncation tolerance {tolerance} must be > 0")));
    }
    let mut hi = 1usize;
    while tail(hi) > tolerance {
        hi *= 2;
        if hi > MAX_DIM {
            return Err(Error::InvalidDimension(format!(
                "no truncation up to {MAX_DIM} reaches tolerance {tolerance:e}"
            )));
        }
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    // tail(lo) > tolerance >= tail(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) > tolerance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

pub fn required_dim_coherent(mean: f64, tolerance: f64) -> Result<usize> {
    required_dim(|d| coherent_tail(mean, d), tolerance)
}

pub fn required_dim_squeezed(r: f64, tolerance: f64) -> Result<usize> {
    required_dim(|d| squeezed_tail(r, d), tolerance)
}

pub fn required_dim_tmsv(r: f64, tolerance: f64) -> Result<usize> {
    required_dim(|d| tmsv_tail(r, d), tolerance)
}
