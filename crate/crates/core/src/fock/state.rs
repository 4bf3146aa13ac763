use nalgebra::DMatrix;

use super::operator::Space;
use super::truncation::{self, coherent_tail, squeezed_tail, tmsv_tail};
use crate::{Error, Result, C64};

/// Slack allowed on top of the declared tail bound when validating norms.
pub const NORM_SLACK: f64 = 1e-10;

/// Common read access for one- and two-mode pure states.
pub trait PureState {
    fn space(&self) -> Space;

    /// Amplitudes in the flat basis ordering of [`Space::index`].
    fn flat(&self) -> &[C64];

    /// Upper bound on the probability mass lost to truncation.
    fn tail_bound(&self) -> f64;

    fn norm_sqr(&self) -> f64 {
        self.flat().iter().map(|a| a.norm_sqr()).sum()
    }

    /// Checks the norm contract `Σ|c|² ∈ [1 - tail_bound, 1]` (with
    /// [`NORM_SLACK`]).
    fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        let tail_bound = self.tail_bound();
        if norm_sqr > 1.0 + NORM_SLACK || norm_sqr < 1.0 - tail_bound - NORM_SLACK || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr, tail_bound });
        }
        Ok(())
    }
}

fn check_truncation(dim: usize, tail_bound: f64, tolerance: f64, tail: impl Fn(usize) -> f64) -> Result<()> {
    if tail_bound > tolerance {
        let required_dim = truncation::required_dim(tail, tolerance).unwrap_or(truncation::MAX_DIM);
        return Err(Error::Truncation {
            dim,
            tail_bound,
            tolerance,
            required_dim,
        });
    }
    Ok(())
}

fn check_squeeze(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("squeeze magnitude r = {r} must be finite and >= 0")));
    }
    Ok(())
}

/// Pure state of one mode, `Σ_n c_n |n⟩` for `n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeState {
    amplitudes: Vec<C64>,
    tail_bound: f64,
}

impl SingleModeState {
    /// Validating constructor: the squared norm must lie in
    /// `[1 - tail_bound, 1]`.
    pub fn from_amplitudes(amplitudes: Vec<C64>, tail_bound: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("dim must be >= 1".into()));
        }
        if !(tail_bound >= 0.0) {
            return Err(Error::Domain(format!("tail bound {tail_bound} must be >= 0")));
        }
        let state = SingleModeState { amplitudes, tail_bound };
        state.check_normalized()?;
        Ok(state)
    }

    pub(crate) fn from_parts(amplitudes: Vec<C64>, tail_bound: f64) -> Self {
        SingleModeState { amplitudes, tail_bound }
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if dim == 0 || n >= dim {
            return Err(Error::InvalidDimension(format!("Fock state |{n}⟩ needs dim > {n}, got {dim}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(SingleModeState {
            amplitudes,
            tail_bound: 0.0,
        })
    }

    /// Coherent state `e^{-|α|²/2} Σ αⁿ/√n! |n⟩`.
    pub fn coherent(alpha: C64, dim: usize, tolerance: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dim must be >= 1".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("coherent amplitude {alpha} is not finite")));
        }
        let mean = alpha.norm_sqr();
        let tail_bound = coherent_tail(mean, dim);
        check_truncation(dim, tail_bound, tolerance, |d| coherent_tail(mean, d))?;

        let ln_abs = alpha.norm().ln();
        let phase = alpha.arg();
        let mut ln_mag = -0.5 * mean;
        let amplitudes = (0..dim)
            .map(|n| {
                if n > 0 {
                    ln_mag += ln_abs - 0.5 * (n as f64).ln();
                }
                C64::from_polar(ln_mag.exp(), n as f64 * phase)
            })
            .collect();
        Ok(SingleModeState { amplitudes, tail_bound })
    }

    /// Squeezed vacuum `S(r e^{iθ})|0⟩`, built from the even-n closed form
    /// `c_{2m} = (-e^{iθ} tanh r)^m √((2m)!) / (2^m m! √cosh r)`.
    pub fn squeezed_vacuum(r: f64, theta: f64, dim: usize, tolerance: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dim must be >= 1".into()));
        }
        check_squeeze(r)?;
        let tail_bound = squeezed_tail(r, dim);
        check_truncation(dim, tail_bound, tolerance, |d| squeezed_tail(r, d))?;

        let ln_tanh = r.tanh().ln();
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        let mut ln_mag = -0.5 * r.cosh().ln();
        for m in 0..dim.div_ceil(2) {
            if m > 0 {
                let k = m as f64;
                ln_mag += ln_tanh + 0.5 * ((2.0 * k - 1.0) / (2.0 * k)).ln();
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            amplitudes[2 * m] = C64::from_polar(sign * ln_mag.exp(), m as f64 * theta);
        }
        Ok(SingleModeState { amplitudes, tail_bound })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Zero-padded copy on a truncation of `dim >= self.dim()`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidDimension(format!("cannot shrink dim {} to {dim}", self.dim())));
        }
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(dim, C64::new(0.0, 0.0));
        Ok(SingleModeState {
            amplitudes,
            tail_bound: self.tail_bound,
        })
    }

    /// `|⟨self|other⟩|²`, padding the shorter state with zeros.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .norm_sqr()
    }
}

impl PureState for SingleModeState {
    fn space(&self) -> Space {
        Space::Single(self.dim())
    }

    fn flat(&self) -> &[C64] {
        &self.amplitudes
    }

    fn tail_bound(&self) -> f64 {
        self.tail_bound
    }
}

/// Pure state of two modes, amplitudes `c(n_a, n_b)` in a `dim_a × dim_b`
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: DMatrix<C64>,
    tail_bound: f64,
}

impl TwoModeState {
    pub fn from_matrix(amplitudes: DMatrix<C64>, tail_bound: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("per-mode dims must be >= 1".into()));
        }
        if !(tail_bound >= 0.0) {
            return Err(Error::Domain(format!("tail bound {tail_bound} must be >= 0")));
        }
        let state = TwoModeState { amplitudes, tail_bound };
        state.check_normalized()?;
        Ok(state)
    }

    pub(crate) fn from_parts(amplitudes: DMatrix<C64>, tail_bound: f64) -> Self {
        TwoModeState { amplitudes, tail_bound }
    }

    pub fn fock(n_a: usize, n_b: usize, dim_a: usize, dim_b: usize) -> Result<Self> {
        if n_a >= dim_a || n_b >= dim_b {
            return Err(Error::InvalidDimension(format!(
                "|{n_a},{n_b}⟩ does not fit in dims ({dim_a}, {dim_b})"
            )));
        }
        let mut amplitudes = DMatrix::zeros(dim_a, dim_b);
        amplitudes[(n_a, n_b)] = C64::new(1.0, 0.0);
        Ok(TwoModeState {
            amplitudes,
            tail_bound: 0.0,
        })
    }

    /// Two-mode squeezed vacuum `Σ_N c_N |N, N⟩`,
    /// `c_N = (-e^{iφ} tanh r)^N / cosh r`.
    pub fn tmsv(r: f64, phi: f64, dim: usize, tolerance: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dim must be >= 1".into()));
        }
        check_squeeze(r)?;
        let tail_bound = tmsv_tail(r, dim);
        check_truncation(dim, tail_bound, tolerance, |d| tmsv_tail(r, d))?;

        let ln_tanh = r.tanh().ln();
        let ln_sech = -r.cosh().ln();
        let mut amplitudes = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            let mag = if n == 0 { ln_sech.exp() } else { (n as f64 * ln_tanh + ln_sech).exp() };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            amplitudes[(n, n)] = C64::from_polar(sign * mag, n as f64 * phi);
        }
        Ok(TwoModeState { amplitudes, tail_bound })
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &SingleModeState, b: &SingleModeState) -> Self {
        let amplitudes = DMatrix::from_fn(a.dim(), b.dim(), |i, j| a.amplitude(i) * b.amplitude(j));
        TwoModeState {
            amplitudes,
            tail_bound: a.tail_bound() + b.tail_bound(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.shape()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> C64 {
        let (da, db) = self.dims();
        if n_a < da && n_b < db {
            self.amplitudes[(n_a, n_b)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// `(⟨n_a⟩, ⟨n_b⟩)`.
    pub fn mean_photon_numbers(&self) -> (f64, f64) {
        let (da, db) = self.dims();
        let mut out = (0.0, 0.0);
        for nb in 0..db {
            for na in 0..da {
                let p = self.amplitudes[(na, nb)].norm_sqr();
                out.0 += na as f64 * p;
                out.1 += nb as f64 * p;
            }
        }
        out
    }

    /// True when every amplitude off the `n_a = n_b` diagonal is exactly 0.
    pub fn has_diagonal_support(&self) -> bool {
        let (da, db) = self.dims();
        (0..db).all(|nb| (0..da).all(|na| na == nb || self.amplitudes[(na, nb)] == C64::new(0.0, 0.0)))
    }

    /// Zero-padded copy on larger per-mode truncations.
    pub fn embed(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        let (da, db) = self.dims();
        if dim_a < da || dim_b < db {
            return Err(Error::InvalidDimension(format!(
                "cannot shrink dims ({da}, {db}) to ({dim_a}, {dim_b})"
            )));
        }
        let mut amplitudes = DMatrix::zeros(dim_a, dim_b);
        amplitudes.view_mut((0, 0), (da, db)).copy_from(&self.amplitudes);
        Ok(TwoModeState {
            amplitudes,
            tail_bound: self.tail_bound,
        })
    }
}

impl PureState for TwoModeState {
    fn space(&self) -> Space {
        let (a, b) = self.dims();
        Space::Pair(a, b)
    }

    fn flat(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    fn tail_bound(&self) -> f64 {
        self.tail_bound
    }
}
