//! Hermitian generators of the cavity evolutions and the unitaries they
//! produce.
//!
//! Two-mode operators act on [`Space::Pair`]. The 50:50 beamsplitter is
//! `exp(-i(π/4)(a†b + b†a))`, which maps `a → (a + ib)/√2`. Because hopping
//! conserves `n_a + n_b`, the beamsplitter is built one total-number sector
//! at a time and is exact on every sector that fits in the truncation.

use nalgebra::DMatrix;

use crate::fock::{OperatorMatrix, PureState, SingleModeState, Space, TwoModeState};
use crate::linalg::{self, expm_dense};
use crate::{Error, Result, C64};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dim must be >= 1".into()));
    }
    Ok(())
}

/// `a†a†aa`: diagonal with `n(n-1)`.
pub fn kerr_generator(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    OperatorMatrix::diagonal(Space::Single(dim), (0..dim).map(|n| (n * n.saturating_sub(1)) as f64))
}

/// `a†a`: diagonal with `n`.
pub fn number_generator(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    OperatorMatrix::diagonal(Space::Single(dim), (0..dim).map(|n| n as f64))
}

/// `n_a + n_b` on a two-mode space.
pub fn total_number(space: Space) -> Result<OperatorMatrix> {
    let (da, db) = space.dims();
    if da == 0 || db == 0 {
        return Err(Error::InvalidDimension("dims must be >= 1".into()));
    }
    OperatorMatrix::diagonal(space, (0..space.total()).map(|i| {
        let (na, nb) = space.basis(i);
        (na + nb) as f64
    }))
}

/// Applies `exp(i[χ_Q n(n-1) + χ_C n])` to each amplitude.
pub fn evolve_kerr(state: &SingleModeState, chi_q: f64, chi_c: f64) -> SingleModeState {
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let n = n as f64;
            c * C64::from_polar(1.0, chi_q * n * (n - 1.0) + chi_c * n)
        })
        .collect();
    SingleModeState::from_parts(amplitudes, state.tail_bound())
}

/// `exp(iθG)|ψ⟩` for a single-mode generator.
pub fn evolve_single_mode(state: &SingleModeState, generator: &OperatorMatrix, angle: f64) -> Result<SingleModeState> {
    if generator.space() != state.space() {
        return Err(Error::DimensionMismatch(format!(
            "state on {:?}, generator on {:?}",
            state.space(),
            generator.space()
        )));
    }
    let out = linalg::evolve(generator, state.amplitudes(), angle)?;
    Ok(SingleModeState::from_parts(out, state.tail_bound()))
}

/// `exp(iθG)|ψ⟩` for a two-mode generator. Dense exponential up to
/// [`linalg::DENSE_EVOLUTION_LIMIT`] basis states, Krylov above.
pub fn evolve_two_mode(state: &TwoModeState, generator: &OperatorMatrix, angle: f64) -> Result<TwoModeState> {
    if generator.space() != state.space() {
        return Err(Error::DimensionMismatch(format!(
            "state on {:?}, generator on {:?}",
            state.space(),
            generator.space()
        )));
    }
    let (da, db) = state.dims();
    let out = linalg::evolve(generator, state.flat(), angle)?;
    Ok(TwoModeState::from_parts(DMatrix::from_vec(da, db, out), state.tail_bound()))
}

/// Prefactor convention of the composed interferometer generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Global ½, as produced by conjugating `K_a + K_b` with the beamsplitter.
    #[default]
    Half,
    /// Same terms without the ½.
    Unhalved,
}

impl Convention {
    pub fn prefactor(self) -> f64 {
        match self {
            Convention::Half => 0.5,
            Convention::Unhalved => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Convention::Half => "half",
            Convention::Unhalved => "unhalved",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(Convention::Half),
            "unhalved" => Ok(Convention::Unhalved),
            other => Err(Error::Domain(format!("unknown convention '{other}' (expected half or unhalved)"))),
        }
    }
}

/// Composed interferometer generator `G = G₊ + G₋` with
/// `G₊ = c(n_a(n_a-1) + n_b(n_b-1) + 4 n_a n_b)` and
/// `G₋ = -c(a†²b² + a²b†²)`, where `c` is the convention prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedGenerator {
    pub full: OperatorMatrix,
    pub plus: OperatorMatrix,
    pub minus: OperatorMatrix,
    pub convention: Convention,
}

fn pair_plus(c: f64, na: usize, nb: usize) -> f64 {
    let (a, b) = (na as f64, nb as f64);
    c * (a * (a - 1.0) + b * (b - 1.0) + 4.0 * a * b)
}

/// Nonzero `G₋` action on `|n_a, n_b⟩`.
fn pair_minus(c: f64, na: usize, nb: usize) -> Vec<((usize, usize), C64)> {
    let mut out = Vec::with_capacity(2);
    if nb >= 2 {
        let amp = (((na + 1) * (na + 2) * nb * (nb - 1)) as f64).sqrt();
        out.push(((na + 2, nb - 2), re(-c * amp)));
    }
    if na >= 2 {
        let amp = ((na * (na - 1) * (nb + 1) * (nb + 2)) as f64).sqrt();
        out.push(((na - 2, nb + 2), re(-c * amp)));
    }
    out
}

/// The composed generator on `dim` levels per mode.
pub fn mz_composed_generator(dim: usize, convention: Convention) -> Result<ComposedGenerator> {
    check_dim(dim)?;
    let space = Space::Pair(dim, dim);
    let c = convention.prefactor();
    let plus = OperatorMatrix::from_action(space, true, |na, nb| vec![((na, nb), re(pair_plus(c, na, nb)))])?;
    let minus = OperatorMatrix::from_action(space, true, |na, nb| pair_minus(c, na, nb))?;
    let full = plus.add_scaled(&minus, 1.0)?;
    Ok(ComposedGenerator {
        full,
        plus,
        minus,
        convention,
    })
}

/// `i(a†b - b†a)`, the image of `n_a - n_b` under the beamsplitter.
pub fn mz_asymmetric_generator(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    OperatorMatrix::from_action(Space::Pair(dim, dim), true, |na, nb| {
        let mut out = Vec::with_capacity(2);
        if nb >= 1 {
            out.push(((na + 1, nb - 1), C64::new(0.0, (((na + 1) * nb) as f64).sqrt())));
        }
        if na >= 1 {
            out.push(((na - 1, nb + 1), C64::new(0.0, -((na * (nb + 1)) as f64).sqrt())));
        }
        out
    })
}

/// Beamsplitter phase convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beamsplitter {
    /// `exp(-i(π/4)(a†b + b†a))`.
    Symmetric,
    /// `exp(-(π/4)(a†b - b†a))`.
    Real,
}

/// Basis of sector `s`: `|k, s-k⟩` for `k = 0..=s`.
pub fn sector_hopping(s: usize) -> DMatrix<f64> {
    DMatrix::from_fn(s + 1, s + 1, |i, j| {
        if i == j + 1 {
            ((i * (s - j)) as f64).sqrt()
        } else if j == i + 1 {
            ((j * (s - i)) as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// Beamsplitter restricted to the sector `n_a + n_b = s`, ordered by `n_a`.
pub fn sector_beamsplitter(s: usize, convention: Beamsplitter) -> DMatrix<C64> {
    match convention {
        Beamsplitter::Symmetric => linalg::expi_real_symmetric(&sector_hopping(s), -std::f64::consts::FRAC_PI_4),
        Beamsplitter::Real => {
            let h = sector_hopping(s);
            // a†b - b†a: lower triangle keeps its sign, upper flips
            let x = DMatrix::from_fn(s + 1, s + 1, |i, j| {
                let v = h[(i, j)];
                re(if i > j { -std::f64::consts::FRAC_PI_4 * v } else { std::f64::consts::FRAC_PI_4 * v })
            });
            expm_dense(&x)
        }
    }
}

/// Largest entry of `U†(K_a + K_b)U - G` over every total-number sector
/// that fits in `dim` levels per mode, with `G` in the ½ convention.
pub fn beamsplitter_conjugation_check(dim: usize, convention: Beamsplitter) -> Result<f64> {
    if !(1..=64).contains(&dim) {
        return Err(Error::InvalidDimension(format!("conjugation check needs 1 <= dim <= 64, got {dim}")));
    }
    let g = mz_composed_generator(dim, Convention::Half)?;
    let mut residual = 0.0f64;
    for s in 0..dim {
        let u = sector_beamsplitter(s, convention);
        let kerr = DMatrix::from_fn(s + 1, s + 1, |i, j| {
            if i == j {
                let (a, b) = (i as f64, (s - i) as f64);
                re(a * (a - 1.0) + b * (b - 1.0))
            } else {
                re(0.0)
            }
        });
        let conj = u.adjoint() * kerr * &u;
        for i in 0..=s {
            for j in 0..=s {
                let target = g.full.element((i, s - i), (j, s - j));
                residual = residual.max((conj[(i, j)] - target).norm());
            }
        }
    }
    Ok(residual)
}

/// Third-harmonic generator `a³b† + a†³b` (pump `a`, harmonic `b`).
pub fn thg_generator(dim_pump: usize, dim_harmonic: usize) -> Result<OperatorMatrix> {
    if dim_pump < 4 || dim_harmonic < 2 {
        return Err(Error::InvalidDimension(format!(
            "third-harmonic generator needs dims >= (4, 2), got ({dim_pump}, {dim_harmonic})"
        )));
    }
    OperatorMatrix::from_action(Space::Pair(dim_pump, dim_harmonic), true, |na, nb| {
        let mut out = Vec::with_capacity(2);
        if na >= 3 {
            let amp = ((na * (na - 1) * (na - 2) * (nb + 1)) as f64).sqrt();
            out.push(((na - 3, nb + 1), re(amp)));
        }
        if nb >= 1 {
            let amp = (((na + 1) * (na + 2) * (na + 3) * nb) as f64).sqrt();
            out.push(((na + 3, nb - 1), re(amp)));
        }
        out
    })
}

/// A pair of generators `(G_Q, G_C)` for joint estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub g_quantum: OperatorMatrix,
    pub g_classical: OperatorMatrix,
    pub labels: [String; 2],
}

impl GeneratorSet {
    pub fn new(g_quantum: OperatorMatrix, g_classical: OperatorMatrix, labels: [String; 2]) -> Result<Self> {
        if g_quantum.space() != g_classical.space() {
            return Err(Error::DimensionMismatch(format!(
                "generators on {:?} and {:?}",
                g_quantum.space(),
                g_classical.space()
            )));
        }
        if !g_quantum.is_hermitian() || !g_classical.is_hermitian() {
            return Err(Error::Precondition("generators must be hermitian".into()));
        }
        Ok(GeneratorSet {
            g_quantum,
            g_classical,
            labels,
        })
    }

    /// `(a†a†aa, a†a)` on one mode.
    pub fn kerr(dim: usize) -> Result<Self> {
        Self::new(kerr_generator(dim)?, number_generator(dim)?, ["a†a†aa".into(), "a†a".into()])
    }

    pub fn space(&self) -> Space {
        self.g_quantum.space()
    }

    /// Largest commutator entry of either generator with the total photon
    /// number.
    pub fn number_commutator(&self) -> Result<f64> {
        let space = self.space();
        let n = match space {
            Space::Single(d) => number_generator(d)?,
            Space::Pair(..) => total_number(space)?,
        };
        Ok(self.g_quantum.commutator_norm(&n)?.max(self.g_classical.commutator_norm(&n)?))
    }
}
