use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::fock::{OutcomeDistribution, PureState, Space, TwoModeState};
use crate::generators::{mz_composed_generator, sector_hopping, Convention};
use crate::metrology::fisher::variance;
use crate::{Error, Result, C64};

/// Default phase step for finite-difference classical Fisher information.
pub const DEFAULT_CFI_STEP: f64 = 1e-3;

/// Phases accumulated between the two beamsplitters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MzAngles {
    /// Quartic phase on `a†a†aa + b†b†bb`.
    pub chi_q: f64,
    /// Quadratic phase on `n_a + n_b`.
    pub chi_c_sym: f64,
    /// Quadratic phase on `n_a - n_b`.
    pub chi_c_asym: f64,
}

impl MzAngles {
    pub fn quantum(chi_q: f64) -> Self {
        MzAngles {
            chi_q,
            ..Default::default()
        }
    }

    fn phase(&self, na: usize, nb: usize) -> f64 {
        let (a, b) = (na as f64, nb as f64);
        self.chi_q * (a * (a - 1.0) + b * (b - 1.0)) + self.chi_c_sym * (a + b) + self.chi_c_asym * (a - b)
    }
}

/// Photon-count distribution after `U_BS† · exp(iφ) · U_BS` on a two-mode
/// input.
///
/// The sequence is applied sector by sector in `n_a + n_b`, where the
/// beamsplitter is exact, so the output table has `dim_a + dim_b - 1`
/// levels per mode and no truncation loss beyond the input's. The change
/// `ψ + U†(D - 1)Uψ` is formed explicitly to keep precision for tiny
/// phases; a sector whose phase is constant is passed through untouched.
pub fn mz_outcome_distribution(input: &TwoModeState, angles: MzAngles) -> Result<OutcomeDistribution> {
    input.check_normalized()?;
    let (da, db) = input.dims();
    let out_dim = da + db - 1;
    let space = Space::Pair(out_dim, out_dim);
    let mut probs = vec![0.0; space.total()];
    for s in 0..=(da + db - 2) {
        let v = DVector::from_fn(s + 1, |k, _| input.amplitude(k, s - k));
        if v.iter().all(|c| *c == C64::new(0.0, 0.0)) {
            continue;
        }
        let phases: Vec<f64> = (0..=s).map(|k| angles.phase(k, s - k)).collect();
        let out = if phases.iter().all(|p| *p == phases[0]) {
            v
        } else {
            let u = sector_unitary(s);
            let d_minus_1 = DVector::from_fn(s + 1, |k, _| {
                let half = (0.5 * phases[k]).sin();
                C64::new(-2.0 * half * half, phases[k].sin())
            });
            let uv = &u * &v;
            let kicked = uv.component_mul(&d_minus_1);
            &v + u.adjoint() * kicked
        };
        for k in 0..=s {
            probs[space.index(k, s - k)] = out[k].norm_sqr();
        }
    }
    OutcomeDistribution::from_probabilities(space, probs, input.tail_bound())
}

fn sector_unitary(s: usize) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(sector_hopping(s));
    let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let d = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4 * l)),
    );
    &v * d * v.transpose()
}

/// Hellinger-distance estimate of the classical Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HellingerCfi {
    pub value: f64,
    /// Number of negative probabilities clamped to zero.
    pub clamped: usize,
}

/// `F_C ≈ 8 d_H² / χ²` with `d_H² = ½ Σ (√P_χ - √P_0)²` on the normalized
/// tables (equal to `1 - Σ √(P_χ P_0)` for normalized inputs).
pub fn hellinger_cfi(dist0: &OutcomeDistribution, dist_chi: &OutcomeDistribution, chi: f64) -> Result<HellingerCfi> {
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::Domain(format!("phase step {chi} must be positive")));
    }
    if dist0.space() != dist_chi.space() {
        return Err(Error::DimensionMismatch(format!(
            "outcome tables on {:?} and {:?}",
            dist0.space(),
            dist_chi.space()
        )));
    }
    let mut clamped = 0;
    let mut clamp = |p: f64| {
        if p < 0.0 {
            clamped += 1;
            0.0
        } else {
            p
        }
    };
    let p: Vec<f64> = dist0.probabilities().iter().map(|&x| clamp(x)).collect();
    let q: Vec<f64> = dist_chi.probabilities().iter().map(|&x| clamp(x)).collect();
    let (tp, tq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    if tp <= 0.0 || tq <= 0.0 {
        return Err(Error::Domain("outcome table carries no probability".into()));
    }
    let d2: f64 = 0.5
        * p.iter()
            .zip(&q)
            .map(|(a, b)| ((a / tp).sqrt() - (b / tq).sqrt()).powi(2))
            .sum::<f64>();
    Ok(HellingerCfi {
        value: 8.0 * d2 / (chi * chi),
        clamped,
    })
}

/// Hellinger CFI at steps `χ` and `χ/2`, plus the Richardson combination
/// `(4F(χ/2) - F(χ))/3` that removes the `O(χ²)` bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfiEstimate {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    pub clamped: usize,
}

/// Classical Fisher information of the interferometer for `χ_Q`, from the
/// outcome tables at `χ_Q ∈ {0, χ/2, χ}`.
pub fn mz_cfi_estimate(input: &TwoModeState, chi: f64) -> Result<CfiEstimate> {
    let d0 = mz_outcome_distribution(input, MzAngles::default())?;
    let coarse = hellinger_cfi(&d0, &mz_outcome_distribution(input, MzAngles::quantum(chi))?, chi)?;
    let fine = hellinger_cfi(&d0, &mz_outcome_distribution(input, MzAngles::quantum(0.5 * chi))?, 0.5 * chi)?;
    Ok(CfiEstimate {
        coarse: coarse.value,
        fine: fine.value,
        extrapolated: (4.0 * fine.value - coarse.value) / 3.0,
        clamped: coarse.clamped + fine.clamped,
    })
}

fn padded(input: &TwoModeState) -> Result<(TwoModeState, usize)> {
    let (da, db) = input.dims();
    let dim = da.max(db) + 2;
    Ok((input.embed(dim, dim)?, dim))
}

/// `4⟨G₋²⟩` for an input supported on `|n, n⟩`.
pub fn analytic_mz_cfi(input: &TwoModeState, convention: Convention) -> Result<f64> {
    if !input.has_diagonal_support() {
        return Err(Error::Precondition(
            "analytic interferometer CFI needs support on |n, n⟩ only".into(),
        ));
    }
    input.check_normalized()?;
    let (state, dim) = padded(input)?;
    let g = mz_composed_generator(dim, convention)?;
    let g_psi = g.minus.apply(state.flat());
    Ok(4.0 * g_psi.iter().map(|c| c.norm_sqr()).sum::<f64>() / state.norm_sqr())
}

/// `4 Var(G)` for the composed generator.
pub fn mz_qfi(input: &TwoModeState, convention: Convention) -> Result<f64> {
    let (state, dim) = padded(input)?;
    let g = mz_composed_generator(dim, convention)?;
    Ok(4.0 * variance(&state, &g.full)?)
}
