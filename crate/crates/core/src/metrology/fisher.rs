use nalgebra::Matrix2;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::fock::{OperatorMatrix, PureState, SingleModeState, TwoModeState};
use crate::generators::{thg_generator, GeneratorSet};
use crate::{Error, Result, C64};

/// Eigenvalue ratio below which a Fisher matrix counts as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Symmetrized covariances `½⟨AB + BA⟩ - ⟨A⟩⟨B⟩` of hermitian operators,
/// with the state renormalized to unit norm.
pub fn covariance_matrix<S: PureState + ?Sized>(state: &S, ops: &[&OperatorMatrix]) -> Result<Vec<Vec<f64>>> {
    state.check_normalized()?;
    let psi = state.flat();
    let norm_sqr = state.norm_sqr();
    let mut centered = Vec::with_capacity(ops.len());
    for op in ops {
        if op.space() != state.space() {
            return Err(Error::DimensionMismatch(format!(
                "state on {:?}, operator on {:?}",
                state.space(),
                op.space()
            )));
        }
        if !op.is_hermitian() {
            return Err(Error::Precondition("covariances need hermitian operators".into()));
        }
        let mut g_psi = op.apply(psi);
        let mean = dot(psi, &g_psi).re / norm_sqr;
        g_psi.iter_mut().zip(psi).for_each(|(g, p)| *g -= mean * p);
        centered.push(g_psi);
    }
    Ok((0..ops.len())
        .map(|i| (0..ops.len()).map(|j| dot(&centered[i], &centered[j]).re / norm_sqr).collect())
        .collect())
}

/// `Var(G)` on the renormalized state.
pub fn variance<S: PureState + ?Sized>(state: &S, op: &OperatorMatrix) -> Result<f64> {
    Ok(covariance_matrix(state, &[op])?[0][0])
}

/// `F_ij = 4τ² Cov(G_i, G_j)` for `(G_Q, G_C)`.
pub fn qfim<S: PureState + ?Sized>(state: &S, generators: &GeneratorSet, tau: f64) -> Result<Matrix2<f64>> {
    let cov = covariance_matrix(state, &[&generators.g_quantum, &generators.g_classical])?;
    let s = 4.0 * tau * tau;
    let off = 0.5 * (cov[0][1] + cov[1][0]);
    Ok(Matrix2::new(s * cov[0][0], s * off, s * off, s * cov[1][1]))
}

/// Closed-form Fisher matrix of a squeezed vacuum with mean photon number
/// `n` for `(a†a†aa, a†a)`, and its inverse.
pub fn analytic_sqvac_qfim(n: f64) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Singular(format!("squeezed-vacuum Fisher matrix is singular at N = {n}")));
    }
    let qq = 8.0 * n * (48.0 * n.powi(3) + 72.0 * n * n + 25.0 * n + 1.0);
    let qc = 8.0 * n * (6.0 * n * n + 7.0 * n + 1.0);
    let cc = 8.0 * n * (n + 1.0);
    let det = 768.0 * (n * (n + 1.0)).powi(3);
    let inverse = Matrix2::new(cc / det, -qc / det, -qc / det, qq / det);
    Ok((Matrix2::new(qq, qc, qc, cc), inverse))
}

/// Outcome of the nuisance-parameter bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuisanceBound {
    /// Minimum detectable `χ_Q` per shot budget.
    Bound(f64),
    /// The Fisher matrix is singular: the two phases cannot be told apart.
    Indistinguishable,
}

impl NuisanceBound {
    pub fn value(self) -> Option<f64> {
        match self {
            NuisanceBound::Bound(x) => Some(x),
            NuisanceBound::Indistinguishable => None,
        }
    }
}

impl Serialize for NuisanceBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NuisanceBound::Bound(x) => s.serialize_f64(*x),
            NuisanceBound::Indistinguishable => s.serialize_str("indistinguishable"),
        }
    }
}

impl<'de> Deserialize<'de> for NuisanceBound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = NuisanceBound;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative number or \"indistinguishable\"")
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<NuisanceBound, E> {
                if x >= 0.0 && x.is_finite() {
                    Ok(NuisanceBound::Bound(x))
                } else {
                    Err(E::custom(format!("bound {x} must be finite and >= 0")))
                }
            }

            fn visit_u64<E: de::Error>(self, x: u64) -> std::result::Result<NuisanceBound, E> {
                Ok(NuisanceBound::Bound(x as f64))
            }

            fn visit_i64<E: de::Error>(self, x: i64) -> std::result::Result<NuisanceBound, E> {
                self.visit_f64(x as f64)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<NuisanceBound, E> {
                match s {
                    "indistinguishable" => Ok(NuisanceBound::Indistinguishable),
                    other => Err(E::custom(format!("unknown bound marker '{other}'"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

fn check_shots(m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("shot count {m} must be positive")));
    }
    Ok(())
}

/// True when the smallest eigenvalue falls below
/// [`SINGULARITY_THRESHOLD`] times the largest.
pub(crate) fn is_singular(f: &Matrix2<f64>) -> bool {
    let eig = f.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    hi <= 0.0 || lo < SINGULARITY_THRESHOLD * hi
}

/// `√([F⁻¹]_QQ / M)`, the smallest `χ_Q` resolvable with `χ_C` unknown.
pub fn nuisance_qcrb(f: &Matrix2<f64>, m: f64) -> Result<NuisanceBound> {
    check_shots(m)?;
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("Fisher matrix has non-finite entries".into()));
    }
    if is_singular(f) {
        return Ok(NuisanceBound::Indistinguishable);
    }
    let det = f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)];
    Ok(NuisanceBound::Bound((f[(1, 1)] / det / m).sqrt()))
}

/// `1/√(M F_QQ)` with `χ_C` known.
pub fn single_parameter_qcrb(f_qq: f64, m: f64) -> Result<NuisanceBound> {
    check_shots(m)?;
    if f_qq > 0.0 {
        Ok(NuisanceBound::Bound(1.0 / (m * f_qq).sqrt()))
    } else {
        Ok(NuisanceBound::Indistinguishable)
    }
}

/// `4 Var(a³b† + a†³b)` for `pump ⊗ |0⟩`. The pump is padded by three levels
/// so the generator acts without truncation.
pub fn thg_qfi(pump: &SingleModeState) -> Result<f64> {
    let padded = pump.embed(pump.dim() + 3)?;
    let harmonic = SingleModeState::vacuum(2)?;
    let state = TwoModeState::product(&padded, &harmonic);
    let g = thg_generator(padded.dim(), 2)?;
    Ok(4.0 * variance(&state, &g)?)
}
