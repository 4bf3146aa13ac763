use crate::fock::{PureState, SingleModeState};
use crate::{Error, Result, C64};

/// `X_θ v` with `X_θ = (a e^{-iθ} + a† e^{iθ})/√2`, growing the vector by one
/// level so `a†` is never truncated.
fn apply_quadrature(v: &[C64], theta: f64) -> Vec<C64> {
    let down = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -theta);
    let up = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
    let mut out = vec![C64::new(0.0, 0.0); v.len() + 1];
    for (n, c) in v.iter().enumerate() {
        if n > 0 {
            out[n - 1] += down * (n as f64).sqrt() * c;
        }
        out[n + 1] += up * ((n + 1) as f64).sqrt() * c;
    }
    out
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Cumulants `κ₁..κ_max` of the quadrature `X_θ` from operator moments.
pub fn quadrature_cumulants(state: &SingleModeState, theta: f64, max_order: usize) -> Result<Vec<f64>> {
    if !(1..=4).contains(&max_order) {
        return Err(Error::Domain(format!("cumulant order {max_order} outside 1..=4")));
    }
    state.check_normalized()?;
    let psi = state.amplitudes();
    let norm_sqr = state.norm_sqr();
    let x_psi = apply_quadrature(psi, theta);
    let mean = inner(psi, &x_psi[..psi.len()]).re / norm_sqr;

    // powers of Y = X - mean applied to ψ
    let mut powers: Vec<Vec<C64>> = vec![psi.to_vec()];
    for k in 1..=max_order.div_ceil(2) {
        let prev = &powers[k - 1];
        let mut next = apply_quadrature(prev, theta);
        next.iter_mut().zip(prev).for_each(|(y, p)| *y -= mean * p);
        powers.push(next);
    }
    let moment = |k: usize| -> f64 {
        let (lo, hi) = (k / 2, k - k / 2);
        let (a, b) = (&powers[lo], &powers[hi]);
        let len = a.len().min(b.len());
        inner(&a[..len], &b[..len]).re / norm_sqr
    };
    let mut out = vec![mean];
    if max_order >= 2 {
        out.push(moment(2));
    }
    if max_order >= 3 {
        out.push(moment(3));
    }
    if max_order >= 4 {
        let m2 = moment(2);
        out.push(moment(4) - 3.0 * m2 * m2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::evolve_kerr;

    #[test]
    fn gaussian_states_have_no_higher_cumulants() {
        let coh = SingleModeState::coherent(C64::new(1.2, -0.7), 60, 1e-14).unwrap();
        let sq = SingleModeState::squeezed_vacuum(0.8, 0.4, 140, 1e-14).unwrap();
        for s in [&coh, &sq, &evolve_kerr(&sq, 0.0, 0.9)] {
            for theta in [0.0, 0.4, 1.3] {
                let k = quadrature_cumulants(s, theta, 4).unwrap();
                assert!(k[2].abs() < 1e-9 && k[3].abs() < 1e-9, "{k:?}");
            }
        }
        let k = quadrature_cumulants(&SingleModeState::vacuum(3).unwrap(), 0.0, 2).unwrap();
        assert!((k[1] - 0.5).abs() < 1e-15);
        let k = quadrature_cumulants(&coh, 0.0, 1).unwrap();
        assert!((k[0] - 1.2 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kerr_fourth_cumulant_is_linear_in_phase() {
        let sq = SingleModeState::squeezed_vacuum(1.0, 0.0, 160, 1e-14).unwrap();
        let theta = std::f64::consts::FRAC_PI_4;
        let k4 = |chi: f64| quadrature_cumulants(&evolve_kerr(&sq, chi, 0.0), theta, 4).unwrap()[3];
        let (a, b) = (k4(1e-4), k4(1e-3));
        assert!(a.abs() > 1e-9);
        let slope = (b.abs() / a.abs()).ln() / 10f64.ln();
        assert!((slope - 1.0).abs() < 0.05, "{slope}");
    }

    #[test]
    fn order_is_checked() {
        let v = SingleModeState::vacuum(2).unwrap();
        assert!(quadrature_cumulants(&v, 0.0, 5).is_err());
        assert!(quadrature_cumulants(&v, 0.0, 0).is_err());
    }
}
