//! Unitary evolution `exp(iθH) v` for Hermitian `H`.
//!
//! Small spaces materialize `H` and use the dense scaling-and-squaring
//! exponential; larger ones use a Lanczos (Krylov) approximation of the
//! action on `v` with adaptive sub-stepping.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::fock::OperatorMatrix;
use crate::{Error, Result, C64};

/// Largest total dimension evolved through a dense exponential.
pub const DENSE_EVOLUTION_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Maximum Lanczos subspace size per step.
    pub max_subspace: usize,
    /// Target error per unit angle, relative to `‖v‖`.
    pub tolerance: f64,
    /// Sub-step budget before giving up.
    pub max_substeps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            max_subspace: 40,
            tolerance: 1e-13,
            max_substeps: 1 << 14,
        }
    }
}

/// `exp(A)` for a dense complex matrix (Padé scaling and squaring).
pub fn expm_dense(a: &DMatrix<C64>) -> DMatrix<C64> {
    a.clone().exp()
}

/// `exp(iθS) = V diag(e^{iθλ}) Vᵀ` for a real symmetric `S`.
pub fn expi_real_symmetric(s: &DMatrix<f64>, theta: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(s.clone());
    let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, theta * l)));
    &v * phases * v.transpose()
}

/// `exp(iθH) v`, dense below [`DENSE_EVOLUTION_LIMIT`], Krylov above.
pub fn evolve(h: &OperatorMatrix, v: &[C64], theta: f64) -> Result<Vec<C64>> {
    if !h.is_hermitian() {
        return Err(Error::Precondition("evolution generator must be flagged hermitian".into()));
    }
    if v.len() != h.space().total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a space of dimension {}",
            v.len(),
            h.space().total()
        )));
    }
    if theta == 0.0 {
        return Ok(v.to_vec());
    }
    if v.len() <= DENSE_EVOLUTION_LIMIT {
        let u = expm_dense(&(h.to_dense()? * C64::new(0.0, theta)));
        Ok((u * DVector::from_column_slice(v)).as_slice().to_vec())
    } else {
        expm_multiply(h, v, theta, &KrylovOptions::default())
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

struct LanczosStep {
    basis: Vec<Vec<C64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `β_m` coupling the last basis vector out of the subspace (0 on breakdown).
    residual_beta: f64,
}

fn lanczos(h: &OperatorMatrix, v: &[C64], v_norm: f64, m_max: usize) -> LanczosStep {
    let mut basis: Vec<Vec<C64>> = vec![v.iter().map(|z| z / v_norm).collect()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    loop {
        let j = basis.len() - 1;
        let mut w = h.apply(&basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalization (twice is enough)
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let b = norm(&w);
        let scale = alpha.iter().map(|x| x.abs()).fold(b, f64::max).max(1.0);
        if b <= 1e-14 * scale {
            return LanczosStep {
                basis,
                alpha,
                beta,
                residual_beta: 0.0,
            };
        }
        if basis.len() == m_max {
            return LanczosStep {
                basis,
                alpha,
                beta,
                residual_beta: b,
            };
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
}

/// Krylov approximation of `exp(iθH) v` with adaptive sub-steps.
pub fn expm_multiply(h: &OperatorMatrix, v: &[C64], theta: f64, opts: &KrylovOptions) -> Result<Vec<C64>> {
    let v_norm = norm(v);
    if v_norm == 0.0 || theta == 0.0 {
        return Ok(v.to_vec());
    }
    let mut w = v.to_vec();
    let mut remaining = theta;
    let mut step = theta;
    let mut substeps = 0usize;
    let m_max = opts.max_subspace.max(2).min(v.len());
    while remaining != 0.0 {
        if step.abs() > remaining.abs() {
            step = remaining;
        }
        let w_norm = norm(&w);
        let lz = lanczos(h, &w, w_norm, m_max);
        let m = lz.alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                lz.alpha[i]
            } else if i + 1 == j {
                lz.beta[i]
            } else if j + 1 == i {
                lz.beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let y: Vec<C64> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| {
                        let vk = eig.eigenvectors[(i, k)] * eig.eigenvectors[(0, k)];
                        C64::from_polar(vk, step * eig.eigenvalues[k])
                    })
                    .sum::<C64>()
                    * w_norm
            })
            .collect();
        let err = lz.residual_beta * y[m - 1].norm() * step.abs().min(1.0);
        let allowed = opts.tolerance * v_norm * (step / theta).abs();
        if err <= allowed || lz.residual_beta == 0.0 {
            let mut next = vec![C64::new(0.0, 0.0); w.len()];
            for (q, c) in lz.basis.iter().zip(&y) {
                next.iter_mut().zip(q).for_each(|(n, qi)| *n += c * qi);
            }
            w = next;
            remaining -= step;
            if remaining.abs() <= 1e-15 * theta.abs() {
                remaining = 0.0;
            }
            // grow the step again after an easy acceptance
            if err < 0.01 * allowed {
                step *= 2.0;
            }
        } else {
            step *= 0.5;
        }
        substeps += 1;
        if substeps > opts.max_substeps {
            return Err(Error::Series { residual: err });
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Space;

    fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        // small deterministic LCG
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut triplets = Vec::new();
        for i in 0..n {
            triplets.push((i, i, C64::new(next() * 4.0, 0.0)));
            for j in i + 1..(i + 4).min(n) {
                let z = C64::new(next(), next());
                triplets.push((i, j, z));
                triplets.push((j, i, z.conj()));
            }
        }
        OperatorMatrix::from_triplets(Space::Single(n), triplets, true).unwrap()
    }

    #[test]
    fn krylov_matches_dense_exponential() {
        let h = random_hermitian(120, 7);
        let v: Vec<C64> = (0..120).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        for theta in [1e-4, 0.3, -2.0, 7.5] {
            let krylov = expm_multiply(&h, &v, theta, &KrylovOptions::default()).unwrap();
            let u = expm_dense(&(h.to_dense().unwrap() * C64::new(0.0, theta)));
            let dense = u * DVector::from_column_slice(&v);
            let diff: f64 = krylov.iter().zip(dense.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-10, "theta {theta}: {diff}");
            assert!((norm(&krylov) - norm(&v)).abs() < 1e-10);
        }
    }

    #[test]
    fn expi_real_symmetric_is_unitary() {
        let s = DMatrix::from_fn(6, 6, |i, j| ((i + j) as f64).cos());
        let u = expi_real_symmetric(&s, 0.7);
        let id = &u * u.adjoint();
        assert!((id - DMatrix::identity(6, 6)).norm() < 1e-13);
    }

    #[test]
    fn non_hermitian_generator_is_rejected() {
        let op = OperatorMatrix::from_triplets(Space::Single(2), vec![(0, 1, C64::new(1.0, 0.0))], false).unwrap();
        assert!(matches!(evolve(&op, &[C64::new(1.0, 0.0), C64::default()], 0.1), Err(Error::Precondition(_))));
    }
}
