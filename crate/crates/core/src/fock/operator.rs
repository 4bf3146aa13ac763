use nalgebra::DMatrix;

use super::state::PureState;
use crate::{Error, Result, C64};

/// Hermiticity contract for operators flagged hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Largest total dimension [`OperatorMatrix::to_dense`] will materialize
/// (a two-mode space with 64 levels per mode).
pub const DENSE_LIMIT: usize = 64 * 64;

/// Hilbert space an operator or state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Single(usize),
    Pair(usize, usize),
}

impl Space {
    /// Per-mode truncations; a single mode reports `(dim, 1)`.
    pub fn dims(self) -> (usize, usize) {
        match self {
            Space::Single(d) => (d, 1),
            Space::Pair(a, b) => (a, b),
        }
    }

    pub fn total(self) -> usize {
        let (a, b) = self.dims();
        a * b
    }

    /// Flat index of `|n_a, n_b⟩` (column-major).
    pub fn index(self, n_a: usize, n_b: usize) -> usize {
        n_a + self.dims().0 * n_b
    }

    pub fn basis(self, index: usize) -> (usize, usize) {
        let da = self.dims().0;
        (index % da, index / da)
    }

    pub fn contains(self, n_a: usize, n_b: usize) -> bool {
        let (a, b) = self.dims();
        n_a < a && n_b < b
    }
}

/// Sparsity pattern, inferred from the stored entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Diagonal,
    /// Nonzero only for `|row - col| <= k` in the flat basis ordering.
    Banded(usize),
    Dense,
}

/// Sparse (CSR) operator on a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: Space,
    structure: Structure,
    hermitian: bool,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl OperatorMatrix {
    /// Builds an operator from `(row, col, value)` entries. Duplicates are
    /// summed and exact zeros dropped. With `hermitian` set the entries must
    /// equal their conjugate transpose to [`HERMITIAN_TOLERANCE`].
    pub fn from_triplets(
        space: Space,
        mut triplets: Vec<(usize, usize, C64)>,
        hermitian: bool,
    ) -> Result<Self> {
        let n = space.total();
        if n == 0 {
            return Err(Error::InvalidDimension("operator on an empty space".into()));
        }
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= n || *c >= n) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({r}, {c}) outside a space of dimension {n}"
            )));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        let rows: Vec<usize> = merged.iter().map(|t| t.0).collect();
        let cols: Vec<usize> = merged.iter().map(|t| t.1).collect();
        let vals: Vec<C64> = merged.iter().map(|t| t.2).collect();
        let mut row_ptr = vec![0usize; n + 1];
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let bandwidth = rows
            .iter()
            .zip(&cols)
            .map(|(&r, &c)| r.abs_diff(c))
            .max()
            .unwrap_or(0);
        let structure = if bandwidth == 0 {
            Structure::Diagonal
        } else if 2 * bandwidth + 1 < n {
            Structure::Banded(bandwidth)
        } else {
            Structure::Dense
        };
        let op = OperatorMatrix {
            space,
            structure,
            hermitian,
            row_ptr,
            cols,
            vals,
        };
        if hermitian {
            let residual = op.hermiticity_residual();
            if residual > HERMITIAN_TOLERANCE {
                return Err(Error::NotHermitian(residual));
            }
        }
        Ok(op)
    }

    /// Real diagonal operator.
    pub fn diagonal(space: Space, entries: impl IntoIterator<Item = f64>) -> Result<Self> {
        let triplets: Vec<_> = entries
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i, i, C64::new(v, 0.0)))
            .collect();
        if triplets.len() != space.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal entries for a space of dimension {}",
                triplets.len(),
                space.total()
            )));
        }
        Self::from_triplets(space, triplets, true)
    }

    /// Builds an operator from its action on basis states: `action(n_a, n_b)`
    /// lists `((m_a, m_b), c)` with `O|n_a, n_b⟩ = Σ c |m_a, m_b⟩`. Targets
    /// outside the truncated space are dropped.
    pub fn from_action<F>(space: Space, hermitian: bool, action: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Vec<((usize, usize), C64)>,
    {
        let (da, db) = space.dims();
        let mut triplets = Vec::new();
        for nb in 0..db {
            for na in 0..da {
                let col = space.index(na, nb);
                for ((ma, mb), c) in action(na, nb) {
                    if space.contains(ma, mb) {
                        triplets.push((space.index(ma, mb), col, c));
                    }
                }
            }
        }
        Self::from_triplets(space, triplets, hermitian)
    }

    /// Sparse copy of a dense matrix; entries with modulus `<= drop_below`
    /// are discarded.
    pub fn from_dense(space: Space, m: &DMatrix<C64>, hermitian: bool, drop_below: f64) -> Result<Self> {
        let n = space.total();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a space of dimension {n}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut triplets = Vec::new();
        for c in 0..n {
            for r in 0..n {
                let v = m[(r, c)];
                if v.norm() > drop_below {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(space, triplets, hermitian)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Stored entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.space.total()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Matrix element `⟨m_a, m_b|O|n_a, n_b⟩`.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> C64 {
        self.get(self.space.index(bra.0, bra.1), self.space.index(ket.0, ket.1))
    }

    /// Real parts of the diagonal.
    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.space.total()).map(|i| self.get(i, i).re).collect()
    }

    /// `O v` for a vector in the flat basis ordering.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.space.total(), "vector length does not match operator");
        (0..v.len())
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.vals[k] * v[self.cols[k]])
                    .sum()
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.space, triplets, false)
            .map(|mut op| {
                op.hermitian = self.hermitian;
                op
            })
            .expect("adjoint of a valid operator is valid")
    }

    /// `max |O - O†|` over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= factor);
        if factor == 0.0 {
            return Self::from_triplets(self.space, vec![], self.hermitian).expect("zero operator");
        }
        out
    }

    /// `self + factor * other`; the hermitian flag survives only if both are
    /// flagged.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.check_space(other)?;
        let triplets = self
            .entries()
            .chain(other.entries().map(|(r, c, v)| (r, c, v * factor)))
            .collect();
        Self::from_triplets(self.space, triplets, self.hermitian && other.hermitian)
    }

    /// Sparse product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut triplets = Vec::new();
        for (r, k, a) in self.entries() {
            for j in other.row_ptr[k]..other.row_ptr[k + 1] {
                triplets.push((r, other.cols[j], a * other.vals[j]));
            }
        }
        Self::from_triplets(self.space, triplets, false)
    }

    /// Largest entry modulus of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(ab.add_scaled(&ba, -1.0)?.max_abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Dense copy, refused above [`DENSE_LIMIT`] basis states.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let n = self.space.total();
        if n > DENSE_LIMIT {
            return Err(Error::InvalidDimension(format!(
                "refusing to materialize a dense {n}x{n} operator (limit {DENSE_LIMIT})"
            )));
        }
        let mut m = DMatrix::zeros(n, n);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        Ok(m)
    }

    /// Same operator on a larger (or equal) truncation; entries keep their
    /// `(n_a, n_b)` labels.
    pub fn embed(&self, space: Space) -> Result<Self> {
        let (da, db) = self.space.dims();
        let (ea, eb) = space.dims();
        if ea < da || eb < db || std::mem::discriminant(&space) != std::mem::discriminant(&self.space) {
            return Err(Error::DimensionMismatch(format!("cannot embed {:?} into {space:?}", self.space)));
        }
        let triplets = self
            .entries()
            .map(|(r, c, v)| {
                let (ra, rb) = self.space.basis(r);
                let (ca, cb) = self.space.basis(c);
                (space.index(ra, rb), space.index(ca, cb), v)
            })
            .collect();
        let mut op = Self::from_triplets(space, triplets, false)?;
        op.hermitian = self.hermitian;
        Ok(op)
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(format!(
                "operators on {:?} and {:?}",
                self.space, other.space
            )));
        }
        Ok(())
    }
}

/// `⟨ψ|O|ψ⟩` (no renormalization).
pub fn expectation<S: PureState + ?Sized>(state: &S, op: &OperatorMatrix) -> Result<C64> {
    if state.space() != op.space() {
        return Err(Error::DimensionMismatch(format!(
            "state on {:?}, operator on {:?}",
            state.space(),
            op.space()
        )));
    }
    let psi = state.flat();
    let o_psi = op.apply(psi);
    Ok(psi.iter().zip(&o_psi).map(|(a, b)| a.conj() * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn structure_is_inferred() {
        let d = OperatorMatrix::diagonal(Space::Single(4), [0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(d.structure(), Structure::Diagonal);
        let band = OperatorMatrix::from_triplets(
            Space::Single(8),
            vec![(0, 1, c(1.0)), (1, 0, c(1.0))],
            true,
        )
        .unwrap();
        assert_eq!(band.structure(), Structure::Banded(1));
        let dense = OperatorMatrix::from_triplets(
            Space::Single(3),
            vec![(0, 2, c(1.0)), (2, 0, c(1.0))],
            true,
        )
        .unwrap();
        assert_eq!(dense.structure(), Structure::Dense);
    }

    #[test]
    fn hermitian_flag_is_checked() {
        let err = OperatorMatrix::from_triplets(Space::Single(2), vec![(0, 1, c(1.0))], true).unwrap_err();
        assert!(matches!(err, Error::NotHermitian(_)));
        let imag = OperatorMatrix::from_triplets(
            Space::Single(2),
            vec![(0, 1, C64::new(0.0, 1.0)), (1, 0, C64::new(0.0, -1.0))],
            true,
        )
        .unwrap();
        assert_eq!(imag.hermiticity_residual(), 0.0);
    }

    #[test]
    fn duplicates_sum_and_zeros_drop() {
        let op = OperatorMatrix::from_triplets(
            Space::Single(3),
            vec![(1, 1, c(1.0)), (1, 1, c(-1.0)), (2, 2, c(0.5)), (2, 2, c(0.25))],
            true,
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(2, 2), c(0.75));
    }

    #[test]
    fn compose_matches_dense_product() {
        let space = Space::Pair(3, 2);
        let a = OperatorMatrix::from_action(space, false, |na, nb| {
            vec![((na + 1, nb), c((na + 1) as f64)), ((na, nb + 1), c(2.0))]
        })
        .unwrap();
        let b = a.adjoint();
        let sparse = a.compose(&b).unwrap().to_dense().unwrap();
        let dense = a.to_dense().unwrap() * b.to_dense().unwrap();
        assert!((sparse - dense).norm() < 1e-14);
    }

    #[test]
    fn dense_limit_is_enforced() {
        let op = OperatorMatrix::diagonal(Space::Pair(65, 64), vec![0.0; 65 * 64]).unwrap();
        assert!(op.to_dense().is_err());
    }

    #[test]
    fn out_of_range_entries_are_rejected() {
        let err = OperatorMatrix::from_triplets(Space::Single(2), vec![(2, 0, c(1.0))], false).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }
}
