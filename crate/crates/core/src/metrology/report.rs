use std::collections::BTreeMap;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::fisher::{is_singular, nuisance_qcrb, NuisanceBound};
use crate::{Error, Result};

/// Fisher matrix, its inverse when it exists, and the nuisance bound, with
/// enough labelling to reproduce the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetrologyReport {
    /// Row-major `[F_QQ, F_QC, F_CQ, F_CC]`.
    pub qfim: [f64; 4],
    pub qfim_inverse: Option<[f64; 4]>,
    pub qcrb_nuisance: NuisanceBound,
    pub shots: f64,
    pub generator_labels: [String; 2],
    pub state_descriptor: String,
    pub convention_flags: BTreeMap<String, String>,
}

fn row_major(m: &Matrix2<f64>) -> [f64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

impl MetrologyReport {
    pub fn new(
        qfim: &Matrix2<f64>,
        shots: f64,
        generator_labels: [String; 2],
        state_descriptor: impl Into<String>,
        convention_flags: BTreeMap<String, String>,
    ) -> Result<Self> {
        let bound = nuisance_qcrb(qfim, shots)?;
        let inverse = match bound {
            NuisanceBound::Bound(_) => qfim.try_inverse().map(|m| row_major(&m)),
            NuisanceBound::Indistinguishable => None,
        };
        Ok(MetrologyReport {
            qfim: row_major(qfim),
            qfim_inverse: inverse,
            qcrb_nuisance: bound,
            shots,
            generator_labels,
            state_descriptor: state_descriptor.into(),
            convention_flags,
        })
    }

    pub fn qfim_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.qfim[0], self.qfim[1], self.qfim[2], self.qfim[3])
    }

    /// Checks the matrix invariants: finite, symmetric to 1e-10 (relative to
    /// the largest entry), positive semidefinite to -1e-10, and an inverse
    /// present exactly when the matrix is non-singular.
    pub fn validate(&self) -> Result<()> {
        let f = self.qfim_matrix();
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("report matrix has non-finite entries".into()));
        }
        let scale = f.abs().max().max(1.0);
        if (f[(0, 1)] - f[(1, 0)]).abs() > 1e-10 * scale {
            return Err(Error::Domain("report matrix is not symmetric".into()));
        }
        let eig = f.symmetric_eigenvalues();
        if eig.min() < -1e-10 * scale {
            return Err(Error::Domain(format!("report matrix has eigenvalue {}", eig.min())));
        }
        if self.qfim_inverse.is_some() == is_singular(&f) {
            return Err(Error::Domain("inverse presence disagrees with singularity of the matrix".into()));
        }
        if !(self.shots > 0.0 && self.shots.is_finite()) {
            return Err(Error::Domain(format!("shot count {} must be positive", self.shots)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses and validates a report.
    pub fn from_json(text: &str) -> Result<Self> {
        let report: MetrologyReport =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        report.validate()?;
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::analytic_sqvac_qfim;

    fn labels() -> [String; 2] {
        ["a†a†aa".into(), "a†a".into()]
    }

    #[test]
    fn round_trip() {
        let (f, inv) = analytic_sqvac_qfim(1.7).unwrap();
        let mut flags = BTreeMap::new();
        flags.insert("tau".to_string(), "1".to_string());
        let r = MetrologyReport::new(&f, 1e6, labels(), "squeezed-vacuum r=1", flags).unwrap();
        let back = MetrologyReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let got = back.qfim_inverse.unwrap();
        assert!((got[0] / inv[(0, 0)] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn singular_report() {
        let r = MetrologyReport::new(&Matrix2::zeros(), 1.0, labels(), "vacuum", BTreeMap::new()).unwrap();
        assert_eq!(r.qcrb_nuisance, NuisanceBound::Indistinguishable);
        assert!(r.qfim_inverse.is_none());
        assert!(r.to_json().contains("\"indistinguishable\""));
        assert_eq!(MetrologyReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn invalid_reports_are_rejected() {
        let (f, _) = analytic_sqvac_qfim(1.0).unwrap();
        let r = MetrologyReport::new(&f, 1.0, labels(), "x", BTreeMap::new()).unwrap();
        let mut asym = r.clone();
        asym.qfim[1] += 1.0;
        assert!(MetrologyReport::from_json(&asym.to_json()).is_err());
        let mut no_inv = r.clone();
        no_inv.qfim_inverse = None;
        assert!(MetrologyReport::from_json(&no_inv.to_json()).is_err());
        assert!(MetrologyReport::from_json("{").is_err());
        assert!(MetrologyReport::from_json(&r.to_json().replace("\"shots\"", "\"extra\": 1, \"shots\"")).is_err());
    }
}
