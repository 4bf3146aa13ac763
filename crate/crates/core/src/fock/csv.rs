//! Debug serialization of amplitude lists: `n,re,im` for one mode and
//! `n1,n2,re,im` for two.

use std::collections::BTreeMap;
use std::fmt::Write;

use nalgebra::DMatrix;

use super::state::{PureState, SingleModeState, TwoModeState};
use crate::{Error, Result, C64};

/// Largest single-mode truncation accepted from CSV input.
pub const MAX_CSV_DIM: usize = 1 << 16;

/// Largest per-mode truncation accepted from two-mode CSV input.
pub const MAX_CSV_DIM_PER_MODE: usize = 1 << 10;

const SINGLE_HEADER: &str = "n,re,im";
const PAIR_HEADER: &str = "n1,n2,re,im";

fn rows(text: &str, header: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == header => {}
        Some((line, h)) => return Err(Error::parse(line, format!("expected header `{header}`, found `{h}`"))),
        None => return Err(Error::parse(1, "empty amplitude list")),
    }
    let fields = header.split(',').count();
    lines
        .map(|(line, l)| {
            let cols: Vec<String> = l.split(',').map(|c| c.trim().to_string()).collect();
            if cols.len() != fields {
                return Err(Error::parse(line, format!("expected {fields} fields, found {}", cols.len())));
            }
            Ok((line, cols))
        })
        .collect()
}

fn index(line: usize, s: &str, limit: usize) -> Result<usize> {
    let n: usize = s
        .parse()
        .map_err(|_| Error::parse(line, format!("`{s}` is not a photon number")))?;
    if n >= limit {
        return Err(Error::parse(line, format!("photon number {n} exceeds limit {}", limit - 1)));
    }
    Ok(n)
}

fn component(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(line, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite amplitude component `{s}`")));
    }
    Ok(v)
}

fn implied_tail(norm_sqr: f64) -> f64 {
    (1.0 - norm_sqr).max(0.0)
}

impl SingleModeState {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SINGLE_HEADER);
        out.push('\n');
        for (n, a) in self.amplitudes().iter().enumerate() {
            let _ = writeln!(out, "{n},{:e},{:e}", a.re, a.im);
        }
        out
    }

    /// Parses an `n,re,im` amplitude list. Missing photon numbers are zero;
    /// the tail bound is the norm deficit `1 - Σ|c|²`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut amps = BTreeMap::new();
        for (line, cols) in rows(text, SINGLE_HEADER)? {
            let n = index(line, &cols[0], MAX_CSV_DIM)?;
            let a = C64::new(component(line, &cols[1])?, component(line, &cols[2])?);
            if amps.insert(n, a).is_some() {
                return Err(Error::parse(line, format!("duplicate photon number {n}")));
            }
        }
        let dim = amps.keys().next_back().map(|n| n + 1).unwrap_or(0);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        for (n, a) in amps {
            amplitudes[n] = a;
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        SingleModeState::from_amplitudes(amplitudes, implied_tail(norm_sqr))
    }
}

impl TwoModeState {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(PAIR_HEADER);
        out.push('\n');
        let (da, db) = self.dims();
        for na in 0..da {
            for nb in 0..db {
                let a = self.amplitude(na, nb);
                let _ = writeln!(out, "{na},{nb},{:e},{:e}", a.re, a.im);
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut amps = BTreeMap::new();
        for (line, cols) in rows(text, PAIR_HEADER)? {
            let n1 = index(line, &cols[0], MAX_CSV_DIM_PER_MODE)?;
            let n2 = index(line, &cols[1], MAX_CSV_DIM_PER_MODE)?;
            let a = C64::new(component(line, &cols[2])?, component(line, &cols[3])?);
            if amps.insert((n1, n2), a).is_some() {
                return Err(Error::parse(line, format!("duplicate outcome ({n1}, {n2})")));
            }
        }
        let da = amps.keys().map(|k| k.0 + 1).max().unwrap_or(0);
        let db = amps.keys().map(|k| k.1 + 1).max().unwrap_or(0);
        let mut m = DMatrix::zeros(da, db);
        for ((n1, n2), a) in amps {
            m[(n1, n2)] = a;
        }
        let norm_sqr: f64 = m.iter().map(|a| a.norm_sqr()).sum();
        let state = TwoModeState::from_matrix(m, implied_tail(norm_sqr))?;
        debug_assert!(state.norm_sqr().is_finite());
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_TRUNCATION_TOLERANCE as TOL;
    use proptest::prelude::*;

    #[test]
    fn header_and_fields_are_checked() {
        assert!(matches!(SingleModeState::from_csv(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(SingleModeState::from_csv("n,im,re\n0,1,0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(SingleModeState::from_csv("n,re,im\n0,1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(SingleModeState::from_csv("n,re,im\n0,1,0\n0,0,0"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(SingleModeState::from_csv("n,re,im\n0,NaN,0"), Err(Error::Parse { .. })));
        assert!(matches!(SingleModeState::from_csv("n,re,im\n0,2,0"), Err(Error::NotNormalized { .. })));
        assert!(matches!(SingleModeState::from_csv("n,re,im\n99999999,1,0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sparse_rows_fill_zeros() {
        let s = SingleModeState::from_csv("n,re,im\n3,0,1\n").unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitude(3), C64::new(0.0, 1.0));
        assert_eq!(s.tail_bound(), 0.0);
    }

    #[test]
    fn two_mode_round_trip() {
        let s = TwoModeState::tmsv(0.6, 0.4, 30, TOL).unwrap();
        let back = TwoModeState::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back.matrix(), s.matrix());
    }

    proptest! {
        #[test]
        fn single_mode_round_trip(re in -1.0f64..1.0, im in -1.0f64..1.0, theta in 0.0f64..6.3, dim in 30usize..60) {
            let s = SingleModeState::coherent(C64::new(re, im), dim, TOL).unwrap();
            let back = SingleModeState::from_csv(&s.to_csv()).unwrap();
            prop_assert_eq!(back.amplitudes(), s.amplitudes());
            let sq = SingleModeState::squeezed_vacuum(0.6 * re.abs(), theta, 80, TOL).unwrap();
            let back = SingleModeState::from_csv(&sq.to_csv()).unwrap();
            prop_assert_eq!(back.amplitudes(), sq.amplitudes());
        }
    }
}
