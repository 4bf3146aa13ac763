//! Quantities with unit suffixes, converted to SI.

use std::fmt;

/// Physical dimension a config value must carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Power,
    Angle,
    Intensity,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Power => "power",
            Dimension::Angle => "angle",
            Dimension::Intensity => "intensity",
        };
        f.write_str(s)
    }
}

const DAY: f64 = 86_400.0;

/// Unit symbols and their SI factors.
fn units(dim: Dimension) -> &'static [(&'static str, f64)] {
    match dim {
        Dimension::Length => &[
            ("m", 1.0),
            ("km", 1e3),
            ("cm", 1e-2),
            ("mm", 1e-3),
            ("um", 1e-6),
            ("µm", 1e-6),
            ("μm", 1e-6),
            ("nm", 1e-9),
        ],
        Dimension::Time => &[
            ("s", 1.0),
            ("ms", 1e-3),
            ("us", 1e-6),
            ("min", 60.0),
            ("h", 3600.0),
            ("day", DAY),
            // Julian year
            ("yr", 365.25 * DAY),
        ],
        Dimension::Power => &[("W", 1.0), ("kW", 1e3), ("MW", 1e6), ("GW", 1e9)],
        Dimension::Angle => &[("rad", 1.0), ("mrad", 1e-3), ("urad", 1e-6), ("deg", std::f64::consts::PI / 180.0)],
        Dimension::Intensity => &[("W/m2", 1.0), ("W/cm2", 1e4), ("MW/cm2", 1e10)],
    }
}

fn all_dimensions() -> [Dimension; 5] {
    [
        Dimension::Length,
        Dimension::Time,
        Dimension::Power,
        Dimension::Angle,
        Dimension::Intensity,
    ]
}

fn lookup(unit: &str) -> Option<(Dimension, f64)> {
    all_dimensions()
        .into_iter()
        .find_map(|d| units(d).iter().find(|(u, _)| *u == unit).map(|(_, f)| (d, *f)))
}

/// Plain finite number (no unit).
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    // reject forms f64::from_str accepts but a config should not
    if t.is_empty() || t.contains(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return Err(format!("'{t}' is not a number"));
    }
    match t.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("'{t}' is not a finite number")),
    }
}

/// Parses `"<number> <unit>"` (the space is optional) and returns the SI
/// value. The unit must belong to `dim`.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let t = text.trim();
    let (number, unit) = match t.split_once(char::is_whitespace) {
        Some((n, u)) => (n, u.trim()),
        None => {
            let split = t
                .char_indices()
                .map(|(i, _)| i)
                .chain(std::iter::once(t.len()))
                .filter(|&i| i > 0 && lookup(&t[i..]).is_some() && parse_number(&t[..i]).is_ok())
                .last();
            match split {
                Some(i) => (&t[..i], &t[i..]),
                None => (t, ""),
            }
        }
    };
    if unit.is_empty() {
        return Err(format!("'{t}' needs a {dim} unit"));
    }
    let value = parse_number(number)?;
    match lookup(unit) {
        Some((d, factor)) if d == dim => {
            let si = value * factor;
            if si.is_finite() {
                Ok(si)
            } else {
                Err(format!("'{t}' overflows"))
            }
        }
        Some((d, _)) => Err(format!("unit '{unit}' is a {d}, expected a {dim}")),
        None => {
            let known: Vec<&str> = units(dim).iter().map(|(u, _)| *u).collect();
            Err(format!("unknown {dim} unit '{unit}' (known: {})", known.join(", ")))
        }
    }
}
