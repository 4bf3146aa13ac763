//! Strict sectioned `key = value unit` config files.
//!
//! ```text
//! # comment
//! [geometry]
//! arm_length = 10 km
//! finesse = 450
//! ```
//!
//! Every section and key must appear in [`SCHEMA`]; physical quantities must
//! carry a unit of the right dimension; lists are comma-separated. Errors
//! name the offending line.

use std::collections::BTreeMap;

use crate::units::{parse_number, parse_quantity, Dimension};
use crate::CliError;

/// Value type of a config key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Number,
    Integer,
    Text,
    Quantity(Dimension),
    Numbers,
    Integers,
    Quantities(Dimension),
}

use Dimension::*;
use Kind::*;

/// Allowed sections and keys.
pub const SCHEMA: &[(&str, &[(&str, Kind)])] = &[
    (
        "geometry",
        &[
            ("arm_length", Quantity(Length)),
            ("separation", Quantity(Length)),
            ("finesse", Number),
            ("wavelength", Quantity(Length)),
            ("beam_width", Quantity(Length)),
            ("mediator_spin", Integer),
            ("configuration", Text),
            ("coupling_mode", Text),
            ("grid_l_over_w", Numbers),
            ("quadrature_panels", Integer),
        ],
    ),
    (
        "scenario",
        &[
            ("label", Text),
            ("total_time", Quantity(Time)),
            ("pump_power", Quantity(Power)),
            ("circulating_power", Quantity(Power)),
            ("time_sweep", Quantities(Time)),
        ],
    ),
    (
        "state",
        &[
            ("kind", Text),
            ("alpha_re", Number),
            ("alpha_im", Number),
            ("r", Number),
            ("theta", Quantity(Angle)),
            ("phi", Quantity(Angle)),
            ("dim", Integer),
        ],
    ),
    (
        "sweep",
        &[
            ("kind", Text),
            ("r", Numbers),
            ("mean_photons", Numbers),
            ("shots", Number),
        ],
    ),
    (
        "mz",
        &[
            ("r", Numbers),
            ("chi", Quantity(Angle)),
            ("chi_c_sym", Quantity(Angle)),
            ("chi_c_asym", Quantity(Angle)),
            ("dim", Integer),
            ("ratio_mean_photons", Numbers),
        ],
    ),
    (
        "thg",
        &[
            ("pump", Text),
            ("mean_photons", Numbers),
            ("evolve_mean_photons", Number),
            ("evolve_chi", Quantities(Angle)),
        ],
    ),
    (
        "cumulants",
        &[
            ("theta", Quantity(Angle)),
            ("chi_q", Quantities(Angle)),
            ("chi_c", Quantity(Angle)),
        ],
    ),
    ("numerics", &[("tolerance", Number), ("convention", Text)]),
    ("output", &[("prefix", Text)]),
    (
        "reference",
        &[
            ("circulating_power", Quantity(Power)),
            ("pump_power", Quantity(Power)),
            ("chi_q", Quantity(Angle)),
            ("intensity", Quantity(Intensity)),
            ("cfi_ratio", Number),
            ("f_c_coefficient", Number),
            ("f_q_coefficient", Number),
            ("exponent", Number),
        ],
    ),
];

/// A parsed value, already in SI units.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Integer(usize),
    Text(String),
    Numbers(Vec<f64>),
    Integers(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: Value,
    pub line: usize,
}

/// A validated config document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

fn kind_of(section: &str, key: &str) -> Option<Kind> {
    SCHEMA
        .iter()
        .find(|(s, _)| *s == section)
        .and_then(|(_, keys)| keys.iter().find(|(k, _)| *k == key))
        .map(|(_, kind)| *kind)
}

fn parse_integer(text: &str) -> Result<usize, String> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| format!("'{}' is not a non-negative integer", text.trim()))
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err("empty list item".into());
    }
    items.into_iter().map(item).collect()
}

fn parse_value(kind: Kind, text: &str) -> Result<Value, String> {
    Ok(match kind {
        Number => Value::Number(parse_number(text)?),
        Integer => Value::Integer(parse_integer(text)?),
        Text => {
            let t = text.trim();
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(format!("'{t}' must be a single word"));
            }
            Value::Text(t.to_string())
        }
        Quantity(d) => Value::Number(parse_quantity(text, d)?),
        Numbers => Value::Numbers(parse_list(text, parse_number)?),
        Integers => Value::Integers(parse_list(text, parse_integer)?),
        Quantities(d) => Value::Numbers(parse_list(text, |s| parse_quantity(s, d))?),
    })
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Config::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| CliError::Config(format!("line {line}: {msg}"));
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("malformed section header '{content}'")))?
                    .trim();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    let known: Vec<&str> = SCHEMA.iter().map(|(s, _)| *s).collect();
                    return Err(err(format!("unknown section [{name}] (known: {})", known.join(", "))));
                }
                if config.sections.contains_key(name) {
                    return Err(err(format!("section [{name}] appears twice")));
                }
                config.sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
            let key = key.trim();
            let section = current
                .as_deref()
                .ok_or_else(|| err(format!("key '{key}' outside any section")))?;
            let kind = kind_of(section, key).ok_or_else(|| err(format!("unknown key '{key}' in [{section}]")))?;
            let value = parse_value(kind, value).map_err(|m| err(format!("{section}.{key}: {m}")))?;
            let entries = config.sections.get_mut(section).expect("section inserted");
            if entries.contains_key(key) {
                return Err(err(format!("key '{key}' repeated in [{section}]")));
            }
            entries.insert(key.to_string(), Entry { value, line });
        }
        Ok(config)
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    pub fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section).and_then(|s| s.get(key))
    }

    fn missing(section: &str, key: &str) -> CliError {
        CliError::Config(format!("missing required key '{key}' in [{section}]"))
    }

    fn wrong(section: &str, key: &str, entry: &Entry, want: &str) -> CliError {
        CliError::Config(format!("line {}: {section}.{key} must be {want}", entry.line))
    }

    pub fn number(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(Entry { value: Value::Number(x), .. }) => Ok(Some(*x)),
            Some(e) => Err(Self::wrong(section, key, e, "a number")),
        }
    }

    pub fn require_number(&self, section: &str, key: &str) -> Result<f64, CliError> {
        self.number(section, key)?.ok_or_else(|| Self::missing(section, key))
    }

    pub fn integer(&self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(Entry { value: Value::Integer(x), .. }) => Ok(Some(*x)),
            Some(e) => Err(Self::wrong(section, key, e, "an integer")),
        }
    }

    pub fn text(&self, section: &str, key: &str) -> Result<Option<&str>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(Entry { value: Value::Text(x), .. }) => Ok(Some(x)),
            Some(e) => Err(Self::wrong(section, key, e, "text")),
        }
    }

    pub fn require_text(&self, section: &str, key: &str) -> Result<&str, CliError> {
        self.text(section, key)?.ok_or_else(|| Self::missing(section, key))
    }

    pub fn numbers(&self, section: &str, key: &str) -> Result<Option<&[f64]>, CliError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(Entry { value: Value::Numbers(x), .. }) => Ok(Some(x)),
            Some(e) => Err(Self::wrong(section, key, e, "a list of numbers")),
        }
    }

    pub fn require_numbers(&self, section: &str, key: &str) -> Result<&[f64], CliError> {
        self.numbers(section, key)?.ok_or_else(|| Self::missing(section, key))
    }

    /// Line of a key, for diagnostics.
    pub fn line(&self, section: &str, key: &str) -> Option<usize> {
        self.entry(section, key).map(|e| e.line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(r: Result<Config, CliError>) -> String {
        match r {
            Err(CliError::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_sections_and_units() {
        let c = Config::parse(
            "# ce\n[geometry]\narm_length = 10 km\nseparation = 10 cm # arms\nfinesse = 450\n\n[sweep]\nr = 0.25, 0.5\n",
        )
        .unwrap();
        assert_eq!(c.require_number("geometry", "arm_length").unwrap(), 1e4);
        assert_eq!(c.require_number("geometry", "separation").unwrap(), 0.1);
        assert_eq!(c.require_numbers("sweep", "r").unwrap(), &[0.25, 0.5]);
        assert_eq!(c.line("geometry", "finesse"), Some(5));
        assert!(c.number("geometry", "wavelength").unwrap().is_none());
    }

    #[test]
    fn strictness() {
        assert!(msg(Config::parse("[geometry]\narm_lenght = 1 m")).starts_with("line 2: unknown key 'arm_lenght'"));
        assert!(msg(Config::parse("[geom]\n")).contains("unknown section [geom]"));
        assert!(msg(Config::parse("finesse = 3")).contains("outside any section"));
        assert!(msg(Config::parse("[geometry]\narm_length = 10")).contains("needs a length unit"));
        assert!(msg(Config::parse("[geometry]\nfinesse = 1\nfinesse = 2")).starts_with("line 3"));
        assert!(msg(Config::parse("[geometry]\n[geometry]")).contains("twice"));
        assert!(msg(Config::parse("[geometry\n")).contains("malformed"));
        assert!(msg(Config::parse("[sweep]\nr = 1,,2")).contains("empty list item"));
        assert!(msg(Config::parse("[state]\nkind = two words")).contains("single word"));
        assert!(msg(Config::parse("[geometry]\nnonsense")).contains("expected 'key = value'"));
    }
}
