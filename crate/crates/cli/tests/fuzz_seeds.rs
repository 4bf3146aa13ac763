//! Replays the checked-in fuzz corpus through the same parsers and
//! invariants as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use gravkerr::fock::{PureState, SingleModeState, TwoModeState};
use gravkerr::metrology::MetrologyReport;
use gravkerr_cli::units::{parse_number, parse_quantity, Dimension};
use gravkerr_cli::Config;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let text = String::from_utf8(fs::read(&path).unwrap()).unwrap();
            (path.file_name().unwrap().to_string_lossy().into_owned(), text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("config_parse") {
        if Config::parse(&text).is_ok() {
            accepted += 1;
        } else {
            assert!(!gravkerr_cli::presets::names().contains(&name.as_str()), "preset seed {name} rejected");
        }
    }
    assert_eq!(accepted, gravkerr_cli::presets::names().len());
}

#[test]
fn quantity_seeds() {
    let dims = [Dimension::Length, Dimension::Time, Dimension::Power, Dimension::Angle, Dimension::Intensity];
    let mut accepted = 0;
    for (_, text) in seeds("quantity_parse") {
        if let Ok(x) = parse_number(&text) {
            assert!(x.is_finite());
        }
        for dim in dims {
            if let Ok(x) = parse_quantity(&text, dim) {
                assert!(x.is_finite());
                accepted += 1;
            }
        }
    }
    assert!(accepted >= 8);
}

#[test]
fn single_mode_csv_seeds() {
    for (name, text) in seeds("state_csv_single") {
        if let Ok(state) = SingleModeState::from_csv(&text) {
            let again = SingleModeState::from_csv(&state.to_csv()).unwrap();
            assert_eq!(again.amplitudes(), state.amplitudes(), "{name}");
            assert!(state.norm_sqr() <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn two_mode_csv_seeds() {
    for (name, text) in seeds("state_csv_two_mode") {
        if let Ok(state) = TwoModeState::from_csv(&text) {
            let again = TwoModeState::from_csv(&state.to_csv()).unwrap();
            assert_eq!(again.matrix(), state.matrix(), "{name}");
            assert!(state.norm_sqr() <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn report_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("report_json") {
        if let Ok(report) = MetrologyReport::from_json(&text) {
            assert_eq!(MetrologyReport::from_json(&report.to_json()).unwrap(), report, "{name}");
            accepted += 1;
        }
    }
    assert_eq!(accepted, 3);
}
