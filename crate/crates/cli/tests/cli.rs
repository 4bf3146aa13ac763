use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gravkerr::metrology::{MetrologyReport, NuisanceBound};
use serde_json::Value;

fn gravkerr(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravkerr"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const CE: &str = "[geometry]\narm_length = 10 km\nseparation = 10 cm\nfinesse = 450\nwavelength = 2 um\n";

#[test]
fn config_errors_exit_2_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("typo.conf", "[geometry]\narm_lenght = 10 km\n", "line 2: unknown key 'arm_lenght'"),
        ("unit.conf", "[geometry]\narm_length = 10\n", "needs a length unit"),
        ("wrong.conf", "[geometry]\narm_length = 10 s\n", "is a time"),
        ("section.conf", "[geomtery]\n", "unknown section"),
        ("missing.conf", "[geometry]\narm_length = 10 km\n", "missing required key 'separation'"),
    ];
    for (name, text, expected) in cases {
        let path = write_config(dir.path(), name, text);
        let o = gravkerr(&["coupling", &path], dir.path());
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(expected), "{name}: {}", stderr(&o));
    }
    // nothing is written on a config error
    assert_eq!(fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")
    }).count(), 0);

    let o = gravkerr(&["power", "--preset", "no-such"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown preset"));
    let path = write_config(dir.path(), "ok.conf", CE);
    let o = gravkerr(&["coupling", &path, "--preset", "ce-450"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = gravkerr(&["power", "--preset", "ce-450", "--convention", "thirds"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_and_tolerance_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let low = write_config(
        dir.path(),
        "low.conf",
        &format!("{CE}\n[scenario]\ntotal_time = 1 yr\ncirculating_power = 10 MW\n"),
    );
    let o = gravkerr(&["power", &low], dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(dir.path().join("low_power.json").exists());

    let high = write_config(
        dir.path(),
        "high.conf",
        &format!("{CE}\n[scenario]\ntotal_time = 1 yr\npump_power = 1 MW\n"),
    );
    let o = gravkerr(&["power", &high], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("high_power.json")).unwrap()).unwrap();
    assert_eq!(v["feasibility"]["feasible"], Value::Bool(true));
    assert_eq!(v["feasibility"]["circulating_power"].as_f64(), Some(4.5e8));

    let spin0 = write_config(
        dir.path(),
        "spin0.conf",
        &format!("{CE}mediator_spin = 0\n[scenario]\ntotal_time = 1 yr\n"),
    );
    assert_eq!(gravkerr(&["power", &spin0], dir.path()).status.code(), Some(4));

    let o = gravkerr(&["qfim", "--preset", "sqvac-sweep", "--tolerance", "1e-3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("numerical tolerance failure"));
}

#[test]
fn csv_tables_have_headers_and_nine_digits() {
    let dir = tempfile::tempdir().unwrap();
    let o = gravkerr(&["qfim", "--preset", "sqvac-sweep"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sqvac-sweep_qfim.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,F_QQ,F_QC,F_CC,bound_numeric,bound_analytic"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    let mantissa = c.split('e').next().unwrap().trim_start_matches('-');
                    assert_eq!(mantissa.len(), 10, "{c}");
                    c.parse().unwrap()
                })
                .collect()
        })
        .collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert!((row[4] / row[5] - 1.0).abs() <= 1e-3);
    }
}

#[test]
fn vacuum_report_is_indistinguishable() {
    let dir = tempfile::tempdir().unwrap();
    let o = gravkerr(&["qfim", "--preset", "vacuum"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("vacuum_qfim.json")).unwrap();
    let report = MetrologyReport::from_json(&text).unwrap();
    assert_eq!(report.qcrb_nuisance, NuisanceBound::Indistinguishable);
    assert!(report.qfim_inverse.is_none());
    assert_eq!(report.qfim, [0.0; 4]);
    assert!(text.contains("\"indistinguishable\""));
}

#[test]
fn convention_flag_rescales_generator_quantities_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.conf", "[mz]\nr = 0.5\nchi = 1e-3 rad\n");
    let read = |name: &str| -> Value {
        serde_json::from_str(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap()
    };
    assert_eq!(gravkerr(&["mz", &cfg], dir.path()).status.code(), Some(0));
    let half = read("m_mz.json");
    fs::rename(dir.path().join("m_mz.json"), dir.path().join("half.json")).unwrap();
    assert_eq!(gravkerr(&["mz", &cfg, "--convention", "unhalved"], dir.path()).status.code(), Some(0));
    let full = read("m_mz.json");
    let p = |v: &Value, k: &str| v["points"][0][k].as_f64().unwrap();
    assert!((p(&full, "cfi_analytic") / p(&half, "cfi_analytic") - 4.0).abs() < 1e-12);
    assert!((p(&full, "qfi_over_cfi") / p(&half, "qfi_over_cfi") - 1.0).abs() < 1e-12);
    assert_eq!(p(&full, "cfi_hellinger"), p(&half, "cfi_hellinger"));
    assert_eq!(full["convention_flags"]["convention"], "unhalved");
    assert_eq!(p(&half, "r"), 0.5);
    assert_eq!(half["points"][0]["selection"]["max_probability_odd_difference"].as_f64(), Some(0.0));
}

#[test]
fn seed_is_accepted_and_inert() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(gravkerr(&["coupling", "--preset", "ce-450"], a.path()).status.code(), Some(0));
    assert_eq!(gravkerr(&["coupling", "--preset", "ce-450", "--seed", "7"], b.path()).status.code(), Some(0));
    for name in ["ce-450_coupling.json", "ce-450_coupling.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn coupling_table_covers_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = gravkerr(&["coupling", "--preset", "ce-450"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("ce-450_coupling.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ce-450_coupling.json")).unwrap()).unwrap();
    let chi = v["chi_q"]["computed"].as_f64().unwrap();
    assert!((chi / 4.28e-52 - 1.0).abs() < 5e-3);
    assert_eq!(v["chi_q"]["reference"].as_f64(), Some(4.28e-52));
}
