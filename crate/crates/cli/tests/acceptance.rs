//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command as Process;

use gravkerr::constants::JULIAN_YEAR;
use gravkerr::coupling::{
    chi_q, configuration_coefficient, geometric_factor_asymptotic, geometric_factor_exact,
    geometric_factor_quadrature, mediator_coupling, BeamConfiguration, CavityGeometry, CouplingMode, MediatorSpec,
};
use gravkerr::fock::truncation::{required_dim_coherent, required_dim_squeezed};
use gravkerr::fock::{number_distribution, OperatorMatrix, SingleModeState, Space, TwoModeState};
use gravkerr::generators::{
    beamsplitter_conjugation_check, evolve_kerr, evolve_single_mode, Beamsplitter, Convention, GeneratorSet,
};
use gravkerr::metrology::{
    analytic_mz_cfi, mz_cfi_estimate, mz_outcome_distribution, mz_qfi, nuisance_qcrb, qfim,
    quadrature_cumulants, scaling_exponent, single_parameter_qcrb, thg_qfi, MzAngles,
};
use gravkerr::planner::{circulating_power_bound, feasibility_check, Scenario};
use gravkerr::C64;
use gravkerr_cli::{presets, run, Command, Config, Outcome, Overrides, Settings, Status};
use serde_json::Value;

type Check = Result<String, String>;

const TOL: f64 = 1e-12;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn run_preset(command: Command, preset: &str) -> Outcome {
    let config = Config::parse(presets::get(preset).expect("preset exists")).expect("preset parses");
    let settings = Settings::resolve(&config, &Overrides::default(), preset).expect("settings");
    run(command, &config, &settings).expect("command runs")
}

fn report(outcome: &Outcome, suffix: &str) -> Value {
    serde_json::from_str(outcome.file(suffix).expect("report file")).expect("valid json")
}

fn num(v: &Value, path: &[&str]) -> f64 {
    let mut cur = v;
    for key in path {
        cur = &cur[*key];
    }
    cur.as_f64().unwrap_or_else(|| panic!("{path:?} is not a number"))
}

fn criterion_1() -> Check {
    let mut worst_entry: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for r in [0.25f64, 0.5, 0.75, 1.0, 1.25] {
        let dim = required_dim_squeezed(r, TOL).map_err(|e| e.to_string())?;
        ensure(dim <= 200, format!("r = {r} needs dim {dim}"))?;
        let s = SingleModeState::squeezed_vacuum(r, 0.0, dim, TOL).map_err(|e| e.to_string())?;
        let f = qfim(&s, &GeneratorSet::kerr(dim).unwrap(), 1.0).map_err(|e| e.to_string())?;
        let n = r.sinh().powi(2);
        let qq = 8.0 * n * (48.0 * n.powi(3) + 72.0 * n * n + 25.0 * n + 1.0);
        let qc = 8.0 * n * (6.0 * n * n + 7.0 * n + 1.0);
        let cc = 8.0 * n * (n + 1.0);
        for (x, y) in [(f[(0, 0)], qq), (f[(0, 1)], qc), (f[(1, 0)], qc), (f[(1, 1)], cc)] {
            worst_entry = worst_entry.max(rel(x, y));
        }
        let inv = f.try_inverse().ok_or("numeric matrix not invertible")?;
        worst_inv = worst_inv.max(rel(inv[(0, 0)], 1.0 / (96.0 * n * n * (n + 1.0).powi(2))));
    }
    ensure(worst_entry <= 1e-6, format!("entry error {worst_entry:e}"))?;
    ensure(worst_inv <= 1e-6, format!("inverse error {worst_inv:e}"))?;

    let sweep = run_preset(Command::Qfim, "sqvac-sweep");
    ensure(sweep.status == Status::Ok, format!("sweep status {:?}", sweep.status))?;
    Ok(format!("max entry error {worst_entry:.2e}, max inverse error {worst_inv:.2e}"))
}

fn criterion_2() -> Check {
    let ce450 = report(&run_preset(Command::Power, "ce-450"), "_power.json");
    let p = num(&ce450, &["requirement", "circulating_power", "computed"]);
    ensure(rel(p, 125e6) <= 0.10, format!("circulating power {p:e} W"))?;
    let ce1000 = report(&run_preset(Command::Power, "ce-1000"), "_power.json");
    let pump = num(&ce1000, &["requirement", "pump_power", "computed"]);
    ensure(rel(pump, 100e3) <= 0.15, format!("pump power {pump:e} W"))?;

    let g = CavityGeometry::new(1e4, 0.1, 450.0, 2e-6).unwrap();
    let base = circulating_power_bound(&g, JULIAN_YEAR).unwrap();
    let k: f64 = 3.7;
    let t = base / circulating_power_bound(&g, k * JULIAN_YEAR).unwrap();
    let f = base / circulating_power_bound(&CavityGeometry { finesse: k * 450.0, ..g }, JULIAN_YEAR).unwrap();
    // the logarithm is held fixed by scaling w with L
    let scaled = CavityGeometry {
        arm_length: k * 1e4,
        separation: k * 0.1,
        ..g
    };
    let l = base / circulating_power_bound(&scaled, JULIAN_YEAR).unwrap();
    for (name, ratio, expected) in [("T", t, k.powf(0.25)), ("F", f, k.powf(0.25)), ("L", l, k.powf(0.75))] {
        ensure(rel(ratio, expected) <= 1e-10, format!("{name} ratio {ratio} vs {expected}"))?;
    }
    Ok(format!("ce-450 {p:.4e} W, ce-1000 pump {pump:.4e} W, scaling ratios exact to 1e-10"))
}

fn criterion_3() -> Check {
    let g = CavityGeometry::new(1e4, 0.1, 450.0, 2e-6).unwrap();
    let s = Scenario::new("ce-450", g, JULIAN_YEAR, None, Some(circulating_power_bound(&g, JULIAN_YEAR).unwrap()))
        .unwrap();
    let r = feasibility_check(&s).map_err(|e| e.to_string())?;
    let residual = r.closure_residual.ok_or("no marginal power")?;
    ensure(residual.abs() <= 0.03, format!("closure residual {residual:e}"))?;
    let cli = report(&run_preset(Command::Power, "ce-450"), "_power.json");
    ensure(cli["requirement"]["closure_ok"] == Value::Bool(true), "cli closure flag not set")?;
    Ok(format!("marginal power {:.4e} W, residual {residual:.2e}", r.marginal_power.unwrap()))
}

fn criterion_4() -> Check {
    let mut worst_quad: f64 = 0.0;
    let mut worst_asym: f64 = 0.0;
    for k in 0..7 {
        let ratio = 10f64.powi(k);
        let exact = geometric_factor_exact(ratio, 1.0).unwrap();
        let quad = geometric_factor_quadrature(ratio, 1.0, 4096).map_err(|e| e.to_string())?;
        worst_quad = worst_quad.max(rel(quad, exact));
        if ratio >= 1e3 {
            worst_asym = worst_asym.max(rel(geometric_factor_asymptotic(ratio, 1.0).unwrap(), exact));
        }
    }
    ensure(worst_quad <= 1e-10, format!("quadrature error {worst_quad:e}"))?;
    ensure(worst_asym <= 0.05, format!("asymptotic error {worst_asym:e}"))?;
    Ok(format!("quadrature {worst_quad:.2e}, asymptotic {:.2}%", 100.0 * worst_asym))
}

fn criterion_5() -> Check {
    let mut detail = Vec::new();
    for r in [0.4, 0.8] {
        let psi = TwoModeState::tmsv(r, 0.0, 48, TOL).map_err(|e| e.to_string())?;
        let est = mz_cfi_estimate(&psi, 1e-3).map_err(|e| e.to_string())?;
        let exact = analytic_mz_cfi(&psi, Convention::Half).unwrap();
        let q = mz_qfi(&psi, Convention::Half).unwrap();
        ensure(rel(est.extrapolated, exact) <= 0.01, format!("r = {r}: {} vs {exact}", est.extrapolated))?;
        ensure(est.extrapolated <= q && exact <= q, format!("r = {r}: CFI above QFI"))?;
        detail.push(format!("r={r} rel {:.1e}", rel(est.extrapolated, exact)));
    }
    let residual = beamsplitter_conjugation_check(16, Beamsplitter::Symmetric).unwrap();
    ensure(residual <= 1e-8, format!("conjugation residual {residual:e}"))?;

    let mz = report(&run_preset(Command::Mz, "tmsv-mz"), "_mz.json");
    let points = mz["points"].as_array().unwrap();
    ensure(points.iter().all(|p| p["cfi_within_qfi"] == Value::Bool(true)), "cli run has CFI above QFI")?;
    let ratio = num(&mz, &["large_n", "qfi_over_cfi", "computed"]);
    let reference = num(&mz, &["large_n", "qfi_over_cfi", "reference"]);
    Ok(format!(
        "{}, conjugation {residual:.1e}; large-N QFI/CFI {ratio:.3} vs quoted {reference} (informative)",
        detail.join(", ")
    ))
}

fn criterion_6() -> Check {
    let psi = TwoModeState::tmsv(0.6, 0.0, 40, TOL).unwrap();
    let q = mz_outcome_distribution(&psi, MzAngles::quantum(1e-4)).unwrap();
    let odd = q.max_where(|a, b| a.abs_diff(b) % 2 == 1);
    let delta2 = q.mass_at_difference(2);
    let delta4 = q.mass_at_difference(4);
    ensure(odd <= 1e-20 && delta2 <= 1e-20, format!("quartic channel leaks: odd {odd:e}, delta 2 {delta2:e}"))?;
    ensure(delta4 > 0.0, "no leakage to delta 4")?;

    let a = mz_outcome_distribution(&psi, MzAngles { chi_c_asym: 1e-4, ..Default::default() }).unwrap();
    let a2 = a.mass_at_difference(2);
    let rest: f64 = (1..40).filter(|d| *d != 2).map(|d| a.mass_at_difference(d)).sum();
    ensure(a2 > 100.0 * rest, format!("asymmetric: delta 2 {a2:e} vs rest {rest:e}"))?;

    let s = mz_outcome_distribution(&psi, MzAngles { chi_c_sym: 0.3, ..Default::default() }).unwrap();
    let base = number_distribution(&psi);
    for n1 in 0..79 {
        for n2 in 0..79 {
            let expect = if n1 < 40 && n2 < 40 { base.pair(n1, n2) } else { 0.0 };
            ensure(s.pair(n1, n2) == expect, format!("symmetric phase changed P({n1},{n2})"))?;
        }
    }
    Ok(format!("delta 4 {delta4:.2e}, asymmetric delta 2 {a2:.2e} vs rest {rest:.1e}, symmetric exact"))
}

fn fit(points: &[(f64, f64)]) -> f64 {
    scaling_exponent(points).unwrap().exponent
}

fn criterion_7() -> Check {
    let mut sq = Vec::new();
    for n in [16.0f64, 32.0, 64.0, 128.0, 256.0] {
        let r = n.sqrt().asinh();
        let dim = required_dim_squeezed(r, TOL).unwrap();
        let s = SingleModeState::squeezed_vacuum(r, 0.0, dim, TOL).unwrap();
        let f = qfim(&s, &GeneratorSet::kerr(dim).unwrap(), 1.0).unwrap();
        sq.push((n, nuisance_qcrb(&f, 1.0).unwrap().value().ok_or("singular")?));
    }
    let e_sq = fit(&sq);
    ensure((e_sq + 2.0).abs() <= 0.05, format!("squeezed exponent {e_sq}"))?;

    let (mut plain, mut nuis, mut thg) = (Vec::new(), Vec::new(), Vec::new());
    for n in [4.0f64, 8.0, 16.0, 32.0, 64.0] {
        let dim = required_dim_coherent(n, TOL).unwrap();
        let s = SingleModeState::coherent(C64::new(n.sqrt(), 0.0), dim, TOL).unwrap();
        let f = qfim(&s, &GeneratorSet::kerr(dim).unwrap(), 1.0).unwrap();
        plain.push((n, single_parameter_qcrb(f[(0, 0)], 1.0).unwrap().value().unwrap()));
        nuis.push((n, nuisance_qcrb(&f, 1.0).unwrap().value().unwrap()));
        let ft = thg_qfi(&s).unwrap();
        if n <= 16.0 {
            ensure(dim + 3 <= 80, format!("THG oracle at N = {n} needs dim {}", dim + 3))?;
            ensure(rel(ft, 4.0 * n.powi(3)) <= 0.02, format!("THG QFI {ft} at N = {n}"))?;
        }
        thg.push((n, 1.0 / ft.sqrt()));
    }
    let (e_plain, e_nuis, e_thg) = (fit(&plain), fit(&nuis), fit(&thg));
    ensure((e_plain + 1.5).abs() <= 0.1, format!("coherent single-parameter exponent {e_plain}"))?;
    ensure((e_nuis + 1.0).abs() <= 0.1, format!("coherent nuisance exponent {e_nuis}"))?;
    ensure((e_thg + 1.5).abs() <= 0.1, format!("THG exponent {e_thg}"))?;
    let small: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0, 32.0].iter().map(|&n| (n, 1.0 / (n * (n + 1.0)))).collect();
    Ok(format!(
        "squeezed {e_sq:.3} (N 16..256; {:.3} over N 2..32), coherent {e_plain:.3} / {e_nuis:.3}, THG {e_thg:.3}",
        fit(&small)
    ))
}

fn squeeze_generator(dim: usize) -> OperatorMatrix {
    // (a² + a†²)/2
    OperatorMatrix::from_action(Space::Single(dim), true, |n, _| {
        let mut out = Vec::new();
        if n >= 2 {
            out.push(((n - 2, 0), C64::new(0.5 * ((n * (n - 1)) as f64).sqrt(), 0.0)));
        }
        out.push(((n + 2, 0), C64::new(0.5 * (((n + 1) * (n + 2)) as f64).sqrt(), 0.0)));
        out
    })
    .unwrap()
}

fn criterion_8() -> Check {
    let tol = 1e-15;
    let dim = 200;
    let states = [
        SingleModeState::coherent(C64::new(1.2, -0.4), dim, tol).unwrap(),
        SingleModeState::squeezed_vacuum(0.7, 0.4, dim, tol).unwrap(),
        SingleModeState::vacuum(dim).unwrap(),
    ];
    let squeeze = squeeze_generator(dim);
    let mut worst: f64 = 0.0;
    for s in &states {
        let rotated = evolve_kerr(s, 0.0, 0.8);
        let squeezed = evolve_single_mode(s, &squeeze, 0.3).map_err(|e| e.to_string())?;
        for state in [s, &rotated, &squeezed] {
            for theta in [0.0, 0.5, 1.3] {
                let k = quadrature_cumulants(state, theta, 4).unwrap();
                worst = worst.max(k[2].abs()).max(k[3].abs());
            }
        }
    }
    ensure(worst <= 1e-9, format!("Gaussian higher cumulant {worst:e}"))?;

    let r = 1.0;
    let sq = SingleModeState::squeezed_vacuum(r, 0.0, required_dim_squeezed(r, 1e-14).unwrap(), 1e-14).unwrap();
    let theta = std::f64::consts::FRAC_PI_4;
    let k = |chi: f64| quadrature_cumulants(&evolve_kerr(&sq, chi, 0.0), theta, 4).unwrap()[3].abs();
    let slope = (k(1e-3) / k(1e-4)).ln() / 10f64.ln();
    ensure((slope - 1.0).abs() <= 0.05, format!("kappa4 slope {slope}"))?;
    Ok(format!("Gaussian max |kappa3|,|kappa4| {worst:.1e}, Kerr kappa4 slope {slope:.4}"))
}

fn criterion_9() -> Check {
    let g = CavityGeometry::new(1e4, 0.1, 450.0, 2e-6).unwrap();
    ensure(mediator_coupling(MediatorSpec::Spin0) == 0.0, "spin-0 coupling not zero")?;
    let co = configuration_coefficient(&g, BeamConfiguration::CoPropagating, CouplingMode::Asymptotic).unwrap();
    ensure(co == 0.0, "co-propagating coefficient not zero")?;
    let spin0 = Config::parse(&format!("{}\n", presets::get("ce-450").unwrap().replace("[scenario]", "mediator_spin = 0\n[scenario]")))
        .map_err(|e| e.to_string())?;
    let settings = Settings::resolve(&spin0, &Overrides::default(), "spin0").unwrap();
    let out = run(Command::Coupling, &spin0, &settings).map_err(|e| e.to_string())?;
    let v = report(&out, "_coupling.json");
    ensure(num(&v, &["chi_q", "computed"]) == 0.0, "cli spin-0 phase not zero")?;
    let x = chi_q(&g);
    ensure(rel(x, 4.28e-52) <= 0.005, format!("chi_q {x:e}"))?;
    Ok(format!("spin-0 and co-propagating exactly 0, chi_q {x:.4e} rad"))
}

fn run_binary(bin: &Path, command: &str, preset: &str, out: &Path) -> Result<(), String> {
    let status = Process::new(bin)
        .args([command, "--preset", preset, "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(0), format!("{command} {preset} exited {:?}", status.status.code()))
}

fn criterion_10() -> Check {
    let bin = Path::new(env!("CARGO_BIN_EXE_gravkerr"));
    let runs = [
        ("qfim", "sqvac-sweep"),
        ("qfim", "coherent-sweep"),
        ("qfim", "vacuum"),
        ("mz", "tmsv-mz"),
        ("coupling", "ce-450"),
        ("power", "ce-450"),
        ("power", "ce-1000"),
        ("thg", "thg-coherent"),
        ("thg", "thg-squeezed"),
        ("cumulants", "cumulants-kerr"),
        ("cumulants", "cumulants-gaussian"),
    ];
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (command, preset) in runs {
        run_binary(bin, command, preset, a.path())?;
        run_binary(bin, command, preset, b.path())?;
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).map_err(|e| format!("{name:?}: {e}"))?;
        ensure(x == y, format!("{name:?} differs between runs"))?;
    }
    Ok(format!("{} files byte-identical across two runs", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("squeezed-vacuum Fisher matrix and inverse", criterion_1),
        ("circulating and pump power requirement", criterion_2),
        ("closure of phase against power requirement", criterion_3),
        ("arm-arm integral: closed form, quadrature, asymptote", criterion_4),
        ("interferometer CFI, QFI and beamsplitter", criterion_5),
        ("interferometer selection rules", criterion_6),
        ("scaling exponents", criterion_7),
        ("quadrature cumulants", criterion_8),
        ("null couplings and per-shot phase", criterion_9),
        ("determinism of CLI outputs", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
