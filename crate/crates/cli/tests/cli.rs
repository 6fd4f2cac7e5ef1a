use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use volcast::io::read_prices_file;
use volcast::{adf_test, ks_normality_test, ljung_box_test, lm_arch_test, log_returns, GarchSpec};
use volcast_cli::commands::parse_grid;
use volcast_cli::{PipelineOptions, PipelineReport};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/garch11_seed42.csv")
}

fn volcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volcast"))
        .args(args)
        .env("VOLCAST_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_levels(path: &Path, levels: &[f64]) {
    let dates =
        volcast::io::trading_days(volcast_cli::commands::default_start_date(), levels.len());
    let prices = volcast::PriceSeries::new(dates, levels.to_vec()).unwrap();
    fs::write(path, volcast::io::write_prices(&prices)).unwrap();
}

#[test]
fn pipeline_is_byte_identical_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = volcast(&["pipeline", s(&fixture()), "--out-dir", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert!(names.len() >= 5);
    for name in names {
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name:?}"
        );
    }

    let text = fs::read_to_string(a.join("report.json")).unwrap();
    let report: PipelineReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.schema, "volcast/1");
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn report_statistics_are_recomputable() {
    let prices = read_prices_file(fixture()).unwrap();
    let out = volcast_cli::run(&prices, "fixture", &PipelineOptions::default()).unwrap();
    let r = &out.report;
    assert_eq!(
        r.stationarity.levels,
        adf_test(prices.values(), None).unwrap()
    );
    let y = log_returns(&prices);
    assert_eq!(r.stationarity.returns, adf_test(y.values(), None).unwrap());

    let chosen = &r.selection.as_ref().unwrap().chosen;
    let order = r.garch.iter().position(|g| &g.model == chosen).unwrap();
    let [rr, ss] = r.options.garch_grid[order];
    let fit = volcast::fit_garch(y.values(), GarchSpec::new(rr, ss).unwrap()).unwrap();
    assert_eq!(r.garch[order].estimates, fit.estimate_rows());
    let d = r.diagnostics.as_ref().unwrap();
    assert_eq!(d.lm, lm_arch_test(&fit.std_residuals, 12).unwrap());
    assert_eq!(d.ks, ks_normality_test(&fit.std_residuals).unwrap());
    assert_eq!(
        d.ljung_box,
        ljung_box_test(&fit.std_residuals, 1, 0).unwrap()
    );
    let fc = volcast::forecast_variance(&fit, 30).unwrap();
    assert_eq!(r.forecast.as_ref().unwrap().variance, fc.variance);
}

#[test]
fn fixture_selects_a_garch_1_1_or_1_2_and_passes() {
    let prices = read_prices_file(fixture()).unwrap();
    let out = volcast_cli::run(&prices, "fixture", &PipelineOptions::default()).unwrap();
    let sel = out.report.selection.as_ref().unwrap();
    assert!(
        sel.chosen == "GARCH(1,1)" || sel.chosen == "GARCH(1,2)",
        "{}",
        sel.chosen
    );
    let aic = |m: &str| sel.table.iter().find(|r| r.model == m).unwrap().aic;
    assert!((aic("GARCH(1,1)") - aic("GARCH(1,2)")).abs() < 2.0);
    assert!(out.report.diagnostics.as_ref().unwrap().all_pass);
    assert!(out.report.arch_effects_detected);
    assert_eq!(out.status.exit_code(), 0);
}

#[test]
fn simulate_is_deterministic_and_feeds_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let r = dir.path().join("r.csv");
    for out in [&a, &b] {
        let o = volcast(&[
            "simulate",
            "--spec",
            "2e-6,0.2,0.7",
            "--seed",
            "9",
            "--out",
            s(out),
            "--returns-out",
            s(&r),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(read_prices_file(&a).unwrap().len(), 1349);
    assert_eq!(fs::read_to_string(&r).unwrap().lines().count(), 1349);

    let o = volcast(&["pipeline", s(&a), "--out-dir", s(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn simulate_rejects_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for spec in ["-1e-6,0.2,0.7", "2e-6,-0.2,0.7", "2e-6,0.2", "nope"] {
        let o = volcast(&[
            "simulate",
            "--spec",
            spec,
            "--order",
            "1,1",
            "--out",
            s(&out),
        ]);
        assert_eq!(o.status.code(), Some(1), "{spec}");
    }
}

#[test]
fn constant_prices_are_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.csv");
    write_levels(&input, &vec![100.0; 300]);
    let o = volcast(&[
        "pipeline",
        s(&input),
        "--out-dir",
        s(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("constant"), "{}", stderr(&o));
}

#[test]
fn unparseable_csv_reports_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "date,close\n2020-01-01,100\n2020-01-02,abc\n").unwrap();
    let o = volcast(&[
        "pipeline",
        s(&input),
        "--out-dir",
        s(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("row 3") && err.contains("close"), "{err}");
}

#[test]
fn failing_diagnostics_exit_2_with_report() {
    // AR(1) returns leave lag-one autocorrelation in the standardized residuals
    let prices = read_prices_file(fixture()).unwrap();
    let y = log_returns(&prices).into_values();
    let mut level = 100.0;
    let mut prev = 0.0;
    let mut levels = vec![level];
    for e in y {
        prev = 0.5 * prev + e;
        level *= f64::exp(prev);
        levels.push(level);
    }
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ar.csv");
    write_levels(&input, &levels);
    let out = dir.path().join("out");
    let o = volcast(&["pipeline", s(&input), "--out-dir", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let report: PipelineReport =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(!report.diagnostics.unwrap().all_pass);
}

#[test]
fn no_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = volcast(&[
        "pipeline",
        s(&fixture()),
        "--out-dir",
        s(&out),
        "--max-iter",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let report: PipelineReport =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(report.selection.is_none() && report.diagnostics.is_none());
}

#[test]
fn grid_flags_override_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = volcast(&[
        "pipeline",
        s(&fixture()),
        "--out-dir",
        s(&out),
        "--garch-grid",
        "1,1",
        "--arma-grid",
        "1,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: PipelineReport =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.garch.len(), 1);
    assert_eq!(report.arma.len(), 1);
    assert_eq!(report.options.garch_grid, parse_grid("1,1").unwrap());
}

#[test]
fn fit_emits_parameter_rows() {
    let o = volcast(&["fit", s(&fixture()), "--model", "garch", "--order", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<_> = v["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["parameter"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["c", "alpha1", "beta1", "beta2"]);
    assert!(v["diagnostics"]["ljung_box"]["p_value"].is_number());

    let o = volcast(&["fit", s(&fixture()), "--model", "arma", "--order", "1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<_> = v["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["parameter"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["constant", "ar1", "ma1"]);
}

#[test]
fn fit_rejects_large_orders() {
    for model in ["garch", "arma"] {
        let o = volcast(&["fit", s(&fixture()), "--model", model, "--order", "3,1"]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains("parsimony"), "{}", stderr(&o));
    }
}

#[test]
fn forecast_table() {
    let o = volcast(&[
        "forecast",
        s(&fixture()),
        "--order",
        "1,1",
        "--horizon",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "h,sigma2,annualized_vol");
    assert_eq!(lines.len(), 502);
    let row = |l: &str| -> Vec<f64> { l.split(',').skip(1).map(|v| v.parse().unwrap()).collect() };
    let last = row(lines[500]);
    let unc = row(lines[501]);
    assert!(lines[501].starts_with("unconditional,"));
    assert!((last[0] - unc[0]).abs() / unc[0] < 1e-6);
    assert!((last[1] - (252.0 * last[0]).sqrt()).abs() < 1e-12);

    let prices = read_prices_file(fixture()).unwrap();
    let fit =
        volcast::fit_garch(log_returns(&prices).values(), GarchSpec::new(1, 1).unwrap()).unwrap();
    let n = fit.data.len();
    let one = fit.params.c
        + fit.params.alphas[0] * fit.data[n - 1].powi(2)
        + fit.params.betas[0] * fit.cond_variance[n - 1];
    assert!((row(lines[1])[0] - one).abs() <= 1e-15 * one);
}

#[test]
fn zero_horizon_is_rejected() {
    let o = volcast(&["forecast", s(&fixture()), "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(volcast(&["fit"]).status.code(), Some(1));
    assert_eq!(volcast(&["--help"]).status.code(), Some(0));
}

#[test]
fn white_noise_warns_garch_unjustified() {
    // GARCH(1,0) with a zero ARCH coefficient is Gaussian white noise
    let params = volcast::GarchParams::new(1e-4, vec![0.0], vec![]).unwrap();
    let reps = 100;
    let warned = (0..reps)
        .filter(|seed| {
            let sim = volcast_cli::commands::simulate(
                &params,
                1349,
                500 + seed,
                volcast_cli::commands::default_start_date(),
            )
            .unwrap();
            let opts = PipelineOptions {
                garch_grid: vec![[1, 1]],
                ..PipelineOptions::default()
            };
            let out = volcast_cli::run(&sim.prices, "wn", &opts).unwrap();
            let warned = out
                .report
                .warnings
                .iter()
                .any(|w| w.contains("unjustified"));
            assert_eq!(warned, !out.report.arch_effects_detected);
            warned
        })
        .count();
    assert!(warned as f64 >= 0.9 * reps as f64, "{warned}/{reps}");
}
