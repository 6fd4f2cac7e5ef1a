//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use volcast::garch::{aic, unconstrained_objective};
use volcast::io::read_prices_file;
use volcast::stattests::kolmogorov_sf;
use volcast::{
    adf_test, chi_square_sf, fit_garch, fit_garch_with, forecast_variance, lm_arch_test,
    log_returns, simulate_garch, GarchOptions, GarchParams, GarchSpec, ParameterRow,
};
use volcast_cli::PipelineReport;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/garch11_seed42.csv")
}

fn innovations(n: usize, seed: u64) -> Vec<f64> {
    let unit = GarchParams::new(1.0, vec![0.0], vec![]).unwrap();
    simulate_garch(&unit, n, seed).unwrap().into_values()
}

fn aic_identity() -> Outcome {
    let cases = [
        (2, 5329.224, -10654.45),
        (3, 5452.046, -10898.09),
        (4, 5453.087, -10898.17),
    ];
    let worst = cases
        .iter()
        .map(|&(k, ll, expected)| (aic(ll, k) - expected).abs())
        .fold(0.0f64, f64::max);
    check(worst <= 0.01, format!("max |AIC - reported| = {worst:.4}"))
}

fn t_ratio_identity() -> Outcome {
    let rows = [
        (1.447e-5, 7.812e-7, 18.522),
        (3.654e-1, 5.492e-2, 6.654),
        (2.159e-6, 5.597e-7, 3.858),
        (2.445e-1, 3.731e-2, 6.553),
        (2.588e-1, 1.037e-1, 2.496),
        (4.033e-1, 1.085e-1, 3.718),
        (1.946e-6, 6.228e-7, 3.126),
        (1.970e-1, 3.983e-2, 4.946),
        (1.0e-8, 5.326e-2, 0.000),
        (7.171e-1, 6.246e-2, 11.481),
    ];
    let worst = rows
        .iter()
        .map(|&(est, se, t)| (ParameterRow::new("x", est, Some(se)).t_value.unwrap() - t).abs())
        .fold(0.0f64, f64::max);
    check(
        worst <= 0.002,
        format!("{} rows, max |t - reported| = {worst:.5}", rows.len()),
    )
}

fn chi_square_values() -> Outcome {
    let a = chi_square_sf(15.108, 12.0);
    let b = chi_square_sf(0.51046, 1.0);
    check(
        (a - 0.2356).abs() <= 1e-4 && (b - 0.4749).abs() <= 1e-4,
        format!("Q(15.108; 12) = {a:.5}, Q(0.51046; 1) = {b:.5}"),
    )
}

fn ks_value() -> Outcome {
    let p = kolmogorov_sf(1.288);
    check(
        (0.069..=0.073).contains(&p),
        format!("Q_KS(1.288) = {p:.5}"),
    )
}

fn parameter_recovery() -> Outcome {
    let truth = GarchParams::new(2e-6, vec![0.2], vec![0.7]).unwrap();
    let spec = GarchSpec::new(1, 1).unwrap();
    let seeds = 5000..5020u64;
    let (mut ea, mut eb, mut covered, mut fits) = (0.0, 0.0, 0, 0);
    for seed in seeds.clone() {
        let y = simulate_garch(&truth, 5000, seed).unwrap();
        let Ok(fit) = fit_garch(y.values(), spec) else {
            continue;
        };
        fits += 1;
        let a = fit.params.alphas[0];
        ea += (a - 0.2).abs();
        eb += (fit.params.betas[0] - 0.7).abs();
        if let Some(se) = &fit.std_errors {
            if (a - 0.2).abs() <= 2.0 * se[1] {
                covered += 1;
            }
        }
    }
    let n = seeds.count();
    let (mae_a, mae_b) = (ea / fits.max(1) as f64, eb / fits.max(1) as f64);
    let coverage = covered as f64 / n as f64;
    check(
        fits == n && mae_a <= 0.05 && mae_b <= 0.05 && coverage >= 0.8,
        format!("{fits}/{n} converged, MAE alpha {mae_a:.4}, beta {mae_b:.4}, alpha 2SE coverage {coverage:.2}"),
    )
}

fn lm_calibration() -> Outcome {
    let reps = 500u64;
    let null_rejections = (0..reps)
        .filter(|i| {
            lm_arch_test(&innovations(1000, 6000 + i), 12)
                .unwrap()
                .rejects_at(0.05)
        })
        .count();
    let arch = GarchParams::new(1.0, vec![0.5], vec![]).unwrap();
    let power_rejections = (0..reps)
        .filter(|i| {
            let y = simulate_garch(&arch, 1000, 6500 + i).unwrap();
            lm_arch_test(y.values(), 12).unwrap().rejects_at(0.05)
        })
        .count();
    let size = null_rejections as f64 / reps as f64;
    let power = power_rejections as f64 / reps as f64;
    check(
        (0.03..=0.07).contains(&size) && power >= 0.99,
        format!("size {size:.3}, power {power:.3}"),
    )
}

fn adf_behavior() -> Outcome {
    let reps = 200u64;
    let non_reject = (0..reps)
        .filter(|i| {
            let mut level = 0.0;
            let walk: Vec<f64> = innovations(1349, 7000 + i)
                .into_iter()
                .map(|e| {
                    level += e;
                    level
                })
                .collect();
            adf_test(&walk, None).unwrap().p_value > 0.10
        })
        .count();
    let clamped = (0..reps)
        .filter(|i| {
            let t = adf_test(&innovations(1349, 7200 + i), None).unwrap();
            t.p_value_clamped && t.p_value == 0.01
        })
        .count();
    let rw = non_reject as f64 / reps as f64;
    let wn = clamped as f64 / reps as f64;
    check(
        rw >= 0.90 && wn >= 0.95,
        format!("random walk p > 0.10 in {rw:.3}, white noise clamped at 0.01 in {wn:.3}"),
    )
}

fn forecast_convergence() -> Outcome {
    let prices = read_prices_file(fixture()).unwrap();
    let truth = GarchParams::new(2e-6, vec![0.2], vec![0.7]).unwrap();
    let series = [
        log_returns(&prices).into_values(),
        simulate_garch(&truth, 3000, 8000).unwrap().into_values(),
    ];
    let (mut worst, mut checked, mut max_persistence) = (0.0f64, 0, 0.0f64);
    for y in &series {
        for spec in GarchSpec::default_grid() {
            let fit = fit_garch(y, spec).map_err(|e| format!("{spec}: {e}"))?;
            let Some(target) = fit.params.unconditional_variance() else {
                continue;
            };
            max_persistence = max_persistence.max(fit.params.persistence());
            let fc = forecast_variance(&fit, 500).unwrap();
            worst = worst.max((fc.variance[499] - target).abs() / target);
            checked += 1;
        }
    }
    check(
        checked >= 2 && worst < 1e-6,
        format!(
            "{checked} fitted stationary models (persistence up to {max_persistence:.4}), max relative error at H=500 {worst:.2e}"
        ),
    )
}

fn gradient(f: impl Fn(&[f64]) -> f64, u: &[f64]) -> Vec<f64> {
    (0..u.len())
        .map(|i| {
            let h = 1e-6 * u[i].abs().max(1.0);
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[i] += h;
            dn[i] -= h;
            (f(&up) - f(&dn)) / (2.0 * h)
        })
        .collect()
}

fn first_order_optimality() -> Outcome {
    let prices = read_prices_file(fixture()).unwrap();
    let mut series = vec![log_returns(&prices).into_values()];
    let truth = GarchParams::new(2e-6, vec![0.2], vec![0.7]).unwrap();
    for seed in 9000..9003 {
        series.push(simulate_garch(&truth, 2000, seed).unwrap().into_values());
    }
    let (mut worst_grad, mut worst_move, mut fits) = (0.0f64, 0.0f64, 0);
    for y in &series {
        for spec in GarchSpec::default_grid() {
            let fit = fit_garch(y, spec).map_err(|e| format!("{spec}: {e}"))?;
            let obj = unconstrained_objective(spec, &fit.data);
            let g = gradient(&obj, &fit.unconstrained_point());
            let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst_grad = worst_grad.max(gmax / (1.0 + fit.loglik.abs()));
            let opts = GarchOptions {
                start: Some(fit.params.clone()),
                ..Default::default()
            };
            let refit = fit_garch_with(y, spec, &opts).map_err(|e| format!("{spec} refit: {e}"))?;
            for (a, b) in fit.params.to_vec().iter().zip(refit.params.to_vec()) {
                worst_move = worst_move.max((a - b).abs());
            }
            fits += 1;
        }
    }
    check(
        worst_grad < 1e-3 && worst_move < 1e-6,
        format!(
            "{fits} optima, max |grad|/(1+|l|) {worst_grad:.2e}, max refit move {worst_move:.2e}"
        ),
    )
}

fn pipeline_structure() -> Outcome {
    let dir = std::env::temp_dir().join(format!("volcast-acceptance-{}", std::process::id()));
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = dir.join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_volcast"))
            .args([
                "pipeline",
                fixture().to_str().unwrap(),
                "--out-dir",
                out.to_str().unwrap(),
            ])
            .env("VOLCAST_NO_COLOR", "1")
            .output()
            .map_err(|e| e.to_string())?
            .status;
        if status.code() != Some(0) {
            return Err(format!("pipeline exited with {status}"));
        }
        reports.push(fs::read(out.join("report.json")).map_err(|e| e.to_string())?);
    }
    let _ = fs::remove_dir_all(&dir);
    let identical = reports[0] == reports[1];
    let report: PipelineReport = serde_json::from_slice(&reports[0]).map_err(|e| e.to_string())?;
    let sel = report.selection.as_ref().ok_or("no selection block")?;
    let best = sel
        .table
        .iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.aic.total_cmp(&b.aic))
        .ok_or("no converged model")?;
    let diag = report.diagnostics.as_ref().ok_or("no diagnostics block")?;
    let raw: serde_json::Value = serde_json::from_slice(&reports[0]).map_err(|e| e.to_string())?;
    let only_chosen = raw["garch"]
        .as_array()
        .is_some_and(|g| g.iter().all(|m| m.get("diagnostics").is_none()));
    check(
        identical && best.model == sel.chosen && diag.model == sel.chosen && only_chosen,
        format!(
            "byte-identical {identical}, chosen {} (min AIC {}), diagnostics on {}",
            sel.chosen, best.model, diag.model
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AIC identity", aic_identity),
        ("t-ratio identity", t_ratio_identity),
        ("chi-square p-values", chi_square_values),
        ("KS p-value", ks_value),
        ("GARCH parameter recovery", parameter_recovery),
        ("LM test calibration", lm_calibration),
        ("ADF behavior", adf_behavior),
        ("forecast convergence", forecast_convergence),
        ("first-order optimality", first_order_optimality),
        ("pipeline determinism and structure", pipeline_structure),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
