use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use volcast::io::read_prices_file;
use volcast::NaiveDate;
use volcast_cli::commands::{self, ModelKind};
use volcast_cli::pipeline::{self, Status};
use volcast_cli::style;
use volcast_cli::PipelineOptions;

#[derive(Parser)]
#[command(
    name = "volcast",
    version,
    about = "GARCH volatility modeling for daily price series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identify, estimate, diagnose, select and forecast in one run.
    Pipeline(PipelineArgs),
    /// Fit a single ARMA or GARCH model and print its estimate analysis.
    Fit(FitArgs),
    /// Simulate a GARCH price path.
    Simulate(SimulateArgs),
    /// Fit a GARCH model and forecast its conditional variance.
    Forecast(ForecastArgs),
}

#[derive(Args, Clone)]
struct Tuning {
    /// Lags in the ARCH LM test.
    #[arg(long, default_value_t = 12)]
    lm_lags: usize,
    /// Lags in the Ljung-Box test.
    #[arg(long, default_value_t = 1)]
    lb_lags: usize,
    /// Degrees of freedom subtracted in the Ljung-Box test.
    #[arg(long, default_value_t = 0)]
    lb_fitdf: usize,
    /// Subtract the sample mean before fitting GARCH.
    #[arg(long)]
    demean: bool,
    /// Simplex function-value tolerance.
    #[arg(long)]
    f_tol: Option<f64>,
    /// Simplex vertex tolerance.
    #[arg(long)]
    x_tol: Option<f64>,
    /// Iteration budget per optimizer run.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Use the Lilliefors p-value for the KS test.
    #[arg(long)]
    ks_lilliefors: bool,
}

impl Tuning {
    fn options(&self) -> PipelineOptions {
        let mut o = PipelineOptions {
            lm_lags: self.lm_lags,
            lb_lags: self.lb_lags,
            lb_fitdf: self.lb_fitdf,
            demean: self.demean,
            ks_lilliefors: self.ks_lilliefors,
            ..PipelineOptions::default()
        };
        if let Some(v) = self.f_tol {
            o.f_tol = v;
        }
        if let Some(v) = self.x_tol {
            o.x_tol = v;
        }
        if self.max_iter.is_some() {
            o.max_iter = self.max_iter;
        }
        o
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// CSV with `date,close` columns.
    input: PathBuf,
    /// Directory for report.json and the CSV sidecars.
    #[arg(long, short, default_value = "volcast-out")]
    out_dir: PathBuf,
    /// Forecast horizon in trading days.
    #[arg(long, default_value_t = 30)]
    horizon: usize,
    /// Largest lag in the correlograms.
    #[arg(long, default_value_t = 20)]
    acf_lags: usize,
    /// ARMA candidates as `p,q;p,q;...`.
    #[arg(long, default_value = "0,1;1,0;1,1")]
    arma_grid: String,
    /// GARCH candidates as `r,s;r,s;...`.
    #[arg(long, default_value = "1,0;1,1;1,2;2,1")]
    garch_grid: String,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Arma,
    Garch,
}

#[derive(Args)]
struct FitArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    model: Model,
    /// `p,q` for ARMA, `r,s` for GARCH.
    #[arg(long)]
    order: String,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args)]
struct SimulateArgs {
    /// Parameters `c,alpha1..,beta1..`.
    #[arg(long, allow_hyphen_values = true)]
    spec: String,
    /// `r,s`; inferred for two or three parameter values.
    #[arg(long)]
    order: Option<String>,
    /// Number of price observations.
    #[arg(long, default_value_t = 1349)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Price path CSV (`date,close`).
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV of the simulated returns (`date,return`).
    #[arg(long)]
    returns_out: Option<PathBuf>,
    /// First trading day, ISO-8601.
    #[arg(long, default_value = "2011-01-03")]
    start_date: NaiveDate,
}

#[derive(Args)]
struct ForecastArgs {
    input: PathBuf,
    #[arg(long, default_value = "1,1")]
    order: String,
    #[arg(long, default_value_t = 30)]
    horizon: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_pipeline(args: PipelineArgs) -> Result<Status> {
    let mut opts = args.tuning.options();
    opts.horizon = args.horizon;
    opts.acf_lags = args.acf_lags;
    opts.arma_grid = commands::parse_grid(&args.arma_grid)?;
    opts.garch_grid = commands::parse_grid(&args.garch_grid)?;
    let prices = read_prices_file(&args.input)?;
    let output = pipeline::run(&prices, &label(&args.input), &opts)?;
    pipeline::write_output(&output, &args.out_dir)?;

    let report = &output.report;
    for w in &report.warnings {
        eprintln!("{} {w}", style::warn("warning:"));
    }
    if let Some(sel) = &report.selection {
        eprintln!("selected {} by AIC", sel.chosen);
    }
    if let Some(d) = &report.diagnostics {
        for (name, t) in [("LM", &d.lm), ("KS", &d.ks), ("Ljung-Box", &d.ljung_box)] {
            let mark = if t.rejects_at(d.level) {
                style::fail("FAIL")
            } else {
                style::pass("pass")
            };
            eprintln!(
                "  {mark} {name:<9} statistic {:.4} p {:.4}",
                t.statistic, t.p_value
            );
        }
    }
    eprintln!(
        "report written to {}",
        args.out_dir.join(pipeline::REPORT_FILE).display()
    );
    Ok(output.status)
}

fn cmd_fit(args: FitArgs) -> Result<Status> {
    let order = commands::parse_order(&args.order)?;
    let kind = match args.model {
        Model::Arma => ModelKind::Arma,
        Model::Garch => ModelKind::Garch,
    };
    let prices = read_prices_file(&args.input)?;
    let report = commands::fit_one(
        &prices,
        &label(&args.input),
        kind,
        order,
        &args.tuning.options(),
    )?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    if report.converged {
        Ok(Status::Success)
    } else {
        eprintln!(
            "{} {} did not converge",
            style::fail("error:"),
            report.model
        );
        Ok(Status::NoConvergence)
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<Status> {
    let order = args
        .order
        .as_deref()
        .map(commands::parse_order)
        .transpose()?;
    let params = commands::parse_params(&args.spec, order)?;
    let sim = commands::simulate(&params, args.n, args.seed, args.start_date)?;
    emit(Some(&args.out), &commands::prices_csv(&sim))?;
    if let Some(p) = &args.returns_out {
        emit(Some(p), &commands::returns_csv(&sim))?;
    }
    Ok(Status::Success)
}

fn cmd_forecast(args: ForecastArgs) -> Result<Status> {
    let order = commands::parse_order(&args.order)?;
    let prices = read_prices_file(&args.input)?;
    let table = commands::forecast(&prices, order, args.horizon, &args.tuning.options())?;
    emit(args.out.as_deref(), &table.to_csv())?;
    if table.converged {
        Ok(Status::Success)
    } else {
        eprintln!("{} {} did not converge", style::fail("error:"), table.model);
        Ok(Status::NoConvergence)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .write_style(if style::color_enabled() {
            env_logger::WriteStyle::Auto
        } else {
            env_logger::WriteStyle::Never
        })
        .init();
    // usage errors share exit code 1 with bad input; 2 is reserved for diagnostics
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Forecast(a) => cmd_forecast(a),
    };
    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("{} {e:#}", style::fail("error:"));
            ExitCode::from(1)
        }
    }
}
