//! `signet`: generate two-community signed networks, analyze their spectra,
//! evolve them under structural balance dynamics, and sweep parameter grids
//! to CSV.
//!
//! Exit codes: 0 on success, 1 for configuration/input errors, 2 for
//! numerical failures.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use signet_core::balance::{blowup_time, integrate_observed};
use signet_core::blockmodel::BlockParams;
use signet_core::error::{Error, Result};
use signet_core::metrics::{assortativity, homogeneity, is_balanced, z_metric};
use signet_core::rmt::{interlacing_check, lambda1_variance_test, SpectralDensity, TraceFunction};
use signet_core::spectral::{classify_params, classify_spectrum, eigen_sym, predict_signal};
use signet_core::sweep::{
    boundaries_to_csv, emit_boundaries, run_sweep, OutcomeRecord, SweepConfig,
};
use signet_core::{io as net_io, SignedAdjacency};

#[derive(Parser)]
#[command(
    name = "signet",
    about = "Signed-network laboratory: block-model generation, spectral transitions, balance dynamics, parameter sweeps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a signed adjacency matrix and write it as edge-list CSV.
    Generate(GenerateArgs),
    /// Decompose a network and report its spectrum with the analytic
    /// predictions.
    Spectrum(SpectrumArgs),
    /// Evaluate the signal-eigenvalue and transition predictions for a
    /// parameter point.
    Predict(PredictArgs),
    /// Evolve a network to its structural-balance final state and measure
    /// the outcome.
    Evolve(EvolveArgs),
    /// Classify a parameter point (and optionally an observed network) into
    /// a regime.
    Classify(ClassifyArgs),
    /// Random-matrix verification oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a deterministic parameter sweep to grid CSV.
    Sweep(SweepArgs),
}

/// Block-model parameters, either from a JSON file or from flags.
#[derive(Args, Clone)]
struct ParamsSource {
    /// JSON file with {n, d_in, d_out, p_in_pos, p_out_pos, zero_diagonal?, seed?}.
    #[arg(long, conflicts_with_all = ["n", "d_in", "d_out", "p_in_pos", "p_out_pos"])]
    params: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d_in: Option<f64>,
    #[arg(long)]
    d_out: Option<f64>,
    #[arg(long)]
    p_in_pos: Option<f64>,
    #[arg(long)]
    p_out_pos: Option<f64>,
    /// Allow random self-ties instead of a zeroed diagonal.
    #[arg(long)]
    self_ties: bool,
    /// Generator seed (overrides the file's seed when set).
    #[arg(long)]
    seed: Option<u64>,
}

impl ParamsSource {
    fn load(&self) -> Result<BlockParams> {
        let mut params =
            if let Some(path) = &self.params {
                let file = File::open(path)?;
                serde_json::from_reader::<_, BlockParams>(BufReader::new(file))?
            } else {
                match (self.n, self.d_in, self.d_out, self.p_in_pos, self.p_out_pos) {
                    (Some(n), Some(d_in), Some(d_out), Some(p_in), Some(p_out)) => {
                        BlockParams::new(n, d_in, d_out, p_in, p_out)?
                    }
                    _ => return Err(Error::InvalidConfig(
                        "provide --params FILE or all of --n --d-in --d-out --p-in-pos --p-out-pos"
                            .into(),
                    )),
                }
            };
        if self.self_ties {
            params = params.with_zero_diagonal(false);
        }
        if let Some(seed) = self.seed {
            params = params.with_seed(seed);
        }
        Ok(params)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Edge-list CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the resolved parameters as JSON.
    #[arg(long)]
    emit_params: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Analyze this edge-list CSV instead of generating a fresh draw.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Spectrum report JSON output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Prediction JSON output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Evolve this edge-list CSV instead of generating a fresh draw.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Final-state edge-list CSV output path.
    #[arg(long)]
    out_final: Option<PathBuf>,
    /// Outcome-metrics CSV output path.
    #[arg(long)]
    out_metrics: Option<PathBuf>,
    /// Trajectory CSV output path (`t,i,j,y_ij` per tracked entry).
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Entry to track, as `i,j`; repeatable. Required with --trajectory.
    #[arg(long)]
    track: Vec<String>,
    /// Integrate the trajectory up to this fraction of the blow-up time.
    #[arg(long, default_value_t = 0.9)]
    t_frac: f64,
    /// Number of trajectory rows to keep per tracked entry.
    #[arg(long, default_value_t = 200)]
    trajectory_samples: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Also classify this observed network (edge-list CSV).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Classification JSON output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Eigenvalue histogram of one noise draw against the semicircle
    /// density (`bin_center,empirical_mass,semicircle_mass`).
    Semicircle(SemicircleArgs),
    /// Resolvent traces outside the band (`lambda,f_numeric,f_analytic`).
    Stieltjes(StieltjesArgs),
    /// Eigenvalue interlacing under the rank-1 contrast update.
    Interlacing(InterlacingArgs),
    /// Sample variance of the first-order eigenvalue shift vs 2 sigma^2.
    Variance(VarianceArgs),
}

#[derive(Args)]
struct SemicircleArgs {
    #[command(flatten)]
    source: ParamsSource,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StieltjesArgs {
    #[command(flatten)]
    source: ParamsSource,
    /// Grid start, in units of the band edge.
    #[arg(long, default_value_t = 1.1)]
    from: f64,
    /// Grid end, in units of the band edge.
    #[arg(long, default_value_t = 2.0)]
    to: f64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InterlacingArgs {
    #[command(flatten)]
    source: ParamsSource,
    #[arg(long, default_value_t = 0.3)]
    nu: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VarianceArgs {
    #[command(flatten)]
    source: ParamsSource,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Grid CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the theoretical transition curves for overlay.
    #[arg(long)]
    boundaries: Option<PathBuf>,
    /// Worker threads (default: all cores; SIGNET_WORKERS overrides the
    /// default).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Treat usage problems as config errors (exit 1), but let
            // --help/--version exit 0.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Predict(args) => predict(args),
        Command::Evolve(args) => evolve(args),
        Command::Classify(args) => classify(args),
        Command::Oracle(cmd) => oracle(cmd),
        Command::Sweep(args) => sweep(args),
    }
}

/// Relative output paths respect SIGNET_OUTDIR when it is set.
fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os("SIGNET_OUTDIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn create_out(path: &Path) -> Result<BufWriter<File>> {
    let path = resolve_out(path);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(path) => {
            let mut out = create_out(path)?;
            writeln!(out, "{text}")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn load_matrix(path: &Path, n: usize) -> Result<SignedAdjacency> {
    let file = File::open(path)?;
    net_io::read_edge_list(BufReader::new(file), n)
}

fn generate(args: GenerateArgs) -> Result<()> {
    let params = args.source.load()?;
    let adj = params.generate();
    net_io::write_edge_list(create_out(&args.out)?, &adj)?;
    if let Some(path) = args.emit_params {
        write_json(Some(&path), &serde_json::to_value(params)?)?;
    }
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let params = args.source.load()?;
    let adj = match &args.matrix {
        Some(path) => load_matrix(path, params.n())?,
        None => params.generate(),
    };
    let spectrum = eigen_sym(&adj.to_dense())?;
    let prediction = predict_signal(&params.derive(), params.n());
    let observed = classify_spectrum(&spectrum, &prediction);
    let report = json!({
        "eigenvalues": spectrum.eigenvalues(),
        "lambda_C": prediction.lambda_contrast,
        "lambda_H": prediction.lambda_homog,
        "gamma": prediction.gamma,
        "regime": observed.regime.to_string(),
        "lambda_1": spectrum.lambda1(),
        "lambda_N": spectrum.lambda_n(),
        "leading_vector_shape": observed.shape,
        "outside_band": observed.outside_band,
    });
    write_json(Some(&args.out), &report)
}

fn predict(args: PredictArgs) -> Result<()> {
    let params = args.source.load()?;
    let dp = params.derive();
    let prediction = predict_signal(&dp, params.n());
    let regime = classify_params(&dp, params.n());
    let mut report = serde_json::to_value(prediction)?;
    report["regime"] = json!(regime.to_string());
    report["mu"] = json!(dp.mu);
    report["nu"] = json!(dp.nu);
    report["sigma2"] = json!(dp.var_avg);
    write_json(Some(&args.out), &report)
}

fn parse_track(specs: &[String], n: usize) -> Result<Vec<(usize, usize)>> {
    let mut entries = Vec::with_capacity(specs.len());
    for spec in specs {
        let parts: Vec<&str> = spec.split(',').collect();
        let bad = || Error::InvalidConfig(format!("--track expects `i,j`, got `{spec}`"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let i: usize = parts[0].trim().parse().map_err(|_| bad())?;
        let j: usize = parts[1].trim().parse().map_err(|_| bad())?;
        if i >= n || j >= n {
            return Err(Error::InvalidConfig(format!(
                "--track {spec} out of range for n = {n}"
            )));
        }
        entries.push((i, j));
    }
    Ok(entries)
}

fn evolve(args: EvolveArgs) -> Result<()> {
    let params = args.source.load()?;
    let n = params.n();
    let adj = match &args.matrix {
        Some(path) => load_matrix(path, n)?,
        None => params.generate(),
    };
    // Initial condition convention: Y0 = A / n.
    let y0 = adj.to_dense() / n as f64;
    let spectrum = eigen_sym(&y0)?;
    let final_adj = signet_core::balance::final_state_from_spectrum(&spectrum)?;
    if let Some(path) = &args.out_final {
        net_io::write_edge_list(create_out(path)?, &final_adj)?;
    }
    if let Some(path) = &args.out_metrics {
        let a = assortativity(&final_adj)?;
        let h = homogeneity(spectrum.leading_vector())?;
        let record = OutcomeRecord {
            r_pos: a.r_pos,
            r_neg: a.r_neg,
            r: a.r,
            h,
            z: z_metric(a.r, h),
            balanced: is_balanced(&final_adj)?.balanced,
        };
        let mut out = create_out(path)?;
        writeln!(out, "{}", OutcomeRecord::CSV_HEADER)?;
        writeln!(out, "{}", record.csv_row())?;
    }
    if let Some(path) = &args.trajectory {
        if args.track.is_empty() {
            return Err(Error::InvalidConfig(
                "--trajectory needs at least one --track i,j".into(),
            ));
        }
        if !(args.t_frac > 0.0 && args.t_frac < 1.0) {
            return Err(Error::InvalidConfig("--t-frac must lie in (0, 1)".into()));
        }
        let entries = parse_track(&args.track, n)?;
        let info = blowup_time(&y0)?;
        let t_end = args.t_frac * info.t_star;
        let dt = info.t_star / 1e4;
        let every = ((t_end / dt) as usize / args.trajectory_samples.max(1)).max(1);
        let mut out = create_out(path)?;
        writeln!(out, "t,i,j,y_ij")?;
        let mut step = 0usize;
        let mut rows: Vec<String> = Vec::new();
        integrate_observed(&y0, t_end, dt, |t, y| {
            if step.is_multiple_of(every) {
                for &(i, j) in &entries {
                    rows.push(format!("{t},{i},{j},{}", y[(i, j)]));
                }
            }
            step += 1;
        })?;
        for row in rows {
            writeln!(out, "{row}")?;
        }
    }
    Ok(())
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let params = args.source.load()?;
    let dp = params.derive();
    let n = params.n();
    let prediction = predict_signal(&dp, n);
    let mut report = json!({
        "regime": classify_params(&dp, n).to_string(),
        "detect_contrast": prediction.detect_contrast,
        "detect_homog": prediction.detect_homog,
    });
    if let Some(path) = &args.matrix {
        let adj = load_matrix(path, n)?;
        let spectrum = eigen_sym(&adj.to_dense())?;
        let observed = classify_spectrum(&spectrum, &prediction);
        report["observed_regime"] = json!(observed.regime.to_string());
        report["leading_vector_shape"] = json!(observed.shape);
        report["contrast_agreement"] = json!(observed.contrast_agreement);
        report["outside_band"] = json!(observed.outside_band);
    }
    write_json(args.out.as_deref(), &report)
}

fn oracle(cmd: OracleCommand) -> Result<()> {
    match cmd {
        OracleCommand::Semicircle(args) => {
            let params = args.source.load()?;
            let x = params.noise_matrix();
            let eigenvalues = signet_core::eigenvalues_sym(&x)?;
            let sigma = params.derive().sigma();
            let density =
                SpectralDensity::from_eigenvalues(&eigenvalues, sigma, params.n(), args.bins);
            let reference = density.reference_mass();
            let mut out = create_out(&args.out)?;
            writeln!(out, "bin_center,empirical_mass,semicircle_mass")?;
            for ((center, emp), refm) in density
                .bin_centers()
                .iter()
                .zip(&density.bin_mass)
                .zip(&reference)
            {
                writeln!(out, "{center},{emp},{refm}")?;
            }
            Ok(())
        }
        OracleCommand::Stieltjes(args) => {
            let params = args.source.load()?;
            let x = params.noise_matrix();
            let sigma = params.derive().sigma();
            let trace = TraceFunction::sample(&x, sigma, args.from, args.to, args.points)?;
            let mut out = create_out(&args.out)?;
            writeln!(out, "lambda,f_numeric,f_analytic")?;
            for ((lambda, num), ana) in trace
                .lambda_grid
                .iter()
                .zip(&trace.f_numeric)
                .zip(&trace.f_analytic)
            {
                writeln!(out, "{lambda},{num},{ana}")?;
            }
            Ok(())
        }
        OracleCommand::Interlacing(args) => {
            let params = args.source.load()?;
            let mut violations = 0usize;
            for k in 0..args.trials {
                let seed = signet_core::seeding::stable_seed(params.seed(), &[k as u64]);
                let x = params.with_seed(seed).noise_matrix();
                if !interlacing_check(&x, args.nu)? {
                    violations += 1;
                }
            }
            write_json(
                args.out.as_deref(),
                &json!({
                    "trials": args.trials,
                    "nu": args.nu,
                    "violations": violations,
                }),
            )
        }
        OracleCommand::Variance(args) => {
            let params = args.source.load()?;
            let probe = lambda1_variance_test(&params, args.trials)?;
            write_json(args.out.as_deref(), &serde_json::to_value(probe)?)
        }
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let file = File::open(&args.config)?;
    let config: SweepConfig = serde_json::from_reader(BufReader::new(file))?;
    let workers = args.workers.or_else(|| {
        std::env::var("SIGNET_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let result = run_sweep(&config, workers)?;
    let mut out = create_out(&args.out)?;
    out.write_all(result.to_csv().as_bytes())?;
    if let Some(path) = &args.boundaries {
        let samples = emit_boundaries(&config)?;
        let mut out = create_out(path)?;
        out.write_all(boundaries_to_csv(&samples).as_bytes())?;
    }
    Ok(())
}
