use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use zmd_core::analysis::{predict, Ensemble};
use zmd_core::detector::{calibrate_threshold, sigma_n_for_snr_db, ChannelParams};
use zmd_core::experiments::csv::to_csv;
use zmd_core::experiments::presets::{reproduce_figure, PresetOptions};
use zmd_core::experiments::{
    run_point, run_sweep, sample_graph, thread_pool, validate_operator, ConfigFile,
};
use zmd_core::graph::{build_regular_graph, SensingGraph};
use zmd_core::operator::{build_sensing_matrix, synth_time_domain_rows, write_operator_csv};
use zmd_core::rng::{stream_seed, Stream};
use zmd_core::{Result, ZmdError};

#[derive(Parser, Debug)]
#[command(name = "zmd", version, about = "Zero-block detection for sub-Nyquist spectrum sensing")]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo sweep with analytic predictions, as CSV.
    Sweep(SweepArgs),
    /// Reproduce a named figure (fig2, fig3-zmd, fig4, fig5) as CSV.
    Figure { name: String },
    /// Largest threshold meeting a target P_WZD on a regular graph.
    Calibrate(CalibrateArgs),
    /// Evaluate the analytic formulas.
    Analyze(AnalyzeArgs),
    /// Check time-domain sampling waveforms against the frequency-domain model.
    ValidateOperator(ValidateArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "B")]
    b: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    sigma_s: Option<f64>,
    #[arg(long, conflicts_with = "snr_db")]
    sigma_n: Option<f64>,
    #[arg(long)]
    snr_db: Option<f64>,
    /// regular | irregular | one-to-one
    #[arg(long)]
    graph: Option<String>,
    #[arg(long = "d-m")]
    dm: Option<usize>,
    /// noiseless | lrt:<c> | threshold:<c'> | calibrated:<target>
    #[arg(long)]
    detector: Option<String>,
    /// Reuse one graph for every trial.
    #[arg(long)]
    fixed_graph: bool,
    /// alpha | d_M | M | B | c_prime | snr_db
    #[arg(long, requires = "values")]
    axis: Option<String>,
    #[arg(long, value_delimiter = ',', requires = "axis")]
    values: Option<Vec<f64>>,
    /// Use this graph (text format) for every trial.
    #[arg(long)]
    graph_in: Option<PathBuf>,
    /// Write the trial-0 graph in text format.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ChannelArgs {
    /// One or more occupancy probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long = "d-m")]
    dm: usize,
    #[arg(long = "d-v")]
    dv: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma_s: f64,
    #[arg(long, conflicts_with = "snr_db")]
    sigma_n: Option<f64>,
    #[arg(long)]
    snr_db: Option<f64>,
}

impl ChannelArgs {
    fn sigma_n(&self) -> f64 {
        match (self.sigma_n, self.snr_db) {
            (Some(n), _) => n,
            (None, Some(snr)) => sigma_n_for_snr_db(self.sigma_s, snr),
            (None, None) => 0.0,
        }
    }
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Target P_WZD.
    #[arg(long)]
    target: f64,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Threshold; omit for exact-zero detection.
    #[arg(long)]
    c_prime: Option<f64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long = "L", default_value_t = 32)]
    l: usize,
    #[arg(long = "M", default_value_t = 16)]
    m: usize,
    #[arg(long = "d-m", default_value_t = 4)]
    dm: usize,
    #[arg(long = "B", default_value_t = 4)]
    b: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Write the trial-0 operator to `<prefix>_phi.csv` and `<prefix>_theta.csv`.
    #[arg(long)]
    dump_operator: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let graph_in = match &a.graph_in {
        Some(p) => Some(Arc::new(SensingGraph::from_text(&std::fs::read_to_string(p)?)?)),
        None => None,
    };
    let flags = ConfigFile {
        l: a.l.or(graph_in.as_ref().map(|g| g.num_variables())),
        m: a.m.or(graph_in.as_ref().map(|g| g.num_measurements())),
        block_len: a.b,
        alpha: a.alpha,
        sigma_s: a.sigma_s,
        sigma_n: a.sigma_n,
        snr_db: a.snr_db,
        graph: a.graph.clone(),
        dm: a.dm,
        detector: a.detector.clone(),
        trials: cli.trials,
        seed: cli.seed,
        fixed_graph: a.fixed_graph.then_some(true),
        sweep: a.axis.as_ref().map(|axis| zmd_core::experiments::config::SweepSection {
            axis: Some(axis.clone()),
            values: a.values.clone(),
        }),
        ..Default::default()
    };
    let merged = file.overlay(flags);
    let mut cfg = match &graph_in {
        // A supplied graph fixes the ensemble; degree keys only need to be consistent.
        Some(g) => {
            let mut m = merged.clone();
            if let (None, Some((_, dm))) = (m.graph.as_deref(), g.regular_degrees()) {
                m.dm = Some(dm);
            }
            m.build()?
        }
        None => merged.build()?,
    };
    cfg.graph_override = graph_in;
    if let Some(p) = &a.graph_out {
        let g = match &cfg.graph_override {
            Some(g) => (**g).clone(),
            None => sample_graph(&cfg, 0)?,
        };
        std::fs::write(p, g.to_text())?;
    }
    let pool = thread_pool(cli.jobs)?;
    let rows = match merged.sweep_axis()? {
        Some((axis, values)) => run_sweep(&cfg, axis, &values, &pool)?,
        None => vec![run_point(&cfg, &pool)?],
    };
    emit(cli.out.as_deref(), &to_csv(&rows))
}

fn figure(cli: &Cli, name: &str) -> Result<()> {
    let mut opts = PresetOptions {
        jobs: cli.jobs,
        ..Default::default()
    };
    if let Some(s) = cli.seed {
        opts.seed = s;
    }
    if let Some(t) = cli.trials {
        opts.trials = t;
    }
    let rows = reproduce_figure(name, &opts, &thread_pool(cli.jobs)?)?;
    emit(cli.out.as_deref(), &to_csv(&rows))
}

fn calibrate(cli: &Cli, a: &CalibrateArgs) -> Result<()> {
    let c = &a.channel;
    let sigma_n = c.sigma_n();
    let mut text = String::from("alpha,d_M,d_V,sigma_s,sigma_n,target,c_prime,p_wzd,p_zd,monotone\n");
    for &alpha in &c.alpha {
        let p = ChannelParams::new(alpha, c.sigma_s, sigma_n)?;
        let (c_prime, p_wzd, p_zd, monotone) = match calibrate_threshold(c.dm, c.dv, &p, a.target) {
            Ok(cal) => {
                let ens = Ensemble::Regular { dv: c.dv, dm: c.dm };
                let pred = predict(alpha, &ens, c.sigma_s, sigma_n, Some(cal.c_prime))?;
                (Some(cal.c_prime), Some(cal.p_wzd), Some(pred.p_zd), cal.monotone.to_string())
            }
            Err(ZmdError::UnreachableTarget { .. }) => (None, None, None, String::new()),
            Err(e) => return Err(e),
        };
        text.push_str(&format!(
            "{alpha},{},{},{},{sigma_n},{},{},{},{},{monotone}\n",
            c.dm,
            c.dv,
            c.sigma_s,
            a.target,
            opt(c_prime),
            opt(p_wzd),
            opt(p_zd)
        ));
    }
    emit(cli.out.as_deref(), &text)
}

fn analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<()> {
    let c = &a.channel;
    let sigma_n = c.sigma_n();
    let ens = Ensemble::Regular { dv: c.dv, dm: c.dm };
    let mut text = String::from("alpha,d_M,d_V,sigma_s,sigma_n,c_prime,p_zd,p_wzd,p_d,p_fa\n");
    for &alpha in &c.alpha {
        let p = predict(alpha, &ens, c.sigma_s, sigma_n, a.c_prime)?;
        text.push_str(&format!(
            "{alpha},{},{},{},{sigma_n},{},{},{},{},{}\n",
            c.dm,
            c.dv,
            c.sigma_s,
            opt(a.c_prime),
            p.p_zd,
            opt(p.p_wzd),
            p.p_d,
            opt(p.p_fa)
        ));
    }
    emit(cli.out.as_deref(), &text)
}

fn validate(cli: &Cli, a: &ValidateArgs) -> Result<bool> {
    let seed = cli.seed.unwrap_or(1);
    let trials = cli.trials.unwrap_or(100);
    let v = validate_operator(a.l, a.m, a.dm, a.b, a.alpha, trials, seed)?;
    if let Some(prefix) = &a.dump_operator {
        let g = build_regular_graph(a.l, a.m, a.dm, stream_seed(seed, 0, Stream::Graph))?;
        let op = build_sensing_matrix(g, a.b, stream_seed(seed, 0, Stream::Matrix))?;
        let phi = synth_time_domain_rows(&op, op.nyquist_len())?;
        let path = |suffix: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        write_operator_csv(&op, &phi, &path("_phi.csv"), &path("_theta.csv"))?;
    }
    let text = format!(
        "trials={}\nmax_imag_residue={:e}\nmax_leakage={:e}\nmax_roundtrip_error={:e}\nmax_relative_error={:e}\nresult={}\n",
        v.trials,
        v.max_imag_residue,
        v.max_leakage,
        v.max_roundtrip_error,
        v.max_relative_error,
        if v.passed() { "PASS" } else { "FAIL" }
    );
    emit(cli.out.as_deref(), &text)?;
    Ok(v.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => sweep(&cli, a).map(|_| true),
        Command::Figure { name } => figure(&cli, name).map(|_| true),
        Command::Calibrate(a) => calibrate(&cli, a).map(|_| true),
        Command::Analyze(a) => analyze(&cli, a).map(|_| true),
        Command::ValidateOperator(a) => validate(&cli, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
