//! Command-line front end: experiment dispatch, CSV emission, and plot
//! script generation.

use beamalign::config::Settings;
use beamalign::{csvio, plot, report};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "beamalign",
    about = "Iterative beam alignment simulator for reciprocal TDD MIMO channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Config file of `key = value` lines; flags override file entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Receive antennas at node 2.
    #[arg(long, value_name = "N")]
    mr: Option<usize>,
    /// Transmit antennas at node 1.
    #[arg(long, value_name = "N")]
    mt: Option<usize>,
    /// Set both link SNRs (dB).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Downlink SNR (dB).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    snr_db_o: Option<f64>,
    /// Uplink SNR (dB).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    snr_db_e: Option<f64>,
    /// Ping-pong iterations per run.
    #[arg(long, value_name = "N")]
    kmax: Option<usize>,
    /// Monte Carlo runs.
    #[arg(long, value_name = "N")]
    runs: Option<usize>,
    /// Base seed; all randomness derives from it.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Comma list of algorithms, or `all`.
    #[arg(long, value_name = "LIST")]
    algos: Option<String>,
    /// LISP switching point (default max(mr, mt)).
    #[arg(long, value_name = "N")]
    kswitch: Option<usize>,
    /// Covariance init for the suboptimal sequential estimator.
    #[arg(long, value_name = "X")]
    alpha_init: Option<f64>,
    /// Channel model: iid | sparse | diag:h1,h2,...
    #[arg(long, value_name = "MODEL")]
    channel: Option<String>,
    /// Disable noise (diagnostic).
    #[arg(long)]
    noiseless: bool,
    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo gain/angle curves over the iteration index.
    Run(CommonArgs),
    /// Final-iteration gain as the transmit array grows.
    SweepAntennas {
        #[command(flatten)]
        common: CommonArgs,
        /// Transmit antenna counts, e.g. 6,8,10.
        #[arg(long, value_name = "LIST", default_value = "6,8,10,12,16,20,24,32,40,48,56,64")]
        points: String,
    },
    /// LISP final-iteration gain over the switching point.
    SweepKswitch {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "LIST", default_value = "1,4,8,16,32,64")]
        points: String,
    },
    /// Final-iteration gain across matched link SNRs.
    SweepSnr {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "LIST", default_value = "-10,-5,0,5,10,15,20", allow_hyphen_values = true)]
        points: String,
    },
    /// Print the complexity/feedback table for the configured algorithms.
    ReportCost(CommonArgs),
}

fn settings_from(common: &CommonArgs) -> Result<Settings, String> {
    let mut settings = match &common.config {
        Some(path) => Settings::from_file(path).map_err(|e| e.to_string())?,
        None => Settings::default(),
    };
    let mut flags = Settings::default();
    if let Some(v) = common.mr {
        flags.set("mr", v.to_string());
    }
    if let Some(v) = common.mt {
        flags.set("mt", v.to_string());
    }
    if let Some(v) = common.snr_db {
        flags.set("snr_db", v.to_string());
    }
    if let Some(v) = common.snr_db_o {
        flags.set("snr_db_o", v.to_string());
    }
    if let Some(v) = common.snr_db_e {
        flags.set("snr_db_e", v.to_string());
    }
    if let Some(v) = common.kmax {
        flags.set("kmax", v.to_string());
    }
    if let Some(v) = common.runs {
        flags.set("runs", v.to_string());
    }
    if let Some(v) = common.seed {
        flags.set("seed", v.to_string());
    }
    if let Some(v) = &common.algos {
        flags.set("algos", v.clone());
    }
    if let Some(v) = common.kswitch {
        flags.set("kswitch", v.to_string());
    }
    if let Some(v) = common.alpha_init {
        flags.set("alpha_init", v.to_string());
    }
    if let Some(v) = &common.channel {
        flags.set("channel", v.clone());
    }
    if common.noiseless {
        flags.set("noiseless", "true");
    }
    settings.merge_over(&flags);
    Ok(settings)
}

fn parse_points<T: std::str::FromStr>(list: &str, what: &str) -> Result<Vec<T>, String> {
    list.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| format!("bad {what} list entry `{}`", p.trim()))
        })
        .collect()
}

fn plot_path(csv: &Path) -> PathBuf {
    csv.with_extension("py")
}

fn execute(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run(common) => {
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("run.csv"));
            let config = settings_from(&common)?.build().map_err(|e| e.to_string())?;
            let result = beamalign::run_monte_carlo(&config).map_err(|e| e.to_string())?;
            csvio::emit_run_csv(&result, &out).map_err(|e| e.to_string())?;
            plot::emit_plot_script(&plot::run_plot_script(&out), &plot_path(&out))
                .map_err(|e| e.to_string())?;
            eprintln!(
                "wrote {} and {} ({} algorithms x {} runs x k_max {})",
                out.display(),
                plot_path(&out).display(),
                result.curves.len(),
                result.runs,
                result.k_max
            );
            Ok(())
        }
        Command::SweepAntennas { common, points } => {
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("sweep_antennas.csv"));
            let config = settings_from(&common)?.build().map_err(|e| e.to_string())?;
            let list: Vec<usize> = parse_points(&points, "antenna")?;
            let table = beamalign::sweep_antennas(&config, &list).map_err(|e| e.to_string())?;
            csvio::emit_sweep_csv(&table, &out).map_err(|e| e.to_string())?;
            plot::emit_plot_script(
                &plot::sweep_plot_script(&out, table.param_name),
                &plot_path(&out),
            )
            .map_err(|e| e.to_string())?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        Command::SweepKswitch { common, points } => {
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("sweep_kswitch.csv"));
            let config = settings_from(&common)?.build().map_err(|e| e.to_string())?;
            let list: Vec<usize> = parse_points(&points, "k_switch")?;
            let table = beamalign::sweep_kswitch(&config, &list).map_err(|e| e.to_string())?;
            csvio::emit_sweep_csv(&table, &out).map_err(|e| e.to_string())?;
            plot::emit_plot_script(
                &plot::sweep_plot_script(&out, table.param_name),
                &plot_path(&out),
            )
            .map_err(|e| e.to_string())?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        Command::SweepSnr { common, points } => {
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("sweep_snr.csv"));
            let config = settings_from(&common)?.build().map_err(|e| e.to_string())?;
            let list: Vec<f64> = parse_points(&points, "SNR")?;
            let table = beamalign::sweep_snr(&config, &list).map_err(|e| e.to_string())?;
            csvio::emit_sweep_csv(&table, &out).map_err(|e| e.to_string())?;
            plot::emit_plot_script(
                &plot::sweep_plot_script(&out, table.param_name),
                &plot_path(&out),
            )
            .map_err(|e| e.to_string())?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        Command::ReportCost(common) => {
            let config = settings_from(&common)?.build().map_err(|e| e.to_string())?;
            print!("{}", report::cost_table(&config));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            // Machine-readable error summary on stderr.
            let escaped = message
                .replace('\\', "\\\\")
                .replace('"', "\\\"")
                .replace('\n', " ");
            eprintln!("{{\"status\":\"error\",\"message\":\"{escaped}\"}}");
            ExitCode::FAILURE
        }
    }
}
