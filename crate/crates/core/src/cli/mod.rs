//! Command-line front end: `metrics`, `simulate`, `sweep` and `minimize`.
//!
//! Every command reads a JSON [`RunConfig`], writes a CSV or JSON table to
//! `--out` (or stdout) and, when writing a file, a `<out>.manifest.json`
//! sidecar recording the command, seed, version and parsed configuration.
//! The data file itself carries no timestamp, so reruns with the same seed
//! are byte-identical.
//!
//! Exit codes: 0 on success (divergent metrics included), 2 for
//! configuration errors, 3 for runtime errors. Errors are printed to stderr
//! as one JSON object naming the offending configuration field.

mod config;
mod output;

pub use config::{
    CostField, CostName, LinkSection, MinimizeSection, PowerSection, ProtocolSection, RangeSection, RunConfig,
    SimSection, SweepSection,
};
pub use output::{Cell, RunManifest, Table};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::aoi_metrics::{avg_aoi, avg_paoi, exp_y, exp_z, MetricsReport};
use crate::channel::{lcr, snr_cdf};
use crate::error::Error;
use crate::simkit::{simulate_fading_process, simulate_packet_process, SimResult};
use crate::sweep::{minimize_eta, normalize, run_sweep, Objective, Output};

#[derive(Debug, Parser)]
#[command(name = "aoi", version, about = "Non-linear AoI and energy efficiency of stop-and-wait links over Rician fading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form p, average AoI, peak AoI, EE and the eta ratios.
    Metrics(Common),
    /// Monte-Carlo estimate next to its closed form.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Oracle::Packet)]
        oracle: Oracle,
        /// Overrides `sim.seed`; a seed is generated and recorded if neither is set.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate every metric over the `sweep` grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Add `eta_norm` / `eta_p_norm` columns, each value divided by the column minimum.
        #[arg(long)]
        normalize: bool,
    },
    /// Minimize eta or eta_p over rate or SNR as set in `minimize`.
    Minimize(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to json for metrics and minimize, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// Slot-level protocol simulation at a given `p`.
    Packet,
    /// Fading time series: SNR CDF, level crossing rate and PEP.
    Channel,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config { field: Option<String>, message: String },
    Runtime { message: String },
}

impl CliError {
    pub(crate) fn config(field: Option<String>, message: impl Into<String>) -> Self {
        Self::Config {
            field,
            message: message.into(),
        }
    }

    pub(crate) fn missing(field: &str) -> Self {
        Self::config(Some(field.into()), "missing field")
    }

    pub(crate) fn runtime(message: impl Into<String>) -> Self {
        Self::Runtime {
            message: message.into(),
        }
    }

    pub(crate) fn io(e: impl std::fmt::Display) -> Self {
        Self::runtime(format!("i/o: {e}"))
    }

    /// Parameter errors become configuration errors on the matching field.
    pub(crate) fn from_lib(e: Error) -> Self {
        match &e {
            Error::InvalidParameter { field, reason } => {
                Self::config(Some(config::config_field(field)), reason.clone())
            }
            _ => Self::runtime(e.to_string()),
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Config { field, .. } => field.as_deref(),
            Self::Runtime { .. } => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Runtime { .. } => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Config { field, message } => serde_json::json!({
                "error": {"kind": "config", "field": field, "message": message}
            }),
            Self::Runtime { message } => serde_json::json!({
                "error": {"kind": "runtime", "message": message}
            }),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (common, name) = match &cli.command {
        Command::Metrics(c) => (c, "metrics"),
        Command::Simulate { common, .. } => (common, "simulate"),
        Command::Sweep { common, .. } => (common, "sweep"),
        Command::Minimize(c) => (c, "minimize"),
    };
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CliError::config(None, format!("cannot read {}: {e}", common.config.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    let mut manifest = RunManifest {
        command: name,
        config_path: common.config.display().to_string(),
        output_path: common.out.as_ref().map(|p| p.display().to_string()),
        seed: None,
        format: Format::Csv,
        oracle: None,
        normalize: false,
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        config: serde_json::to_value(&cfg).map_err(|e| CliError::runtime(e.to_string()))?,
    };

    let (table, format) = match &cli.command {
        Command::Metrics(c) => (cmd_metrics(&cfg)?, c.format.unwrap_or(Format::Json)),
        Command::Simulate { common, oracle, seed } => {
            let seed = seed.or(cfg.sim.seed).unwrap_or_else(auto_seed);
            manifest.seed = Some(seed);
            manifest.oracle = Some(match oracle {
                Oracle::Packet => "packet",
                Oracle::Channel => "channel",
            });
            (cmd_simulate(&cfg, *oracle, seed)?, common.format.unwrap_or(Format::Csv))
        }
        Command::Sweep { common, normalize } => {
            manifest.normalize = *normalize;
            (cmd_sweep(&cfg, *normalize)?, common.format.unwrap_or(Format::Csv))
        }
        Command::Minimize(c) => (cmd_minimize(&cfg)?, c.format.unwrap_or(Format::Json)),
    };
    manifest.format = format;
    let single = matches!(cli.command, Command::Metrics(_) | Command::Minimize(_));
    let data = table.render(format, single)?;
    output::emit(&data, common.out.as_deref().map(Path::new), &manifest, stdout)
}

fn auto_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64)
}

fn metric_cells(r: &MetricsReport, outputs: &[Output]) -> Vec<Cell> {
    outputs.iter().map(|o| o.value(r).into()).collect()
}

fn output_columns(outputs: &[Output]) -> Vec<String> {
    outputs.iter().map(|o| o.column().to_string()).collect()
}

/// One row: p, avg_aoi, avg_paoi, ee, eta, eta_p, divergent, regime_notes.
pub fn cmd_metrics(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.scenario(None)?;
    let r = match cfg.p {
        Some(p) => s.evaluate_with_p(p),
        None => s.evaluate(),
    }
    .map_err(CliError::from_lib)?;
    let mut cols = output_columns(&Output::ALL);
    cols.extend(["divergent".into(), "regime_notes".into()]);
    let mut t = Table::new(cols);
    let mut row = metric_cells(&r, &Output::ALL);
    row.push(Cell::Bool(r.any_divergent()));
    row.push(Cell::Text(r.regime_notes.join("; ")));
    t.push(row);
    Ok(t)
}

const SIM_COLUMNS: [&str; 7] = [
    "quantity",
    "estimate",
    "std_error",
    "n_samples",
    "seed",
    "divergence_detected",
    "closed_form",
];

fn sim_row(name: &str, r: &SimResult, closed: Cell) -> Vec<Cell> {
    vec![
        Cell::Text(name.into()),
        Cell::Num(r.estimate),
        Cell::Num(r.std_error),
        Cell::Int(r.n_samples),
        Cell::Int(r.seed),
        Cell::Bool(r.divergence_detected),
        closed,
    ]
}

/// One row per estimated quantity with its closed-form counterpart. The
/// packet oracle uses `p` from the config when given, otherwise the PEP of
/// the configured link.
pub fn cmd_simulate(cfg: &RunConfig, oracle: Oracle, seed: u64) -> Result<Table, CliError> {
    let s = cfg.scenario(None)?;
    let sim = cfg.sim_config(seed);
    let mut t = Table::new(SIM_COLUMNS);
    match oracle {
        Oracle::Packet => {
            let p = match cfg.p {
                Some(p) => p,
                None => s.pep(None).map_err(CliError::from_lib)?.p,
            };
            let params = s.aoi_params(p).map_err(CliError::from_lib)?;
            let out = simulate_packet_process(p, &params, &sim).map_err(CliError::from_lib)?;
            let lib = CliError::from_lib;
            let ey = exp_y(p).map_err(lib)?;
            let c = avg_aoi(p, &params).map_err(lib)?;
            let cp = avg_paoi(p, &params).map_err(lib)?;
            t.push(sim_row("avg_aoi", &out.avg_aoi, c.into()));
            t.push(sim_row("avg_paoi", &out.avg_paoi, cp.into()));
            t.push(sim_row("mean_y", &out.mean_y, ey.into()));
            t.push(sim_row("mean_z", &out.mean_z, exp_z(p, params.max_tx()).map_err(lib)?.into()));
            t.push(sim_row("mean_x", &out.mean_x, ey.into()));
        }
        Oracle::Channel => {
            let fp = &s.link.fading;
            let gth = s.link.rate.gamma_th();
            let out = simulate_fading_process(fp, &s.link.packet, gth, &sim).map_err(CliError::from_lib)?;
            let lib = |r: crate::Result<f64>| r.map(Cell::Num).map_err(CliError::from_lib);
            t.push(sim_row("cdf", &out.cdf, lib(snr_cdf(fp, gth))?));
            t.push(sim_row("lcr", &out.lcr, lib(lcr(fp, gth))?));
            t.push(sim_row("pep", &out.pep, Cell::Num(s.pep(None).map_err(CliError::from_lib)?.p)));
        }
    }
    Ok(t)
}

/// Columns: the swept variable, the requested outputs, `divergent`, and
/// with `normalize` the eta columns divided by their minimum.
pub fn cmd_sweep(cfg: &RunConfig, normalize_eta: bool) -> Result<Table, CliError> {
    let spec = cfg.sweep_spec()?;
    let rows = run_sweep(&spec).map_err(CliError::from_lib)?;
    let outputs = spec.outputs();
    let mut cols = vec![spec.variable().column().to_string()];
    cols.extend(output_columns(outputs));
    cols.push("divergent".into());

    let mut extra = Vec::new();
    if normalize_eta {
        for o in outputs {
            let name = match o {
                Output::Eta => "eta_norm",
                Output::EtaP => "eta_p_norm",
                _ => continue,
            };
            let values: Vec<_> = rows.iter().map(|r| o.value(&r.report)).collect();
            let column = normalize(&values).ok_or_else(|| {
                CliError::runtime(format!("cannot normalize {}: every value diverges", o.column()))
            })?;
            cols.push(name.into());
            extra.push(column);
        }
    }

    let mut t = Table::new(cols);
    for (i, r) in rows.iter().enumerate() {
        let mut row = vec![Cell::Num(r.x)];
        row.extend(metric_cells(&r.report, outputs));
        row.push(Cell::Bool(r.divergent));
        row.extend(extra.iter().map(|c| Cell::from(c[i])));
        t.push(row);
    }
    Ok(t)
}

/// One row: objective, variable, argmin, min_value, bracket, evaluation
/// count, and `p` at the minimizer.
pub fn cmd_minimize(cfg: &RunConfig) -> Result<Table, CliError> {
    let (m, opts) = cfg.minimize_options()?;
    let base = cfg.scenario(Some(m.variable))?;
    let r = minimize_eta(m.objective, m.variable, m.bracket, &base, opts).map_err(CliError::from_lib)?;
    let at = m
        .variable
        .apply(&base, r.argmin)
        .and_then(|s| s.evaluate())
        .map_err(CliError::from_lib)?;
    let mut t = Table::new([
        "objective",
        "variable",
        "argmin",
        "min_value",
        "bracket_lo",
        "bracket_hi",
        "evaluations",
        "p_at_argmin",
    ]);
    t.push(vec![
        Cell::Text(
            match m.objective {
                Objective::Eta => "eta",
                Objective::EtaP => "eta_p",
            }
            .into(),
        ),
        Cell::Text(m.variable.column().into()),
        Cell::Num(r.argmin),
        Cell::Num(r.min_value),
        Cell::Num(r.bracket.0),
        Cell::Num(r.bracket.1),
        Cell::Int(r.evaluations as u64),
        Cell::Num(at.p),
    ]);
    Ok(t)
}

/// Entry point for the `aoi` binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
