//! Command-line front end.
//!
//! Every subcommand is a pure function of its flags, the optional config
//! file and the seed. Commands that write a directory echo the effective
//! configuration there as `config.toml`, which can be fed back through
//! `--config` to reproduce the run.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{
    direction_factor_pdf, mobility_expansion_pdf, mobility_normal, sum_half_normal_pdf,
    triangle_af_pdf, DistError, GpsAccuracyStandard, UavCategory, AF_MAX,
};
use crate::flightsim::{
    self, evaluate_pair, generate_scenario, prefilter, ConflictStats, SimConfig, SimError, StatsRow,
};
use crate::geometry::{EpsMode, MessageFormat};
use crate::remote_id::{BroadcastProfile, PROFILES};

pub const STATS_FILE: &str = "stats.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const CONFIG_FILE: &str = "config.toml";
pub const SAMPLES_FILE: &str = "unmac_dist.csv";
pub const DIAMETERS_FILE: &str = "diameters.csv";

/// Largest grid accepted by `pdf`.
const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("could not serialize config: {0}")]
    Toml(#[from] toml::ser::Error),
    #[error("ordering invariant violated:\n{0}")]
    OrderingViolation(String),
}

impl CliError {
    /// 1 for bad invocations and configs, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

// ---------------------------------------------------------------------------
// Arguments
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "unmac",
    version,
    about = "UAV near mid-air collision volumes and Remote ID conflict simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one component density of the separation radius on a grid.
    Pdf(PdfArgs),
    /// Monte Carlo samples of the separation radius per format and interval.
    UnmacDist(UnmacDistArgs),
    /// Run a density sweep and write conflict statistics.
    Simulate(SimulateArgs),
    /// Rank formats in a stats CSV and check the ordering invariants.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Component {
    /// Mean of two uniform airframes.
    Airframe,
    /// Sum of two half-normal localization errors.
    Localization,
    /// Distance covered by the pair over one interval.
    Mobility,
    /// Cosine of a uniform relative direction.
    Direction,
}

#[derive(Debug, Args)]
pub struct PdfArgs {
    pub component: Component,
    /// Grid as `start:stop:step`; a sensible range is picked when omitted.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = AF_MAX)]
    pub af_max: f64,
    /// 1-sigma error of the first UAV, m.
    #[arg(long)]
    pub sigma_i: Option<f64>,
    /// 1-sigma error of the second UAV, m.
    #[arg(long)]
    pub sigma_j: Option<f64>,
    /// Accuracy class used for any sigma not given explicitly.
    #[arg(long)]
    pub gps_standard: Option<String>,
    /// Interval, s.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Take the interval from a broadcast technology.
    #[arg(long, conflicts_with = "dt")]
    pub tech: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub category_i: u8,
    #[arg(long, default_value_t = 1)]
    pub category_j: u8,
    /// Mobility term with the direction of travel known.
    #[arg(long)]
    pub direction_known: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags shared by the commands that read a [`RunConfig`]. Each one
/// overrides the matching config-file entry.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Densities, UAV/km^2 (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Trajectories per density.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Area of the square, km^2.
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub formats: Vec<MessageFormat>,
    /// Intervals, s (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub dt: Vec<f64>,
    /// Add the interval of each named broadcast technology.
    #[arg(long, value_delimiter = ',')]
    pub tech: Vec<String>,
    /// Accuracy class key or `sigma=<m>`.
    #[arg(long)]
    pub gps_standard: Option<String>,
    #[arg(long)]
    pub eps_mode: Option<EpsMode>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UnmacDistArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of random pairs.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Also write the separation diameters of the first scenario per density.
    #[arg(long)]
    pub dump_diameters: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Stats CSV written by `simulate`.
    pub stats: PathBuf,
    /// Half-width of the tie band in Poisson standard deviations.
    #[arg(long, default_value_t = 2.0)]
    pub noise_sigmas: f64,
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

/// Everything a run depends on. Serialized as TOML with one table per
/// section; all keys are optional in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub simulation: SimulationSection,
    pub uncertainty: UncertaintySection,
    pub execution: ExecutionSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub area_km2: f64,
    pub lambda_list: Vec<f64>,
    pub trajectory_budget: usize,
    /// Random pairs drawn by `unmac-dist`.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UncertaintySection {
    pub formats: Vec<MessageFormat>,
    pub dt_list: Vec<f64>,
    /// Accuracy class key or `sigma=<m>`.
    pub gps_standard: String,
    pub eps_mode: EpsMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExecutionSection {
    pub workers: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sim = SimConfig::default();
        Self {
            seed: sim.seed,
            simulation: SimulationSection {
                area_km2: sim.area_km2,
                lambda_list: sim.lambdas,
                trajectory_budget: sim.trajectory_budget,
                samples: 100_000,
            },
            uncertainty: UncertaintySection {
                formats: sim.formats,
                dt_list: sim.dts,
                gps_standard: "zero-aod".into(),
                eps_mode: sim.eps_mode,
            },
            execution: ExecutionSection {
                workers: sim.workers,
                output_dir: PathBuf::from("results"),
            },
        }
    }
}

impl Default for SimulationSection {
    fn default() -> Self {
        RunConfig::default().simulation
    }
}

impl Default for UncertaintySection {
    fn default() -> Self {
        RunConfig::default().uncertainty
    }
}

impl Default for ExecutionSection {
    fn default() -> Self {
        RunConfig::default().execution
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        Ok(toml::to_string(self)?)
    }

    /// Loads the file named by `--config` (or the defaults) and applies the
    /// remaining flags on top.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let mut c = match &args.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        if let Some(seed) = args.seed {
            c.seed = seed;
        }
        if !args.lambda.is_empty() {
            c.simulation.lambda_list = args.lambda.clone();
        }
        if let Some(b) = args.budget {
            c.simulation.trajectory_budget = b;
        }
        if let Some(a) = args.area {
            c.simulation.area_km2 = a;
        }
        if !args.formats.is_empty() {
            c.uncertainty.formats = args.formats.clone();
        }
        if !args.dt.is_empty() || !args.tech.is_empty() {
            let mut dts = args.dt.clone();
            for t in &args.tech {
                dts.push(tech_interval(t)?);
            }
            c.uncertainty.dt_list = dts;
        }
        if let Some(g) = &args.gps_standard {
            c.uncertainty.gps_standard = g.clone();
        }
        if let Some(m) = args.eps_mode {
            c.uncertainty.eps_mode = m;
        }
        if let Some(w) = args.workers {
            c.execution.workers = w;
        }
        if let Some(o) = &args.out {
            c.execution.output_dir = o.clone();
        }
        Ok(c)
    }

    pub fn gps(&self) -> Result<GpsAccuracyStandard, CliError> {
        parse_gps_standard(&self.uncertainty.gps_standard)
    }

    /// Simulator settings; rejects empty lists, small budgets and densities
    /// that leave fewer than two UAVs.
    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let c = SimConfig {
            seed: self.seed,
            area_km2: self.simulation.area_km2,
            lambdas: self.simulation.lambda_list.clone(),
            trajectory_budget: self.simulation.trajectory_budget,
            formats: self.uncertainty.formats.clone(),
            dts: self.uncertainty.dt_list.clone(),
            gps: self.gps()?,
            eps_mode: self.uncertainty.eps_mode,
            workers: self.execution.workers,
        };
        c.validate().map_err(|e| usage(e.to_string()))?;
        Ok(c)
    }

    fn write_echo(&self, dir: &Path) -> Result<(), CliError> {
        fs::write(dir.join(CONFIG_FILE), self.to_toml()?)?;
        Ok(())
    }
}

/// `zero-aod`-style table key, or `sigma=<m>` for an explicit 1-sigma error.
pub fn parse_gps_standard(s: &str) -> Result<GpsAccuracyStandard, CliError> {
    let key = s.trim().to_ascii_lowercase();
    if let Some(v) = key.strip_prefix("sigma=") {
        let sigma = f64::from_str(v.trim())
            .map_err(|_| usage(format!("invalid sigma in gps standard '{s}'")))?;
        return GpsAccuracyStandard::from_sigma(sigma).map_err(|e| usage(e.to_string()));
    }
    GpsAccuracyStandard::lookup(&key).ok_or_else(|| {
        let keys: Vec<&str> = GpsAccuracyStandard::TABLE.iter().map(|r| r.0).collect();
        usage(format!(
            "unknown gps standard '{s}' (expected one of {} or sigma=<m>)",
            keys.join(", ")
        ))
    })
}

/// Staleness interval for a named technology. Technologies with a range of
/// rates resolve to the slowest one, which bounds the age of any message.
pub fn tech_interval(name: &str) -> Result<f64, CliError> {
    BroadcastProfile::lookup(name)
        .map(|p| p.dt_com_max)
        .ok_or_else(|| {
            let keys: Vec<&str> = PROFILES.iter().map(|p| p.key).collect();
            usage(format!(
                "unknown technology '{name}' (expected one of {})",
                keys.join(", ")
            ))
        })
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parses `args` (program name first) and runs the command. Help and version
/// requests are written to `out` and count as success.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{}", e.render())?;
                    Ok(())
                }
                _ => Err(usage(e.render().to_string())),
            };
        }
    };
    match cli.command {
        Command::Pdf(a) => cmd_pdf(&a, out),
        Command::UnmacDist(a) => cmd_unmac_dist(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
    }
}

// ---------------------------------------------------------------------------
// pdf
// ---------------------------------------------------------------------------

/// Inclusive grid `start, start + step, ...` up to `stop`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("invalid grid '{s}' (expected start:stop:step)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|p| f64::from_str(p.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    grid(nums[0], nums[1], nums[2])
}

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(usage(format!(
            "invalid grid {start}:{stop}:{step} (need finite start <= stop and step > 0)"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() + 1.0;
    if n > MAX_GRID_POINTS as f64 {
        return Err(usage(format!(
            "grid has more than {MAX_GRID_POINTS} points"
        )));
    }
    Ok((0..n as usize).map(|k| start + k as f64 * step).collect())
}

fn category(index: u8) -> Result<UavCategory, CliError> {
    UavCategory::get(index).ok_or_else(|| usage(format!("category {index} not in 1..=4")))
}

#[derive(Serialize)]
struct PdfRow {
    x: f64,
    f: f64,
}

/// Evaluates the requested density on its grid.
pub fn pdf_rows(a: &PdfArgs) -> Result<Vec<(f64, f64)>, CliError> {
    let explicit = a.grid.as_deref().map(parse_grid).transpose()?;
    let xs_or = |default: Vec<f64>| explicit.clone().unwrap_or(default);
    let eval = |xs: Vec<f64>, f: &dyn Fn(f64) -> Result<f64, DistError>| {
        xs.into_iter()
            .map(|x| Ok((x, f(x)?)))
            .collect::<Result<Vec<_>, CliError>>()
    };
    match a.component {
        Component::Airframe => {
            if !(a.af_max > 0.0 && a.af_max.is_finite()) {
                return Err(usage(format!("af-max {} must be positive", a.af_max)));
            }
            let xs = xs_or(grid(0.0, a.af_max, a.af_max / 1000.0)?);
            eval(xs, &|x| triangle_af_pdf(x, a.af_max))
        }
        Component::Localization => {
            let fallback = match &a.gps_standard {
                Some(g) => parse_gps_standard(g)?.sigma(),
                None => GpsAccuracyStandard::zero_aod().sigma(),
            };
            let si = a.sigma_i.unwrap_or(fallback);
            let sj = a.sigma_j.unwrap_or(fallback);
            for (n, v) in [("sigma-i", si), ("sigma-j", sj)] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(usage(format!("{n} {v} must be positive")));
                }
            }
            let hi = 10.0 * (si + sj);
            let xs = xs_or(grid(0.0, hi, hi / 4000.0)?);
            eval(xs, &|x| sum_half_normal_pdf(x, si, sj))
        }
        Component::Mobility => {
            let dt = match (&a.tech, a.dt) {
                (Some(t), _) => tech_interval(t)?,
                (None, Some(dt)) => dt,
                (None, None) => 1.0,
            };
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(usage(format!("dt {dt} must be positive")));
            }
            let mi = category(a.category_i)?.speed_model();
            let mj = category(a.category_j)?.speed_model();
            let (mean, sd) = mobility_normal(dt, &mi, &mj);
            let lo = if a.direction_known {
                0.0
            } else {
                mean - 6.0 * sd
            };
            let hi = mean + 6.0 * sd;
            let xs = xs_or(grid(lo, hi, (hi - lo) / 2000.0)?);
            eval(xs, &|x| {
                mobility_expansion_pdf(x, dt, &mi, &mj, a.direction_known)
            })
        }
        Component::Direction => {
            let xs = xs_or(grid(-0.999, 0.999, 0.001)?);
            if let Some(x) = xs.iter().find(|x| x.abs() >= 1.0) {
                return Err(usage(format!(
                    "direction density is only defined on (-1, 1); grid contains {x}"
                )));
            }
            eval(xs, &direction_factor_pdf)
        }
    }
}

fn cmd_pdf(a: &PdfArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = pdf_rows(a)?;
    let sink: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(out),
    };
    let mut w = csv::Writer::from_writer(sink);
    for (x, f) in rows {
        w.serialize(PdfRow { x, f })?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// unmac-dist
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SampleRow {
    format: MessageFormat,
    dt: f64,
    sample: f64,
}

fn prepare_dir(config: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = config.execution.output_dir.clone();
    fs::create_dir_all(&dir)?;
    config.write_echo(&dir)?;
    Ok(dir)
}

fn cmd_unmac_dist(a: &UnmacDistArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = RunConfig::resolve(&a.run)?;
    if let Some(n) = a.samples {
        config.simulation.samples = n;
    }
    let n = config.simulation.samples;
    if n == 0 {
        return Err(usage("samples must be positive"));
    }
    let u = &config.uncertainty;
    if u.formats.is_empty() || u.dt_list.is_empty() {
        return Err(usage("format and dt lists must be non-empty"));
    }
    if let Some(dt) = u.dt_list.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(usage(format!("dt {dt} must be non-negative")));
    }
    let gps = config.gps()?;
    let samples = flightsim::sample_radii(
        n,
        &u.formats,
        &u.dt_list,
        gps.sigma(),
        u.eps_mode,
        config.seed,
    )?;
    let dir = prepare_dir(&config)?;
    let path = dir.join(SAMPLES_FILE);
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&path)?));
    for (fi, &format) in samples.formats.iter().enumerate() {
        for (di, &dt) in samples.dts.iter().enumerate() {
            for &sample in &samples.values[fi * samples.dts.len() + di] {
                w.serialize(SampleRow { format, dt, sample })?;
            }
        }
    }
    w.flush()?;
    writeln!(
        out,
        "wrote {n} pairs x {} combinations to {}",
        samples.values.len(),
        path.display()
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Human-readable rate table plus the standard-format inflation over MAC,
/// computed from the rows alone.
pub fn summarize(stats: &ConflictStats) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:>10} {:>8} {:<20} {:>10} {:>8} {:>12} {:>12}\n",
        "lambda", "dt", "format", "conflicts", "macs", "hours", "rate/h"
    ));
    for r in &stats.rows {
        s.push_str(&format!(
            "{:>10} {:>8} {:<20} {:>10} {:>8} {:>12.2} {:>12.6}\n",
            r.lambda,
            r.dt,
            r.format.name(),
            r.conflicts,
            r.macs,
            r.flight_hours,
            r.rate
        ));
    }
    let mut seen = Vec::new();
    for r in &stats.rows {
        if seen.contains(&(r.lambda.to_bits(), r.dt.to_bits())) {
            continue;
        }
        seen.push((r.lambda.to_bits(), r.dt.to_bits()));
        match stats.inflation(r.lambda, MessageFormat::StandardRemoteId, r.dt) {
            Some(x) => s.push_str(&format!(
                "standard-remote-id / MAC at lambda={} dt={}: {x:.3}\n",
                r.lambda, r.dt
            )),
            None if stats
                .row(r.lambda, MessageFormat::StandardRemoteId, r.dt)
                .is_some() =>
            {
                s.push_str(&format!(
                    "standard-remote-id / MAC at lambda={} dt={}: undefined (no MAC events)\n",
                    r.lambda, r.dt
                ))
            }
            None => {}
        }
    }
    s
}

#[derive(Serialize)]
struct DiameterRow {
    lambda: f64,
    format: MessageFormat,
    dt: f64,
    diameter: f64,
}

/// Separation diameters of every candidate pair in the first scenario of
/// each density.
fn dump_diameters(config: &SimConfig, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for &density in &config.lambdas {
        let seed = config.scenario_seed(density, 0);
        let s = generate_scenario(density, config.area_km2, config.gps.sigma(), seed)?;
        let pairs = prefilter(&s, &config.worst_case_for(&s));
        for p in &pairs {
            let e = evaluate_pair(&s, p, &config.formats, &config.dts, config.eps_mode);
            for (fi, &format) in config.formats.iter().enumerate() {
                for (di, &dt) in config.dts.iter().enumerate() {
                    w.serialize(DiameterRow {
                        lambda: density,
                        format,
                        dt,
                        diameter: 2.0 * e.radii[fi * config.dts.len() + di],
                    })?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = RunConfig::resolve(&a.run)?;
    let sim = config.sim_config()?;
    let dir = prepare_dir(&config)?;
    let stats_path = dir.join(STATS_FILE);
    let mut file = BufWriter::new(File::create(&stats_path)?);
    writeln!(file, "lambda,format,dt,conflicts,macs,flight_hours,rate")?;
    file.flush()?;
    // Each density is appended and flushed as soon as it completes, so an
    // interrupted sweep leaves every finished density on disk.
    let stats = flightsim::run_with(&sim, |rows: &[StatsRow]| {
        flightsim::stats::write_rows(&mut file, rows, false)
            .and_then(|_| file.flush().map_err(csv::Error::from))
            .map_err(|e| SimError::Config(format!("writing {}: {e}", stats_path.display())))
    })?;
    if a.dump_diameters {
        dump_diameters(&sim, &dir.join(DIAMETERS_FILE))?;
    }
    let summary = summarize(&stats);
    fs::write(dir.join(SUMMARY_FILE), &summary)?;
    out.write_all(summary.as_bytes())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// Ranking of formats for one (lambda, dt) group.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub lambda: f64,
    pub dt: f64,
    /// Rows by increasing rate; equal rates keep the safety ordering.
    pub rows: Vec<StatsRow>,
    /// Adjacent formats whose counts differ by no more than the noise band.
    pub ties: Vec<(MessageFormat, MessageFormat)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rankings: Vec<Ranking>,
    pub violations: Vec<String>,
}

/// `|a - b| <= k sqrt(a + b)`: the counts are indistinguishable as Poisson
/// draws.
pub fn within_noise(a: u64, b: u64, k: f64) -> bool {
    (a as f64 - b as f64).abs() <= k * ((a + b) as f64).sqrt()
}

/// Groups rows by (lambda, dt), ranks them and checks that conflict counts
/// respect the safety ordering of formats, that the MAC count is shared, and
/// that no format gains conflicts when its interval shrinks.
pub fn compare(stats: &ConflictStats, noise_sigmas: f64) -> Comparison {
    let mut groups: BTreeMap<(u64, u64), Vec<StatsRow>> = BTreeMap::new();
    let mut order = Vec::new();
    for r in &stats.rows {
        let key = (r.lambda.to_bits(), r.dt.to_bits());
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(r.clone());
    }
    let mut violations = Vec::new();
    let mut rankings = Vec::new();
    for key in order {
        let mut rows = groups.remove(&key).unwrap_or_default();
        let (lambda, dt) = (rows[0].lambda, rows[0].dt);
        if rows.iter().any(|r| r.macs != rows[0].macs) {
            violations.push(format!(
                "lambda={lambda} dt={dt}: MAC count differs between formats"
            ));
        }
        rows.sort_by_key(|r| r.format.rank());
        for w in rows.windows(2) {
            if w[0].conflicts > w[1].conflicts {
                violations.push(format!(
                    "lambda={lambda} dt={dt}: {} has {} conflicts, more than {} with {}",
                    w[0].format, w[0].conflicts, w[1].format, w[1].conflicts
                ));
            }
        }
        for r in &rows {
            if r.format == MessageFormat::PerfectKnowledge && r.conflicts != r.macs {
                violations.push(format!(
                    "lambda={lambda} dt={dt}: perfect-knowledge conflicts {} differ from MACs {}",
                    r.conflicts, r.macs
                ));
            }
        }
        rows.sort_by(|a, b| {
            a.rate
                .total_cmp(&b.rate)
                .then(a.format.rank().cmp(&b.format.rank()))
        });
        let ties = rows
            .windows(2)
            .filter(|w| within_noise(w[0].conflicts, w[1].conflicts, noise_sigmas))
            .map(|w| (w[0].format, w[1].format))
            .collect();
        rankings.push(Ranking {
            lambda,
            dt,
            rows,
            ties,
        });
    }
    // Shrinking the interval can only shrink every radius.
    let mut by_format: BTreeMap<(u64, MessageFormat), Vec<&StatsRow>> = BTreeMap::new();
    for r in &stats.rows {
        by_format
            .entry((r.lambda.to_bits(), r.format))
            .or_default()
            .push(r);
    }
    for ((_, format), mut rows) in by_format {
        rows.sort_by(|a, b| a.dt.total_cmp(&b.dt));
        for w in rows.windows(2) {
            if w[0].conflicts > w[1].conflicts {
                violations.push(format!(
                    "lambda={} {format}: {} conflicts at dt={} exceed {} at dt={}",
                    w[0].lambda, w[0].conflicts, w[0].dt, w[1].conflicts, w[1].dt
                ));
            }
        }
    }
    Comparison {
        rankings,
        violations,
    }
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(a.noise_sigmas >= 0.0 && a.noise_sigmas.is_finite()) {
        return Err(usage("noise-sigmas must be non-negative"));
    }
    let file = File::open(&a.stats)?;
    let stats = ConflictStats::read_csv(file)?;
    if stats.rows.is_empty() {
        return Err(CliError::Csv(csv::Error::from(io::Error::new(
            io::ErrorKind::InvalidData,
            "stats CSV has no rows",
        ))));
    }
    let c = compare(&stats, a.noise_sigmas);
    for r in &c.rankings {
        writeln!(out, "lambda={} dt={}", r.lambda, r.dt)?;
        for (k, row) in r.rows.iter().enumerate() {
            writeln!(
                out,
                "  {}. {:<20} rate={:.6}/h conflicts={} macs={}",
                k + 1,
                row.format.name(),
                row.rate,
                row.conflicts,
                row.macs
            )?;
        }
        for (x, y) in &r.ties {
            writeln!(out, "  tied within noise: {x} ~ {y}")?;
        }
    }
    if c.violations.is_empty() {
        writeln!(out, "ordering invariants hold")?;
        Ok(())
    } else {
        Err(CliError::OrderingViolation(c.violations.join("\n")))
    }
}
