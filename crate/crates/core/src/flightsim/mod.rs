//! 2D Monte Carlo flight simulator.
//!
//! For each density the simulator draws independent scenarios until the
//! trajectory budget is spent, filters pairs by closest approach, and counts
//! MAC events and per-format uNMAC conflicts. Rates are events per flight
//! hour, where flight hours are the summed trajectory durations.
//!
//! Every random draw is addressed by `(seed, density, scenario, uav/pair)`,
//! so results are bit-identical for any number of worker threads.

pub mod cpa;
pub mod evaluate;
pub mod prefilter;
pub mod scenario;
pub mod stats;

use rayon::prelude::*;
use thiserror::Error;

pub use cpa::{cpa, Cpa};
pub use evaluate::{evaluate_pair, PairEvaluation};
pub use prefilter::{all_pairs, default_worst_case, prefilter, threshold, CandidatePair};
pub use scenario::{generate_scenario, Scenario, Trajectory, Uav};
pub use stats::{ConflictStats, StatsRow};

use crate::distributions::{DistError, GpsAccuracyStandard, CATEGORIES};
use crate::geometry::{
    r_unmac, unmac_diameter, EpsMode, GeometryError, MessageFormat, UncertaintyBudget,
    EPS_UPPER_BOUND,
};
use crate::rng::{hash_words, substream, Domain};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("density {0} must be positive")]
    InvalidDensity(f64),
    #[error("area {0} km^2 must be positive")]
    InvalidArea(f64),
    #[error("density {density} over {area_km2} km^2 gives fewer than 2 UAVs")]
    TooFewUavs { density: f64, area_km2: f64 },
    #[error("trajectory start and end coincide")]
    DegenerateTrajectory,
    #[error("speed {0} m/s must be positive")]
    InvalidSpeed(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Distribution(#[from] DistError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("could not start worker pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Minimum trajectory budget accepted by [`SimConfig::validate`].
pub const MIN_BUDGET: usize = 1_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub area_km2: f64,
    pub lambdas: Vec<f64>,
    pub trajectory_budget: usize,
    pub formats: Vec<MessageFormat>,
    pub dts: Vec<f64>,
    pub gps: GpsAccuracyStandard,
    pub eps_mode: EpsMode,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            area_km2: 10.0,
            lambdas: vec![10.0],
            trajectory_budget: 100_000,
            formats: MessageFormat::ALL.to_vec(),
            dts: vec![1.0, 0.02],
            gps: GpsAccuracyStandard::zero_aod(),
            eps_mode: EpsMode::Sampled,
            workers: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.lambdas.is_empty() || self.formats.is_empty() || self.dts.is_empty() {
            return Err(SimError::Config(
                "lambda, format and dt lists must be non-empty".into(),
            ));
        }
        if self.trajectory_budget < MIN_BUDGET {
            return Err(SimError::Config(format!(
                "trajectory budget {} below {MIN_BUDGET}",
                self.trajectory_budget
            )));
        }
        if let Some(dt) = self.dts.iter().find(|dt| !(**dt >= 0.0 && dt.is_finite())) {
            return Err(SimError::Config(format!("dt {dt} must be non-negative")));
        }
        for &l in &self.lambdas {
            scenario::uav_count(l, self.area_km2)?;
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, SimError> {
        Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()?)
    }

    /// Seed of scenario `index` at `density`.
    pub fn scenario_seed(&self, density: f64, index: u64) -> u64 {
        hash_words(&[self.seed, density.to_bits(), index])
    }

    /// Prefilter worst case for `scenario`: the default budget, widened when
    /// the configuration or the sampled speeds exceed it.
    pub fn worst_case_for(&self, scenario: &Scenario) -> UncertaintyBudget {
        let default = default_worst_case();
        let v_max = CATEGORIES[3].v_max.max(scenario.max_speed());
        let dt = self.dts.iter().copied().fold(default.dt, f64::max);
        let eps = match self.eps_mode {
            EpsMode::Fixed3Sigma => EPS_UPPER_BOUND.max(self.gps.three_sigma()),
            EpsMode::Sampled => EPS_UPPER_BOUND,
        };
        let mut w = UncertaintyBudget::worst_case(v_max, dt);
        w.eps_i = eps;
        w.eps_j = eps;
        w
    }
}

/// Counts from one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTally {
    pub n_uav: usize,
    pub flight_seconds: f64,
    pub macs: u64,
    /// Row-major over `formats x dts`.
    pub conflicts: Vec<u64>,
    pub candidate_pairs: usize,
}

/// Generates, filters and evaluates one scenario.
pub fn simulate_scenario(
    config: &SimConfig,
    density: f64,
    index: u64,
) -> Result<ScenarioTally, SimError> {
    let seed = config.scenario_seed(density, index);
    let s = generate_scenario(density, config.area_km2, config.gps.sigma(), seed)?;
    let worst = config.worst_case_for(&s);
    let pairs = prefilter(&s, &worst);
    let width = config.formats.len() * config.dts.len();
    let (macs, conflicts) = pairs
        .par_iter()
        .map(|p| evaluate_pair(&s, p, &config.formats, &config.dts, config.eps_mode))
        .fold(
            || (0u64, vec![0u64; width]),
            |(mut m, mut c), e| {
                m += u64::from(e.mac);
                for (acc, &flag) in c.iter_mut().zip(&e.conflicts) {
                    *acc += u64::from(flag);
                }
                (m, c)
            },
        )
        .reduce(
            || (0u64, vec![0u64; width]),
            |(m1, mut c1), (m2, c2)| {
                for (a, b) in c1.iter_mut().zip(&c2) {
                    *a += b;
                }
                (m1 + m2, c1)
            },
        );
    Ok(ScenarioTally {
        n_uav: s.n_uav(),
        flight_seconds: s.flight_seconds(),
        macs,
        conflicts,
        candidate_pairs: pairs.len(),
    })
}

/// Number of scenarios needed to reach the trajectory budget at `density`.
pub fn scenario_count(config: &SimConfig, density: f64) -> Result<u64, SimError> {
    let n = scenario::uav_count(density, config.area_km2)?;
    Ok(config.trajectory_budget.div_ceil(n) as u64)
}

/// Runs one density and returns its rows, formats outer and intervals inner.
pub fn run_density(config: &SimConfig, density: f64) -> Result<Vec<StatsRow>, SimError> {
    let pool = config.pool()?;
    run_density_in(&pool, config, density)
}

fn run_density_in(
    pool: &rayon::ThreadPool,
    config: &SimConfig,
    density: f64,
) -> Result<Vec<StatsRow>, SimError> {
    let count = scenario_count(config, density)?;
    let tallies: Vec<ScenarioTally> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|k| simulate_scenario(config, density, k))
            .collect::<Result<Vec<_>, _>>()
    })?;
    // Sequential in scenario order so the float sum is schedule-independent.
    let flight_seconds: f64 = tallies.iter().map(|t| t.flight_seconds).sum();
    let macs: u64 = tallies.iter().map(|t| t.macs).sum();
    let width = config.formats.len() * config.dts.len();
    let mut conflicts = vec![0u64; width];
    for t in &tallies {
        for (a, b) in conflicts.iter_mut().zip(&t.conflicts) {
            *a += b;
        }
    }
    let flight_hours = flight_seconds / 3600.0;
    let mut rows = Vec::with_capacity(width);
    for (fi, &format) in config.formats.iter().enumerate() {
        for (di, &dt) in config.dts.iter().enumerate() {
            rows.push(StatsRow::new(
                density,
                format,
                dt,
                conflicts[fi * config.dts.len() + di],
                macs,
                flight_hours,
            ));
        }
    }
    Ok(rows)
}

/// Runs the full density sweep, handing each density's rows to `sink` as
/// soon as they are ready.
pub fn run_with<F>(config: &SimConfig, mut sink: F) -> Result<ConflictStats, SimError>
where
    F: FnMut(&[StatsRow]) -> Result<(), SimError>,
{
    config.validate()?;
    let pool = config.pool()?;
    let mut stats = ConflictStats::default();
    for &density in &config.lambdas {
        let rows = run_density_in(&pool, config, density)?;
        sink(&rows)?;
        stats.rows.extend(rows);
    }
    Ok(stats)
}

pub fn run(config: &SimConfig) -> Result<ConflictStats, SimError> {
    run_with(config, |_| Ok(()))
}

/// Monte Carlo draws of the separation radius, grouped by (format, dt).
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSamples {
    pub formats: Vec<MessageFormat>,
    pub dts: Vec<f64>,
    /// `values[f * dts.len() + d][k]`.
    pub values: Vec<Vec<f64>>,
}

impl RadiusSamples {
    pub fn get(&self, format: MessageFormat, dt: f64) -> Option<&[f64]> {
        let f = self.formats.iter().position(|&x| x == format)?;
        let d = self.dts.iter().position(|&x| x == dt)?;
        Some(&self.values[f * self.dts.len() + d])
    }
}

/// Draws `n` random pairs (uniform category, sampled speed and airframe,
/// uniform heading) and evaluates `r_uNMAC` for every format and interval on
/// the same pair.
pub fn sample_radii(
    n: usize,
    formats: &[MessageFormat],
    dts: &[f64],
    gps_sigma: f64,
    eps_mode: EpsMode,
    seed: u64,
) -> Result<RadiusSamples, SimError> {
    let width = formats.len() * dts.len();
    let per_pair: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, Domain::Sample, k as u64, 0);
            let a = scenario::sample_profile(gps_sigma, &mut rng)?;
            let b = scenario::sample_profile(gps_sigma, &mut rng)?;
            let eps = (
                eps_mode.reported_eps(&a, &mut rng),
                eps_mode.reported_eps(&b, &mut rng),
            );
            let mut out = Vec::with_capacity(width);
            for &f in formats {
                for &dt in dts {
                    out.push(r_unmac(unmac_diameter((&a, &b), eps, dt, f)));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, SimError>>()?;
    let mut values = vec![Vec::with_capacity(n); width];
    for row in per_pair {
        for (col, v) in values.iter_mut().zip(row) {
            col.push(v);
        }
    }
    Ok(RadiusSamples {
        formats: formats.to_vec(),
        dts: dts.to_vec(),
        values,
    })
}
