use super::prefilter::CandidatePair;
use super::scenario::Scenario;
use crate::geometry::{r_mac, r_unmac, unmac_diameter, EpsMode, MessageFormat};
use crate::rng::{substream, Domain};

/// Outcome for one pair across every (format, interval) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEvaluation {
    pub i: usize,
    pub j: usize,
    pub t_cpa: f64,
    pub miss_distance: f64,
    pub mac: bool,
    /// Reported localization errors drawn for this pair.
    pub reported_eps: (f64, f64),
    /// Row-major over `formats x dts`.
    pub conflicts: Vec<bool>,
    /// Separation radius for each entry of `conflicts`.
    pub radii: Vec<f64>,
}

impl PairEvaluation {
    pub fn conflict(&self, format_idx: usize, dt_idx: usize, n_dt: usize) -> bool {
        self.conflicts[format_idx * n_dt + dt_idx]
    }
}

/// Flags MAC (`miss < r_MAC`) and, per format and interval, uNMAC violations
/// (`miss < r_uNMAC`). Reported errors come from the pair's own stream so the
/// result does not depend on evaluation order.
pub fn evaluate_pair(
    scenario: &Scenario,
    pair: &CandidatePair,
    formats: &[MessageFormat],
    dts: &[f64],
    eps_mode: EpsMode,
) -> PairEvaluation {
    let ui = &scenario.uavs[pair.i].profile;
    let uj = &scenario.uavs[pair.j].profile;
    let mut rng = substream(scenario.seed, Domain::Pair, pair.i as u64, pair.j as u64);
    let eps = (
        eps_mode.reported_eps(ui, &mut rng),
        eps_mode.reported_eps(uj, &mut rng),
    );
    let miss = pair.cpa.miss;
    let mac = miss < r_mac(ui.airframe_diameter(), uj.airframe_diameter());
    let mut conflicts = Vec::with_capacity(formats.len() * dts.len());
    let mut radii = Vec::with_capacity(formats.len() * dts.len());
    for &format in formats {
        for &dt in dts {
            let r = r_unmac(unmac_diameter((ui, uj), eps, dt, format));
            radii.push(r);
            conflicts.push(miss < r);
        }
    }
    PairEvaluation {
        i: pair.i,
        j: pair.j,
        t_cpa: pair.cpa.t_cpa,
        miss_distance: miss,
        mac,
        reported_eps: eps,
        conflicts,
        radii,
    }
}
