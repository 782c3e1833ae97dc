//! Broad phase: finds the trajectory pairs whose closest approach is within a
//! worst-case separation radius. Only those pairs can violate any format's
//! uNMAC.

use rayon::prelude::*;

use super::cpa::{cpa, Cpa};
use super::scenario::{Scenario, Trajectory};
use crate::distributions::CATEGORIES;
use crate::geometry::{r_unmac, UncertaintyBudget};

/// Worst case for the pair filter: largest airframes, 40 m localization
/// bound, Category 4 maximum airspeed and a 1 s interval.
pub fn default_worst_case() -> UncertaintyBudget {
    UncertaintyBudget::worst_case(CATEGORIES[3].v_max, 1.0)
}

/// Separation radius below which a pair must be evaluated.
pub fn threshold(worst_case: &UncertaintyBudget) -> f64 {
    r_unmac(worst_case.diameter())
}

/// A pair that survived the filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidatePair {
    pub i: usize,
    pub j: usize,
    pub cpa: Cpa,
}

#[derive(Clone, Copy)]
struct Bounds {
    index: usize,
    min: [f64; 2],
    max: [f64; 2],
}

fn bounds(index: usize, t: &Trajectory, pad: f64) -> Bounds {
    let (s, e) = (t.start(), t.end());
    Bounds {
        index,
        min: [s[0].min(e[0]) - pad, s[1].min(e[1]) - pad],
        max: [s[0].max(e[0]) + pad, s[1].max(e[1]) + pad],
    }
}

/// Keeps the pairs `(i < j)` whose CPA miss distance is at most the worst
/// case radius, ordered by `(i, j)`.
///
/// Segment bounding boxes padded by half the radius are swept along x first;
/// boxes that do not overlap cannot hold points within the radius.
pub fn prefilter(scenario: &Scenario, worst_case: &UncertaintyBudget) -> Vec<CandidatePair> {
    let radius = threshold(worst_case);
    let mut boxes: Vec<Bounds> = scenario
        .uavs
        .iter()
        .enumerate()
        .map(|(k, u)| bounds(k, &u.trajectory, 0.5 * radius))
        .collect();
    boxes.sort_by(|a, b| a.min[0].total_cmp(&b.min[0]).then(a.index.cmp(&b.index)));

    let mut overlapping = Vec::new();
    for (n, a) in boxes.iter().enumerate() {
        for b in &boxes[n + 1..] {
            if b.min[0] > a.max[0] {
                break;
            }
            if b.min[1] <= a.max[1] && a.min[1] <= b.max[1] {
                overlapping.push((a.index.min(b.index), a.index.max(b.index)));
            }
        }
    }
    overlapping.par_sort_unstable();

    overlapping
        .into_par_iter()
        .filter_map(|(i, j)| {
            let c = cpa(&scenario.uavs[i].trajectory, &scenario.uavs[j].trajectory);
            (c.miss <= radius).then_some(CandidatePair { i, j, cpa: c })
        })
        .collect()
}

/// Every pair `(i < j)` with its CPA, no filtering. Reference for tests.
pub fn all_pairs(scenario: &Scenario) -> Vec<CandidatePair> {
    let n = scenario.n_uav();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let c = cpa(&scenario.uavs[i].trajectory, &scenario.uavs[j].trajectory);
            out.push(CandidatePair { i, j, cpa: c });
        }
    }
    out
}
