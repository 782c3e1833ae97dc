//! Pairwise uNMAC and MAC radii.
//!
//! The uNMAC diameter for UAVs `i` and `j` is
//!
//! ```text
//! d = AF_i + AF_j + 2 (eps_i + eps_j) + mobility
//! ```
//!
//! where `mobility` is `2 (V_i + V_j) dt` when only speeds are known and
//! `|v_i - v_j| dt` when the broadcast also carries the heading. Which of the
//! terms use true values and which use worst-case bounds depends on the
//! [`MessageFormat`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{sample_half_normal, UavCategory, AF_MAX};

/// Per-UAV localization bound assumed when the broadcast carries no error
/// estimate, m.
pub const EPS_UPPER_BOUND: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("airframe diameter {0} m outside (0, {AF_MAX}]")]
    Airframe(f64),
    #[error("gps sigma {0} m must be positive")]
    GpsSigma(f64),
    #[error("speed {0} m/s must be positive")]
    Speed(f64),
    #[error("heading {0} is not finite")]
    Heading(f64),
    #[error("unknown message format '{0}'")]
    UnknownFormat(String),
}

/// Ground truth for one aircraft.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavProfile {
    airframe_diameter: f64,
    gps_sigma: f64,
    category: UavCategory,
    speed: f64,
    heading: f64,
}

impl UavProfile {
    pub fn new(
        airframe_diameter: f64,
        gps_sigma: f64,
        category: UavCategory,
        speed: f64,
        heading: f64,
    ) -> Result<Self, GeometryError> {
        if !(airframe_diameter > 0.0 && airframe_diameter <= AF_MAX) {
            return Err(GeometryError::Airframe(airframe_diameter));
        }
        if !(gps_sigma > 0.0 && gps_sigma.is_finite()) {
            return Err(GeometryError::GpsSigma(gps_sigma));
        }
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(GeometryError::Speed(speed));
        }
        if !heading.is_finite() {
            return Err(GeometryError::Heading(heading));
        }
        Ok(Self {
            airframe_diameter,
            gps_sigma,
            category,
            speed,
            heading,
        })
    }

    pub fn airframe_diameter(&self) -> f64 {
        self.airframe_diameter
    }

    pub fn gps_sigma(&self) -> f64 {
        self.gps_sigma
    }

    pub fn category(&self) -> UavCategory {
        self.category
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Course over ground, radians counter-clockwise from east.
    pub fn heading(&self) -> f64 {
        self.heading
    }

    pub fn velocity(&self) -> [f64; 2] {
        [
            self.speed * self.heading.cos(),
            self.speed * self.heading.sin(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfPolicy {
    Max,
    Actual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocPolicy {
    UpperBound,
    Reported,
    /// Localization error is not part of the volume (MAC baseline).
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobilityPolicy {
    SpeedOnly,
    SpeedAndDirection,
    None,
}

/// Broadcast content, which decides what the receiver may assume about the
/// sender.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MessageFormat {
    #[serde(rename = "standard-remote-id")]
    StandardRemoteId,
    #[serde(rename = "candidate-1")]
    Candidate1,
    #[serde(rename = "candidate-2")]
    Candidate2,
    #[serde(rename = "candidate-3")]
    Candidate3,
    #[serde(rename = "perfect-knowledge")]
    PerfectKnowledge,
}

impl MessageFormat {
    pub const ALL: [MessageFormat; 5] = [
        MessageFormat::StandardRemoteId,
        MessageFormat::Candidate1,
        MessageFormat::Candidate2,
        MessageFormat::Candidate3,
        MessageFormat::PerfectKnowledge,
    ];

    pub fn af_policy(self) -> AfPolicy {
        match self {
            Self::StandardRemoteId | Self::Candidate1 => AfPolicy::Max,
            Self::Candidate2 | Self::Candidate3 | Self::PerfectKnowledge => AfPolicy::Actual,
        }
    }

    pub fn loc_policy(self) -> LocPolicy {
        match self {
            Self::StandardRemoteId => LocPolicy::UpperBound,
            Self::Candidate1 | Self::Candidate2 | Self::Candidate3 => LocPolicy::Reported,
            Self::PerfectKnowledge => LocPolicy::Zero,
        }
    }

    pub fn mobility_policy(self) -> MobilityPolicy {
        match self {
            Self::StandardRemoteId | Self::Candidate1 | Self::Candidate2 => {
                MobilityPolicy::SpeedOnly
            }
            Self::Candidate3 => MobilityPolicy::SpeedAndDirection,
            Self::PerfectKnowledge => MobilityPolicy::None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::StandardRemoteId => "standard-remote-id",
            Self::Candidate1 => "candidate-1",
            Self::Candidate2 => "candidate-2",
            Self::Candidate3 => "candidate-3",
            Self::PerfectKnowledge => "perfect-knowledge",
        }
    }

    /// Position in the safety ordering, smallest volume first.
    pub fn rank(self) -> usize {
        match self {
            Self::PerfectKnowledge => 0,
            Self::Candidate3 => 1,
            Self::Candidate2 => 2,
            Self::Candidate1 => 3,
            Self::StandardRemoteId => 4,
        }
    }
}

impl fmt::Display for MessageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MessageFormat {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "standard-remote-id" | "standard" | "remote-id" | "rid" => Ok(Self::StandardRemoteId),
            "candidate-1" | "candidate1" | "c1" => Ok(Self::Candidate1),
            "candidate-2" | "candidate2" | "c2" => Ok(Self::Candidate2),
            "candidate-3" | "candidate3" | "c3" => Ok(Self::Candidate3),
            "perfect-knowledge" | "perfect" | "mac" => Ok(Self::PerfectKnowledge),
            _ => Err(GeometryError::UnknownFormat(s.to_string())),
        }
    }
}

/// How a candidate format's reported localization error is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsMode {
    /// Instantaneous error magnitude drawn from `HalfNormal(sigma)`.
    #[default]
    Sampled,
    /// Conservative constant `3 sigma`.
    #[serde(rename = "fixed_3sigma")]
    Fixed3Sigma,
}

impl EpsMode {
    pub fn reported_eps<R: Rng + ?Sized>(self, profile: &UavProfile, rng: &mut R) -> f64 {
        match self {
            EpsMode::Sampled => sample_half_normal(profile.gps_sigma(), rng),
            EpsMode::Fixed3Sigma => 3.0 * profile.gps_sigma(),
        }
    }
}

impl FromStr for EpsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "sampled" => Ok(Self::Sampled),
            "fixed_3sigma" | "fixed" => Ok(Self::Fixed3Sigma),
            _ => Err(format!(
                "unknown eps mode '{s}' (expected sampled or fixed_3sigma)"
            )),
        }
    }
}

impl fmt::Display for EpsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsMode::Sampled => "sampled",
            EpsMode::Fixed3Sigma => "fixed_3sigma",
        })
    }
}

/// The effective terms entering the uNMAC diameter for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyBudget {
    pub eps_i: f64,
    pub eps_j: f64,
    pub af_i: f64,
    pub af_j: f64,
    pub mobility_term: f64,
    pub dt: f64,
}

impl UncertaintyBudget {
    /// Applies the format's policies to a pair. `reported_eps` is what each
    /// UAV would broadcast as its localization error.
    pub fn for_pair(
        pair: (&UavProfile, &UavProfile),
        reported_eps: (f64, f64),
        dt: f64,
        format: MessageFormat,
    ) -> Self {
        let (ui, uj) = pair;
        let (af_i, af_j) = match format.af_policy() {
            AfPolicy::Max => (AF_MAX, AF_MAX),
            AfPolicy::Actual => (ui.airframe_diameter, uj.airframe_diameter),
        };
        let (eps_i, eps_j) = match format.loc_policy() {
            LocPolicy::UpperBound => (EPS_UPPER_BOUND, EPS_UPPER_BOUND),
            LocPolicy::Reported => reported_eps,
            LocPolicy::Zero => (0.0, 0.0),
        };
        let mobility_term = match format.mobility_policy() {
            MobilityPolicy::SpeedOnly => 2.0 * (ui.speed + uj.speed) * dt,
            MobilityPolicy::SpeedAndDirection => relative_speed(ui, uj) * dt,
            MobilityPolicy::None => 0.0,
        };
        Self {
            eps_i,
            eps_j,
            af_i,
            af_j,
            mobility_term,
            dt,
        }
    }

    /// The worst case used to prefilter trajectory pairs: maximum airframe,
    /// the 40 m localization bound and the given speed for both aircraft.
    pub fn worst_case(v_max: f64, dt: f64) -> Self {
        Self {
            eps_i: EPS_UPPER_BOUND,
            eps_j: EPS_UPPER_BOUND,
            af_i: AF_MAX,
            af_j: AF_MAX,
            mobility_term: 2.0 * (v_max + v_max) * dt,
            dt,
        }
    }

    pub fn diameter(&self) -> f64 {
        self.af_i + self.af_j + 2.0 * (self.eps_i + self.eps_j) + self.mobility_term
    }
}

/// `|v_i - v_j|` from the true velocity vectors.
pub fn relative_speed(ui: &UavProfile, uj: &UavProfile) -> f64 {
    let [ax, ay] = ui.velocity();
    let [bx, by] = uj.velocity();
    (ax - bx).hypot(ay - by)
}

/// Diameter of one UAV's uncertainty area given its localization bound `eps`.
/// With unknown direction the UAV may have moved `V dt` either way; with
/// known direction only forward.
pub fn uncertainty_diameter(profile: &UavProfile, eps: f64, dt: f64, direction_known: bool) -> f64 {
    let travel = profile.speed * dt;
    if direction_known {
        profile.airframe_diameter + 2.0 * eps + travel
    } else {
        profile.airframe_diameter + 2.0 * (eps + travel)
    }
}

/// Pairwise uNMAC diameter under `format`.
pub fn unmac_diameter(
    pair: (&UavProfile, &UavProfile),
    reported_eps: (f64, f64),
    dt: f64,
    format: MessageFormat,
) -> f64 {
    UncertaintyBudget::for_pair(pair, reported_eps, dt, format).diameter()
}

pub fn r_unmac(d_unmac: f64) -> f64 {
    d_unmac / 2.0
}

pub fn r_mac(d_af_i: f64, d_af_j: f64) -> f64 {
    (d_af_i + d_af_j) / 2.0
}

/// Range `[a, a + dt (V_i + V_j)]` of the direction-aware separation radius,
/// with `a = r_MAC + eps_i + eps_j`.
pub fn direction_known_bounds(
    pair: (&UavProfile, &UavProfile),
    eps: (f64, f64),
    dt: f64,
) -> (f64, f64) {
    let (ui, uj) = pair;
    let a = r_mac(ui.airframe_diameter, uj.airframe_diameter) + eps.0 + eps.1;
    (a, a + dt * (ui.speed + uj.speed))
}
