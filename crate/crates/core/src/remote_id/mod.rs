//! Remote ID broadcast records, standard and extended, with their
//! fixed-layout binary encoding and the broadcast-interval profiles of the
//! radio technologies that can carry them.

mod profiles;
mod wire;

pub use profiles::{effective_interval, BroadcastProfile, IntervalError, PROFILES};
pub use wire::{decode, encode, encoded_len, CodecError, Field};

use crate::geometry::MessageFormat;

/// Fixed-point scale of positions, altitudes and extension lengths: 1 cm.
pub const CM_PER_M: f64 = 100.0;
/// Fixed-point scale of headings: 1e-4 rad.
pub const HEADING_UNITS_PER_RAD: f64 = 10_000.0;
/// Exclusive upper bound of the heading field (`2 pi` at 1e-4 rad).
pub const HEADING_LIMIT: u32 = 62_832;
/// Largest airframe size on the wire, cm.
pub const AF_SIZE_MAX_CM: u16 = 750;

/// One Remote ID broadcast. Extension fields must be present exactly when
/// the format carries them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemoteIdMessage {
    pub format: MessageFormat,
    pub uav_id: [u8; 20],
    /// Local-plane east/north position, cm.
    pub position_cm: (i32, i32),
    pub altitude_cm: i32,
    pub speed_cm_s: u16,
    pub emergency: bool,
    /// Milliseconds since the scenario epoch.
    pub time_mark_ms: u32,
    /// Control station east/north/altitude, cm.
    pub control_station_cm: (i32, i32, i32),
    /// Airframe size, cm (Candidates 2 and 3).
    pub af_size_cm: Option<u16>,
    /// Reported localization error, cm (Candidates 1, 2 and 3).
    pub loc_error_cm: Option<u16>,
    /// Course, 1e-4 rad in `[0, 2 pi)` (Candidate 3).
    pub heading: Option<u32>,
}

/// Which extension fields a format carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extensions {
    pub af_size: bool,
    pub loc_error: bool,
    pub heading: bool,
}

impl Extensions {
    pub fn of(format: MessageFormat) -> Option<Self> {
        let (af_size, loc_error, heading) = match format {
            MessageFormat::StandardRemoteId => (false, false, false),
            MessageFormat::Candidate1 => (false, true, false),
            MessageFormat::Candidate2 => (true, true, false),
            MessageFormat::Candidate3 => (true, true, true),
            MessageFormat::PerfectKnowledge => return None,
        };
        Some(Self {
            af_size,
            loc_error,
            heading,
        })
    }
}

impl RemoteIdMessage {
    /// A message of `format` with zeroed standard fields and zeroed (but
    /// valid) extensions.
    pub fn empty(format: MessageFormat) -> Self {
        let ext = Extensions::of(format).unwrap_or(Extensions {
            af_size: false,
            loc_error: false,
            heading: false,
        });
        Self {
            format,
            uav_id: [0; 20],
            position_cm: (0, 0),
            altitude_cm: 0,
            speed_cm_s: 0,
            emergency: false,
            time_mark_ms: 0,
            control_station_cm: (0, 0, 0),
            af_size_cm: ext.af_size.then_some(1),
            loc_error_cm: ext.loc_error.then_some(0),
            heading: ext.heading.then_some(0),
        }
    }
}

/// Meters to centimeters with round-half-away-from-zero; saturates at the
/// `i32` range.
pub fn meters_to_cm(m: f64) -> i32 {
    (m * CM_PER_M).round() as i32
}

pub fn cm_to_meters(cm: i32) -> f64 {
    f64::from(cm) / CM_PER_M
}

/// Heading in radians to wire units, wrapped into `[0, 2 pi)`.
pub fn heading_to_wire(rad: f64) -> u32 {
    let units = (rad.rem_euclid(std::f64::consts::TAU) * HEADING_UNITS_PER_RAD).round() as u32;
    if units >= HEADING_LIMIT {
        0
    } else {
        units
    }
}
