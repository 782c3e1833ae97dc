use thiserror::Error;

/// A radio technology usable for UAV-to-UAV broadcast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadcastProfile {
    /// CLI key.
    pub key: &'static str,
    pub technology: &'static str,
    pub range_m: f64,
    /// Shortest broadcast interval, s.
    pub dt_com: f64,
    /// Longest broadcast interval, s. Equal to `dt_com` unless the technology
    /// advertises a range of rates.
    pub dt_com_max: f64,
}

pub const PROFILES: [BroadcastProfile; 6] = [
    BroadcastProfile {
        key: "bluetooth-le",
        technology: "Bluetooth LE",
        range_m: 50.0,
        dt_com: 0.010,
        dt_com_max: 0.010,
    },
    BroadcastProfile {
        key: "bluetooth",
        technology: "Bluetooth",
        range_m: 100.0,
        dt_com: 0.010,
        dt_com_max: 0.010,
    },
    BroadcastProfile {
        key: "lora",
        technology: "LoRa",
        range_m: 10_000.0,
        dt_com: 5.0,
        dt_com_max: 5.0,
    },
    BroadcastProfile {
        key: "flarm",
        technology: "FLARM",
        range_m: 10_000.0,
        dt_com: 3.0,
        dt_com_max: 3.0,
    },
    BroadcastProfile {
        key: "wifi-ssid",
        technology: "Wi-Fi SSID",
        range_m: 1_000.0,
        dt_com: 0.016,
        dt_com_max: 0.016,
    },
    BroadcastProfile {
        key: "5g-sidelink",
        technology: "5G NR Sidelink",
        range_m: 1_000.0,
        dt_com: 0.000_125,
        dt_com_max: 0.001,
    },
];

impl BroadcastProfile {
    pub fn lookup(key: &str) -> Option<&'static BroadcastProfile> {
        let key = key.trim().to_ascii_lowercase();
        PROFILES.iter().find(|p| p.key == key)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("interval {name} = {value} s must be positive")]
pub struct IntervalError {
    pub name: &'static str,
    pub value: f64,
}

/// Staleness of a received position: the slower of the localization update
/// and the broadcast.
pub fn effective_interval(loc_dt: f64, com_dt: f64) -> Result<f64, IntervalError> {
    for (name, value) in [("loc_dt", loc_dt), ("com_dt", com_dt)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(IntervalError { name, value });
        }
    }
    Ok(loc_dt.max(com_dt))
}
