use std::io;

use serde::{Deserialize, Serialize};

use crate::geometry::MessageFormat;

/// One line of the stats CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub lambda: f64,
    pub format: MessageFormat,
    pub dt: f64,
    pub conflicts: u64,
    pub macs: u64,
    pub flight_hours: f64,
    /// Conflicts per flight hour.
    pub rate: f64,
}

impl StatsRow {
    pub fn new(
        lambda: f64,
        format: MessageFormat,
        dt: f64,
        conflicts: u64,
        macs: u64,
        flight_hours: f64,
    ) -> Self {
        let per_hour = |n: u64| {
            if flight_hours > 0.0 {
                n as f64 / flight_hours
            } else {
                0.0
            }
        };
        Self {
            lambda,
            format,
            dt,
            conflicts,
            macs,
            flight_hours,
            rate: per_hour(conflicts),
        }
    }

    pub fn mac_rate(&self) -> f64 {
        if self.flight_hours > 0.0 {
            self.macs as f64 / self.flight_hours
        } else {
            0.0
        }
    }
}

/// Conflict and collision counts for a density sweep.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConflictStats {
    pub rows: Vec<StatsRow>,
}

impl ConflictStats {
    pub fn row(&self, lambda: f64, format: MessageFormat, dt: f64) -> Option<&StatsRow> {
        self.rows
            .iter()
            .find(|r| r.lambda == lambda && r.format == format && r.dt == dt)
    }

    /// Conflict rate divided by MAC rate.
    pub fn inflation(&self, lambda: f64, format: MessageFormat, dt: f64) -> Option<f64> {
        let r = self.row(lambda, format, dt)?;
        (r.macs > 0).then(|| r.conflicts as f64 / r.macs as f64)
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        write_rows(w, &self.rows, true)
    }

    pub fn read_csv<R: io::Read>(r: R) -> csv::Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let rows = reader
            .deserialize()
            .collect::<csv::Result<Vec<StatsRow>>>()?;
        Ok(Self { rows })
    }
}

/// Writes rows with or without the header line.
pub fn write_rows<W: io::Write>(w: W, rows: &[StatsRow], header: bool) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(w);
    for r in rows {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}
