use std::f64::consts::PI;

use rand::Rng;

use super::SimError;
use crate::distributions::{sample_airframe, sample_speed, UavCategory, AF_MAX, CATEGORIES};
use crate::geometry::UavProfile;
use crate::rng::{substream, Domain};

/// Straight, constant-speed flight leg starting at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    start: [f64; 2],
    end: [f64; 2],
    speed: f64,
    velocity: [f64; 2],
    duration: f64,
}

impl Trajectory {
    pub fn new(start: [f64; 2], end: [f64; 2], speed: f64) -> Result<Self, SimError> {
        let dx = end[0] - start[0];
        let dy = end[1] - start[1];
        let len = dx.hypot(dy);
        if !(len > 0.0 && len.is_finite()) {
            return Err(SimError::DegenerateTrajectory);
        }
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(SimError::InvalidSpeed(speed));
        }
        Ok(Self {
            start,
            end,
            speed,
            velocity: [speed * dx / len, speed * dy / len],
            duration: len / speed,
        })
    }

    pub fn start(&self) -> [f64; 2] {
        self.start
    }

    pub fn end(&self) -> [f64; 2] {
        self.end
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn velocity(&self) -> [f64; 2] {
        self.velocity
    }

    pub fn heading(&self) -> f64 {
        self.velocity[1].atan2(self.velocity[0])
    }

    /// Flight time, s.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Position at time `t`, clamped to the leg.
    pub fn position(&self, t: f64) -> [f64; 2] {
        let t = t.clamp(0.0, self.duration);
        [
            self.start[0] + self.velocity[0] * t,
            self.start[1] + self.velocity[1] * t,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Uav {
    pub profile: UavProfile,
    pub trajectory: Trajectory,
}

/// One population of simultaneously departing UAVs in a square area.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub area_side: f64,
    pub density: f64,
    pub seed: u64,
    pub uavs: Vec<Uav>,
}

impl Scenario {
    pub fn n_uav(&self) -> usize {
        self.uavs.len()
    }

    pub fn flight_seconds(&self) -> f64 {
        self.uavs.iter().map(|u| u.trajectory.duration()).sum()
    }

    pub fn max_speed(&self) -> f64 {
        self.uavs
            .iter()
            .map(|u| u.trajectory.speed())
            .fold(0.0, f64::max)
    }
}

/// `round(density * area_km2)`, rejecting populations without a single pair.
pub fn uav_count(density: f64, area_km2: f64) -> Result<usize, SimError> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(SimError::InvalidDensity(density));
    }
    if !(area_km2 > 0.0 && area_km2.is_finite()) {
        return Err(SimError::InvalidArea(area_km2));
    }
    let n = (density * area_km2).round();
    if n < 2.0 {
        return Err(SimError::TooFewUavs { density, area_km2 });
    }
    Ok(n as usize)
}

/// Side of the square with the given area, m.
pub fn area_side_m(area_km2: f64) -> f64 {
    (area_km2 * 1e6).sqrt()
}

/// Draws the per-aircraft attributes that do not depend on geometry:
/// category, airspeed and airframe.
pub fn sample_attributes<R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<(UavCategory, f64, f64), SimError> {
    let category = CATEGORIES[rng.random_range(0..CATEGORIES.len())];
    let speed = sample_speed(&category.speed_model(), rng)?;
    let airframe = sample_airframe(AF_MAX, rng);
    Ok((category, speed, airframe))
}

/// Draws a free-standing profile with a uniformly random heading, used when
/// sampling separation radii outside a scenario.
pub fn sample_profile<R: Rng + ?Sized>(
    gps_sigma: f64,
    rng: &mut R,
) -> Result<UavProfile, SimError> {
    let (category, speed, airframe) = sample_attributes(rng)?;
    let heading = rng.random_range(-PI..PI);
    Ok(UavProfile::new(
        airframe, gps_sigma, category, speed, heading,
    )?)
}

fn sample_uav(side: f64, gps_sigma: f64, seed: u64, k: usize) -> Result<Uav, SimError> {
    let mut rng = substream(seed, Domain::Uav, k as u64, 0);
    let point = |rng: &mut rand_chacha::ChaCha8Rng| {
        [rng.random::<f64>() * side, rng.random::<f64>() * side]
    };
    let start = point(&mut rng);
    let mut end = point(&mut rng);
    while end == start {
        end = point(&mut rng);
    }
    let (category, speed, airframe) = sample_attributes(&mut rng)?;
    let trajectory = Trajectory::new(start, end, speed)?;
    let profile = UavProfile::new(airframe, gps_sigma, category, speed, trajectory.heading())?;
    Ok(Uav {
        profile,
        trajectory,
    })
}

/// Generates `round(density * area_km2)` UAVs. UAV `k` reads only its own
/// stream, so its draws do not depend on the population size.
pub fn generate_scenario(
    density: f64,
    area_km2: f64,
    gps_sigma: f64,
    seed: u64,
) -> Result<Scenario, SimError> {
    let n = uav_count(density, area_km2)?;
    let side = area_side_m(area_km2);
    let uavs = (0..n)
        .map(|k| sample_uav(side, gps_sigma, seed, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Scenario {
        area_side: side,
        density,
        seed,
        uavs,
    })
}
