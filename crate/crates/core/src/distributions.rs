//! Densities, samplers and reference tables for the components of the uNMAC
//! radius: airframe size, GPS localization error and mobility over one
//! broadcast interval.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use thiserror::Error;

use crate::quadrature::{self, QuadratureError, DEFAULT_REL_TOL};

/// Largest airframe diameter in the UAV population, m.
pub const AF_MAX: f64 = 7.5;

/// Width of the integration window in standard deviations above the mean.
pub const TAIL_SIGMAS: f64 = 12.0;

/// Resampling attempts allowed in [`sample_speed`].
pub const SPEED_RETRY_CAP: u32 = 100;

/// Bisection stops once the bracket is narrower than this, m.
pub const QUANTILE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("argument {value} outside the support of the {density} density")]
    OutsideSupport { density: &'static str, value: f64 },
    #[error("probability {0} not in (0, 1)")]
    InvalidProbability(f64),
    #[error("quantile search did not converge for p = {p}")]
    QuantileNonConvergence { p: f64 },
    #[error("speed resampling exhausted {SPEED_RETRY_CAP} attempts")]
    RetryCapExhausted,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, DistError>;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(DistError::InvalidParameter { name, value })
    }
}

// ---------------------------------------------------------------------------
// Reference tables
// ---------------------------------------------------------------------------

/// A GPS positioning accuracy class given by its 3-sigma horizontal error.
#[derive(Debug, Clone, PartialEq)]
pub struct GpsAccuracyStandard {
    pub name: String,
    three_sigma: f64,
}

impl GpsAccuracyStandard {
    /// Table rows as `(cli key, label, 3-sigma in m)`.
    pub const TABLE: [(&'static str, &'static str, f64); 4] = [
        ("zero-aod", "Normal Operations at Zero AOD", 5.7),
        ("all-aods", "Normal Operations over all AODs", 10.5),
        ("any-aod", "Normal Operations at Any AOD", 13.85),
        ("worst-case", "Worst case, during Normal Operations", 30.0),
    ];

    pub fn new(name: impl Into<String>, three_sigma: f64) -> Result<Self> {
        positive("three_sigma", three_sigma)?;
        Ok(Self {
            name: name.into(),
            three_sigma,
        })
    }

    /// Builds a custom standard from a 1-sigma value.
    pub fn from_sigma(sigma: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        Self::new(format!("custom sigma={sigma}"), 3.0 * sigma)
    }

    /// Looks up a table row by key (`zero-aod`, `all-aods`, `any-aod`, `worst-case`).
    pub fn lookup(key: &str) -> Option<Self> {
        Self::TABLE
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|(_, label, ts)| Self {
                name: (*label).to_string(),
                three_sigma: *ts,
            })
    }

    pub fn zero_aod() -> Self {
        Self::lookup("zero-aod").expect("table row")
    }

    pub fn three_sigma(&self) -> f64 {
        self.three_sigma
    }

    pub fn sigma(&self) -> f64 {
        self.three_sigma / 3.0
    }
}

/// Representative UAV speed category.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavCategory {
    pub index: u8,
    /// Mean cruise speed, m/s.
    pub v_cruise: f64,
    /// Maximum airspeed, m/s.
    pub v_max: f64,
    /// Maximum gross takeoff weight interval, kg.
    pub mgtow_range: (f64, f64),
}

pub const CATEGORIES: [UavCategory; 4] = [
    UavCategory {
        index: 1,
        v_cruise: 12.9,
        v_max: 20.6,
        mgtow_range: (0.0, 1.8),
    },
    UavCategory {
        index: 2,
        v_cruise: 10.3,
        v_max: 15.4,
        mgtow_range: (0.0, 9.0),
    },
    UavCategory {
        index: 3,
        v_cruise: 15.4,
        v_max: 30.7,
        mgtow_range: (0.0, 9.0),
    },
    UavCategory {
        index: 4,
        v_cruise: 30.7,
        v_max: 51.5,
        mgtow_range: (9.0, 25.0),
    },
];

impl UavCategory {
    /// Category by 1-based index.
    pub fn get(index: u8) -> Option<Self> {
        CATEGORIES.get(usize::from(index).wrapping_sub(1)).copied()
    }

    pub fn speed_model(&self) -> SpeedModel {
        SpeedModel::from_category(self)
    }
}

/// Gaussian airspeed model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedModel {
    pub mu_v: f64,
    pub sigma_v: f64,
}

impl SpeedModel {
    pub fn new(mu_v: f64, sigma_v: f64) -> Result<Self> {
        if !(mu_v >= 0.0 && mu_v.is_finite()) {
            return Err(DistError::InvalidParameter {
                name: "mu_v",
                value: mu_v,
            });
        }
        positive("sigma_v", sigma_v)?;
        Ok(Self { mu_v, sigma_v })
    }

    pub fn from_category(cat: &UavCategory) -> Self {
        Self {
            mu_v: cat.v_cruise,
            sigma_v: (cat.v_max - cat.v_cruise) / 3.0,
        }
    }

    /// Upper truncation bound used by [`sample_speed`].
    pub fn speed_cap(&self) -> f64 {
        1.1 * (self.mu_v + 3.0 * self.sigma_v)
    }
}

/// Standard deviation of the airspeed: one third of the cruise-to-max gap.
pub fn speed_sigma(v_cruise: f64, v_max: f64) -> Result<f64> {
    if !(v_cruise >= 0.0 && v_cruise.is_finite()) {
        return Err(DistError::InvalidParameter {
            name: "v_cruise",
            value: v_cruise,
        });
    }
    if !(v_max > v_cruise && v_max.is_finite()) {
        return Err(DistError::InvalidParameter {
            name: "v_max",
            value: v_max,
        });
    }
    Ok((v_max - v_cruise) / 3.0)
}

// ---------------------------------------------------------------------------
// Localization error
// ---------------------------------------------------------------------------

/// Density of `|X|` for `X ~ N(0, sigma^2)`.
pub fn half_normal_pdf(x: f64, sigma: f64) -> Result<f64> {
    positive("sigma", sigma)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    Ok(SQRT_2 / (sigma * PI.sqrt()) * (-x * x / (2.0 * sigma * sigma)).exp())
}

/// Density of `eps_i + eps_j` for independent half-normal errors.
pub fn sum_half_normal_pdf(x: f64, sigma_i: f64, sigma_j: f64) -> Result<f64> {
    positive("sigma_i", sigma_i)?;
    positive("sigma_j", sigma_j)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    let var = sigma_i * sigma_i + sigma_j * sigma_j;
    let s = var.sqrt();
    let gauss = FRAC_2_PI.sqrt() / s * (-x * x / (2.0 * var)).exp();
    let bracket = libm::erf(sigma_i * x / (SQRT_2 * sigma_j * s))
        + libm::erf(sigma_j * x / (SQRT_2 * sigma_i * s));
    Ok(gauss * bracket)
}

/// Mean of `eps_i + eps_j` in closed form.
pub fn sum_half_normal_mean(sigma_i: f64, sigma_j: f64) -> f64 {
    (sigma_i + sigma_j) * FRAC_2_PI.sqrt()
}

fn sum_half_normal_upper(sigma_i: f64, sigma_j: f64) -> f64 {
    let sd = ((sigma_i * sigma_i + sigma_j * sigma_j) * (1.0 - FRAC_2_PI)).sqrt();
    sum_half_normal_mean(sigma_i, sigma_j) + TAIL_SIGMAS * sd
}

/// CDF of `eps_i + eps_j`, by quadrature of the density.
pub fn sum_half_normal_cdf(x: f64, sigma_i: f64, sigma_j: f64) -> Result<f64> {
    positive("sigma_i", sigma_i)?;
    positive("sigma_j", sigma_j)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let hi = x.min(sum_half_normal_upper(sigma_i, sigma_j));
    let peak = sigma_i.max(sigma_j);
    let breaks = quadrature::breakpoints(0.0, hi, [peak]);
    let v = quadrature::integrate(
        |t| sum_half_normal_pdf(t, sigma_i, sigma_j).unwrap_or(0.0),
        &breaks,
        DEFAULT_REL_TOL,
    )?;
    Ok(v.min(1.0))
}

/// Inverts [`sum_half_normal_cdf`] by bisection.
pub fn sum_half_normal_quantile(p: f64, sigma_i: f64, sigma_j: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DistError::InvalidProbability(p));
    }
    positive("sigma_i", sigma_i)?;
    positive("sigma_j", sigma_j)?;
    let mut lo = 0.0;
    let mut hi = sum_half_normal_upper(sigma_i, sigma_j);
    if sum_half_normal_cdf(hi, sigma_i, sigma_j)? < p {
        return Err(DistError::QuantileNonConvergence { p });
    }
    for _ in 0..200 {
        if hi - lo < QUANTILE_TOL {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if sum_half_normal_cdf(mid, sigma_i, sigma_j)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(DistError::QuantileNonConvergence { p })
}

// ---------------------------------------------------------------------------
// Airframe
// ---------------------------------------------------------------------------

/// Density of `(AF_i + AF_j) / 2` with `AF ~ Uniform(0, af_max]`.
pub fn triangle_af_pdf(x: f64, af_max: f64) -> Result<f64> {
    positive("af_max", af_max)?;
    let norm = af_max * af_max / 4.0;
    Ok(if x > 0.0 && x < af_max / 2.0 {
        x / norm
    } else if x >= af_max / 2.0 && x < af_max {
        (af_max - x) / norm
    } else {
        0.0
    })
}

// ---------------------------------------------------------------------------
// Mobility
// ---------------------------------------------------------------------------

/// Density of `cos(Y)` for `Y ~ Uniform(-pi, pi)` (arcsine law).
pub fn direction_factor_pdf(x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(DistError::OutsideSupport {
            density: "direction factor",
            value: x,
        });
    }
    Ok(1.0 / (PI * (1.0 - x * x).sqrt()))
}

/// Normal law of the pair's combined travel over one interval:
/// mean `dt (mu_i + mu_j)`, variance `dt^2 (sigma_i^2 + sigma_j^2)`.
pub fn mobility_normal(dt: f64, model_i: &SpeedModel, model_j: &SpeedModel) -> (f64, f64) {
    let mean = dt * (model_i.mu_v + model_j.mu_v);
    let sd = dt * (model_i.sigma_v.powi(2) + model_j.sigma_v.powi(2)).sqrt();
    (mean, sd)
}

fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

/// Mass of the signed product `X cos(Y)` on `z >= 0`. `cos(Y)` is symmetric
/// about zero and independent of `X`, so this is exactly one half.
pub const DIRECTION_KNOWN_POSITIVE_MASS: f64 = 0.5;

/// Density of the signed product `Z = X cos(Y)` at `z > 0`, before
/// conditioning on `z >= 0`.
///
/// `f(z) = int f_N(x) f_dir(z/x) / |x| dx` is evaluated after the change of
/// variables `x = +-z cosh(s)`, which removes the inverse-square-root
/// singularity at `|x| = z`:
/// `f(z) = 1/pi int_0^inf [f_N(z cosh s) + f_N(-z cosh s)] ds`.
fn signed_product_pdf(z: f64, mean: f64, sd: f64) -> Result<f64> {
    debug_assert!(z > 0.0);
    let mut total = 0.0;
    // Positive branch x = z cosh s, then negative branch x = -z cosh s,
    // handled as the positive branch of the mirrored normal.
    for m in [mean, -mean] {
        let upper = m + TAIL_SIGMAS * sd;
        if upper <= z {
            continue;
        }
        let s_of = |x: f64| (x / z).max(1.0).acosh();
        let s_hi = s_of(upper);
        let interior = [
            m - 6.0 * sd,
            m - 2.0 * sd,
            m - sd,
            m,
            m + sd,
            m + 2.0 * sd,
            m + 6.0 * sd,
        ]
        .map(|x| if x > z { s_of(x) } else { f64::NAN });
        let breaks = quadrature::breakpoints(0.0, s_hi, interior);
        total += quadrature::integrate(
            |s| normal_pdf(z * s.cosh(), m, sd),
            &breaks,
            DEFAULT_REL_TOL,
        )?;
    }
    Ok(total / PI)
}

/// Density of the mobility-induced expansion of the uNMAC diameter.
///
/// With unknown direction this is the normal law of [`mobility_normal`].
/// With known direction it is the product law of that normal with the
/// direction factor, conditioned on the hazardous side `z >= 0` (mass
/// [`DIRECTION_KNOWN_POSITIVE_MASS`]) and renormalized; it vanishes for
/// `z < 0`. The log singularity at `z = 0` carries weight `f_N(0)` and is
/// evaluated at `z = 1e-300`.
pub fn mobility_expansion_pdf(
    z: f64,
    dt: f64,
    model_i: &SpeedModel,
    model_j: &SpeedModel,
    direction_known: bool,
) -> Result<f64> {
    positive("dt", dt)?;
    let (mean, sd) = mobility_normal(dt, model_i, model_j);
    if !direction_known {
        return Ok(normal_pdf(z, mean, sd));
    }
    if z < 0.0 {
        return Ok(0.0);
    }
    let z = z.max(1e-300);
    Ok(signed_product_pdf(z, mean, sd)? / DIRECTION_KNOWN_POSITIVE_MASS)
}

/// Breakpoints on which the mobility density is smooth, for callers that
/// integrate it.
pub fn mobility_expansion_support(
    dt: f64,
    model_i: &SpeedModel,
    model_j: &SpeedModel,
    direction_known: bool,
) -> Vec<f64> {
    let (mean, sd) = mobility_normal(dt, model_i, model_j);
    let lo = if direction_known {
        0.0
    } else {
        mean - TAIL_SIGMAS * sd
    };
    let hi = mean + TAIL_SIGMAS * sd;
    quadrature::breakpoints(
        lo,
        hi,
        [mean - 3.0 * sd, mean - sd, mean, mean + sd, mean + 3.0 * sd],
    )
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Draws an airspeed from `N(mu_v, sigma_v^2)`, resampling outside
/// `(0, 1.1 (mu_v + 3 sigma_v)]`.
pub fn sample_speed<R: Rng + ?Sized>(model: &SpeedModel, rng: &mut R) -> Result<f64> {
    let normal =
        Normal::new(model.mu_v, model.sigma_v).map_err(|_| DistError::InvalidParameter {
            name: "sigma_v",
            value: model.sigma_v,
        })?;
    let cap = model.speed_cap();
    for _ in 0..SPEED_RETRY_CAP {
        let v = normal.sample(rng);
        if v > 0.0 && v <= cap {
            return Ok(v);
        }
    }
    Err(DistError::RetryCapExhausted)
}

/// Draws `|X|`, `X ~ N(0, sigma^2)`.
pub fn sample_half_normal<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sigma * z.abs()
}

/// Draws from `Uniform(0, af_max]`.
pub fn sample_airframe<R: Rng + ?Sized>(af_max: f64, rng: &mut R) -> f64 {
    // random::<f64>() is in [0, 1), so 1 - u is in (0, 1].
    af_max * (1.0 - rng.random::<f64>())
}

/// Draws `cos(theta)` with `theta ~ Uniform(-pi, pi)`.
pub fn sample_direction_factor<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-PI..PI).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Domain};

    fn cat1() -> SpeedModel {
        CATEGORIES[0].speed_model()
    }

    #[test]
    fn speed_sigma_matches_categories() {
        assert!((speed_sigma(12.9, 20.6).unwrap() - 2.5667).abs() < 1e-4);
        assert!((speed_sigma(30.7, 51.5).unwrap() - 6.9333).abs() < 1e-4);
        assert!(speed_sigma(10.0, 10.0).is_err());
        assert!(speed_sigma(10.0, 9.0).is_err());
    }

    #[test]
    fn gps_table() {
        let g = GpsAccuracyStandard::zero_aod();
        assert_eq!(g.three_sigma(), 5.7);
        assert!((g.sigma() - 1.9).abs() < 1e-15);
        let any = GpsAccuracyStandard::lookup("any-aod").unwrap();
        assert!((any.sigma() - 4.616_666_666_666_667).abs() < 1e-12);
        assert!(GpsAccuracyStandard::lookup("nope").is_none());
        assert!(GpsAccuracyStandard::new("bad", 0.0).is_err());
        assert_eq!(
            GpsAccuracyStandard::from_sigma(2.0).unwrap().three_sigma(),
            6.0
        );
    }

    #[test]
    fn category_lookup() {
        assert_eq!(UavCategory::get(4).unwrap().v_max, 51.5);
        assert!(UavCategory::get(0).is_none());
        assert!(UavCategory::get(5).is_none());
        for c in CATEGORIES {
            assert!(0.0 < c.v_cruise && c.v_cruise < c.v_max);
        }
    }

    #[test]
    fn half_normal_values() {
        // mpmath at 30 digits: 0.79788456080286535588, 0.25470602580962457873
        assert!((half_normal_pdf(0.0, 1.0).unwrap() - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert_eq!(half_normal_pdf(-1.0, 1.0).unwrap(), 0.0);
        assert!((half_normal_pdf(1.9, 1.9).unwrap() - 0.254_706_025_809_624_6).abs() < 1e-15);
        assert!(half_normal_pdf(1.0, 0.0).is_err());
        assert!(half_normal_pdf(1.0, -2.0).is_err());
    }

    #[test]
    fn sum_half_normal_values() {
        assert_eq!(sum_half_normal_pdf(0.0, 1.9, 1.9).unwrap(), 0.0);
        // mpmath: f(3; 1.9, 1.9) = 0.234298938918756933, f(2; 1, 3.5) = 0.201730156419943753
        assert!(
            (sum_half_normal_pdf(3.0, 1.9, 1.9).unwrap() - 0.234_298_938_918_756_9).abs() < 1e-14
        );
        assert!(
            (sum_half_normal_pdf(2.0, 1.0, 3.5).unwrap() - 0.201_730_156_419_943_8).abs() < 1e-14
        );
        assert!(sum_half_normal_pdf(1.0, 0.0, 1.0).is_err());
        assert!(sum_half_normal_pdf(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sum_half_normal_cdf_values() {
        // mpmath: CDF(5; 1.9, 1.9) = 0.87839746445354, CDF(5; 1, 3.5) = 0.76315720771083
        assert!((sum_half_normal_cdf(5.0, 1.9, 1.9).unwrap() - 0.878_397_464_453_543).abs() < 1e-8);
        assert!((sum_half_normal_cdf(5.0, 1.0, 3.5).unwrap() - 0.763_157_207_710_831).abs() < 1e-8);
        assert_eq!(sum_half_normal_cdf(-1.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_values() {
        // mpmath + brentq: 9.352632530643632, 22.725256236809244, median 2.826181543557721
        let q = sum_half_normal_quantile(0.999, 1.9, 1.9).unwrap();
        assert!((q - 9.352_632_530_643_632).abs() < 1e-4, "{q}");
        assert!((q - 9.4).abs() <= 0.2);
        let q = sum_half_normal_quantile(0.999, 13.85 / 3.0, 13.85 / 3.0).unwrap();
        assert!((q - 22.725_256_236_809_244).abs() < 1e-4, "{q}");
        assert!((q - 22.88).abs() <= 0.5);
        let med = sum_half_normal_quantile(0.5, 1.9, 1.9).unwrap();
        assert!((med - 2.826_181_543_557_721).abs() < 1e-4);
        assert!(med < sum_half_normal_mean(1.9, 1.9));
    }

    #[test]
    fn quantile_rejects_bad_probability() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                sum_half_normal_quantile(p, 1.0, 1.0),
                Err(DistError::InvalidProbability(_))
            ));
        }
    }

    #[test]
    fn triangle_values() {
        assert!((triangle_af_pdf(3.75, 7.5).unwrap() - 0.266_666_666_666_666_7).abs() < 1e-15);
        assert_eq!(triangle_af_pdf(8.0, 7.5).unwrap(), 0.0);
        assert_eq!(triangle_af_pdf(0.0, 7.5).unwrap(), 0.0);
        assert_eq!(triangle_af_pdf(-1.0, 7.5).unwrap(), 0.0);
        assert!(triangle_af_pdf(1.0, 0.0).is_err());
    }

    #[test]
    fn direction_values() {
        assert!((direction_factor_pdf(0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        // mpmath: 0.367552596947861366
        assert!((direction_factor_pdf(0.5).unwrap() - 0.367_552_596_947_861_4).abs() < 1e-15);
        assert_eq!(
            direction_factor_pdf(0.3).unwrap(),
            direction_factor_pdf(-0.3).unwrap()
        );
        for x in [1.0, -1.0, 1.5, f64::NAN] {
            assert!(direction_factor_pdf(x).is_err());
        }
    }

    #[test]
    fn mobility_unknown_direction_moments() {
        let (m, _) = mobility_normal(1.0, &cat1(), &cat1());
        assert!((m - 25.8).abs() < 1e-12);
        let (m, _) = mobility_normal(0.02, &cat1(), &cat1());
        assert!((m - 0.516).abs() < 1e-12);
        assert!(mobility_expansion_pdf(1.0, 0.0, &cat1(), &cat1(), false).is_err());
        assert!(mobility_expansion_pdf(1.0, -1.0, &cat1(), &cat1(), true).is_err());
    }

    #[test]
    fn mobility_known_direction_value() {
        // mpmath cosh-form quadrature: unconditioned f(10) = 0.0138374779336385
        let f = mobility_expansion_pdf(10.0, 1.0, &cat1(), &cat1(), true).unwrap();
        assert!((f - 2.0 * 0.013_837_477_933_638_54).abs() < 1e-9, "{f}");
        assert_eq!(
            mobility_expansion_pdf(-1.0, 1.0, &cat1(), &cat1(), true).unwrap(),
            0.0
        );
        assert!(mobility_expansion_pdf(0.0, 1.0, &cat1(), &cat1(), true)
            .unwrap()
            .is_finite());
    }

    #[test]
    fn speed_sampler_truncation() {
        let model = cat1();
        let mut rng = substream(1, Domain::Sample, 0, 0);
        for _ in 0..10_000 {
            let v = sample_speed(&model, &mut rng).unwrap();
            assert!(v > 0.0 && v <= 22.7, "{v}");
        }
        let tight = SpeedModel::new(12.9, 1e-4).unwrap();
        let v = sample_speed(&tight, &mut rng).unwrap();
        assert!((v - 12.9).abs() < 1e-2);
    }

    #[test]
    fn speed_sampler_reports_cap_exhaustion() {
        // Mean far below zero: every draw is rejected.
        let model = SpeedModel {
            mu_v: -1000.0,
            sigma_v: 1.0,
        };
        let mut rng = substream(1, Domain::Sample, 0, 1);
        assert_eq!(
            sample_speed(&model, &mut rng),
            Err(DistError::RetryCapExhausted)
        );
    }

    #[test]
    fn airframe_sampler_support() {
        let mut rng = substream(2, Domain::Sample, 0, 0);
        for _ in 0..10_000 {
            let a = sample_airframe(AF_MAX, &mut rng);
            assert!(a > 0.0 && a <= AF_MAX);
        }
    }
}
