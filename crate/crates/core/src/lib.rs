//! UAV near mid-air collision (uNMAC) volumes, extended Remote ID formats and
//! a Monte Carlo conflict simulator.
//!
//! - [`distributions`]: densities and samplers of the uNMAC components.
//! - [`geometry`]: pairwise uNMAC and MAC radii per broadcast format.
//! - [`remote_id`]: binary broadcast records and radio interval profiles.
//! - [`flightsim`]: density sweeps counting conflicts per flight hour.
//! - [`cli`]: the `unmac` command-line front end.

pub mod cli;
pub mod distributions;
pub mod flightsim;
pub mod geometry;
pub mod quadrature;
pub mod remote_id;
pub mod rng;
