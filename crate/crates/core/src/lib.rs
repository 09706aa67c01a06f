//! Simulation and fitting toolkit for femtosecond-laser-triggered electron
//! emission from a nanometer field-emission tip.
//!
//! The crate models two emission channels driven by a carrier-resolved
//! two-pulse laser field at the tip apex:
//!
//! * n-photon absorption followed by over-the-barrier emission, with a rate
//!   proportional to `(F cos θ)^2n`;
//! * photo-assisted Fowler-Nordheim tunneling through the barrier thinned by
//!   the combined DC and optical fields.
//!
//! On top of the rate models it provides time-integrated yield scans over
//! pump-probe delay, average laser power, polarization angle, and tip
//! voltage ([`scan`]), Poisson count synthesis for detector statistics, and
//! the fitting procedures used to analyse such scans ([`analysis`]): a
//! non-negative power-series decomposition in laser intensity, single
//! power-law exponent extraction, and Fowler-Nordheim I-V regression for the
//! tip radius.
//!
//! All internal computation is in SI units. Electronvolts, nanometers,
//! femtoseconds and the like appear only at API boundaries with explicit
//! conversions ([`constants`], [`config`]).

pub mod analysis;
pub mod config;
pub mod constants;
pub mod emission;
pub mod pulse;
pub mod scan;
pub mod tip;
pub mod trace;

pub use config::RunConfig;
pub use emission::{EmissionModel, FowlerNordheimChannel, MultiphotonChannel};
pub use pulse::{BeamCalibration, LaserPulseSpec, PulsePair};
pub use scan::{IntegrationParams, ScanAxis, ScanSpec};
pub use tip::TipConfig;
pub use trace::Trace;
