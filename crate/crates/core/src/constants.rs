//! Physical constants and photon/carrier conversions shared by all modules.
//!
//! Values are the 2019 SI exact definitions where one exists (c, e, h) and
//! CODATA 2018 otherwise (ε₀, mₑ). They are fixed at compile time and not
//! user-configurable.

use std::f64::consts::PI;

use thiserror::Error;

/// Speed of light in vacuum (m/s, exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity ε₀ (F/m, CODATA 2018).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Elementary charge (C, exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass (kg, CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Planck constant (J·s, exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant ħ = h/2π (J·s).
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// One electronvolt in joules (exact, equals the elementary charge).
pub const ELECTRONVOLT: f64 = 1.602_176_634e-19;

/// The fixed constant set, bundled for reporting (`constants` subcommand).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// m/s
    pub speed_of_light: f64,
    /// F/m
    pub vacuum_permittivity: f64,
    /// C
    pub elementary_charge: f64,
    /// kg
    pub electron_mass: f64,
    /// J·s
    pub reduced_planck: f64,
    /// J per eV
    pub electronvolt: f64,
}

/// The one and only constant set in use.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    speed_of_light: SPEED_OF_LIGHT,
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    elementary_charge: ELEMENTARY_CHARGE,
    electron_mass: ELECTRON_MASS,
    reduced_planck: REDUCED_PLANCK,
    electronvolt: ELECTRONVOLT,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstantsError {
    #[error("wavelength must be strictly positive, got {0} m")]
    NonPositiveWavelength(f64),
}

/// Photon energy hc/λ in eV for a vacuum wavelength in meters.
pub fn photon_energy_ev(wavelength_m: f64) -> Result<f64, ConstantsError> {
    if !(wavelength_m > 0.0) {
        return Err(ConstantsError::NonPositiveWavelength(wavelength_m));
    }
    Ok(PLANCK * SPEED_OF_LIGHT / wavelength_m / ELECTRONVOLT)
}

/// Angular carrier frequency ω = 2πc/λ in rad/s for a wavelength in meters.
pub fn angular_frequency(wavelength_m: f64) -> Result<f64, ConstantsError> {
    if !(wavelength_m > 0.0) {
        return Err(ConstantsError::NonPositiveWavelength(wavelength_m));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT / wavelength_m)
}

/// Optical period 2π/ω = λ/c in seconds.
pub fn optical_period(wavelength_m: f64) -> Result<f64, ConstantsError> {
    if !(wavelength_m > 0.0) {
        return Err(ConstantsError::NonPositiveWavelength(wavelength_m));
    }
    Ok(wavelength_m / SPEED_OF_LIGHT)
}

/// Energy conversion eV → J.
pub fn ev_to_joule(energy_ev: f64) -> f64 {
    energy_ev * ELECTRONVOLT
}

/// Energy conversion J → eV.
pub fn joule_to_ev(energy_j: f64) -> f64 {
    energy_j / ELECTRONVOLT
}
