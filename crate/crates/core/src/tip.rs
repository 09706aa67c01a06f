//! Tip electrostatics and barrier model: DC extraction field, Schottky
//! lowering of the workfunction, minimum photon number for over-the-barrier
//! emission, and the Keldysh parameter.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::{
    angular_frequency, ev_to_joule, ELECTRON_MASS, ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TipError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("enhancement factor must be >= 1, got {0}")]
    EnhancementBelowOne(f64),
    #[error("voltage must be finite, got {0}")]
    InvalidVoltage(f64),
    #[error(
        "barrier fully suppressed: Schottky lowering {lowering_ev:.3} eV exceeds the \
         workfunction {workfunction_ev:.3} eV (model outside validity)"
    )]
    BarrierSuppressed {
        workfunction_ev: f64,
        lowering_ev: f64,
    },
    #[error("Keldysh parameter undefined for zero laser field")]
    ZeroLaserField,
    #[error(transparent)]
    Constants(#[from] crate::constants::ConstantsError),
}

fn require_positive(name: &'static str, value: f64) -> Result<(), TipError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(TipError::NonPositive { name, value })
    }
}

/// Tip material and electrostatic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipConfig {
    /// Workfunction φ (eV).
    pub workfunction_ev: f64,
    /// Apex radius r (m).
    pub radius: f64,
    /// Geometry factor k in F_DC = |V|/(k r), dimensionless.
    pub geometry_factor: f64,
    /// Applied tip voltage V (V); negative for electron-emission bias.
    pub voltage: f64,
    /// Optical field enhancement ℓ at the apex (lightning effect), ≥ 1.
    pub enhancement: f64,
}

/// Paper-anchored defaults: φ = 4.5 eV (mid-range tungsten), k = 5; radius
/// and voltage still have to be chosen per run.
pub const DEFAULT_WORKFUNCTION_EV: f64 = 4.5;
pub const DEFAULT_GEOMETRY_FACTOR: f64 = 5.0;

impl TipConfig {
    pub fn new(
        workfunction_ev: f64,
        radius: f64,
        geometry_factor: f64,
        voltage: f64,
        enhancement: f64,
    ) -> Result<Self, TipError> {
        require_positive("workfunction_ev", workfunction_ev)?;
        require_positive("radius", radius)?;
        require_positive("geometry_factor", geometry_factor)?;
        if !voltage.is_finite() {
            return Err(TipError::InvalidVoltage(voltage));
        }
        if !(enhancement >= 1.0) || !enhancement.is_finite() {
            return Err(TipError::EnhancementBelowOne(enhancement));
        }
        Ok(Self {
            workfunction_ev,
            radius,
            geometry_factor,
            voltage,
            enhancement,
        })
    }

    /// Same tip at a different applied voltage.
    pub fn with_voltage(&self, voltage: f64) -> Result<Self, TipError> {
        Self::new(
            self.workfunction_ev,
            self.radius,
            self.geometry_factor,
            voltage,
            self.enhancement,
        )
    }

    /// Magnitude of the DC extraction field F_DC = |V|/(k r) (V/m).
    pub fn dc_field(&self) -> f64 {
        self.voltage.abs() / (self.geometry_factor * self.radius)
    }

    /// Schottky-lowered effective workfunction at this tip's DC field (eV).
    pub fn effective_workfunction_ev(&self) -> Result<f64, TipError> {
        effective_workfunction(self.workfunction_ev, self.dc_field())
    }
}

/// Schottky effect: φ_eff = φ - sqrt(e F_DC / 4πε₀), in eV.
///
/// Errors when the lowering reaches or exceeds the full workfunction; the
/// barrier model is meaningless past that point.
pub fn effective_workfunction(phi_ev: f64, f_dc: f64) -> Result<f64, TipError> {
    require_positive("workfunction_ev", phi_ev)?;
    if !(f_dc >= 0.0) || !f_dc.is_finite() {
        return Err(TipError::NonPositive {
            name: "dc_field",
            value: f_dc,
        });
    }
    let lowering_ev = (ELEMENTARY_CHARGE * f_dc / (4.0 * PI * VACUUM_PERMITTIVITY)).sqrt();
    let phi_eff = phi_ev - lowering_ev;
    if phi_eff <= 0.0 {
        return Err(TipError::BarrierSuppressed {
            workfunction_ev: phi_ev,
            lowering_ev,
        });
    }
    Ok(phi_eff)
}

/// Smallest n with n·E_photon strictly greater than the effective barrier.
pub fn min_photon_number(phi_eff_ev: f64, photon_ev: f64) -> Result<u32, TipError> {
    require_positive("phi_eff_ev", phi_eff_ev)?;
    require_positive("photon_ev", photon_ev)?;
    Ok((phi_eff_ev / photon_ev).floor() as u32 + 1)
}

/// Keldysh parameter γ = ω sqrt(2 m φ_eff) / (e F_laser) for a metal
/// surface, with the Schottky-lowered workfunction standing in for φ.
pub fn keldysh(phi_eff_ev: f64, wavelength: f64, f_laser: f64) -> Result<f64, TipError> {
    require_positive("phi_eff_ev", phi_eff_ev)?;
    if !(f_laser > 0.0) || !f_laser.is_finite() {
        return Err(TipError::ZeroLaserField);
    }
    let omega = angular_frequency(wavelength)?;
    let phi_j = ev_to_joule(phi_eff_ev);
    Ok(omega * (2.0 * ELECTRON_MASS * phi_j).sqrt() / (ELEMENTARY_CHARGE * f_laser))
}

/// Multiphoton/tunneling crossover band conventionally quoted for nanotip
/// experiments in this field regime.
pub const CROSSOVER_BAND: (f64, f64) = (3.0, 4.0);

/// Keldysh evaluation with context: the bare-field value, the value at the
/// enhanced field ℓ·F, and a note when the bare value falls outside the
/// conventional 3-4 crossover band.
#[derive(Debug, Clone, PartialEq)]
pub struct KeldyshReport {
    /// γ from the formula at the bare laser field.
    pub gamma: f64,
    /// γ at the enhanced field ℓ·F_laser.
    pub gamma_enhanced: f64,
    /// Enhancement range (ℓ_low, ℓ_high) that would place γ inside
    /// [`CROSSOVER_BAND`].
    pub implied_enhancement: (f64, f64),
    /// Present when the bare-field γ lies outside the crossover band.
    pub note: Option<String>,
}

/// Evaluate γ at a bare field and at ℓ·F, and flag the mismatch with the
/// 3-4 crossover band when there is one. The formula value is never
/// adjusted; the note only documents what enhancement would reconcile it.
pub fn keldysh_report(
    phi_eff_ev: f64,
    wavelength: f64,
    f_laser: f64,
    enhancement: f64,
) -> Result<KeldyshReport, TipError> {
    if !(enhancement >= 1.0) || !enhancement.is_finite() {
        return Err(TipError::EnhancementBelowOne(enhancement));
    }
    let gamma = keldysh(phi_eff_ev, wavelength, f_laser)?;
    let gamma_enhanced = gamma / enhancement;
    let (lo, hi) = CROSSOVER_BAND;
    let implied_enhancement = (gamma / hi, gamma / lo);
    let note = if gamma < lo || gamma > hi {
        Some(format!(
            "Keldysh parameter at the bare laser field is {gamma:.1}, outside the 3-4 \
             multiphoton/tunneling crossover band quoted for this operating regime; \
             matching that band would require an effective field enhancement of about \
             {:.1}-{:.1} (got l = {enhancement}). The formula value is reported unmodified.",
            implied_enhancement.0, implied_enhancement.1
        ))
    } else {
        None
    };
    Ok(KeldyshReport {
        gamma,
        gamma_enhanced,
        implied_enhancement,
        note,
    })
}
