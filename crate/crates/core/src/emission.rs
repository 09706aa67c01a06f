//! Instantaneous emission-rate models: n-photon over-the-barrier emission
//! and photo-assisted Fowler-Nordheim tunneling, composable into a
//! multi-channel model.
//!
//! All rates are in arbitrary units. The overall proportionality constants
//! of both mechanisms are not fixed by the physics used here, so each
//! channel carries its own scalar weight and cross-mechanism ratios are a
//! model input.

use thiserror::Error;

use crate::tip::TipConfig;

/// Sanity cap on the multiphoton order (observed fits stop at n = 5;
/// above-threshold photoemission channels slightly above that are allowed).
pub const MAX_MULTIPHOTON_ORDER: u32 = 8;

/// Standard Fowler-Nordheim exponent constant 4 sqrt(2 mₑ e)/(3 ħ)
/// ≈ 6.831×10⁹, in V·m⁻¹·eV^(-3/2): the tunneling exponent is
/// `C₀ φ^{3/2} / F` with φ in eV and F in V/m. Literal because `sqrt` is
/// not const; the unit test pins it to the defining expression.
pub const FN_EXPONENT_CONSTANT: f64 = 6_830_889_630.418_658;

/// Reference field for the dimensionless envelope-intensity scale handed to
/// the tunneling channels: scale = |envelope|²/REF². 1 GV/m keeps the scale
/// near unity at typical operating fields.
pub const INTENSITY_REFERENCE_FIELD: f64 = 1.0e9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmissionError {
    #[error("multiphoton order {0} exceeds the cap {MAX_MULTIPHOTON_ORDER}")]
    OrderTooHigh(u32),
    #[error("channel coefficient must be non-negative and finite, got {0}")]
    InvalidCoefficient(f64),
    #[error("Fowler-Nordheim constant C0 must be strictly positive, got {0}")]
    InvalidC0(f64),
    #[error(
        "tunneling channel with {photons} photons absorbed leaves no residual barrier \
         ({photons} x {photon_ev:.4} eV >= workfunction {phi_ev:.4} eV); that regime \
         belongs to a multiphoton channel"
    )]
    NoResidualBarrier {
        photons: u32,
        photon_ev: f64,
        phi_ev: f64,
    },
    #[error("polarization angle must lie in [0, pi], got {0}")]
    AngleOutOfRange(f64),
    #[error("photon energy must be strictly positive, got {0} eV")]
    InvalidPhotonEnergy(f64),
    #[error("an emission model needs at least one channel")]
    NoChannels,
}

/// One n-photon over-the-barrier channel: rate = cₙ (F cos θ)^{2n}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiphotonChannel {
    /// Photon order n ≥ 0.
    pub order: u32,
    /// Weight cₙ ≥ 0; scales field^{2n} with the field in V/m.
    pub coefficient: f64,
}

impl MultiphotonChannel {
    pub fn new(order: u32, coefficient: f64) -> Result<Self, EmissionError> {
        if order > MAX_MULTIPHOTON_ORDER {
            return Err(EmissionError::OrderTooHigh(order));
        }
        if !(coefficient >= 0.0) || !coefficient.is_finite() {
            return Err(EmissionError::InvalidCoefficient(coefficient));
        }
        Ok(Self { order, coefficient })
    }
}

/// One photo-assisted Fowler-Nordheim channel: n photons are absorbed first,
/// the electron then tunnels through the residual barrier φ - nħω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FowlerNordheimChannel {
    /// Photons absorbed before tunneling, n ≥ 0 (0 is plain DC field
    /// emission).
    pub photons_absorbed: u32,
    /// Scale of aₙ ≥ 0; the excited-state population also carries the
    /// intensity power Iⁿ at evaluation time.
    pub weight: f64,
    /// Exponent constant C₀ (V·m⁻¹·eV^(-3/2)).
    pub c0_constant: f64,
}

impl FowlerNordheimChannel {
    pub fn new(photons_absorbed: u32, weight: f64, c0_constant: f64) -> Result<Self, EmissionError> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(EmissionError::InvalidCoefficient(weight));
        }
        if !(c0_constant > 0.0) || !c0_constant.is_finite() {
            return Err(EmissionError::InvalidC0(c0_constant));
        }
        Ok(Self {
            photons_absorbed,
            weight,
            c0_constant,
        })
    }

    /// Channel with the standard exponent constant.
    pub fn with_default_c0(photons_absorbed: u32, weight: f64) -> Result<Self, EmissionError> {
        Self::new(photons_absorbed, weight, FN_EXPONENT_CONSTANT)
    }

    /// Residual barrier φ - nħω (eV); must stay positive for the channel to
    /// make sense.
    pub fn residual_barrier_ev(&self, phi_ev: f64, photon_ev: f64) -> f64 {
        phi_ev - self.photons_absorbed as f64 * photon_ev
    }
}

/// A full emission model: channel lists, polarization geometry, tip state,
/// and the photon energy that fixes the tunneling residual barriers.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionModel {
    pub multiphoton: Vec<MultiphotonChannel>,
    pub tunneling: Vec<FowlerNordheimChannel>,
    /// Angle θ between the laser polarization and the tip axis, in [0, π].
    pub polarization_angle: f64,
    pub tip: TipConfig,
    /// Photon energy ħω (eV).
    pub photon_energy_ev: f64,
}

impl EmissionModel {
    pub fn new(
        multiphoton: Vec<MultiphotonChannel>,
        tunneling: Vec<FowlerNordheimChannel>,
        polarization_angle: f64,
        tip: TipConfig,
        photon_energy_ev: f64,
    ) -> Result<Self, EmissionError> {
        if multiphoton.is_empty() && tunneling.is_empty() {
            return Err(EmissionError::NoChannels);
        }
        if !(0.0..=std::f64::consts::PI).contains(&polarization_angle) {
            return Err(EmissionError::AngleOutOfRange(polarization_angle));
        }
        if !(photon_energy_ev > 0.0) || !photon_energy_ev.is_finite() {
            return Err(EmissionError::InvalidPhotonEnergy(photon_energy_ev));
        }
        for ch in &tunneling {
            if ch.residual_barrier_ev(tip.workfunction_ev, photon_energy_ev) <= 0.0 {
                return Err(EmissionError::NoResidualBarrier {
                    photons: ch.photons_absorbed,
                    photon_ev: photon_energy_ev,
                    phi_ev: tip.workfunction_ev,
                });
            }
        }
        Ok(Self {
            multiphoton,
            tunneling,
            polarization_angle,
            tip,
            photon_energy_ev,
        })
    }

    /// Same model with a different polarization angle.
    pub fn with_polarization(&self, angle: f64) -> Result<Self, EmissionError> {
        Self::new(
            self.multiphoton.clone(),
            self.tunneling.clone(),
            angle,
            self.tip,
            self.photon_energy_ev,
        )
    }

    /// Same model with a different tip state.
    pub fn with_tip(&self, tip: TipConfig) -> Result<Self, EmissionError> {
        Self::new(
            self.multiphoton.clone(),
            self.tunneling.clone(),
            self.polarization_angle,
            tip,
            self.photon_energy_ev,
        )
    }

    /// Same model with multiphoton orders below `n_min` removed. Returns
    /// `None` when nothing is left (no channel can emit).
    pub fn rethresholded(&self, n_min: u32) -> Option<Self> {
        let multiphoton: Vec<_> = self
            .multiphoton
            .iter()
            .copied()
            .filter(|ch| ch.order >= n_min)
            .collect();
        if multiphoton.is_empty() && self.tunneling.is_empty() {
            return None;
        }
        Some(Self {
            multiphoton,
            tunneling: self.tunneling.clone(),
            polarization_angle: self.polarization_angle,
            tip: self.tip,
            photon_energy_ev: self.photon_energy_ev,
        })
    }

    /// Sum of every channel's instantaneous rate at a signed laser field
    /// (V/m) and a dimensionless envelope-intensity scale (see
    /// [`INTENSITY_REFERENCE_FIELD`]).
    pub fn total_rate(&self, f_laser: f64, intensity_scale: f64) -> f64 {
        let mut rate = 0.0;
        for ch in &self.multiphoton {
            rate += multiphoton_rate(ch, f_laser, self.polarization_angle);
        }
        for ch in &self.tunneling {
            rate += fowler_nordheim_rate(ch, f_laser, self, intensity_scale);
        }
        rate
    }
}

/// n-photon absorption rate cₙ (F cos θ)^{2n}; the even power makes the
/// carrier sign irrelevant.
pub fn multiphoton_rate(ch: &MultiphotonChannel, f_laser: f64, theta: f64) -> f64 {
    ch.coefficient * (f_laser * theta.cos()).powi(2 * ch.order as i32)
}

/// Photo-assisted Fowler-Nordheim rate
/// `aₙ Iⁿ F_tot² / (φ - nħω) · exp(-C₀ (φ - nħω)^{3/2} / F_tot)` with
/// `F_tot = F_DC + ℓ F_laser cos θ`, and 0 whenever F_tot ≤ 0 (no
/// barrier-thinning field, no tunneling).
pub fn fowler_nordheim_rate(
    ch: &FowlerNordheimChannel,
    f_laser: f64,
    model: &EmissionModel,
    intensity_scale: f64,
) -> f64 {
    let f_tot = model.tip.dc_field()
        + model.tip.enhancement * f_laser * model.polarization_angle.cos();
    if f_tot <= 0.0 {
        return 0.0;
    }
    let residual =
        ch.residual_barrier_ev(model.tip.workfunction_ev, model.photon_energy_ev);
    let population = ch.weight * intensity_scale.powi(ch.photons_absorbed as i32);
    population * f_tot * f_tot / residual
        * (-ch.c0_constant * residual.powf(1.5) / f_tot).exp()
}
