//! Chirped Gaussian laser pulses, the two-pulse pump-probe field, and the
//! average-power → peak-field calibration.
//!
//! A single pulse is `F₀ exp(-a t²) cos(b t² + ω t)`, so the *intensity*
//! envelope is `exp(-2 a t²)` and `a = 2 ln2 / t²` for an intensity FWHM of
//! `t`. The carrier-envelope phase is fixed at zero for both pulses.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::{angular_frequency, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};

/// Lowest time-bandwidth product of a Gaussian pulse (2 ln2/π, to the three
/// digits used when quoting measured TBPs).
pub const GAUSSIAN_TBP_LIMIT: f64 = 0.441;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("peak field must be non-negative and finite, got {0}")]
    InvalidPeakField(f64),
    #[error("chirp must be finite, got {0}")]
    InvalidChirp(f64),
    #[error(
        "time-bandwidth product {0} is below the Gaussian transform limit {GAUSSIAN_TBP_LIMIT}"
    )]
    SubTransformLimit(f64),
    #[error("pump ({0} m) and probe ({1} m) wavelengths differ; both pulses come from one oscillator")]
    WavelengthMismatch(f64, f64),
    #[error("delay must be finite, got {0}")]
    InvalidDelay(f64),
}

fn require_positive(name: &'static str, value: f64) -> Result<(), PulseError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PulseError::NonPositive { name, value })
    }
}

/// Gaussian envelope parameter `a = 2 ln2 / t²` (s⁻²) for an intensity FWHM
/// `t`, so that `exp(-2 a t'²)` has full width `t` at half maximum.
pub fn envelope_param_from_fwhm(fwhm_duration: f64) -> Result<f64, PulseError> {
    require_positive("fwhm_duration", fwhm_duration)?;
    Ok(2.0 * std::f64::consts::LN_2 / (fwhm_duration * fwhm_duration))
}

/// Linear chirp parameter `b = a sqrt((TBP/0.441)² - 1)` (s⁻²) of a Gaussian
/// pulse with the given intensity FWHM and measured time-bandwidth product.
pub fn chirp_from_tbp(fwhm_duration: f64, time_bandwidth_product: f64) -> Result<f64, PulseError> {
    let a = envelope_param_from_fwhm(fwhm_duration)?;
    if !(time_bandwidth_product >= GAUSSIAN_TBP_LIMIT) {
        return Err(PulseError::SubTransformLimit(time_bandwidth_product));
    }
    let ratio = time_bandwidth_product / GAUSSIAN_TBP_LIMIT;
    Ok(a * (ratio * ratio - 1.0).sqrt())
}

/// Beam parameters needed to convert an average-power reading into a peak
/// field at the focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamCalibration {
    /// Average laser power P_avg (W).
    pub average_power: f64,
    /// Pulse repetition rate f_rep (Hz).
    pub repetition_rate: f64,
    /// Focal spot intensity FWHM d (m).
    pub focus_fwhm: f64,
}

impl BeamCalibration {
    pub fn new(
        average_power: f64,
        repetition_rate: f64,
        focus_fwhm: f64,
    ) -> Result<Self, PulseError> {
        require_positive("average_power", average_power)?;
        require_positive("repetition_rate", repetition_rate)?;
        require_positive("focus_fwhm", focus_fwhm)?;
        Ok(Self {
            average_power,
            repetition_rate,
            focus_fwhm,
        })
    }
}

/// Peak field (V/m) of a Gaussian pulse train from its average power:
/// `sqrt(16 P / (f d² t ε₀ c (π/ln2)^{3/2}))`.
///
/// The prefactor evaluates to ≈ 25 in SI units, which is the usual
/// back-of-envelope form `25 sqrt(P/(f d² t))`.
pub fn peak_field_from_power(
    cal: &BeamCalibration,
    fwhm_duration: f64,
) -> Result<f64, PulseError> {
    require_positive("fwhm_duration", fwhm_duration)?;
    let geometry = (PI / std::f64::consts::LN_2).powf(1.5);
    let denom = cal.repetition_rate
        * cal.focus_fwhm
        * cal.focus_fwhm
        * fwhm_duration
        * VACUUM_PERMITTIVITY
        * SPEED_OF_LIGHT
        * geometry;
    Ok((16.0 * cal.average_power / denom).sqrt())
}

/// One chirped Gaussian pulse: `F₀ exp(-a t²) cos(b t² + ω t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserPulseSpec {
    /// Peak field F₀ (V/m), ≥ 0.
    pub peak_field: f64,
    /// Carrier vacuum wavelength (m).
    pub wavelength: f64,
    /// Intensity FWHM (s).
    pub fwhm_duration: f64,
    /// Linear chirp b (s⁻²).
    pub chirp: f64,
    /// Envelope parameter a = 2 ln2 / fwhm² (s⁻²), cached.
    envelope_param: f64,
    /// Carrier angular frequency ω = 2πc/λ (rad/s), cached.
    angular_frequency: f64,
}

impl LaserPulseSpec {
    pub fn new(
        peak_field: f64,
        wavelength: f64,
        fwhm_duration: f64,
        chirp: f64,
    ) -> Result<Self, PulseError> {
        if !(peak_field >= 0.0) || !peak_field.is_finite() {
            return Err(PulseError::InvalidPeakField(peak_field));
        }
        if !chirp.is_finite() {
            return Err(PulseError::InvalidChirp(chirp));
        }
        require_positive("wavelength", wavelength)?;
        let envelope_param = envelope_param_from_fwhm(fwhm_duration)?;
        let angular_frequency =
            angular_frequency(wavelength).expect("wavelength validated above");
        Ok(Self {
            peak_field,
            wavelength,
            fwhm_duration,
            chirp,
            envelope_param,
            angular_frequency,
        })
    }

    /// Envelope parameter a (s⁻²).
    pub fn envelope_param(&self) -> f64 {
        self.envelope_param
    }

    /// Carrier angular frequency ω (rad/s).
    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    /// Same pulse with a different peak field.
    pub fn with_peak_field(&self, peak_field: f64) -> Result<Self, PulseError> {
        Self::new(peak_field, self.wavelength, self.fwhm_duration, self.chirp)
    }

    /// Field envelope `F₀ exp(-a u²)` at local time u (s from the envelope
    /// peak), V/m.
    fn envelope(&self, u: f64) -> f64 {
        self.peak_field * (-self.envelope_param * u * u).exp()
    }

    /// Carrier phase `b u² + ω u` at local time u.
    fn phase(&self, u: f64) -> f64 {
        (self.chirp * u + self.angular_frequency) * u
    }
}

/// Pump and probe pulses from one oscillator with a relative delay.
///
/// Sign convention: a positive `delay` makes the probe arrive later; its
/// envelope peaks at `t = delay` while the pump peaks at `t = 0`. For equal
/// pulses the sampled field at delay τ equals the field at delay -τ with
/// `t → t - τ`, so all time-integrated yields are symmetric in the delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulsePair {
    pub pump: LaserPulseSpec,
    pub probe: LaserPulseSpec,
    /// Pump-probe delay τ (s), any sign; 0 means exact overlap.
    pub delay: f64,
}

/// Instantaneous field together with the slowly-varying envelope intensity,
/// evaluated in one pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Carrier-resolved field (V/m, signed).
    pub field: f64,
    /// Squared magnitude of the complex two-pulse envelope ((V/m)²); for a
    /// single pulse this peaks at F₀².
    pub envelope_intensity: f64,
}

impl PulsePair {
    pub fn new(
        pump: LaserPulseSpec,
        probe: LaserPulseSpec,
        delay: f64,
    ) -> Result<Self, PulseError> {
        if pump.wavelength != probe.wavelength {
            return Err(PulseError::WavelengthMismatch(
                pump.wavelength,
                probe.wavelength,
            ));
        }
        if !delay.is_finite() {
            return Err(PulseError::InvalidDelay(delay));
        }
        Ok(Self { pump, probe, delay })
    }

    /// Two copies of one pulse at the given delay.
    pub fn identical(pulse: LaserPulseSpec, delay: f64) -> Result<Self, PulseError> {
        Self::new(pulse, pulse, delay)
    }

    /// Pump alone (probe field zeroed), for single-pulse references.
    pub fn single(pulse: LaserPulseSpec) -> Self {
        let dark = LaserPulseSpec::new(0.0, pulse.wavelength, pulse.fwhm_duration, pulse.chirp)
            .expect("zero field is valid");
        Self {
            pump: pulse,
            probe: dark,
            delay: 0.0,
        }
    }

    /// Same pair at a different delay.
    pub fn at_delay(&self, delay: f64) -> Result<Self, PulseError> {
        Self::new(self.pump, self.probe, delay)
    }

    /// Widest intensity FWHM of the two pulses (s).
    pub fn max_fwhm(&self) -> f64 {
        self.pump.fwhm_duration.max(self.probe.fwhm_duration)
    }

    /// Carrier optical period (s).
    pub fn optical_period(&self) -> f64 {
        2.0 * PI / self.pump.angular_frequency
    }

    /// Instantaneous superposed field at time t (V/m):
    /// `F₀₁ exp(-a₁t²) cos(b₁t² + ωt) + F₀₂ exp(-a₂u²) cos(b₂u² + ωu)` with
    /// `u = t - delay`.
    pub fn field_at(&self, t: f64) -> f64 {
        let u = t - self.delay;
        self.pump.envelope(t) * self.pump.phase(t).cos()
            + self.probe.envelope(u) * self.probe.phase(u).cos()
    }

    /// Squared magnitude of the complex (analytic-signal) envelope at time t,
    /// (V/m)². Carries the delay-dependent interference of the two pulses but
    /// not the optical cycle itself.
    pub fn envelope_intensity_at(&self, t: f64) -> f64 {
        self.sample(t).envelope_intensity
    }

    /// Field and envelope intensity in one pass (shares the exp/trig calls).
    pub fn sample(&self, t: f64) -> FieldSample {
        let u = t - self.delay;
        let env1 = self.pump.envelope(t);
        let env2 = self.probe.envelope(u);
        let (sin1, cos1) = self.pump.phase(t).sin_cos();
        let (sin2, cos2) = self.probe.phase(u).sin_cos();
        let re = env1 * cos1 + env2 * cos2;
        let im = env1 * sin1 + env2 * sin2;
        FieldSample {
            field: re,
            envelope_intensity: re * re + im * im,
        }
    }
}
