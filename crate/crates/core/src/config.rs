//! Declarative run configuration: the JSON schema behind `simulate`.
//!
//! Keys carry their units (`wavelength_nm`, `fwhm_fs`, `voltage_v`, ...) so
//! no unit is ever implicit at the process boundary; values convert to SI
//! the moment a config is built into domain objects. Unknown keys are
//! rejected, and every validation message names the offending field.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use crate::constants::photon_energy_ev;
use crate::emission::{
    EmissionModel, FowlerNordheimChannel, MultiphotonChannel, FN_EXPONENT_CONSTANT,
};
use crate::pulse::{
    chirp_from_tbp, peak_field_from_power, BeamCalibration, LaserPulseSpec, PulsePair,
};
use crate::scan::{IntegrationParams, NoiseSpec, ScanAxis, ScanSpec};
use crate::tip::TipConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// JSON syntax/Shape errors; serde_json's message is line-anchored.
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Top-level run description. One config runs exactly one scan.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Free-form scenario label, echoed in logs.
    pub scenario: String,
    pub pulse: PulseBlock,
    pub beam: BeamBlock,
    pub tip: TipBlock,
    pub model: ModelBlock,
    pub scan: ScanBlock,
    #[serde(default)]
    pub integration: IntegrationBlock,
    /// Path the trace CSV is written to.
    pub output: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseBlock {
    pub wavelength_nm: f64,
    pub fwhm_fs: f64,
    /// Measured time-bandwidth product; sets the linear chirp. Mutually
    /// exclusive with `chirp_per_s2`.
    pub time_bandwidth_product: Option<f64>,
    /// Linear chirp b (s⁻²) given directly. Default 0 (transform-limited).
    pub chirp_per_s2: Option<f64>,
    /// Average pump power (mW). Zero turns the pump off.
    pub pump_power_mw: f64,
    /// Average probe power (mW); omitted or zero means single-pulse runs.
    #[serde(default)]
    pub probe_power_mw: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamBlock {
    pub repetition_rate_mhz: f64,
    pub focus_fwhm_um: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TipBlock {
    /// Workfunction (eV); tungsten mid-range by default.
    #[serde(default = "default_workfunction")]
    pub workfunction_ev: f64,
    pub radius_nm: f64,
    #[serde(default = "default_geometry_factor")]
    pub geometry_factor: f64,
    pub voltage_v: f64,
    /// Optical field enhancement ℓ, ≥ 1.
    #[serde(default = "default_enhancement")]
    pub field_enhancement: f64,
}

fn default_workfunction() -> f64 {
    crate::tip::DEFAULT_WORKFUNCTION_EV
}

fn default_geometry_factor() -> f64 {
    crate::tip::DEFAULT_GEOMETRY_FACTOR
}

fn default_enhancement() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    /// Angle between laser polarization and tip axis (degrees).
    #[serde(default)]
    pub polarization_angle_deg: f64,
    #[serde(default)]
    pub multiphoton: Vec<MultiphotonChannelBlock>,
    #[serde(default)]
    pub tunneling: Vec<TunnelingChannelBlock>,
    /// Fowler-Nordheim exponent constant C₀ (V·m⁻¹·eV^(-3/2)); the standard
    /// value unless overridden.
    pub fn_c0: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiphotonChannelBlock {
    pub order: u32,
    /// Weight cₙ; multiplies (F cosθ)^{2n} with F in V/m.
    pub coefficient: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelingChannelBlock {
    pub photons_absorbed: u32,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    Delay,
    Power,
    Polarization,
    Voltage,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    pub axis: AxisName,
    /// Delay grid (fs); required when axis = "delay".
    pub delay_fs: Option<GridBlock>,
    /// Power grid (mW); required when axis = "power".
    pub power_mw: Option<GridBlock>,
    /// Polarization grid (degrees); required when axis = "polarization".
    pub angle_deg: Option<GridBlock>,
    /// Voltage grid (V); required when axis = "voltage".
    pub voltage_v: Option<GridBlock>,
    /// Logarithmic grid spacing; power axis only.
    #[serde(default)]
    pub log_spacing: bool,
    pub noise: Option<NoiseBlock>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    pub seed: u64,
    /// Detector gain: expected counts per unit yield.
    pub counts_per_yield: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationBlock {
    #[serde(default = "default_samples_per_cycle")]
    pub samples_per_cycle: u32,
    #[serde(default = "default_window_halfwidth")]
    pub window_halfwidth_fwhm: f64,
}

fn default_samples_per_cycle() -> u32 {
    IntegrationParams::default().samples_per_optical_cycle
}

fn default_window_halfwidth() -> f64 {
    IntegrationParams::default().window_halfwidth_fwhm
}

impl Default for IntegrationBlock {
    fn default() -> Self {
        Self {
            samples_per_cycle: default_samples_per_cycle(),
            window_halfwidth_fwhm: default_window_halfwidth(),
        }
    }
}

/// A config turned into runnable domain objects.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub scenario: String,
    pub spec: ScanSpec,
    pub output: PathBuf,
}

const NM: f64 = 1e-9;
const UM: f64 = 1e-6;
const FS: f64 = 1e-15;
const MW: f64 = 1e-3;
const MHZ: f64 = 1e6;

impl RunConfig {
    /// Parse without validating physics. Syntax and schema errors carry
    /// serde_json's line/column anchor.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validate every block against its target module's invariants and
    /// assemble the scan. All errors name the config field they came from.
    pub fn build(&self) -> Result<PreparedRun, ConfigError> {
        if self.scenario.trim().is_empty() {
            return Err(invalid("scenario", "must not be empty"));
        }
        if self.output.trim().is_empty() {
            return Err(invalid("output", "must not be empty"));
        }

        let wavelength = positive(self.pulse.wavelength_nm, "pulse.wavelength_nm")? * NM;
        let fwhm = positive(self.pulse.fwhm_fs, "pulse.fwhm_fs")? * FS;
        let chirp = match (self.pulse.time_bandwidth_product, self.pulse.chirp_per_s2) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "pulse.time_bandwidth_product",
                    "give either a time-bandwidth product or chirp_per_s2, not both",
                ));
            }
            (Some(tbp), None) => chirp_from_tbp(fwhm, tbp)
                .map_err(|e| invalid("pulse.time_bandwidth_product", e.to_string()))?,
            (None, Some(b)) => b,
            (None, None) => 0.0,
        };

        let rep_rate =
            positive(self.beam.repetition_rate_mhz, "beam.repetition_rate_mhz")? * MHZ;
        let focus = positive(self.beam.focus_fwhm_um, "beam.focus_fwhm_um")? * UM;

        let pump_field = field_for_power(
            self.pulse.pump_power_mw,
            "pulse.pump_power_mw",
            rep_rate,
            focus,
            fwhm,
        )?;
        let probe_field = field_for_power(
            self.pulse.probe_power_mw,
            "pulse.probe_power_mw",
            rep_rate,
            focus,
            fwhm,
        )?;
        let pump = LaserPulseSpec::new(pump_field, wavelength, fwhm, chirp)
            .map_err(|e| invalid("pulse", e.to_string()))?;
        let probe = LaserPulseSpec::new(probe_field, wavelength, fwhm, chirp)
            .map_err(|e| invalid("pulse", e.to_string()))?;
        let pair = PulsePair::new(pump, probe, 0.0)
            .map_err(|e| invalid("pulse", e.to_string()))?;

        // The calibration template carries rep rate and focus for power
        // scans (which override the power per point); a dark pump leaves a
        // 1 mW placeholder in the unused power slot.
        let cal_power = if self.pulse.pump_power_mw > 0.0 {
            self.pulse.pump_power_mw * MW
        } else {
            1.0 * MW
        };
        let calibration = BeamCalibration::new(cal_power, rep_rate, focus)
            .map_err(|e| invalid("beam", e.to_string()))?;

        let tip = TipConfig::new(
            self.tip.workfunction_ev,
            positive(self.tip.radius_nm, "tip.radius_nm")? * NM,
            self.tip.geometry_factor,
            self.tip.voltage_v,
            self.tip.field_enhancement,
        )
        .map_err(|e| invalid("tip", e.to_string()))?;

        let photon_ev = photon_energy_ev(wavelength)
            .map_err(|e| invalid("pulse.wavelength_nm", e.to_string()))?;
        let c0 = match self.model.fn_c0 {
            Some(c0) if c0 > 0.0 && c0.is_finite() => c0,
            Some(c0) => {
                return Err(invalid(
                    "model.fn_c0",
                    format!("must be strictly positive, got {c0}"),
                ))
            }
            None => FN_EXPONENT_CONSTANT,
        };
        let multiphoton = self
            .model
            .multiphoton
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                MultiphotonChannel::new(ch.order, ch.coefficient)
                    .map_err(|e| invalid(&format!("model.multiphoton[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tunneling = self
            .model
            .tunneling
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                FowlerNordheimChannel::new(ch.photons_absorbed, ch.weight, c0)
                    .map_err(|e| invalid(&format!("model.tunneling[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let model = EmissionModel::new(
            multiphoton,
            tunneling,
            self.model.polarization_angle_deg.to_radians(),
            tip,
            photon_ev,
        )
        .map_err(|e| invalid("model", e.to_string()))?;

        let (axis, grid) = self.scan_grid()?;
        let noise = match &self.scan.noise {
            Some(n) => {
                if !(n.counts_per_yield > 0.0) || !n.counts_per_yield.is_finite() {
                    return Err(invalid(
                        "scan.noise.counts_per_yield",
                        format!("must be strictly positive, got {}", n.counts_per_yield),
                    ));
                }
                Some(NoiseSpec {
                    seed: n.seed,
                    counts_per_yield: n.counts_per_yield,
                })
            }
            None => None,
        };
        let integration = IntegrationParams::new(
            self.integration.samples_per_cycle,
            self.integration.window_halfwidth_fwhm,
        )
        .map_err(|e| invalid("integration", e.to_string()))?;

        let spec = ScanSpec::new(axis, grid, pair, model, calibration, integration, noise)
            .map_err(|e| invalid("scan", e.to_string()))?;
        Ok(PreparedRun {
            scenario: self.scenario.clone(),
            spec,
            output: PathBuf::from(&self.output),
        })
    }

    fn scan_grid(&self) -> Result<(ScanAxis, Vec<f64>), ConfigError> {
        let scan = &self.scan;
        let (axis, field, block, scale) = match scan.axis {
            AxisName::Delay => (ScanAxis::Delay, "scan.delay_fs", &scan.delay_fs, FS),
            AxisName::Power => (ScanAxis::Power, "scan.power_mw", &scan.power_mw, MW),
            AxisName::Polarization => {
                (ScanAxis::Polarization, "scan.angle_deg", &scan.angle_deg, 1.0)
            }
            AxisName::Voltage => (ScanAxis::Voltage, "scan.voltage_v", &scan.voltage_v, 1.0),
        };
        // The grid matching the axis must be present, all others absent.
        for (name, grid, matches) in [
            ("scan.delay_fs", &scan.delay_fs, scan.axis == AxisName::Delay),
            ("scan.power_mw", &scan.power_mw, scan.axis == AxisName::Power),
            (
                "scan.angle_deg",
                &scan.angle_deg,
                scan.axis == AxisName::Polarization,
            ),
            (
                "scan.voltage_v",
                &scan.voltage_v,
                scan.axis == AxisName::Voltage,
            ),
        ] {
            if !matches && grid.is_some() {
                return Err(invalid(name, "does not belong to this scan axis"));
            }
        }
        let block = block.ok_or_else(|| invalid(field, "required for this scan axis"))?;
        if scan.log_spacing && scan.axis != AxisName::Power {
            return Err(invalid(
                "scan.log_spacing",
                "only meaningful for power scans",
            ));
        }
        if block.points == 0 {
            return Err(invalid(field, "points must be at least 1"));
        }
        if !block.min.is_finite() || !block.max.is_finite() {
            return Err(invalid(field, "min and max must be finite"));
        }
        if block.points > 1 && !(block.max > block.min) {
            return Err(invalid(field, "max must exceed min when points > 1"));
        }
        if scan.log_spacing && block.min <= 0.0 {
            return Err(invalid(field, "log spacing needs a positive min"));
        }
        let n = block.points;
        let grid: Vec<f64> = if n == 1 {
            vec![block.min]
        } else if scan.log_spacing {
            let ratio = block.max / block.min;
            (0..n)
                .map(|i| block.min * ratio.powf(i as f64 / (n - 1) as f64))
                .collect()
        } else {
            (0..n)
                .map(|i| {
                    block.min + (block.max - block.min) * i as f64 / (n - 1) as f64
                })
                .collect()
        };
        // Angles convert degree → radian here; other axes use plain scales.
        let grid = if scan.axis == AxisName::Polarization {
            grid.iter().map(|v| v.to_radians()).collect()
        } else {
            grid.iter().map(|v| v * scale).collect()
        };
        Ok((axis, grid))
    }
}

fn positive(value: f64, field: &str) -> Result<f64, ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(
            field,
            format!("must be strictly positive, got {value}"),
        ))
    }
}

fn field_for_power(
    power_mw: f64,
    field: &str,
    rep_rate: f64,
    focus: f64,
    fwhm: f64,
) -> Result<f64, ConfigError> {
    if power_mw == 0.0 {
        return Ok(0.0);
    }
    if !(power_mw > 0.0) || !power_mw.is_finite() {
        return Err(invalid(
            field,
            format!("must be non-negative, got {power_mw}"),
        ));
    }
    let cal = BeamCalibration::new(power_mw * MW, rep_rate, focus)
        .map_err(|e| invalid(field, e.to_string()))?;
    peak_field_from_power(&cal, fwhm).map_err(|e| invalid(field, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> serde_json::Value {
        serde_json::json!({
            "scenario": "test",
            "pulse": {
                "wavelength_nm": 810.0,
                "fwhm_fs": 50.0,
                "pump_power_mw": 20.0,
                "probe_power_mw": 20.0
            },
            "beam": { "repetition_rate_mhz": 75.0, "focus_fwhm_um": 4.0 },
            "tip": { "radius_nm": 40.0, "voltage_v": -50.0 },
            "model": {
                "multiphoton": [ { "order": 4, "coefficient": 1.0 } ]
            },
            "scan": {
                "axis": "delay",
                "delay_fs": { "min": -100.0, "max": 100.0, "points": 11 }
            },
            "output": "out.csv"
        })
    }

    fn parse_build(value: serde_json::Value) -> Result<PreparedRun, ConfigError> {
        RunConfig::from_json_str(&value.to_string())?.build()
    }

    #[test]
    fn minimal_config_builds() {
        let run = parse_build(base_config()).unwrap();
        assert_eq!(run.spec.grid.len(), 11);
        assert_eq!(run.spec.axis, ScanAxis::Delay);
        // Defaults applied: φ = 4.5 eV, k = 5, ℓ = 1.
        assert_eq!(run.spec.model.tip.workfunction_ev, 4.5);
        assert_eq!(run.spec.model.tip.geometry_factor, 5.0);
        assert_eq!(run.spec.model.tip.enhancement, 1.0);
        // 20 mW pump at 75 MHz / 4 µm / 50 fs → 0.456 GV/m.
        let f = run.spec.pair.pump.peak_field;
        assert!((f - 4.5633e8).abs() / f < 1e-3, "pump field {f}");
        assert_eq!(run.spec.pair.pump.peak_field, run.spec.pair.probe.peak_field);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v = base_config();
        v["pulse"]["color"] = serde_json::json!("red");
        let err = parse_build(v).unwrap_err();
        assert!(err.to_string().contains("color"), "{err}");
        let mut v = base_config();
        v["extra"] = serde_json::json!(1);
        assert!(parse_build(v).is_err());
    }

    #[test]
    fn negative_fwhm_names_the_field() {
        let mut v = base_config();
        v["pulse"]["fwhm_fs"] = serde_json::json!(-50.0);
        let err = parse_build(v).unwrap_err();
        assert!(err.to_string().contains("pulse.fwhm_fs"), "{err}");
    }

    #[test]
    fn parse_error_is_line_anchored() {
        let err = RunConfig::from_json_str("{\n  \"scenario\": ,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn tbp_and_chirp_are_exclusive() {
        let mut v = base_config();
        v["pulse"]["time_bandwidth_product"] = serde_json::json!(0.5);
        v["pulse"]["chirp_per_s2"] = serde_json::json!(1e26);
        assert!(parse_build(v).is_err());
        let mut v = base_config();
        v["pulse"]["time_bandwidth_product"] = serde_json::json!(0.5);
        let run = parse_build(v).unwrap();
        assert!(run.spec.pair.pump.chirp > 0.0);
    }

    #[test]
    fn grid_must_match_axis() {
        let mut v = base_config();
        v["scan"]["power_mw"] = serde_json::json!({ "min": 1.0, "max": 10.0, "points": 5 });
        let err = parse_build(v).unwrap_err();
        assert!(err.to_string().contains("scan.power_mw"), "{err}");
        let mut v = base_config();
        v["scan"] = serde_json::json!({ "axis": "power" });
        let err = parse_build(v).unwrap_err();
        assert!(err.to_string().contains("scan.power_mw"), "{err}");
    }

    #[test]
    fn log_spacing_power_only() {
        let mut v = base_config();
        v["scan"]["log_spacing"] = serde_json::json!(true);
        assert!(parse_build(v).is_err());
        let mut v = base_config();
        v["scan"] = serde_json::json!({
            "axis": "power",
            "power_mw": { "min": 0.5, "max": 40.0, "points": 9 },
            "log_spacing": true
        });
        let run = parse_build(v).unwrap();
        assert_eq!(run.spec.grid.len(), 9);
        // Log-spaced in watts with exact endpoints.
        assert!((run.spec.grid[0] - 0.5e-3).abs() < 1e-12);
        assert!((run.spec.grid[8] - 40e-3).abs() < 1e-9);
        let r1 = run.spec.grid[1] / run.spec.grid[0];
        let r2 = run.spec.grid[5] / run.spec.grid[4];
        assert!((r1 - r2).abs() / r1 < 1e-9);
    }

    #[test]
    fn polarization_grid_converts_degrees() {
        let mut v = base_config();
        v["scan"] = serde_json::json!({
            "axis": "polarization",
            "angle_deg": { "min": 0.0, "max": 180.0, "points": 5 }
        });
        let run = parse_build(v).unwrap();
        assert!((run.spec.grid[4] - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn dark_pump_allowed_for_dc_scans() {
        let mut v = base_config();
        v["pulse"]["pump_power_mw"] = serde_json::json!(0.0);
        v["pulse"]["probe_power_mw"] = serde_json::json!(0.0);
        v["model"] = serde_json::json!({
            "tunneling": [ { "photons_absorbed": 0, "weight": 1.0 } ]
        });
        v["scan"] = serde_json::json!({
            "axis": "voltage",
            "voltage_v": { "min": -450.0, "max": -50.0, "points": 9 }
        });
        let run = parse_build(v).unwrap();
        assert_eq!(run.spec.pair.pump.peak_field, 0.0);
    }

    #[test]
    fn model_needs_a_channel() {
        let mut v = base_config();
        v["model"] = serde_json::json!({});
        let err = parse_build(v).unwrap_err();
        assert!(err.to_string().contains("model"), "{err}");
    }

    #[test]
    fn noise_block_round_trip() {
        let mut v = base_config();
        v["scan"]["noise"] = serde_json::json!({ "seed": 42, "counts_per_yield": 100.0 });
        let run = parse_build(v).unwrap();
        let noise = run.spec.noise.unwrap();
        assert_eq!(noise.seed, 42);
        let mut v = base_config();
        v["scan"]["noise"] = serde_json::json!({ "seed": 1, "counts_per_yield": 0.0 });
        assert!(parse_build(v).is_err());
    }
}
