//! Run configuration: defaults, TOML file, and flag overrides.
//!
//! Precedence is flags over file over defaults; dimensionless pulse
//! parameters win over their physical-unit equivalents when both are
//! given. The resolved configuration is echoed into every manifest and
//! must re-parse into an equivalent `RunConfig`.

use std::path::{Path, PathBuf};

use chirpsim_core::dynamics::{Frame, PropagationSettings};
use chirpsim_core::explorer::{EnsembleModel, WidthConvention};
use chirpsim_core::pulse::{
    bandwidth_from_fwhm, wavelength_detuning, PulseSpec, RB_D1_WAVELENGTH_M,
};

use crate::CliError;

/// Experimental bandwidth used when none is configured (field-amplitude
/// FWHM 3.1e13 rad/s).
pub const DEFAULT_BANDWIDTH_FWHM: f64 = 3.1e13;

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pulse: PulseConfig,
    pub propagation: PropagationConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    pub theta_pi: Option<f64>,
    pub c2_prime: Option<f64>,
    pub c2_fs2: Option<f64>,
    pub delta_prime: Option<f64>,
    pub delta_rad_s: Option<f64>,
    pub lambda_c_nm: Option<f64>,
    pub cep: Option<f64>,
    pub bandwidth_rad_s: Option<f64>,
    pub bandwidth_fwhm_rad_s: Option<f64>,
    pub lambda0_nm: Option<f64>,
}

impl PulseConfig {
    /// Overlays `flags` on top of `self` (flag values win).
    pub fn overlaid(&self, flags: &PulseConfig) -> PulseConfig {
        PulseConfig {
            theta_pi: flags.theta_pi.or(self.theta_pi),
            c2_prime: flags.c2_prime.or(self.c2_prime),
            c2_fs2: flags.c2_fs2.or(self.c2_fs2),
            delta_prime: flags.delta_prime.or(self.delta_prime),
            delta_rad_s: flags.delta_rad_s.or(self.delta_rad_s),
            lambda_c_nm: flags.lambda_c_nm.or(self.lambda_c_nm),
            cep: flags.cep.or(self.cep),
            bandwidth_rad_s: flags.bandwidth_rad_s.or(self.bandwidth_rad_s),
            bandwidth_fwhm_rad_s: flags.bandwidth_fwhm_rad_s.or(self.bandwidth_fwhm_rad_s),
            lambda0_nm: flags.lambda0_nm.or(self.lambda0_nm),
        }
    }

    pub fn bandwidth(&self) -> Result<f64, CliError> {
        let bw = match (self.bandwidth_rad_s, self.bandwidth_fwhm_rad_s) {
            (Some(b), _) => b,
            (None, Some(f)) => bandwidth_from_fwhm(f),
            (None, None) => bandwidth_from_fwhm(DEFAULT_BANDWIDTH_FWHM),
        };
        if !(bw > 0.0) || !bw.is_finite() {
            return Err(CliError::config(format!(
                "pulse.bandwidth_rad_s must be positive and finite (got {bw})"
            )));
        }
        Ok(bw)
    }

    /// Resolves to a pulse spec; dimensionless keys take precedence over
    /// physical ones.
    pub fn resolve(&self) -> Result<PulseSpec, CliError> {
        let theta_pi = self.theta_pi.ok_or_else(|| {
            CliError::config("pulse.theta_pi is required for this command".into())
        })?;
        let bandwidth = self.bandwidth()?;
        let c2_prime = match (self.c2_prime, self.c2_fs2) {
            (Some(v), _) => v,
            (None, Some(fs2)) => fs2 * 1e-30 * bandwidth * bandwidth,
            (None, None) => 0.0,
        };
        let delta_prime = match (self.delta_prime, self.delta_rad_s, self.lambda_c_nm) {
            (Some(v), _, _) => v,
            (None, Some(rad_s), _) => rad_s / bandwidth,
            (None, None, Some(nm)) => {
                let lambda0 = self.lambda0_nm.unwrap_or(RB_D1_WAVELENGTH_M * 1e9) * 1e-9;
                wavelength_detuning(nm * 1e-9, lambda0).map_err(CliError::from_core)? / bandwidth
            }
            (None, None, None) => 0.0,
        };
        let cep = self.cep.unwrap_or(0.0);
        PulseSpec::from_dimensionless(
            theta_pi * std::f64::consts::PI,
            c2_prime,
            delta_prime,
            cep,
            bandwidth,
        )
        .map_err(CliError::from_core)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    pub time_span_factor: f64,
    pub steps_per_rabi_cycle: f64,
    pub frame: Frame,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        let defaults = PropagationSettings::default();
        PropagationConfig {
            time_span_factor: defaults.time_span_factor,
            steps_per_rabi_cycle: defaults.steps_per_rabi_cycle,
            frame: defaults.frame,
        }
    }
}

impl PropagationConfig {
    pub fn to_settings(&self) -> Result<PropagationSettings, CliError> {
        let settings = PropagationSettings {
            time_span_factor: self.time_span_factor,
            steps_per_rabi_cycle: self.steps_per_rabi_cycle,
            frame: self.frame,
        };
        settings.validate().map_err(CliError::from_core)?;
        Ok(settings)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// `[lo, hi, n]` in units of pi.
    pub theta_pi_range: Option<[f64; 3]>,
    pub c2_prime_range: Option<[f64; 3]>,
    pub c2_fs2_range: Option<[f64; 3]>,
    pub deltap_range: Option<[f64; 3]>,
    pub gamma_max: f64,
    pub gamma_steps: usize,
    pub ensemble_ratio: Option<f64>,
    pub ensemble_samples: usize,
    pub ensemble_convention: WidthConvention,
    pub width_threshold: f64,
    pub fd_step: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            theta_pi_range: None,
            c2_prime_range: None,
            c2_fs2_range: None,
            deltap_range: None,
            gamma_max: 0.5,
            gamma_steps: 101,
            ensemble_ratio: None,
            ensemble_samples: 64,
            ensemble_convention: WidthConvention::FieldAmplitude,
            width_threshold: 0.99,
            fd_step: 0.02,
        }
    }
}

impl SweepConfig {
    pub fn ensemble(&self) -> Option<EnsembleModel> {
        self.ensemble_ratio.map(|ratio| EnsembleModel {
            ratio,
            convention: self.ensemble_convention,
            radial_samples: self.ensemble_samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::config(format!("config {}: {e}", path.display())))
    }
}

/// Grid helper: `[lo, hi, n]` (n rounded to a count) into explicit samples.
pub fn range_samples(range: [f64; 3], what: &str) -> Result<Vec<f64>, CliError> {
    let [lo, hi, n] = range;
    let count = n as usize;
    if !(count >= 1 && (count as f64 - n).abs() < 1e-9) {
        return Err(CliError::config(format!(
            "{what}: sample count must be a positive integer, got {n}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    if !(hi > lo) {
        return Err(CliError::config(format!(
            "{what}: range must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (count as f64 - 1.0);
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}
