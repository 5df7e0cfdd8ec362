//! Shaped-pulse definition and analytic time-domain conversion.
//!
//! The pulse is defined in the frequency domain as a Gaussian amplitude with
//! a quadratic spectral phase,
//!
//! ```text
//! E(ω) = E₀ · exp[ -(ω - ω_c)²/Δω² + i (c₂/2)(ω - ω_c)² ],
//! ```
//!
//! where `Δω` is the 1/e half-width of the field amplitude and `c₂` the
//! frequency-domain chirp rate. Synthesis uses the `e^{-iωt}` convention, so
//! the time-domain field is a Gaussian envelope with a linear temporal chirp
//! `α` whose sign follows `c₂`, and the instantaneous detuning seen by the
//! atom is `Δ(t) = δ - 2αt`.
//!
//! Everything is parametrized by the pulse area `Θ` rather than a field
//! amplitude: dipole moment and field strength never appear separately.

#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::format;
use alloc::vec::Vec;

use crate::error::linspace;
use crate::{Error, Result, C64};

/// Rubidium D1 transition wavelength, the default detuning reference (m).
pub const RB_D1_WAVELENGTH_M: f64 = 794.98e-9;

/// Speed of light (m/s).
pub const SPEED_OF_LIGHT_M_S: f64 = 2.997_924_58e8;

/// Converts a field-amplitude FWHM bandwidth to the 1/e half-width `Δω`
/// used by the spectral definition (`FWHM = 2·√(ln 2)·Δω`).
pub fn bandwidth_from_fwhm(fwhm_rad_s: f64) -> f64 {
    fwhm_rad_s / (2.0 * core::f64::consts::LN_2.sqrt())
}

/// Static detuning `δ = ω₀ - ω_c` from carrier and reference wavelengths.
///
/// Both wavelengths in meters; `δ` in rad/s. Positive `δ` means the carrier
/// is red of the transition.
pub fn wavelength_detuning(lambda_c: f64, lambda_0: f64) -> Result<f64> {
    if !(lambda_c > 0.0) || !(lambda_0 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "wavelengths must be positive (lambda_c = {lambda_c}, lambda_0 = {lambda_0})"
        )));
    }
    Ok(2.0 * core::f64::consts::PI * SPEED_OF_LIGHT_M_S * (lambda_c - lambda_0)
        / (lambda_0 * lambda_c))
}

/// Physical and dimensionless parameters of the shaped pulse.
///
/// Stored internally in dimensionless form (`Θ`, `c₂' = c₂·Δω²`,
/// `Δ' = δ/Δω`, CEP) together with the bandwidth, so the dimensionless views
/// are exact and rescaling `Δω` at fixed dimensionless parameters changes
/// none of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PulseSpec {
    theta: f64,
    c2_prime: f64,
    delta_prime: f64,
    cep: f64,
    bandwidth: f64,
}

impl PulseSpec {
    /// Builds a spec from dimensionless parameters (`θ` in radians, CEP in
    /// radians, bandwidth `Δω` in rad/s).
    pub fn from_dimensionless(
        theta: f64,
        c2_prime: f64,
        delta_prime: f64,
        cep: f64,
        bandwidth: f64,
    ) -> Result<Self> {
        crate::error::ensure_finite(
            "pulse parameters",
            &[theta, c2_prime, delta_prime, cep, bandwidth],
        )?;
        if !(bandwidth > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        if theta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "pulse area must be non-negative, got {theta}"
            )));
        }
        Ok(PulseSpec {
            theta,
            c2_prime,
            delta_prime,
            cep,
            bandwidth,
        })
    }

    /// Builds a spec from physical parameters: chirp `c₂` in s², detuning
    /// `δ` in rad/s.
    pub fn from_physical(
        theta: f64,
        c2: f64,
        delta: f64,
        cep: f64,
        bandwidth: f64,
    ) -> Result<Self> {
        crate::error::ensure_finite("pulse parameters", &[c2, delta])?;
        if !(bandwidth > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        Self::from_dimensionless(
            theta,
            c2 * bandwidth * bandwidth,
            delta / bandwidth,
            cep,
            bandwidth,
        )
    }

    /// Pulse area after shaping (radians).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Dimensionless chirp `c₂' = c₂·Δω²`.
    pub fn c2_prime(&self) -> f64 {
        self.c2_prime
    }

    /// Dimensionless detuning `Δ' = δ/Δω`.
    pub fn delta_prime(&self) -> f64 {
        self.delta_prime
    }

    /// Carrier-envelope phase (radians).
    pub fn cep(&self) -> f64 {
        self.cep
    }

    /// Spectral 1/e half-width `Δω` of the field amplitude (rad/s).
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Frequency-domain chirp rate `c₂` (s²).
    pub fn c2(&self) -> f64 {
        self.c2_prime / (self.bandwidth * self.bandwidth)
    }

    /// Static detuning `δ = ω₀ - ω_c` (rad/s).
    pub fn delta(&self) -> f64 {
        self.delta_prime * self.bandwidth
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_c2_prime(mut self, c2_prime: f64) -> Self {
        self.c2_prime = c2_prime;
        self
    }

    pub fn with_delta_prime(mut self, delta_prime: f64) -> Self {
        self.delta_prime = delta_prime;
        self
    }

    pub fn with_cep(mut self, cep: f64) -> Self {
        self.cep = cep;
        self
    }
}

/// Analytic time-domain description of the shaped pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimePulse {
    /// Peak Rabi frequency `Ω₀` (rad/s).
    pub peak_rabi: f64,
    /// 1/e half-width `τ` of the field envelope (s).
    pub duration: f64,
    /// Temporal chirp rate `α` (rad/s²).
    pub temporal_chirp: f64,
    /// Carrier-envelope phase (radians).
    pub cep: f64,
}

/// Closed-form Gaussian chirp transform of the spectral definition.
///
/// With stretch factor `s = √(1 + (c₂'/2)²)`:
/// `τ = 2s/Δω`, `α = c₂·Δω⁴ / (8 s²)`, `Ω₀ = Θ/(√π·τ)`.
pub fn to_time_domain(spec: &PulseSpec) -> TimePulse {
    let dw = spec.bandwidth;
    let half = spec.c2_prime / 2.0;
    let stretch_sq = 1.0 + half * half;
    let duration = 2.0 * stretch_sq.sqrt() / dw;
    let temporal_chirp = spec.c2() * dw.powi(4) / (8.0 * stretch_sq);
    let peak_rabi = spec.theta / (core::f64::consts::PI.sqrt() * duration);
    TimePulse {
        peak_rabi,
        duration,
        temporal_chirp,
        cep: spec.cep,
    }
}

/// Rabi-frequency envelope `Ω(t) = Ω₀·exp(-t²/τ²)` (rad/s), `t` relative to
/// the pulse peak.
pub fn rabi_envelope(t: f64, pulse: &TimePulse) -> f64 {
    let u = t / pulse.duration;
    pulse.peak_rabi * (-u * u).exp()
}

/// Complex spectral amplitude at offset `ω - ω_c` from the carrier.
///
/// Returns `peak_amplitude · exp[-(ω-ω_c)²/Δω² + i(c₂/2)(ω-ω_c)²]`; the
/// magnitude is independent of the chirp.
pub fn spectral_field(omega_offset: f64, spec: &PulseSpec, peak_amplitude: f64) -> Result<C64> {
    crate::error::ensure_finite("spectral_field inputs", &[omega_offset, peak_amplitude])?;
    let u = omega_offset / spec.bandwidth;
    let phase = 0.5 * spec.c2_prime * u * u;
    Ok(C64::from_polar((-u * u).exp() * peak_amplitude, phase))
}

/// Symmetric time grid for the Fourier synthesis oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    /// Grid covers `[-half_span, +half_span]` (s).
    pub half_span: f64,
    /// Number of samples; forced odd so `t = 0` is on the grid.
    pub samples: usize,
}

impl TimeGrid {
    pub fn new(half_span: f64, samples: usize) -> Self {
        TimeGrid { half_span, samples }
    }

    fn times(&self) -> Vec<f64> {
        let n = if self.samples % 2 == 0 {
            self.samples + 1
        } else {
            self.samples
        };
        linspace(-self.half_span, self.half_span, n)
    }
}

/// Complex field samples in the carrier rotating frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub times: Vec<f64>,
    pub field: Vec<C64>,
}

impl SampledField {
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Trapezoid `∫|E(t)|² dt` over the grid.
    pub fn energy(&self) -> f64 {
        let dt = self.step();
        let mut acc = 0.0;
        for (i, f) in self.field.iter().enumerate() {
            let w = if i == 0 || i == self.field.len() - 1 {
                0.5
            } else {
                1.0
            };
            acc += w * f.norm_sqr();
        }
        acc * dt
    }

    /// Trapezoid `∫|E(t)| dt` over the grid.
    pub fn area(&self) -> f64 {
        let dt = self.step();
        let mut acc = 0.0;
        for (i, f) in self.field.iter().enumerate() {
            let w = if i == 0 || i == self.field.len() - 1 {
                0.5
            } else {
                1.0
            };
            acc += w * f.norm();
        }
        acc * dt
    }
}

/// Direct quadrature of the inverse Fourier transform
/// `Ẽ(t) = (1/2π) ∫ E(ω_c + u) e^{-iut} du` on the given time grid.
///
/// This is the verification route for [`to_time_domain`]; it never uses the
/// closed-form result. The spectral integration window and sampling are
/// chosen internally from the bandwidth and chirp so the quadrature error is
/// far below the comparison tolerances.
pub fn synthesize_time_field(
    spec: &PulseSpec,
    grid: &TimeGrid,
    peak_amplitude: f64,
) -> Result<SampledField> {
    let times = validated_grid(spec, grid)?;
    let dw = spec.bandwidth;
    let w_max = 8.0 * dw;
    let c2 = spec.c2();
    let t_max = grid.half_span;
    // Keep the integrand phase change per spectral step below 0.05 rad.
    let max_phase_rate = c2.abs() * w_max + t_max;
    let mut n_omega = (2.0 * w_max * max_phase_rate / 0.05).ceil() as usize;
    n_omega = n_omega.clamp(4096, 1 << 21) | 1;
    let du = 2.0 * w_max / (n_omega - 1) as f64;

    let mut field = Vec::with_capacity(times.len());
    for &t in &times {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n_omega {
            let u = -w_max + du * k as f64;
            let v = u / dw;
            let mag = (-v * v).exp();
            let phase = 0.5 * c2 * u * u - u * t;
            let mut term = C64::from_polar(mag, phase);
            if k == 0 || k == n_omega - 1 {
                term *= 0.5;
            }
            acc += term;
        }
        field.push(acc * (peak_amplitude * du / (2.0 * core::f64::consts::PI)));
    }
    Ok(SampledField { times, field })
}

fn validated_grid(spec: &PulseSpec, grid: &TimeGrid) -> Result<Vec<f64>> {
    if !grid.half_span.is_finite() || grid.half_span <= 0.0 || grid.samples < 16 {
        return Err(Error::InvalidInput(format!(
            "time grid must have positive span and >= 16 samples (span {}, samples {})",
            grid.half_span, grid.samples
        )));
    }
    let pulse = to_time_domain(spec);
    let tau = pulse.duration;
    if grid.half_span < 6.0 * tau {
        return Err(Error::UnderResolvedGrid(format!(
            "grid spans {:.3e} s but must cover at least 12 envelope widths ({:.3e} s)",
            2.0 * grid.half_span,
            12.0 * tau
        )));
    }
    let times = grid.times();
    let dt = times[1] - times[0];
    if dt > tau / 8.0 {
        return Err(Error::UnderResolvedGrid(format!(
            "time step {dt:.3e} s exceeds tau/8 = {:.3e} s",
            tau / 8.0
        )));
    }
    // Chirp-phase sampling: the quadratic phase must advance by less than
    // pi/2 between adjacent samples everywhere on the grid.
    let max_rate = 2.0 * pulse.temporal_chirp.abs() * grid.half_span;
    if max_rate * dt > core::f64::consts::FRAC_PI_2 {
        return Err(Error::UnderResolvedGrid(format!(
            "chirp phase advances {:.3} rad per sample (> pi/2)",
            max_rate * dt
        )));
    }
    Ok(times)
}

/// Fourier synthesis oracle normalized to the pulse area.
///
/// Returns rotating-frame samples rescaled so `∫|Ẽ(t)| dt = Θ`; the result
/// is directly comparable to `Ω(t)·e^{-i(αt² + φ)}` up to a constant phase.
pub fn time_pulse_oracle(spec: &PulseSpec, grid: &TimeGrid) -> Result<SampledField> {
    let raw = synthesize_time_field(spec, grid, 1.0)?;
    let area = raw.area();
    if !(area > 0.0) {
        return Err(Error::InvalidInput(
            "oracle field has zero area; pulse area must be positive".into(),
        ));
    }
    let scale = spec.theta / area;
    Ok(SampledField {
        times: raw.times,
        field: raw.field.into_iter().map(|f| f * scale).collect(),
    })
}

/// Envelope and quadratic-phase diagnostics extracted from oracle samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleFit {
    /// Largest sampled envelope value.
    pub peak: f64,
    /// Envelope 1/e half-width from the second moment of `|E|²`.
    pub envelope_width: f64,
    /// Temporal chirp recovered from a weighted quadratic fit of the
    /// unwrapped phase (the coefficient of `-t²`).
    pub temporal_chirp: f64,
}

/// Fits the sampled complex field to `A·exp(-t²/τ²)·exp(-i(αt² + const))`.
pub fn fit_envelope_and_chirp(sampled: &SampledField) -> OracleFit {
    let peak = sampled
        .field
        .iter()
        .map(|f| f.norm())
        .fold(0.0_f64, f64::max);

    // Second moment of |E|^2: Var[t] = tau^2/4 for a Gaussian envelope.
    let dt = sampled.step();
    let (mut w_sum, mut t2_sum) = (0.0, 0.0);
    for (t, f) in sampled.times.iter().zip(&sampled.field) {
        let w = f.norm_sqr() * dt;
        w_sum += w;
        t2_sum += w * t * t;
    }
    let envelope_width = 2.0 * (t2_sum / w_sum).sqrt();

    // Weighted LS of the unwrapped phase on {1, t, t^2} over the samples
    // that carry envelope weight.
    let cut = peak * 1e-5;
    let idx: Vec<usize> = (0..sampled.field.len())
        .filter(|&i| sampled.field[i].norm() >= cut)
        .collect();
    let mut phases = Vec::with_capacity(idx.len());
    let mut prev = 0.0;
    let mut offset = 0.0;
    for (k, &i) in idx.iter().enumerate() {
        let raw = sampled.field[i].arg();
        if k > 0 {
            let mut d = raw + offset - prev;
            while d > core::f64::consts::PI {
                offset -= 2.0 * core::f64::consts::PI;
                d -= 2.0 * core::f64::consts::PI;
            }
            while d < -core::f64::consts::PI {
                offset += 2.0 * core::f64::consts::PI;
                d += 2.0 * core::f64::consts::PI;
            }
        }
        prev = raw + offset;
        phases.push(prev);
    }
    // Normal equations for phi(t) = p0 + p1 t + p2 t^2.
    let mut ata = [0.0_f64; 9];
    let mut atb = [0.0_f64; 3];
    for (k, &i) in idx.iter().enumerate() {
        let t = sampled.times[i];
        let w = sampled.field[i].norm_sqr();
        let basis = [1.0, t, t * t];
        for r in 0..3 {
            for c in 0..3 {
                ata[r * 3 + c] += w * basis[r] * basis[c];
            }
            atb[r] += w * basis[r] * phases[k];
        }
    }
    crate::linalg::solve_dense(&mut ata, &mut atb, 3);
    OracleFit {
        peak,
        envelope_width,
        temporal_chirp: -atb[2],
    }
}
