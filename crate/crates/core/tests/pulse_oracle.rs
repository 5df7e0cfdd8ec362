//! Cross-validation of the closed-form time-domain pulse against the
//! Fourier synthesis oracle, over the studied chirp range and in physical
//! units.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use chirpsim_core::pulse::{
    fit_envelope_and_chirp, synthesize_time_field, time_pulse_oracle, to_time_domain, PulseSpec,
    TimeGrid,
};
use std::f64::consts::PI;

const CHIRPS: [f64; 6] = [-4.0, -1.0, 0.0, 1.0, 2.52, 4.0];

fn grid_for(spec: &PulseSpec) -> TimeGrid {
    let tau = to_time_domain(spec).duration;
    TimeGrid::new(8.0 * tau, 513)
}

#[test]
fn oracle_matches_analytic_envelope_and_chirp() {
    for c2p in CHIRPS {
        let spec = PulseSpec::from_dimensionless(1.3 * PI, c2p, 0.4, 0.0, 1.0).unwrap();
        let analytic = to_time_domain(&spec);
        let sampled = time_pulse_oracle(&spec, &grid_for(&spec)).unwrap();
        let fit = fit_envelope_and_chirp(&sampled);
        assert_relative_eq!(fit.peak, analytic.peak_rabi, max_relative = 1e-6);
        assert_relative_eq!(fit.envelope_width, analytic.duration, max_relative = 1e-4);
        if c2p == 0.0 {
            assert_abs_diff_eq!(fit.temporal_chirp, 0.0, epsilon = 1e-8);
        } else {
            assert_relative_eq!(
                fit.temporal_chirp,
                analytic.temporal_chirp,
                max_relative = 1e-4
            );
        }
    }
}

#[test]
fn unchirped_oracle_is_pure_gaussian() {
    let spec = PulseSpec::from_dimensionless(PI, 0.0, 0.0, 0.0, 1.0).unwrap();
    let analytic = to_time_domain(&spec);
    let sampled = time_pulse_oracle(&spec, &grid_for(&spec)).unwrap();
    let peak = sampled.field.iter().map(|f| f.norm()).fold(0.0, f64::max);
    assert_relative_eq!(peak, analytic.peak_rabi, max_relative = 1e-6);
    // The envelope itself is Gaussian: check a couple of depths.
    let dt = sampled.step();
    let mid = sampled.times.len() / 2;
    for offset in [30usize, 60, 90] {
        let t = offset as f64 * dt;
        let expected = analytic.peak_rabi * (-(t / analytic.duration).powi(2)).exp();
        assert_relative_eq!(sampled.field[mid + offset].norm(), expected, max_relative = 1e-5);
    }
}

#[test]
fn spectral_phase_filter_conserves_energy() {
    // Parseval: a pure phase filter cannot change the pulse energy.
    let reference = {
        let spec = PulseSpec::from_dimensionless(PI, 0.0, 0.3, 0.0, 1.0).unwrap();
        let tau_widest = to_time_domain(
            &PulseSpec::from_dimensionless(PI, 4.0, 0.3, 0.0, 1.0).unwrap(),
        )
        .duration;
        synthesize_time_field(&spec, &TimeGrid::new(8.0 * tau_widest, 1025), 1.0)
            .unwrap()
            .energy()
    };
    for c2p in CHIRPS {
        let spec = PulseSpec::from_dimensionless(PI, c2p, 0.3, 0.0, 1.0).unwrap();
        let tau_widest = to_time_domain(
            &PulseSpec::from_dimensionless(PI, 4.0, 0.3, 0.0, 1.0).unwrap(),
        )
        .duration;
        let energy = synthesize_time_field(&spec, &TimeGrid::new(8.0 * tau_widest, 1025), 1.0)
            .unwrap()
            .energy();
        assert_relative_eq!(energy, reference, max_relative = 1e-6);
    }
}

#[test]
fn oracle_works_in_physical_units() {
    let dw = chirpsim_core::pulse::bandwidth_from_fwhm(3.1e13);
    let spec = PulseSpec::from_dimensionless(1.9 * PI, 2.79, 0.56, 0.0, dw).unwrap();
    let analytic = to_time_domain(&spec);
    let sampled = time_pulse_oracle(&spec, &grid_for(&spec)).unwrap();
    let fit = fit_envelope_and_chirp(&sampled);
    assert_relative_eq!(fit.peak, analytic.peak_rabi, max_relative = 1e-6);
    assert_relative_eq!(
        fit.temporal_chirp,
        analytic.temporal_chirp,
        max_relative = 1e-4
    );
}
