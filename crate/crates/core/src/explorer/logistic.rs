//! Four-parameter logistic fits of the robust-condition line,
//! `P_e = A + B/(1 + C·e^{-Dx})`.
//!
//! The fit runs damped Gauss-Newton iterations from a deterministic
//! initializer; `C` is carried as `ln C` internally so it stays positive.
//! Logistic parameters are strongly correlated, so comparisons against
//! reference rows should be made on predicted curves, not raw coefficients.

#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

use crate::linalg::solve_dense;
use crate::{Error, Result};

/// Fit range in `P_e`; samples outside are rejected.
pub const FIT_PE_RANGE: (f64, f64) = (0.08, 0.98);

/// Which control parameter plays the abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitVariable {
    DeltaPrime,
    C2Prime,
    ThetaOverPi,
}

impl FitVariable {
    pub fn label(&self) -> &'static str {
        match self {
            FitVariable::DeltaPrime => "delta_prime",
            FitVariable::C2Prime => "c2_prime",
            FitVariable::ThetaOverPi => "theta_over_pi",
        }
    }
}

/// Fitted logistic coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub variable: FitVariable,
    pub residual_rms: f64,
}

impl LogisticFit {
    pub fn eval(&self, x: f64) -> f64 {
        logistic(self.a, self.b, self.c, self.d, x)
    }
}

pub fn logistic(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    a + b / (1.0 + c * (-d * x).exp())
}

fn cost(params: [f64; 4], xs: &[f64], pes: &[f64]) -> f64 {
    let [a, b, lc, d] = params;
    xs.iter()
        .zip(pes)
        .map(|(&x, &p)| {
            let r = a + b * sigmoid(d * x - lc) - p;
            r * r
        })
        .sum()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// One damped Gauss-Newton solve; returns the proposed step.
fn gauss_newton_step(
    params: [f64; 4],
    lambda: f64,
    xs: &[f64],
    pes: &[f64],
) -> Option<[f64; 4]> {
    let [a, b, lc, d] = params;
    let mut jtj = [0.0_f64; 16];
    let mut jtr = [0.0_f64; 4];
    for (&x, &p) in xs.iter().zip(pes) {
        let s = sigmoid(d * x - lc);
        let r = a + b * s - p;
        let ds = s * (1.0 - s);
        let row = [1.0, s, -b * ds, b * x * ds];
        for i in 0..4 {
            for j in 0..4 {
                jtj[i * 4 + j] += row[i] * row[j];
            }
            jtr[i] += row[i] * r;
        }
    }
    for i in 0..4 {
        jtj[i * 4 + i] *= 1.0 + lambda;
        jtj[i * 4 + i] += 1e-12;
        jtr[i] = -jtr[i];
    }
    solve_dense(&mut jtj, &mut jtr, 4)?;
    Some(jtr)
}

fn run_fit(mut params: [f64; 4], xs: &[f64], pes: &[f64]) -> ([f64; 4], f64, bool) {
    let mut lambda = 1e-3;
    let mut current = cost(params, xs, pes);
    let mut converged = false;
    for _ in 0..500 {
        let Some(step) = gauss_newton_step(params, lambda, xs, pes) else {
            break;
        };
        let trial = [
            params[0] + step[0],
            params[1] + step[1],
            params[2] + step[2],
            params[3] + step[3],
        ];
        let trial_cost = cost(trial, xs, pes);
        if trial_cost.is_finite() && trial_cost <= current {
            let rel_drop = (current - trial_cost) / current.max(1e-300);
            let step_size = step.iter().map(|s| s.abs()).fold(0.0_f64, f64::max);
            params = trial;
            current = trial_cost;
            lambda = (lambda / 3.0).max(1e-14);
            if rel_drop < 1e-15 || step_size < 1e-13 {
                converged = true;
                break;
            }
        } else {
            lambda *= 5.0;
            if lambda > 1e12 {
                converged = true; // stuck at a (possibly local) optimum
                break;
            }
        }
    }
    (params, current, converged)
}

/// Deterministic starting points built from the sample extremes, the
/// steepest secant, and the mid-level crossing.
fn initial_guesses(xs: &[f64], pes: &[f64]) -> Vec<[f64; 4]> {
    let pmin = pes.iter().cloned().fold(f64::INFINITY, f64::min);
    let pmax = pes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = pmax - pmin;

    let mut steepest = 0.0;
    for w in xs.windows(2).zip(pes.windows(2)) {
        let slope = (w.1[1] - w.1[0]) / (w.0[1] - w.0[0]);
        if slope.abs() > steepest.abs() {
            steepest = slope;
        }
    }

    // x where the samples cross the mid level, by linear interpolation.
    let mid = 0.5 * (pmin + pmax);
    let mut x_mid = 0.5 * (xs[0] + xs[xs.len() - 1]);
    for w in xs.windows(2).zip(pes.windows(2)) {
        let (p0, p1) = (w.1[0], w.1[1]);
        if (p0 - mid) * (p1 - mid) <= 0.0 && p0 != p1 {
            x_mid = w.0[0] + (mid - p0) * (w.0[1] - w.0[0]) / (p1 - p0);
            break;
        }
    }

    let mut guesses = Vec::new();
    for margin in [0.0, 0.15] {
        let a0 = pmin - margin * range;
        let b0 = range * (1.0 + 2.0 * margin);
        let d0 = 4.0 * steepest / b0.max(1e-12);
        guesses.push([a0, b0, d0 * x_mid, d0]);
    }
    guesses
}

/// Least-squares logistic fit `P_e = A + B/(1 + C·e^{-Dx})`.
pub fn fit_logistic(xs: &[f64], pes: &[f64], variable: FitVariable) -> Result<LogisticFit> {
    if xs.len() != pes.len() || xs.len() < 6 {
        return Err(Error::InvalidInput(alloc::format!(
            "fit needs >= 6 matching samples, got {} xs and {} pes",
            xs.len(),
            pes.len()
        )));
    }
    crate::error::ensure_finite("fit abscissa", xs)?;
    crate::error::ensure_finite("fit probabilities", pes)?;
    let slack = 1e-9;
    if pes
        .iter()
        .any(|&p| p < FIT_PE_RANGE.0 - slack || p > FIT_PE_RANGE.1 + slack)
    {
        return Err(Error::InvalidInput(alloc::format!(
            "probabilities must lie within the fit range [{}, {}]",
            FIT_PE_RANGE.0,
            FIT_PE_RANGE.1
        )));
    }
    let pmin = pes.iter().cloned().fold(f64::INFINITY, f64::min);
    let pmax = pes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if pmax - pmin < 1e-6 {
        return Err(Error::DegenerateFit(
            "samples are constant; the step rate D is unidentifiable".into(),
        ));
    }

    let mut best: Option<([f64; 4], f64, bool)> = None;
    for guess in initial_guesses(xs, pes) {
        let outcome = run_fit(guess, xs, pes);
        if best.as_ref().map_or(true, |b| outcome.1 < b.1) {
            best = Some(outcome);
        }
    }
    let (params, final_cost, converged) = best.expect("at least one initial guess");
    let residual_rms = (final_cost / xs.len() as f64).sqrt();
    let [a, b, lc, d] = params;
    let fit = LogisticFit {
        a,
        b,
        c: lc.exp(),
        d,
        variable,
        residual_rms,
    };
    if !converged {
        return Err(Error::FitNotConverged {
            iterations: 500,
            best: [fit.a, fit.b, fit.c, fit.d],
            residual_rms,
        });
    }
    // The fitted curve is monotone in x, so its range over the samples is
    // spanned by the endpoint values.
    let lo = fit.eval(xs[0]);
    let hi = fit.eval(xs[xs.len() - 1]);
    if !(lo.min(hi) >= -0.2 && lo.max(hi) <= 1.2) {
        return Err(Error::DegenerateFit(alloc::format!(
            "fitted curve leaves [-0.2, 1.2] over the sampled range (endpoints {lo:.3}, {hi:.3})"
        )));
    }
    Ok(fit)
}
