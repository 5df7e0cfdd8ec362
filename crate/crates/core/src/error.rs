//! Crate-wide error type.

use alloc::string::String;
use alloc::vec::Vec;

/// Errors reported by the simulation and search operations.
///
/// Numerical failures always carry the conflicting values so a caller can
/// judge how badly a tolerance was missed; nothing is silently clamped or
/// interpolated away.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input failed a precondition (non-finite value, wrong sign, empty
    /// grid, ...). The message names the offending field.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Step-halving disagreement above tolerance in a propagation.
    #[error("propagation did not converge: P_e = {coarse} at default steps vs {fine} at doubled steps (|diff| = {diff:e} > {tol:e})")]
    PropagationNotConverged {
        coarse: f64,
        fine: f64,
        diff: f64,
        tol: f64,
    },

    /// The time grid handed to the Fourier synthesis oracle cannot resolve
    /// the envelope or the chirped phase.
    #[error("under-resolved oracle grid: {0}")]
    UnderResolvedGrid(String),

    /// Richardson extrapolation of the finite-difference curvature is
    /// noise-dominated.
    #[error("curvature estimate noise-dominated: g({h}) = {g_h}, g({h}/2) = {g_h2}, disagreement {diff:e} > {tol:e}")]
    CurvatureNoise {
        h: f64,
        g_h: f64,
        g_h2: f64,
        diff: f64,
        tol: f64,
    },

    /// Finite-difference and perturbative curvature disagree beyond the
    /// method cross-validation tolerance.
    #[error("curvature methods disagree: g_fd = {g_fd}, g_pert = {g_pert}, |diff| = {diff:e} > {tol:e}")]
    CurvatureMethodsDisagree {
        g_fd: f64,
        g_pert: f64,
        diff: f64,
        tol: f64,
    },

    /// The fidelity stayed above threshold across the whole sampled range.
    #[error("robust width exceeds grid: fidelity >= {threshold} everywhere on gamma in [{gamma_min}, {gamma_max}]")]
    WidthExceedsGrid {
        threshold: f64,
        gamma_min: f64,
        gamma_max: f64,
    },

    /// Trajectory classification straddles the cusp/loop tolerances.
    #[error("ambiguous trajectory topology: min speed {min_speed} vs cusp tolerance {tolerance} (loop test: {self_intersects})")]
    AmbiguousTopology {
        min_speed: f64,
        tolerance: f64,
        self_intersects: bool,
    },

    /// A propagation inside a sweep failed; the offending coordinate is
    /// attached.
    #[error("sweep node failed at {axis} = {value}: {source}")]
    SweepNode {
        axis: &'static str,
        value: f64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    /// Fixed-order quadrature shifted beyond tolerance when the sample
    /// count was doubled.
    #[error("ensemble quadrature not converged: {coarse} at n/2 vs {fine} at n (|diff| = {diff:e} > {tol:e})")]
    QuadratureNotConverged {
        coarse: f64,
        fine: f64,
        diff: f64,
        tol: f64,
    },

    /// Nonlinear least squares ran out of iterations; the best iterate is
    /// carried as (A, B, C, D, residual RMS).
    #[error("logistic fit did not converge after {iterations} iterations (best residual RMS {residual_rms})")]
    FitNotConverged {
        iterations: usize,
        best: [f64; 4],
        residual_rms: f64,
    },

    /// The fit inputs are degenerate (constant samples, too few points, ...).
    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    /// Robust-line continuation lost the branch; the partial line is kept.
    #[error("robust-line continuation broke at delta' = {deltap}: no point below tolerance ({partial} points kept)")]
    ContinuationBreak { deltap: f64, partial: usize },
}

impl Error {
    /// Wraps an error with the sweep coordinate it occurred at.
    pub fn at_node(self, axis: &'static str, value: f64) -> Self {
        Error::SweepNode {
            axis,
            value,
            source: alloc::boxed::Box::new(self),
        }
    }

    /// True for errors that signal numerical non-convergence rather than a
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PropagationNotConverged { .. }
                | Error::CurvatureNoise { .. }
                | Error::CurvatureMethodsDisagree { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::FitNotConverged { .. }
                | Error::ContinuationBreak { .. }
        ) || matches!(self, Error::SweepNode { source, .. } if source.is_numerical())
    }
}

/// Checks that every value in a slice is finite; names the field otherwise.
pub(crate) fn ensure_finite(name: &str, values: &[f64]) -> crate::Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(alloc::format!(
            "{name} must be finite"
        )))
    }
}

/// Checks a strictly increasing grid.
pub(crate) fn ensure_increasing(name: &str, values: &[f64]) -> crate::Result<()> {
    ensure_finite(name, values)?;
    if values.windows(2).all(|w| w[1] > w[0]) {
        Ok(())
    } else {
        Err(Error::InvalidInput(alloc::format!(
            "{name} must be strictly increasing"
        )))
    }
}

/// Evenly spaced samples including both endpoints.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let step = (hi - lo) / (n as f64 - 1.0);
    (0..n).map(|i| lo + step * i as f64).collect()
}
