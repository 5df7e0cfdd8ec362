//! Parameter-space machinery: 2D maps of curvature and excitation
//! probability, Gaussian-ensemble spatial averaging, robust-point search,
//! robust-line continuation over the detuning, and logistic fits of the
//! traced line.

pub mod logistic;
pub mod nelder_mead;

pub use logistic::{fit_logistic, FitVariable, LogisticFit, FIT_PE_RANGE};

#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::{excited_probability, propagate, PropagationSettings};
use crate::error::{ensure_increasing, linspace};
use crate::pulse::PulseSpec;
use crate::robustness::curvature_perturbative;
use crate::{Error, Result};

/// Curvature below which a point counts as robust.
pub const ROBUST_G_TOLERANCE: f64 = 1e-2;

/// Coarse scan resolution per axis in [`find_robust_point`].
pub const SCAN_POINTS: usize = 21;

/// Named axis of a 2D map.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Axis {
    pub name: String,
    pub samples: Vec<f64>,
}

/// A node that failed to evaluate; the map keeps NaN there.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridFailure {
    pub row: usize,
    pub col: usize,
    pub message: String,
}

/// Dense 2D map, row-major with `axis1` outer. Failed nodes are masked
/// (NaN) and listed in `failures`, never interpolated.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridMap2D {
    pub axis1: Axis,
    pub axis2: Axis,
    pub values: Vec<f64>,
    pub metadata: BTreeMap<String, f64>,
    pub failures: Vec<GridFailure>,
}

impl GridMap2D {
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.axis2.samples.len() + col]
    }

    /// Location and value of the smallest valid node.
    pub fn min_node(&self) -> Option<(usize, usize, f64)> {
        let cols = self.axis2.samples.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, &v)| (k / cols, k % cols, v))
    }

    /// Assembles a map from per-node results in row-major order (`axis1`
    /// outer). Failed nodes become NaN and are listed, never interpolated.
    pub fn from_node_results(
        axis1: Axis,
        axis2: Axis,
        metadata: BTreeMap<String, f64>,
        results: Vec<Result<f64>>,
    ) -> Result<Self> {
        ensure_increasing(&axis1.name, &axis1.samples)?;
        ensure_increasing(&axis2.name, &axis2.samples)?;
        let cols = axis2.samples.len();
        if results.len() != axis1.samples.len() * cols {
            return Err(Error::InvalidInput(alloc::format!(
                "expected {} node results, got {}",
                axis1.samples.len() * cols,
                results.len()
            )));
        }
        let mut values = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (k, r) in results.into_iter().enumerate() {
            match r {
                Ok(v) => values.push(v),
                Err(e) => {
                    values.push(f64::NAN);
                    failures.push(GridFailure {
                        row: k / cols,
                        col: k % cols,
                        message: alloc::format!("{e}"),
                    });
                }
            }
        }
        Ok(GridMap2D {
            axis1,
            axis2,
            values,
            metadata,
            failures,
        })
    }

    fn build<F>(axis1: Axis, axis2: Axis, metadata: BTreeMap<String, f64>, mut f: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        let mut results = Vec::with_capacity(axis1.samples.len() * axis2.samples.len());
        for &a in &axis1.samples {
            for &b in &axis2.samples {
                results.push(f(a, b));
            }
        }
        Self::from_node_results(axis1, axis2, metadata, results)
    }
}

/// Robustness map `g(Θ, c₂')` at fixed `Δ'` (perturbative method).
pub fn map_curvature(
    theta_grid: &[f64],
    c2p_grid: &[f64],
    delta_prime: f64,
    settings: &PropagationSettings,
) -> Result<GridMap2D> {
    let mut metadata = BTreeMap::new();
    metadata.insert("delta_prime".into(), delta_prime);
    GridMap2D::build(
        Axis {
            name: "theta".into(),
            samples: theta_grid.to_vec(),
        },
        Axis {
            name: "c2_prime".into(),
            samples: c2p_grid.to_vec(),
        },
        metadata,
        |theta, c2p| {
            let spec = PulseSpec::from_dimensionless(theta, c2p, delta_prime, 0.0, 1.0)?;
            curvature_perturbative(&spec, settings)
        },
    )
}

/// Convention linking the quoted cloud/beam diameter ratio to Gaussian
/// width parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum WidthConvention {
    /// Cloud density width measured against the beam field-amplitude width.
    #[default]
    FieldAmplitude,
    /// Cloud density width measured against the beam intensity width.
    Intensity,
}

/// Gaussian atom cloud inside a Gaussian beam.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleModel {
    /// Cloud-to-beam diameter ratio (like-defined widths).
    pub ratio: f64,
    pub convention: WidthConvention,
    /// Radial quadrature order.
    pub radial_samples: usize,
}

impl EnsembleModel {
    pub fn new(ratio: f64) -> Self {
        EnsembleModel {
            ratio,
            convention: WidthConvention::FieldAmplitude,
            radial_samples: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio <= 2.0) {
            return Err(Error::InvalidInput(alloc::format!(
                "ensemble ratio must lie in (0, 2], got {}",
                self.ratio
            )));
        }
        if self.radial_samples < 32 {
            return Err(Error::InvalidInput(alloc::format!(
                "radial_samples must be >= 32, got {}",
                self.radial_samples
            )));
        }
        Ok(())
    }

    /// Width of the cloud density relative to the field profile.
    fn effective_ratio(&self) -> f64 {
        match self.convention {
            WidthConvention::FieldAmplitude => self.ratio,
            WidthConvention::Intensity => self.ratio / 2.0_f64.sqrt(),
        }
    }
}

/// Spatial average of `P_e` over the cloud,
/// `⟨P_e⟩ = ∫ n(r)·P_e(Ω₀ e^{-r²/w²})·2πr dr / ∫ n(r)·2πr dr`,
/// reduced to a 1D integral in `u = r²/w²` and evaluated with fixed-order
/// composite Simpson quadrature. `pe_of_scale` receives the local
/// peak-amplitude scale `e^{-u} ∈ (0, 1]`.
///
/// Numerator and denominator share the quadrature rule, so a constant
/// profile averages to exactly itself. The value at half the sample count
/// is compared against the full count and a drift above `1e-4` is an error.
pub fn ensemble_average<F>(mut pe_of_scale: F, model: &EnsembleModel) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    model.validate()?;
    let rho_sq = model.effective_ratio().powi(2);
    // Substituted variable v = u/rho^2: the weight e^{-v} has unit scale
    // regardless of the ratio. Mass beyond the cutoff is below 1e-6.
    let v_max = 14.0;
    let mut n = model.radial_samples;
    if n % 2 != 0 {
        n += 1;
    }
    // Sample at doubled density once; the n-panel rule takes every other
    // node, so the doubling check costs no extra propagations per node.
    let fine_n = 2 * n;
    let h = v_max / fine_n as f64;
    let mut pe = Vec::with_capacity(fine_n + 1);
    let mut weight = Vec::with_capacity(fine_n + 1);
    for k in 0..=fine_n {
        let v = h * k as f64;
        pe.push(pe_of_scale((-rho_sq * v).exp())?);
        weight.push((-v).exp());
    }
    let simpson = |stride: usize| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        let m = fine_n / stride;
        for (idx, k) in (0..=fine_n).step_by(stride).enumerate() {
            let w = if idx == 0 || idx == m {
                1.0
            } else if idx % 2 == 1 {
                4.0
            } else {
                2.0
            };
            num += w * weight[k] * pe[k];
            den += w * weight[k];
        }
        num / den
    };
    let requested = simpson(2);
    let doubled = simpson(1);
    let diff = (requested - doubled).abs();
    if diff > 1e-4 {
        return Err(Error::QuadratureNotConverged {
            coarse: requested,
            fine: doubled,
            diff,
            tol: 1e-4,
        });
    }
    Ok(requested)
}

/// Probability map `P_e(Θ, c₂)` at fixed physical detuning, optionally
/// ensemble-averaged. `c₂` in s², `delta` in rad/s, `bandwidth` in rad/s.
pub fn map_pe(
    theta_grid: &[f64],
    c2_grid: &[f64],
    delta: f64,
    bandwidth: f64,
    ensemble: Option<&EnsembleModel>,
    settings: &PropagationSettings,
) -> Result<GridMap2D> {
    if let Some(model) = ensemble {
        model.validate()?;
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("delta_rad_s".into(), delta);
    metadata.insert("bandwidth_rad_s".into(), bandwidth);
    if let Some(model) = ensemble {
        metadata.insert("ensemble_ratio".into(), model.ratio);
        metadata.insert("ensemble_samples".into(), model.radial_samples as f64);
    }
    GridMap2D::build(
        Axis {
            name: "theta".into(),
            samples: theta_grid.to_vec(),
        },
        Axis {
            name: "c2_s2".into(),
            samples: c2_grid.to_vec(),
        },
        metadata,
        |theta, c2| {
            let spec = PulseSpec::from_physical(theta, c2, delta, 0.0, bandwidth)?;
            match ensemble {
                None => Ok(excited_probability(&propagate(&spec, settings, 0.0)?)),
                Some(model) => ensemble_average(
                    |scale| {
                        let local = spec.with_theta(theta * scale);
                        Ok(excited_probability(&propagate(&local, settings, 0.0)?))
                    },
                    model,
                ),
            }
        },
    )
}

/// One point on the robust-condition manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RobustPoint {
    pub delta_prime: f64,
    pub c2_prime: f64,
    /// Pulse area (radians).
    pub theta: f64,
    /// Perturbative curvature at the point.
    pub g: f64,
    /// Excited-state probability at the point.
    pub pe: f64,
}

/// Search outcome: the best point found and whether it met the curvature
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RobustSearch {
    pub point: RobustPoint,
    pub robust: bool,
    pub evaluations: usize,
}

/// Rectangular search region in `(Θ, c₂')`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchBox {
    pub theta: (f64, f64),
    pub c2_prime: (f64, f64),
}

impl SearchBox {
    fn validate(&self) -> Result<()> {
        crate::error::ensure_finite(
            "search box",
            &[self.theta.0, self.theta.1, self.c2_prime.0, self.c2_prime.1],
        )?;
        if !(self.theta.1 > self.theta.0 && self.c2_prime.1 > self.c2_prime.0) {
            return Err(Error::InvalidInput(
                "search box must have positive extent on both axes".into(),
            ));
        }
        if self.theta.0 < 0.0 {
            return Err(Error::InvalidInput(
                "search box areas must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Locates the robust point in the box: a coarse 21x21 scan of the
/// perturbative curvature followed by simplex refinement from the
/// smallest-area grid minimum below tolerance (the first robust branch).
/// When no candidate beats the tolerance the refined best point is
/// returned with `robust = false`.
pub fn find_robust_point(
    delta_prime: f64,
    bounds: &SearchBox,
    seed: Option<(f64, f64)>,
    settings: &PropagationSettings,
) -> Result<RobustSearch> {
    bounds.validate()?;
    let g_of = |theta: f64, c2p: f64| -> Result<f64> {
        let spec = PulseSpec::from_dimensionless(theta, c2p, delta_prime, 0.0, 1.0)?;
        curvature_perturbative(&spec, settings)
    };

    let thetas = linspace(bounds.theta.0, bounds.theta.1, SCAN_POINTS);
    let c2ps = linspace(bounds.c2_prime.0, bounds.c2_prime.1, SCAN_POINTS);
    let mut grid = Vec::with_capacity(SCAN_POINTS * SCAN_POINTS);
    for &t in &thetas {
        for &c in &c2ps {
            grid.push(g_of(t, c)?);
        }
    }
    let mut evaluations = grid.len();

    // Grid-local minima below tolerance, smallest area first.
    let at = |i: usize, j: usize| grid[i * SCAN_POINTS + j];
    let mut candidates: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..SCAN_POINTS {
        for j in 0..SCAN_POINTS {
            let v = at(i, j);
            if v > ROBUST_G_TOLERANCE {
                continue;
            }
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= SCAN_POINTS as i64 || nj >= SCAN_POINTS as i64 {
                        continue;
                    }
                    if at(ni as usize, nj as usize) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                candidates.push((thetas[i], c2ps[j], v));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

    let start = if let Some(&(t, c, _)) = candidates.first() {
        [t, c]
    } else if let Some((t, c)) = seed {
        evaluations += 1;
        let seed_g = g_of(
            t.clamp(bounds.theta.0, bounds.theta.1),
            c.clamp(bounds.c2_prime.0, bounds.c2_prime.1),
        )?;
        let (gi, gj, gv) = grid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, &v)| (k / SCAN_POINTS, k % SCAN_POINTS, v))
            .expect("non-empty grid");
        if seed_g < gv {
            [t, c]
        } else {
            [thetas[gi], c2ps[gj]]
        }
    } else {
        let (gi, gj) = grid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| (k / SCAN_POINTS, k % SCAN_POINTS))
            .expect("non-empty grid");
        [thetas[gi], c2ps[gj]]
    };

    let refine = nelder_mead::minimize(
        |x| g_of(x[0], x[1]),
        start,
        nelder_mead::Bounds {
            lo: [bounds.theta.0, bounds.c2_prime.0],
            hi: [bounds.theta.1, bounds.c2_prime.1],
        },
        0.02,
        400,
    )?;
    evaluations += refine.evaluations;

    let (theta, c2p) = (refine.x[0], refine.x[1]);
    let g = g_of(theta, c2p)?;
    let spec = PulseSpec::from_dimensionless(theta, c2p, delta_prime, 0.0, 1.0)?;
    let pe = excited_probability(&propagate(&spec, settings, 0.0)?);
    Ok(RobustSearch {
        point: RobustPoint {
            delta_prime,
            c2_prime: c2p,
            theta,
            g,
            pe,
        },
        robust: g <= ROBUST_G_TOLERANCE,
        evaluations: evaluations + 1,
    })
}

/// The traced robust-condition line; `break_at` carries the detuning where
/// continuation failed, with the points found so far kept.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RobustLine {
    /// Points sorted by ascending `Δ'`.
    pub points: Vec<RobustPoint>,
    pub break_at: Option<f64>,
}

/// Default first-step search region for the line tracer (the low-area end
/// of the first robust branch).
pub fn default_trace_box() -> SearchBox {
    SearchBox {
        theta: (0.6 * core::f64::consts::PI, 3.4 * core::f64::consts::PI),
        c2_prime: (0.4, 6.5),
    }
}

/// Traces the robust line over a detuning range by continuation: the
/// search starts at the largest `Δ'` and each step seeds the next from the
/// previous robust point.
pub fn trace_robust_line(
    deltap_range: (f64, f64),
    steps: usize,
    settings: &PropagationSettings,
) -> Result<RobustLine> {
    let (lo, hi) = deltap_range;
    if !(lo >= 0.05 && hi <= 1.5 && hi > lo) {
        return Err(Error::InvalidInput(alloc::format!(
            "detuning range must lie within [0.05, 1.5], got [{lo}, {hi}]"
        )));
    }
    if steps < 8 {
        return Err(Error::InvalidInput(alloc::format!(
            "line tracing needs >= 8 steps, got {steps}"
        )));
    }
    let mut deltaps = linspace(lo, hi, steps);
    deltaps.reverse();

    let mut points: Vec<RobustPoint> = Vec::with_capacity(steps);
    let mut seed: Option<(f64, f64)> = None;
    let mut break_at = None;
    for &dp in &deltaps {
        let bounds = match seed {
            None => default_trace_box(),
            Some((t, c)) => SearchBox {
                theta: ((t - 0.5 * core::f64::consts::PI).max(0.05), t + 0.5 * core::f64::consts::PI),
                c2_prime: ((c - 1.2).max(0.0), c + 1.2),
            },
        };
        let search = find_robust_point(dp, &bounds, seed, settings)?;
        if !search.robust {
            break_at = Some(dp);
            break;
        }
        seed = Some((search.point.theta, search.point.c2_prime));
        points.push(search.point);
    }
    points.sort_by(|a, b| a.delta_prime.total_cmp(&b.delta_prime));
    Ok(RobustLine { points, break_at })
}

/// Area at which `P_e` crosses `target` at fixed `(c₂', Δ')`: scans the
/// bracket and bisects the sign change closest to `near`.
pub fn solve_theta_for_pe(
    c2_prime: f64,
    delta_prime: f64,
    target: f64,
    bracket: (f64, f64),
    near: f64,
    settings: &PropagationSettings,
) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "target probability must lie in (0, 1), got {target}"
        )));
    }
    let pe_at = |theta: f64| -> Result<f64> {
        let spec = PulseSpec::from_dimensionless(theta, c2_prime, delta_prime, 0.0, 1.0)?;
        Ok(excited_probability(&propagate(&spec, settings, 0.0)?))
    };
    let n = 96;
    let thetas = linspace(bracket.0, bracket.1, n);
    let values: Result<Vec<f64>> = thetas.iter().map(|&t| pe_at(t)).collect();
    let values = values?;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..n - 1 {
        if (values[k] - target) * (values[k + 1] - target) <= 0.0 {
            let mid = 0.5 * (thetas[k] + thetas[k + 1]);
            if best.map_or(true, |(b, _)| (mid - near).abs() < (b - near).abs()) {
                best = Some((mid, thetas[k]));
            }
        }
    }
    let Some((_, mut a)) = best else {
        return Err(Error::InvalidInput(alloc::format!(
            "P_e never crosses {target} for theta in [{}, {}]",
            bracket.0,
            bracket.1
        )));
    };
    let mut b = a + (thetas[1] - thetas[0]);
    let mut fa = pe_at(a)? - target;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = pe_at(mid)? - target;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use core::f64::consts::PI;

    fn settings() -> PropagationSettings {
        PropagationSettings::default()
    }

    #[test]
    fn single_node_rabi_curvature() {
        let map = map_curvature(&[PI / 2.0], &[0.0], 0.0, &settings()).unwrap();
        assert_relative_eq!(map.value(0, 0), (PI / 4.0) * (PI / 4.0), max_relative = 2e-3);
        assert!(map.failures.is_empty());
    }

    #[test]
    fn zero_area_row_is_zero() {
        let map = map_curvature(&[0.0], &[0.0, 1.0, 2.0, 3.0], 0.637, &settings()).unwrap();
        for j in 0..4 {
            assert_abs_diff_eq!(map.value(0, j), 0.0, epsilon = 1e-30);
        }
    }

    #[test]
    fn map_contains_small_curvature_at_b() {
        let map = map_curvature(&[1.78 * PI], &[2.52], 0.637, &settings()).unwrap();
        assert!(map.value(0, 0) <= 0.01);
        assert!(map.value(0, 0) >= -1e-6);
    }

    #[test]
    fn resonant_pe_column_is_rabi() {
        let thetas: Vec<f64> = [0.3, 0.8, 1.4, 2.0].iter().map(|m| m * PI).collect();
        let map = map_pe(&thetas, &[0.0], 0.0, 1.0, None, &settings()).unwrap();
        for (i, &theta) in thetas.iter().enumerate() {
            assert_abs_diff_eq!(map.value(i, 0), (theta / 2.0).sin().powi(2), epsilon = 1e-6);
        }
    }

    #[test]
    fn star_point_probability() {
        let dw = crate::pulse::bandwidth_from_fwhm(3.1e13);
        let map = map_pe(
            &[1.9 * PI],
            &[8.1e-27],
            1.04e13,
            dw,
            None,
            &settings(),
        )
        .unwrap();
        assert_abs_diff_eq!(map.value(0, 0), 0.6, epsilon = 0.03);
    }

    #[test]
    fn constant_profile_averages_to_itself() {
        let model = EnsembleModel::new(0.47);
        let avg = ensemble_average(|_| Ok(0.37), &model).unwrap();
        assert_abs_diff_eq!(avg, 0.37, epsilon = 1e-15);
    }

    #[test]
    fn vanishing_cloud_recovers_axis_value() {
        // ratio -> 0: the weight collapses onto u = 0 where the scale is 1.
        let model = EnsembleModel {
            ratio: 1e-3,
            convention: WidthConvention::FieldAmplitude,
            radial_samples: 64,
        };
        let spec = PulseSpec::from_dimensionless(2.0 * PI, 0.0, 0.0, 0.0, 1.0).unwrap();
        let axis = excited_probability(&propagate(&spec, &settings(), 0.0).unwrap());
        let avg = ensemble_average(
            |s| {
                let local = spec.with_theta(2.0 * PI * s);
                Ok(excited_probability(&propagate(&local, &settings(), 0.0)?))
            },
            &model,
        )
        .unwrap();
        assert_abs_diff_eq!(avg, axis, epsilon = 1e-4);
    }

    #[test]
    fn rabi_washout_matches_dense_quadrature_oracle() {
        // Resonant 2-pi pulse averaged over the cloud: the analytic local
        // probability sin^2(theta e^{-u} / 2) integrated on a dense grid is
        // the oracle for the fixed-order rule.
        let model = EnsembleModel::new(0.47);
        let pe_local = |scale: f64| (PI * scale).sin().powi(2);
        let rho_sq = 0.47_f64 * 0.47;
        let u_max = 36.0 * rho_sq;
        let n = 1 << 15;
        let h = u_max / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..=n {
            let u = h * k as f64;
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            num += w * (-u / rho_sq).exp() * pe_local((-u).exp());
            den += w * (-u / rho_sq).exp();
        }
        let oracle = num / den;
        assert_relative_eq!(oracle, 0.313160123, max_relative = 1e-6);

        let avg = ensemble_average(|s| Ok(pe_local(s)), &model).unwrap();
        assert_relative_eq!(avg, oracle, max_relative = 2e-4);

        // Contrast washout: positive, and below the largest local value.
        assert!(avg > 0.0);
        assert!(avg < 1.0);
        let max_sampled = (0..=64)
            .map(|k| pe_local((-(u_max * k as f64 / 64.0)).exp()))
            .fold(0.0_f64, f64::max);
        assert!(avg < max_sampled);
    }

    #[test]
    fn ensemble_reduces_rabi_contrast() {
        let dw = crate::pulse::bandwidth_from_fwhm(3.1e13);
        let thetas: Vec<f64> = (1..=12).map(|k| 0.25 * PI * k as f64).collect();
        let plain = map_pe(&thetas, &[0.0], 1.04e13, dw, None, &settings()).unwrap();
        let averaged = map_pe(
            &thetas,
            &[0.0],
            1.04e13,
            dw,
            Some(&EnsembleModel::new(0.47)),
            &settings(),
        )
        .unwrap();
        let spread = |m: &GridMap2D| {
            let lo = m.values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = m.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        assert!(spread(&averaged) < spread(&plain));
    }

    #[test]
    fn finds_point_b() {
        let search = find_robust_point(
            0.637,
            &SearchBox {
                theta: (PI, 3.0 * PI),
                c2_prime: (1.0, 4.0),
            },
            None,
            &settings(),
        )
        .unwrap();
        assert!(search.robust);
        assert!((search.point.theta / PI - 1.78).abs() < 0.05);
        assert!((search.point.c2_prime - 2.52).abs() < 0.1);
        assert!(search.point.g <= 0.01);
        assert_abs_diff_eq!(search.point.pe, 0.5, epsilon = 0.02);
    }

    #[test]
    fn resonant_box_has_no_robust_point() {
        let search = find_robust_point(
            0.0,
            &SearchBox {
                theta: (PI, 3.0 * PI),
                c2_prime: (0.0, 0.1),
            },
            None,
            &settings(),
        )
        .unwrap();
        assert!(!search.robust);
        assert!(search.point.g > ROBUST_G_TOLERANCE);
    }

    #[test]
    fn map_minimum_agrees_with_search() {
        let thetas = linspace(1.2 * PI, 2.4 * PI, 25);
        let c2ps = linspace(1.5, 3.5, 21);
        let map = map_curvature(&thetas, &c2ps, 0.637, &settings()).unwrap();
        let (i, j, _) = map.min_node().unwrap();
        let search = find_robust_point(
            0.637,
            &SearchBox {
                theta: (1.2 * PI, 2.4 * PI),
                c2_prime: (1.5, 3.5),
            },
            None,
            &settings(),
        )
        .unwrap();
        let dtheta = thetas[1] - thetas[0];
        let dc2 = c2ps[1] - c2ps[0];
        assert!((map.axis1.samples[i] - search.point.theta).abs() <= dtheta);
        assert!((map.axis2.samples[j] - search.point.c2_prime).abs() <= dc2);
    }

    #[test]
    fn theta_solver_finds_rabi_crossing() {
        let theta = solve_theta_for_pe(0.0, 0.0, 0.5, (0.1 * PI, 0.9 * PI), 0.5 * PI, &settings())
            .unwrap();
        assert_relative_eq!(theta, 0.5 * PI, max_relative = 1e-5);
    }
}
