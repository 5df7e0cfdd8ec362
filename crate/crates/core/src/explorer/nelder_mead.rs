//! Bounded two-dimensional Nelder-Mead simplex minimization.
//!
//! Deterministic: no restarts, no randomness. Points are clamped to the
//! bounds with a quadratic penalty on the excursion so the simplex cannot
//! wander off the box.

use alloc::vec::Vec;

use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Bounds {
    fn clamp(&self, x: [f64; 2]) -> [f64; 2] {
        [
            x[0].clamp(self.lo[0], self.hi[0]),
            x[1].clamp(self.lo[1], self.hi[1]),
        ]
    }

    fn excursion(&self, x: [f64; 2]) -> f64 {
        let c = self.clamp(x);
        let dx = (x[0] - c[0]) / (self.hi[0] - self.lo[0]).max(1e-300);
        let dy = (x[1] - c[1]) / (self.hi[1] - self.lo[1]).max(1e-300);
        dx * dx + dy * dy
    }
}

pub struct Outcome {
    pub x: [f64; 2],
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` over the box starting from `start`, with the initial
/// simplex scaled to `step` times the box widths.
pub fn minimize<F>(
    mut f: F,
    start: [f64; 2],
    bounds: Bounds,
    step: f64,
    max_iter: usize,
) -> Result<Outcome>
where
    F: FnMut([f64; 2]) -> Result<f64>,
{
    let mut evaluations = 0usize;
    let mut eval = |x: [f64; 2]| -> Result<f64> {
        evaluations += 1;
        let penalty = bounds.excursion(x);
        Ok(f(bounds.clamp(x))? + 1e3 * penalty)
    };

    let widths = [bounds.hi[0] - bounds.lo[0], bounds.hi[1] - bounds.lo[1]];
    let start = bounds.clamp(start);
    let mut simplex: Vec<([f64; 2], f64)> = Vec::with_capacity(3);
    simplex.push((start, eval(start)?));
    for dim in 0..2 {
        let mut p = start;
        p[dim] += step * widths[dim];
        if p[dim] > bounds.hi[dim] {
            p[dim] = start[dim] - step * widths[dim];
        }
        simplex.push((p, eval(p)?));
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = (simplex[2].1 - simplex[0].1).abs();
        let size = (0..2)
            .map(|d| {
                let lo = simplex.iter().map(|p| p.0[d]).fold(f64::INFINITY, f64::min);
                let hi = simplex
                    .iter()
                    .map(|p| p.0[d])
                    .fold(f64::NEG_INFINITY, f64::max);
                (hi - lo) / widths[d].max(1e-300)
            })
            .fold(0.0_f64, f64::max);
        if size < 1e-6 && spread < 1e-12 {
            break;
        }

        let best = simplex[0];
        let worst = simplex[2];
        let centroid = [
            (simplex[0].0[0] + simplex[1].0[0]) / 2.0,
            (simplex[0].0[1] + simplex[1].0[1]) / 2.0,
        ];
        let dir = [centroid[0] - worst.0[0], centroid[1] - worst.0[1]];
        let at = |t: f64| [centroid[0] + t * dir[0], centroid[1] + t * dir[1]];

        let reflected = at(1.0);
        let fr = eval(reflected)?;
        if fr < best.1 {
            let expanded = at(2.0);
            let fe = eval(expanded)?;
            simplex[2] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { at(0.5) } else { at(-0.5) };
            let fc = eval(contracted)?;
            if fc < worst.1.min(fr) {
                simplex[2] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                for k in 1..3 {
                    let p = [
                        best.0[0] + 0.5 * (simplex[k].0[0] - best.0[0]),
                        best.0[1] + 0.5 * (simplex[k].0[1] - best.0[1]),
                    ];
                    simplex[k] = (p, eval(p)?);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let x = bounds.clamp(simplex[0].0);
    Ok(Outcome {
        x,
        value: simplex[0].1,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_quadratic_minimum() {
        let bounds = Bounds {
            lo: [-2.0, -2.0],
            hi: [3.0, 3.0],
        };
        let out = minimize(
            |x| Ok((x[0] - 1.2).powi(2) + 3.0 * (x[1] + 0.4).powi(2)),
            [0.0, 0.0],
            bounds,
            0.1,
            300,
        )
        .unwrap();
        assert_abs_diff_eq!(out.x[0], 1.2, epsilon = 1e-4);
        assert_abs_diff_eq!(out.x[1], -0.4, epsilon = 1e-4);
    }

    #[test]
    fn respects_bounds() {
        let bounds = Bounds {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
        };
        // Unconstrained minimum at (2, 0.5) sits outside the box.
        let out = minimize(
            |x| Ok((x[0] - 2.0).powi(2) + (x[1] - 0.5).powi(2)),
            [0.5, 0.5],
            bounds,
            0.2,
            300,
        )
        .unwrap();
        assert!(out.x[0] <= 1.0 + 1e-12);
        assert_abs_diff_eq!(out.x[0], 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(out.x[1], 0.5, epsilon = 1e-3);
    }

    #[test]
    fn rosenbrock_valley() {
        let bounds = Bounds {
            lo: [-2.0, -1.0],
            hi: [2.0, 3.0],
        };
        let out = minimize(
            |x| Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            [-1.2, 1.0],
            bounds,
            0.1,
            2000,
        )
        .unwrap();
        assert_abs_diff_eq!(out.x[0], 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(out.x[1], 1.0, epsilon = 1e-3);
    }
}
