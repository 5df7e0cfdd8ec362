//! Minimal dense linear algebra for two-level problems: complex 2x2
//! matrices, the closed-form SU(2) exponential, and the small real solvers
//! used by the fitting and geometry code.

#[allow(unused_imports)]
use num_traits::Float as _;

/// Complex double used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// Dense complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64::new(0.0, 0.0); 2]; 2]);

    pub fn identity() -> Mat2 {
        Mat2([
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ])
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    /// `self += s * rhs` for real `s`.
    pub fn add_scaled(&mut self, rhs: &Mat2, s: f64) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j] * s;
            }
        }
    }

    /// Max-norm deviation of `U† U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut err: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((p.0[i][j] - target).norm());
            }
        }
        err
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }
}

/// Coefficients of a traceless Hermitian 2x2 matrix `n · σ`:
/// `[[nz, nx - i ny], [nx + i ny, -nz]]`, in angular-frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliVector {
    pub const ZERO: PauliVector = PauliVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn to_matrix(self) -> Mat2 {
        Mat2([
            [C64::new(self.z, 0.0), C64::new(self.x, -self.y)],
            [C64::new(self.x, self.y), C64::new(-self.z, 0.0)],
        ])
    }

    pub fn scaled(self, s: f64) -> PauliVector {
        PauliVector {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    pub fn add(self, o: PauliVector) -> PauliVector {
        PauliVector {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Exact unitary `exp(-i (n · σ) t)` via the SU(2) closed form
    /// `cos(|n| t) I - i sin(|n| t) n̂ · σ`.
    pub fn exp_minus_i_t(self, t: f64) -> Mat2 {
        let n = self.norm();
        let phase = n * t;
        // sin(|n| t)/|n| stays well-defined as |n| -> 0.
        let (c, s) = if phase.abs() < 1e-6 {
            let p2 = phase * phase;
            (phase.cos(), t * (1.0 - p2 / 6.0 * (1.0 - p2 / 20.0)))
        } else {
            (phase.cos(), phase.sin() / n)
        };
        Mat2([
            [
                C64::new(c, -s * self.z),
                C64::new(-s * self.y, -s * self.x),
            ],
            [
                C64::new(s * self.y, -s * self.x),
                C64::new(c, s * self.z),
            ],
        ])
    }
}

/// Solves `A x = b` for a small dense real system by Gaussian elimination
/// with partial pivoting. Returns `None` for a singular matrix.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let inv = 1.0 / a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] * inv;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    Some(())
}

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (descending) with matching unit eigenvectors.
pub fn symmetric_eigen_3x3(m: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut a = m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let rot = |mat: &mut [[f64; 3]; 3], row_based: bool| {
                for k in 0..3 {
                    let (mp, mq) = if row_based {
                        (mat[p][k], mat[q][k])
                    } else {
                        (mat[k][p], mat[k][q])
                    };
                    let np = c * mp - s * mq;
                    let nq = s * mp + c * mq;
                    if row_based {
                        mat[p][k] = np;
                        mat[q][k] = nq;
                    } else {
                        mat[k][p] = np;
                        mat[k][q] = nq;
                    }
                }
            };
            rot(&mut a, true);
            rot(&mut a, false);
            rot(&mut v, false);
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let evals = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let mut evecs = [[0.0; 3]; 3];
    for (slot, &idx) in order.iter().enumerate() {
        for k in 0..3 {
            evecs[slot][k] = v[k][idx];
        }
    }
    (evals, evecs)
}
