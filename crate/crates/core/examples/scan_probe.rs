use chirpsim_core::dynamics::{propagate, PropagationSettings};
use chirpsim_core::pulse::PulseSpec;
use chirpsim_core::robustness::{curvature_perturbative, fidelity, fidelity_curve, robust_width};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn rk4_state(theta: f64, c2p: f64, deltap: f64, gamma: f64, n: usize) -> [C64; 2] {
    let s2 = 1.0 + (c2p / 2.0) * (c2p / 2.0);
    let tau = 2.0 * s2.sqrt();
    let alpha = c2p / (8.0 * s2);
    let omega0 = theta / (PI.sqrt() * tau) * (1.0 + gamma);
    let t_max = 8.0 * tau;
    let dt = 2.0 * t_max / n as f64;
    let deriv = |t: f64, psi: [C64; 2]| -> [C64; 2] {
        let om = omega0 * (-(t / tau) * (t / tau)).exp();
        let xi = deltap * t - alpha * t * t;
        let h01 = 0.5 * om * C64::from_polar(1.0, -xi);
        [-C64::i() * (h01 * psi[1]), -C64::i() * (h01.conj() * psi[0])]
    };
    let mut psi = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut t = -t_max;
    for _ in 0..n {
        let k1 = deriv(t, psi);
        let p2 = [psi[0] + 0.5 * dt * k1[0], psi[1] + 0.5 * dt * k1[1]];
        let k2 = deriv(t + 0.5 * dt, p2);
        let p3 = [psi[0] + 0.5 * dt * k2[0], psi[1] + 0.5 * dt * k2[1]];
        let k3 = deriv(t + 0.5 * dt, p3);
        let p4 = [psi[0] + dt * k3[0], psi[1] + dt * k3[1]];
        let k4 = deriv(t + dt, p4);
        for i in 0..2 {
            psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += dt;
    }
    psi
}

fn main() {
    let settings = PropagationSettings::default();
    let (tb, cb) = (1.78019 * PI, 2.52588);

    // Cross-check F(gamma) near the crossing against dense RK4.
    let s = PulseSpec::from_dimensionless(tb, cb, 0.637, 0.0, 1.0).unwrap();
    for gamma in [0.40, 0.44, 0.45, 0.46, -0.44, -0.45] {
        let f_cf4 = fidelity(&s, &settings, gamma).unwrap();
        let a = rk4_state(tb, cb, 0.637, 0.0, 600_000);
        let b = rk4_state(tb, cb, 0.637, gamma, 600_000);
        let f_rk4 = (a[0].conj() * b[0] + a[1].conj() * b[1]).norm();
        println!("gamma={gamma:+.3}: F_cf4={f_cf4:.8} F_rk4={f_rk4:.8}");
    }

    // Ratio vs threshold.
    let gammas: Vec<f64> = (-180..=180).map(|k| k as f64 * 0.005).collect();
    let curve_b = fidelity_curve(&s, &settings, &gammas).unwrap();
    let rabi = PulseSpec::from_dimensionless(0.5 * PI, 0.0, 0.0, 0.0, 1.0).unwrap();
    let curve_r = fidelity_curve(&rabi, &settings, &gammas).unwrap();
    for thr in [0.99, 0.992, 0.994, 0.995, 0.996, 0.998] {
        let wb = robust_width(&curve_b, thr).unwrap();
        let wr = robust_width(&curve_r, thr).unwrap();
        println!("thr={thr}: wB={wb:.4} wRabi={wr:.4} ratio={:.3}", wb / wr);
    }

    // Valley minima at the A and C chirps.
    for (label, c2p) in [("A", 1.5), ("C", 3.5)] {
        let mut best = (0.0, f64::INFINITY);
        for k in 0..=120 {
            let th = (0.5 + 2.5 * k as f64 / 120.0) * PI;
            let sp = PulseSpec::from_dimensionless(th, c2p, 0.637, 0.0, 1.0).unwrap();
            let g = curvature_perturbative(&sp, &settings).unwrap();
            if g < best.1 {
                best = (th, g);
            }
        }
        println!("{label}: valley theta={:.4}pi g={:.4}", best.0 / PI, best.1);
    }
}
