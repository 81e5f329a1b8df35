//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use wtw_core::hilbert::{DriveSpec, Hamiltonian};
use wtw_core::quad::integrate;
use wtw_core::C64;

/// Dense real-symmetric matrix of `H(t)`.
pub fn dense_hamiltonian(h: &Hamiltonian, drive: &DriveSpec, t: f64) -> DMatrix<f64> {
    let d = h.dim();
    let terms = h.terms_at(drive, t);
    let mut m = DMatrix::zeros(d, d);
    let mut e = vec![C64::new(0.0, 0.0); d];
    let mut col = vec![C64::new(0.0, 0.0); d];
    for j in 0..d {
        e[j] = C64::new(1.0, 0.0);
        h.apply_terms(&terms, &e, &mut col).unwrap();
        e[j] = C64::new(0.0, 0.0);
        for i in 0..d {
            m[(i, j)] = col[i].re;
        }
    }
    m
}

fn expm_apply(m: &DMatrix<f64>, dt: f64, v: &DVector<C64>) -> DVector<C64> {
    let eig = SymmetricEigen::new(m.clone());
    let q = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let mut w = q.adjoint() * v;
    for (k, lam) in eig.eigenvalues.iter().enumerate() {
        w[k] *= C64::from_polar(1.0, -lam * dt);
    }
    q * w
}

/// Fourth-order commutator-free Magnus propagation with `substeps` per unit `dt`.
pub fn exact_propagate(
    h: &Hamiltonian,
    drive: &DriveSpec,
    psi: &[C64],
    t0: f64,
    t1: f64,
    substeps: usize,
) -> Vec<C64> {
    let s3 = 3f64.sqrt();
    let (c1, c2) = (0.5 - s3 / 6.0, 0.5 + s3 / 6.0);
    let (a1, a2) = ((3.0 - 2.0 * s3) / 12.0, (3.0 + 2.0 * s3) / 12.0);
    let dt = (t1 - t0) / substeps as f64;
    let mut v = DVector::from_vec(psi.to_vec());
    for k in 0..substeps {
        let t = t0 + k as f64 * dt;
        let h1 = dense_hamiltonian(h, drive, t + c1 * dt);
        let h2 = dense_hamiltonian(h, drive, t + c2 * dt);
        v = expm_apply(&(&h1 * a2 + &h2 * a1), dt, &v);
        v = expm_apply(&(&h1 * a1 + &h2 * a2), dt, &v);
    }
    v.iter().copied().collect()
}

/// `sigma_z` diagonal of the basis: `+1` on even indices, `-1` on odd ones.
pub fn sigma_z_expectation(psi: &[C64]) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(i, z)| {
            if i % 2 == 0 {
                z.norm_sqr()
            } else {
                -z.norm_sqr()
            }
        })
        .sum()
}

/// `R1, R2` at `alpha = 1/2` by direct quadrature at finite `omega_c / gamma`.
///
/// Kernel: `Delta^2 exp(-W(tau)) = (2 gamma / beta) (wc tau / sqrt(1 + (wc tau)^2)) / sinh(pi tau / beta)`.
pub fn toulouse_r_quadrature(gamma: f64, beta: f64, omega: f64, wc_over_gamma: f64) -> (f64, f64) {
    let wc = wc_over_gamma * gamma;
    let kernel = |t: f64| {
        if t == 0.0 {
            return 2.0 * gamma / beta * wc * beta / PI;
        }
        let x = wc * t;
        2.0 * gamma / beta * (x / (1.0 + x * x).sqrt()) / (PI * t / beta).sinh()
            * (-0.5 * gamma * t).exp()
    };
    // short-time panels resolve the cutoff scale, long-time panels the oscillation
    let mut knots = vec![0.0];
    let mut x = 1.0 / wc;
    while x < 0.1 / omega.max(gamma) {
        knots.push(x);
        x *= 10.0;
    }
    let panel = (2.0 * PI / omega).min(0.5 / gamma);
    let mut t = 0.1 / omega.max(gamma);
    let t_end = 80.0 * (beta / PI).max(2.0 / gamma);
    while t < t_end {
        knots.push(t);
        t += panel;
    }
    knots.push(t_end);
    let (mut r1, mut r2) = (0.0, 0.0);
    for w in knots.windows(2) {
        r1 += integrate(
            |t| kernel(t) * (omega * t).sin(),
            w[0],
            w[1],
            1e-16,
            1e-13,
            200,
        )
        .0;
        r2 += integrate(
            |t| kernel(t) * 2.0 * (0.5 * omega * t).sin().powi(2),
            w[0],
            w[1],
            1e-16,
            1e-13,
            200,
        )
        .0;
    }
    (r1, r2)
}

/// Richardson extrapolation in `1 / omega_c` over `omega_c / Delta = 1e2, 1e3, 1e4`.
pub fn toulouse_r_extrapolated(gamma: f64, beta: f64, omega: f64) -> (f64, f64) {
    let ratios = [1e2f64, 1e3, 1e4].map(|r| 2.0 * r * r / PI);
    let v = ratios.map(|q| toulouse_r_quadrature(gamma, beta, omega, q));
    // successive ratios are 100: eliminate the 1 / omega_c term from the two finest
    let rich = |a: f64, b: f64| (100.0 * b - a) / 99.0;
    (rich(v[1].0, v[2].0), rich(v[1].1, v[2].1))
}

/// One step of the midpoint scheme, `exp(-i H(t + dt/2) dt) psi`, by dense diagonalization.
pub fn dense_midpoint_step(
    h: &Hamiltonian,
    drive: &DriveSpec,
    psi: &[C64],
    t: f64,
    dt: f64,
) -> Vec<C64> {
    let m = dense_hamiltonian(h, drive, t + 0.5 * dt);
    expm_apply(&m, dt, &DVector::from_vec(psi.to_vec()))
        .iter()
        .copied()
        .collect()
}
