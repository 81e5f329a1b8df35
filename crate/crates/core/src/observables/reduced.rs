//! Reduced TLS state, trace distance and the non-Markovianity witness.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{DriveSpec, Hamiltonian, StateVector};
use crate::sil::{propagate_with, SilConfig};

/// 2x2 density matrix of the TLS; index 0 is `sigma_z = +1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedState(pub [[C64; 2]; 2]);

impl ReducedState {
    pub fn trace(&self) -> f64 {
        self.0[0][0].re + self.0[1][1].re
    }

    pub fn purity(&self) -> f64 {
        let m = &self.0;
        m[0][0].norm_sqr() + m[1][1].norm_sqr() + 2.0 * m[0][1].norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues(&self.0)
    }

    /// Bloch vector `(<sigma_x>, <sigma_y>, <sigma_z>)`.
    pub fn bloch(&self) -> [f64; 3] {
        let m = &self.0;
        [2.0 * m[0][1].re, -2.0 * m[0][1].im, m[0][0].re - m[1][1].re]
    }
}

fn hermitian_eigenvalues(m: &[[C64; 2]; 2]) -> [f64; 2] {
    let (a, d) = (m[0][0].re, m[1][1].re);
    let r = (0.25 * (a - d).powi(2) + m[0][1].norm_sqr()).sqrt();
    let c = 0.5 * (a + d);
    [c - r, c + r]
}

/// Partial trace over the bath: `rho_{s s'} = sum_b psi_{s b} conj(psi_{s' b})`.
pub fn reduce(psi: &[C64], dim: usize) -> Result<ReducedState> {
    if psi.len() != dim || !dim.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.len(),
        });
    }
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for pair in psi.chunks_exact(2) {
        for s in 0..2 {
            for sp in 0..2 {
                m[s][sp] += pair[s] * pair[sp].conj();
            }
        }
    }
    Ok(ReducedState(m))
}

/// Half the sum of singular values of `rho1 - rho2`.
pub fn trace_distance(rho1: &ReducedState, rho2: &ReducedState) -> f64 {
    let mut d = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            d[i][j] = rho1.0[i][j] - rho2.0[i][j];
        }
    }
    let [a, b] = hermitian_eigenvalues(&d);
    0.5 * (a.abs() + b.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSeries {
    pub times: Vec<f64>,
    pub distance: Vec<f64>,
}

impl WitnessSeries {
    /// Sum of all increases of the trace distance along the series.
    pub fn positive_growth(&self) -> f64 {
        self.distance
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .sum()
    }
}

/// Trace distance between the evolutions of `|y,+>` and `|y,->` on the same bath reference.
pub fn witness_series(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    t_final: f64,
    stride: usize,
) -> Result<WitnessSeries> {
    let dim = h.dim();
    let run = |plus: bool| {
        propagate_with(
            h,
            drive,
            cfg,
            &StateVector::y_state(dim, plus),
            t_final,
            stride,
            Vec::new(),
            |_, psi| {
                let r = reduce(psi, dim)?.0;
                Ok(vec![r[0][0].re, r[1][1].re, r[0][1].re, r[0][1].im])
            },
        )
    };
    let (a, b) = rayon::join(|| run(true), || run(false));
    let (a, b) = (a?, b?);
    let unpack = |v: &[f64]| {
        ReducedState([
            [C64::new(v[0], 0.0), C64::new(v[2], v[3])],
            [C64::new(v[2], -v[3]), C64::new(v[1], 0.0)],
        ])
    };
    let distance = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| trace_distance(&unpack(x), &unpack(y)))
        .collect();
    Ok(WitnessSeries {
        times: a.times,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn product_state_is_pure() {
        let psi = StateVector::up(8);
        let r = reduce(&psi.amplitudes, 8).unwrap();
        assert_eq!(r.0[0][0], C64::new(1.0, 0.0));
        assert_eq!(r.0[1][1], C64::new(0.0, 0.0));
        assert!((r.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entangled_state_is_maximally_mixed() {
        // (|+, config 1> + |-, config 0>) / sqrt 2
        let mut psi = vec![C64::new(0.0, 0.0); 8];
        psi[2] = C64::new(FRAC_1_SQRT_2, 0.0);
        psi[1] = C64::new(FRAC_1_SQRT_2, 0.0);
        let r = reduce(&psi, 8).unwrap();
        assert!((r.0[0][0].re - 0.5).abs() < 1e-15 && (r.0[1][1].re - 0.5).abs() < 1e-15);
        assert!(r.0[0][1].norm() < 1e-15);
        assert!((r.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_y_states_are_distinguishable() {
        let a = reduce(&StateVector::y_state(4, true).amplitudes, 4).unwrap();
        let b = reduce(&StateVector::y_state(4, false).amplitudes, 4).unwrap();
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-14);
        assert_eq!(trace_distance(&a, &a), 0.0);
        assert!((a.bloch()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reduce_checks_dimension() {
        assert!(reduce(&[C64::new(1.0, 0.0); 3], 4).is_err());
    }

    #[test]
    fn positive_growth_sums_increases() {
        let w = WitnessSeries {
            times: vec![0.0, 1.0, 2.0, 3.0],
            distance: vec![1.0, 0.5, 0.7, 0.6],
        };
        assert!((w.positive_growth() - 0.2).abs() < 1e-15);
    }
}
