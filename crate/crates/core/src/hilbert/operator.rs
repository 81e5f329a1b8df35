//! Matrix-free application of the Hamiltonian and its terms.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::basis::{Csr, TruncatedBasis};
use crate::hilbert::bath::BathModes;
use crate::hilbert::drive::DriveSpec;

/// Rows per rayon task; below this the kernel runs serially.
const PAR_MIN_CONFIGS: usize = 2048;

/// Operator tags usable in correlators and expectation values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Identity,
    SigmaZ,
    SigmaX,
    /// `H_B` with the reference energy subtracted.
    BathEnergy,
    /// `H_SB = (sigma_z / 2) sum_k g_k (b_k + b_k^dagger)`.
    Coupling,
    /// `H_S(t)` at the time passed alongside.
    System,
}

/// Linear combination of the elementary terms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Terms {
    pub identity: f64,
    pub sigma_z: f64,
    pub sigma_x: f64,
    pub bath: f64,
    pub coupling: f64,
}

impl Terms {
    pub fn of(op: Operator, system: Terms) -> Terms {
        let mut t = Terms::default();
        match op {
            Operator::Identity => t.identity = 1.0,
            Operator::SigmaZ => t.sigma_z = 1.0,
            Operator::SigmaX => t.sigma_x = 1.0,
            Operator::BathEnergy => t.bath = 1.0,
            Operator::Coupling => t.coupling = 1.0,
            Operator::System => return system,
        }
        t
    }
}

/// Precomputed pieces of the spin-boson Hamiltonian on a truncated basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    basis: Arc<TruncatedBasis>,
    coupling: Arc<Csr>,
    bath_energy: Arc<Vec<f64>>,
    delta: f64,
}

impl Hamiltonian {
    pub fn new(basis: Arc<TruncatedBasis>, modes: &BathModes, delta: f64) -> Result<Self> {
        if modes.len() != basis.m_mod() {
            return Err(Error::DimensionMismatch {
                expected: basis.m_mod(),
                found: modes.len(),
            });
        }
        let coupling = Arc::new(basis.coupling_matrix(modes));
        let bath_energy = Arc::new(basis.bath_energies(modes));
        Ok(Self {
            basis,
            coupling,
            bath_energy,
            delta,
        })
    }

    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> Arc<TruncatedBasis> {
        self.basis.clone()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `H_S(t) = -(eps1 + eps2)/2 sigma_z - (Delta/2) sigma_x`.
    pub fn system_terms(&self, drive: &DriveSpec, t: f64) -> Terms {
        Terms {
            sigma_z: drive.bias(t),
            sigma_x: -0.5 * self.delta,
            ..Terms::default()
        }
    }

    /// Full `H(t)`.
    pub fn terms_at(&self, drive: &DriveSpec, t: f64) -> Terms {
        Terms {
            bath: 1.0,
            coupling: 1.0,
            ..self.system_terms(drive, t)
        }
    }

    /// `out = (sum of terms) psi`.
    pub fn apply_terms(&self, terms: &Terms, psi: &[C64], out: &mut [C64]) -> Result<()> {
        let dim = self.dim();
        for len in [psi.len(), out.len()] {
            if len != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: len,
                });
            }
        }
        let energy = &self.bath_energy;
        let csr = &self.coupling;
        let half_g = 0.5 * terms.coupling;
        let kernel = |b: usize, pair: &mut [C64]| {
            let up = psi[2 * b];
            let dn = psi[2 * b + 1];
            let diag = terms.identity + terms.bath * energy[b];
            let mut o_up = up * (diag + terms.sigma_z) + dn * terms.sigma_x;
            let mut o_dn = dn * (diag - terms.sigma_z) + up * terms.sigma_x;
            if half_g != 0.0 {
                let (cols, vals) = csr.row(b);
                let mut acc_up = C64::new(0.0, 0.0);
                let mut acc_dn = C64::new(0.0, 0.0);
                for (&c, &v) in cols.iter().zip(vals) {
                    let c = c as usize;
                    acc_up += psi[2 * c] * v;
                    acc_dn += psi[2 * c + 1] * v;
                }
                o_up += acc_up * half_g;
                o_dn -= acc_dn * half_g;
            }
            pair[0] = o_up;
            pair[1] = o_dn;
        };
        if dim / 2 >= PAR_MIN_CONFIGS {
            out.par_chunks_mut(2)
                .with_min_len(PAR_MIN_CONFIGS / 4)
                .enumerate()
                .for_each(|(b, p)| kernel(b, p));
        } else {
            out.chunks_mut(2)
                .enumerate()
                .for_each(|(b, p)| kernel(b, p));
        }
        Ok(())
    }

    pub fn apply_operator(
        &self,
        op: Operator,
        drive: &DriveSpec,
        t: f64,
        psi: &[C64],
        out: &mut [C64],
    ) -> Result<()> {
        self.apply_terms(&Terms::of(op, self.system_terms(drive, t)), psi, out)
    }

    /// `<psi| op |psi>` (real part; all tagged operators are Hermitian).
    pub fn expectation(&self, op: Operator, drive: &DriveSpec, t: f64, psi: &[C64]) -> Result<f64> {
        match op {
            Operator::Identity => Ok(psi.iter().map(|z| z.norm_sqr()).sum()),
            Operator::SigmaZ => {
                check(psi.len(), self.dim())?;
                Ok(psi
                    .chunks(2)
                    .map(|p| p[0].norm_sqr() - p[1].norm_sqr())
                    .sum())
            }
            _ => {
                let mut tmp = vec![C64::new(0.0, 0.0); psi.len()];
                self.apply_operator(op, drive, t, psi, &mut tmp)?;
                Ok(inner(psi, &tmp).re)
            }
        }
    }
}

fn check(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `<a|b>`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `H(t) psi` for the given drive.
pub fn apply_hamiltonian(
    h: &Hamiltonian,
    drive: &DriveSpec,
    t: f64,
    psi: &[C64],
    out: &mut [C64],
) -> Result<()> {
    h.apply_terms(&h.terms_at(drive, t), psi, out)
}

/// `op psi` for a single tagged term.
pub fn apply_operator(
    h: &Hamiltonian,
    op: Operator,
    drive: &DriveSpec,
    t: f64,
    psi: &[C64],
    out: &mut [C64],
) -> Result<()> {
    h.apply_operator(op, drive, t, psi, out)
}
