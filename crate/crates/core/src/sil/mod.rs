//! Time propagation and two-time correlators.

pub mod checkpoint;
pub mod stepper;

use num_complex::Complex64 as C64;

pub use stepper::{advance, sil_step, SilConfig, StepInfo, Stepper};

use crate::error::{invalid, Result};
use crate::hilbert::{inner, DriveSpec, Hamiltonian, Operator, StateVector};

/// Observable samples on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    /// `values[i][j]`: observable `j` at `times[i]`.
    pub values: Vec<Vec<f64>>,
    pub final_state: StateVector,
    /// Steps where the Krylov space closed early.
    pub breakdowns: usize,
}

impl Trajectory {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    pub fn sample_spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }
}

/// Propagates `psi0` to `t_final`, recording `probe(t, psi)` every `stride` steps.
///
/// The step is shrunk slightly if needed so that an integer number of steps
/// reaches `t_final` exactly.
pub fn propagate_with<F>(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi0: &StateVector,
    t_final: f64,
    stride: usize,
    names: Vec<String>,
    mut probe: F,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[C64]) -> Result<Vec<f64>>,
{
    if !(t_final > psi0.t) {
        return Err(invalid(
            "t_final",
            format!("must exceed the initial time {}, got {t_final}", psi0.t),
        ));
    }
    if stride == 0 {
        return Err(invalid("stride", "must be >= 1"));
    }
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let span = t_final - psi0.t;
    let n = ((span / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let n = n.div_ceil(stride) * stride;
    let dt = span / n as f64;
    let mut psi = psi0.amplitudes.clone();
    let mut times = Vec::with_capacity(n / stride + 1);
    let mut values = Vec::with_capacity(n / stride + 1);
    times.push(psi0.t);
    values.push(probe(psi0.t, &psi)?);
    let mut breakdowns = 0;
    for i in 0..n {
        let t = psi0.t + i as f64 * dt;
        if stepper.step(h, drive, t, dt, &mut psi)?.breakdown {
            breakdowns += 1;
        }
        if (i + 1) % stride == 0 {
            let t_next = psi0.t + (i + 1) as f64 * dt;
            times.push(t_next);
            values.push(probe(t_next, &psi)?);
        }
    }
    Ok(Trajectory {
        times,
        names,
        values,
        final_state: StateVector::new(psi, t_final),
        breakdowns,
    })
}

/// Propagates and records expectation values of the listed operators.
pub fn propagate(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi0: &StateVector,
    t_final: f64,
    stride: usize,
    observables: &[Operator],
) -> Result<Trajectory> {
    let names = observables.iter().map(|o| format!("{o:?}")).collect();
    propagate_with(h, drive, cfg, psi0, t_final, stride, names, |t, psi| {
        observables
            .iter()
            .map(|&op| h.expectation(op, drive, t, psi))
            .collect()
    })
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.iter().any(|&x| !(x >= 0.0)) || taus.windows(2).any(|p| p[1] < p[0]) {
        return Err(invalid("taus", "must be non-negative and sorted"));
    }
    Ok(())
}

/// `<A(t) B(t - tau)>` for every `tau`, starting from `psi` given at time `t`.
///
/// `psi(t)` and `A psi(t)` are carried backward together; at each `t' = t - tau`
/// the correlator is `<U(t', t) A psi(t) | B psi(t')>`.
pub fn correlator_backward(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi_t: &StateVector,
    a: Operator,
    b: Operator,
    taus: &[f64],
) -> Result<Vec<C64>> {
    check_taus(taus)?;
    let t = psi_t.t;
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let mut psi = psi_t.amplitudes.clone();
    let mut chi = vec![C64::new(0.0, 0.0); h.dim()];
    h.apply_operator(a, drive, t, &psi, &mut chi)?;
    let mut bpsi = vec![C64::new(0.0, 0.0); h.dim()];
    let mut out = Vec::with_capacity(taus.len());
    let mut now = t;
    for &tau in taus {
        let target = t - tau;
        advance(&mut stepper, h, drive, now, target, &mut psi)?;
        advance(&mut stepper, h, drive, now, target, &mut chi)?;
        now = target;
        h.apply_operator(b, drive, now, &psi, &mut bpsi)?;
        out.push(inner(&chi, &bpsi));
    }
    Ok(out)
}

/// `<A(t' + tau) B(t')>` for every `tau`, starting from `psi` given at time `t'`.
///
/// `B psi(t')` is carried forward alongside `psi`.
pub fn correlator_forward(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi_tp: &StateVector,
    a: Operator,
    b: Operator,
    taus: &[f64],
) -> Result<Vec<C64>> {
    check_taus(taus)?;
    let tp = psi_tp.t;
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let mut psi = psi_tp.amplitudes.clone();
    let mut phi = vec![C64::new(0.0, 0.0); h.dim()];
    h.apply_operator(b, drive, tp, &psi, &mut phi)?;
    let mut apsi = vec![C64::new(0.0, 0.0); h.dim()];
    let mut out = Vec::with_capacity(taus.len());
    let mut now = tp;
    for &tau in taus {
        let target = tp + tau;
        advance(&mut stepper, h, drive, now, target, &mut psi)?;
        advance(&mut stepper, h, drive, now, target, &mut phi)?;
        now = target;
        h.apply_operator(a, drive, now, &psi, &mut apsi)?;
        out.push(inner(&apsi, &phi));
    }
    Ok(out)
}

/// `<A(t) B(t - tau)>` with the state prepared at `psi0.t`; propagates to `t` first.
pub fn two_time_correlator(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi0: &StateVector,
    a: Operator,
    b: Operator,
    t: f64,
    taus: &[f64],
) -> Result<Vec<C64>> {
    check_taus(taus)?;
    let max_tau = taus.last().copied().unwrap_or(0.0);
    if t < psi0.t + max_tau - 1e-12 {
        return Err(invalid(
            "t",
            format!(
                "must be >= {} (initial time plus the largest tau)",
                psi0.t + max_tau
            ),
        ));
    }
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let mut psi = psi0.amplitudes.clone();
    advance(&mut stepper, h, drive, psi0.t, t, &mut psi)?;
    correlator_backward(h, drive, cfg, &StateVector::new(psi, t), a, b, taus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_model, BathSpec, Beta, Terms};
    use nalgebra::{DMatrix, DVector};

    fn model(m: usize, n: usize, alpha: f64) -> Hamiltonian {
        build_model(&BathSpec::ohmic(alpha, 10.0, m, n, Beta::Infinite), 1.0)
            .unwrap()
            .1
    }

    fn dense(h: &Hamiltonian, terms: &Terms) -> DMatrix<C64> {
        let d = h.dim();
        let mut m = DMatrix::zeros(d, d);
        let mut e = vec![C64::new(0.0, 0.0); d];
        let mut out = e.clone();
        for j in 0..d {
            e.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            h.apply_terms(terms, &e, &mut out).unwrap();
            for i in 0..d {
                m[(i, j)] = out[i];
            }
        }
        m
    }

    fn expm_apply(m: &DMatrix<C64>, dt: f64, v: &DVector<C64>) -> DVector<C64> {
        let eig = m.clone().symmetric_eigen();
        let q = &eig.eigenvectors;
        let mut c = q.adjoint() * v;
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            c[i] *= C64::from_polar(1.0, -l * dt);
        }
        q * c
    }

    #[test]
    fn saturated_krylov_equals_dense_exponential() {
        let h = model(2, 1, 0.2);
        let drive = DriveSpec::undriven();
        let terms = h.terms_at(&drive, 0.0);
        let cfg = SilConfig {
            dt: 0.3,
            krylov_dim: 8,
            ..SilConfig::default()
        };
        let psi0 = StateVector::y_state(h.dim(), true);
        let (psi1, info) = sil_step(&h, &drive, &cfg, &psi0).unwrap();
        assert!(info.breakdown);
        let exact = expm_apply(
            &dense(&h, &terms),
            0.3,
            &DVector::from_vec(psi0.amplitudes.clone()),
        );
        for (a, b) in psi1.amplitudes.iter().zip(exact.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn free_rabi_oscillation() {
        let h = model(2, 1, 0.0);
        let drive = DriveSpec::undriven();
        let cfg = SilConfig::default();
        let traj = propagate(
            &h,
            &drive,
            &cfg,
            &StateVector::up(h.dim()),
            5.0,
            10,
            &[Operator::SigmaZ],
        )
        .unwrap();
        for (t, v) in traj.times.iter().zip(traj.values.iter()) {
            assert!((v[0] - t.cos()).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn zero_hamiltonian_keeps_observables() {
        let h = build_model(&BathSpec::ohmic(0.0, 10.0, 2, 1, Beta::Infinite), 0.0)
            .unwrap()
            .1;
        let psi = StateVector::y_state(h.dim(), true);
        let traj = propagate(
            &h,
            &DriveSpec::undriven(),
            &SilConfig::default(),
            &psi,
            1.0,
            5,
            &[Operator::SigmaX],
        )
        .unwrap();
        for row in &traj.values {
            assert!(row[0].abs() < 1e-14);
        }
    }

    #[test]
    fn norm_is_preserved() {
        let h = model(3, 2, 0.1);
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let cfg = SilConfig::default();
        let traj = propagate(
            &h,
            &drive,
            &cfg,
            &StateVector::up(h.dim()),
            100.0,
            10_000,
            &[Operator::Identity],
        )
        .unwrap();
        assert!((traj.final_state.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn forward_then_backward_returns() {
        let h = model(3, 2, 0.1);
        let drive = DriveSpec::undriven();
        let cfg = SilConfig::default();
        let mut stepper = Stepper::new(cfg, h.dim()).unwrap();
        let psi0 = StateVector::y_state(h.dim(), false);
        let mut psi = psi0.amplitudes.clone();
        stepper.step(&h, &drive, 0.0, 0.01, &mut psi).unwrap();
        stepper.step(&h, &drive, 0.01, -0.01, &mut psi).unwrap();
        for (a, b) in psi.iter().zip(&psi0.amplitudes) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn identity_correlator_is_one() {
        let h = model(3, 2, 0.1);
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let taus: Vec<f64> = (0..20).map(|i| 0.1 * i as f64).collect();
        let c = two_time_correlator(
            &h,
            &drive,
            &SilConfig::default(),
            &StateVector::up(h.dim()),
            Operator::Identity,
            Operator::Identity,
            3.0,
            &taus,
        )
        .unwrap();
        for z in c {
            assert!((z - C64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn free_spin_correlator() {
        // ground state of -(Delta/2) sigma_x is (|+> + |->)/sqrt(2)
        let h = model(2, 1, 0.0);
        let drive = DriveSpec::undriven();
        let psi =
            StateVector::product(h.dim(), [C64::new(1.0, 0.0), C64::new(1.0, 0.0)], 0.0).unwrap();
        let taus: Vec<f64> = (0..30).map(|i| 0.2 * i as f64).collect();
        let c = correlator_forward(
            &h,
            &drive,
            &SilConfig::default(),
            &psi,
            Operator::SigmaZ,
            Operator::SigmaZ,
            &taus,
        )
        .unwrap();
        for (z, &tau) in c.iter().zip(&taus) {
            assert!(
                (z - C64::from_polar(1.0, -tau)).norm() < 1e-9,
                "tau = {tau}"
            );
        }
        let back = two_time_correlator(
            &h,
            &drive,
            &SilConfig::default(),
            &psi,
            Operator::SigmaZ,
            Operator::SigmaZ,
            6.0,
            &taus,
        )
        .unwrap();
        for (z, &tau) in back.iter().zip(&taus) {
            assert!(
                (z - C64::from_polar(1.0, -tau)).norm() < 1e-9,
                "tau = {tau}"
            );
        }
    }

    #[test]
    fn correlators_match_dense_evaluation() {
        let h = model(3, 2, 0.1);
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let cfg = SilConfig::default();
        let psi0 = StateVector::up(h.dim());
        let t = 2.0;
        let taus: Vec<f64> = (0..=10).map(|i| 0.15 * i as f64).collect();
        let got = two_time_correlator(
            &h,
            &drive,
            &cfg,
            &psi0,
            Operator::SigmaZ,
            Operator::SigmaZ,
            t,
            &taus,
        )
        .unwrap();

        let sz = dense(
            &h,
            &Terms {
                sigma_z: 1.0,
                ..Terms::default()
            },
        );
        // dense propagators on the same midpoint grid isolate the Krylov projection
        let evolve = |v: DVector<C64>, t0: f64, t1: f64| {
            let n = ((t1 - t0) / cfg.dt).round() as usize;
            if n == 0 {
                return v;
            }
            let dt = (t1 - t0) / n as f64;
            let mut v = v;
            for i in 0..n {
                let mid = t0 + (i as f64 + 0.5) * dt;
                v = expm_apply(&dense(&h, &h.terms_at(&drive, mid)), dt, &v);
            }
            v
        };
        let v0 = DVector::from_vec(psi0.amplitudes.clone());
        for (k, &tau) in taus.iter().enumerate() {
            let tp = t - tau;
            let psi_tp = evolve(v0.clone(), 0.0, tp);
            let phi = evolve(&sz * &psi_tp, tp, t);
            let psi_t = evolve(psi_tp, tp, t);
            let exact = (psi_t.adjoint() * (&sz * phi))[(0, 0)];
            assert!(
                (got[k] - exact).norm() < 1e-7,
                "tau = {tau}: {} vs {exact}",
                got[k]
            );
        }
    }

    #[test]
    fn hermitian_symmetry_of_correlators() {
        let h = model(3, 2, 0.1);
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let cfg = SilConfig::default();
        let psi0 = StateVector::up(h.dim());
        let (t1, t2) = (1.3, 2.1);
        let a = two_time_correlator(
            &h,
            &drive,
            &cfg,
            &psi0,
            Operator::SigmaZ,
            Operator::SigmaZ,
            t2,
            &[t2 - t1],
        )
        .unwrap()[0];
        let mut stepper = Stepper::new(cfg, h.dim()).unwrap();
        let mut psi = psi0.amplitudes.clone();
        advance(&mut stepper, &h, &drive, 0.0, t1, &mut psi).unwrap();
        let b = correlator_forward(
            &h,
            &drive,
            &cfg,
            &StateVector::new(psi, t1),
            Operator::SigmaZ,
            Operator::SigmaZ,
            &[t2 - t1],
        )
        .unwrap()[0];
        // <sz(t2) sz(t1)> from both schemes, and its conjugate <sz(t1) sz(t2)>
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_grids() {
        let h = model(2, 1, 0.1);
        let psi = StateVector::up(h.dim());
        let drive = DriveSpec::undriven();
        let cfg = SilConfig::default();
        assert!(two_time_correlator(
            &h,
            &drive,
            &cfg,
            &psi,
            Operator::SigmaZ,
            Operator::SigmaZ,
            1.0,
            &[0.0, 2.0]
        )
        .is_err());
        assert!(two_time_correlator(
            &h,
            &drive,
            &cfg,
            &psi,
            Operator::SigmaZ,
            Operator::SigmaZ,
            3.0,
            &[1.0, 0.5]
        )
        .is_err());
        assert!(propagate(&h, &drive, &cfg, &psi, 0.0, 1, &[]).is_err());
    }
}
