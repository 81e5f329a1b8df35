use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use wtw_core::analytic::{
    delta_eff, toulouse_onsager, weak_coupling_onsager, ToulouseParams, WeakCouplingParams,
};
use wtw_core::hilbert::{
    apply_hamiltonian, build_model, discretize_bath, enumerate_basis, inner, norm, BathSpec, Beta,
    DriveSpec, Hamiltonian, StateVector,
};
use wtw_core::linres::{efficiency, me_line_and_performance, mean_powers, OnsagerMatrix};
use wtw_core::observables::{reduce, trace_distance};
use wtw_core::sil::{propagate, SilConfig};
use wtw_core::tur::dynamic_bound;
use wtw_core::C64;

fn small_model(alpha: f64) -> Hamiltonian {
    build_model(&BathSpec::ohmic(alpha, 10.0, 3, 2, Beta::Infinite), 1.0)
        .unwrap()
        .1
}

fn random_vector(seed: &[(f64, f64)], dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|i| {
            let (a, b) = seed[i % seed.len()];
            C64::new(a + 0.1 * i as f64, b - 0.05 * i as f64)
        })
        .collect()
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 7)
}

fn apply(h: &Hamiltonian, drive: &DriveSpec, t: f64, psi: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    apply_hamiltonian(h, drive, t, psi, &mut out).unwrap();
    out
}

fn onsager_sources() -> impl Strategy<Value = OnsagerMatrix> {
    let weak = (0.005..0.3f64, 0.05..5.0f64, -3.0..3.0f64).prop_map(|(alpha, omega, phi)| {
        weak_coupling_onsager(
            &WeakCouplingParams::new(alpha, 1.0, 10.0, Beta::Finite(10.0)).unwrap(),
            omega,
            phi,
        )
    });
    let toulouse = (0.2..5.0f64, 0.05..20.0f64, -3.0..3.0f64).prop_map(|(beta, omega, phi)| {
        toulouse_onsager(
            &ToulouseParams::new(1.0, Beta::Finite(beta)).unwrap(),
            omega,
            phi,
        )
        .unwrap()
    });
    prop_oneof![weak, toulouse]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_linear(a in amplitudes(), b in amplitudes(), x in -2.0..2.0f64, y in -2.0..2.0f64,
                             t in 0.0..10.0f64, alpha in 0.0..0.3f64) {
        let h = small_model(alpha);
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.3);
        let (u, v) = (random_vector(&a, h.dim()), random_vector(&b, h.dim()));
        let combo: Vec<C64> = u.iter().zip(&v).map(|(p, q)| p * x + q * C64::new(0.0, y)).collect();
        let lhs = apply(&h, &drive, t, &combo);
        let (hu, hv) = (apply(&h, &drive, t, &u), apply(&h, &drive, t, &v));
        for i in 0..h.dim() {
            let rhs = hu[i] * x + hv[i] * C64::new(0.0, y);
            prop_assert!((lhs[i] - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn hamiltonian_is_hermitian(a in amplitudes(), b in amplitudes(), t in 0.0..10.0f64, alpha in 0.0..0.3f64) {
        let h = small_model(alpha);
        let drive = DriveSpec::new(0.7, -0.4, 1.3, 1.0);
        let (u, v) = (random_vector(&a, h.dim()), random_vector(&b, h.dim()));
        let left = inner(&u, &apply(&h, &drive, t, &v));
        let right = inner(&apply(&h, &drive, t, &u), &v);
        prop_assert!((left - right).norm() <= 1e-12 * (1.0 + left.norm()));
    }

    #[test]
    fn basis_enumeration_is_canonical(m in 1usize..7, n in 1usize..4) {
        let spec = BathSpec::ohmic(0.1, 10.0, m, n, Beta::Infinite);
        let modes = discretize_bath(&spec).unwrap();
        let first = enumerate_basis(&spec, &modes).unwrap();
        let second = enumerate_basis(&spec, &modes).unwrap();
        prop_assert_eq!(first.fingerprint(), second.fingerprint());
        prop_assert_eq!(first.n_configs(), second.n_configs());
        let mut prev = 0;
        for c in 0..first.n_configs() {
            prop_assert!(first.excitation(c) >= prev && first.excitation(c) <= n);
            prev = first.excitation(c);
            let pairs: Vec<_> = first.config(c).collect();
            prop_assert_eq!(first.lookup(&pairs), Some(c));
            prop_assert_eq!(second.delta_vector(c), first.delta_vector(c));
        }
    }

    #[test]
    fn coupling_rule_holds(alpha in 0.001..0.5f64, omega_c in 1.0..50.0f64, m in 1usize..400) {
        let spec = BathSpec::ohmic(alpha, omega_c, m, 1, Beta::Infinite);
        let modes = discretize_bath(&spec).unwrap();
        for (&w, &g) in modes.omega.iter().zip(&modes.coupling) {
            let j = spec.spectral_density(w);
            prop_assert!((modes.density(w) * g * g - j).abs() <= 1e-10 * j);
        }
    }

    #[test]
    fn propagation_is_unitary(alpha in 0.0..0.3f64, eps1 in -1.0..1.0f64, omega in 0.5..3.0f64) {
        let h = small_model(alpha);
        let drive = DriveSpec::new(eps1, 0.5, omega, 0.0);
        let cfg = SilConfig { dt: 0.01, ..SilConfig::default() };
        let traj = propagate(&h, &drive, &cfg, &StateVector::up(h.dim()), 0.5, 10, &[]).unwrap();
        prop_assert!((norm(&traj.final_state.amplitudes) - 1.0).abs() <= 1e-10 * 50.0);
    }

    #[test]
    fn trace_distance_is_a_metric(a in amplitudes(), b in amplitudes(), c in amplitudes()) {
        let states: Vec<_> = [a, b, c].iter().map(|s| {
            let mut v = random_vector(s, 8);
            let n = norm(&v);
            v.iter_mut().for_each(|z| *z /= n);
            reduce(&v, 8).unwrap()
        }).collect();
        for r in &states {
            prop_assert!((r.trace() - 1.0).abs() <= 1e-10);
            let [lo, hi] = r.eigenvalues();
            prop_assert!(lo >= -1e-10 && hi <= 1.0 + 1e-10);
        }
        let d = |i: usize, j: usize| trace_distance(&states[i], &states[j]);
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-10);
        prop_assert!(d(0, 0) <= 1e-10);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-10);
    }

    #[test]
    fn onsager_structure(l in onsager_sources()) {
        prop_assert_eq!(l.l11, l.l22);
    }

    #[test]
    fn phase_symmetries(alpha in 0.005..0.3f64, omega in 0.05..5.0f64) {
        let p = WeakCouplingParams::new(alpha, 1.0, 10.0, Beta::Finite(10.0)).unwrap();
        let a = weak_coupling_onsager(&p, omega, 0.0);
        prop_assert!((a.l12 + a.l21).abs() <= 1e-12 * a.l12.abs());
        let s = weak_coupling_onsager(&p, omega, FRAC_PI_2);
        prop_assert!((s.l12 - s.l21).abs() <= 1e-12 * s.l12.abs().max(1e-300));
    }

    #[test]
    fn sign_structure_is_invariant_under_joint_flip(l in onsager_sources(), e1 in -1.0..1.0f64, e2 in -1.0..1.0f64) {
        let a = mean_powers(&l, e1, e2);
        let b = mean_powers(&l, -e1, -e2);
        prop_assert_eq!(a.regime, b.regime);
    }

    #[test]
    fn me_point_is_a_local_maximum_and_dissipative(l in onsager_sources(), eps2 in 0.1..1.0f64) {
        let beta = Beta::Finite(10.0);
        if let Ok(me) = me_line_and_performance(&l, eps2, beta) {
            prop_assert!((0.0..=1.0).contains(&me.eta_me));
            prop_assert!(me.p_out_me <= 0.0);
            prop_assert!(me.dissipation >= -1e-12 * me.p_in_me.abs());
            for k in 1..=5 {
                let d = 1e-3 * k as f64 * me.eps1_me.abs();
                for e in [me.eps1_me - d, me.eps1_me + d] {
                    let eta = efficiency(&l, e, eps2);
                    prop_assert!(!(eta > me.eta_me + 1e-12), "eta({e}) = {eta} > {}", me.eta_me);
                }
            }
        }
    }

    #[test]
    fn dynamic_bound_is_scale_invariant(a in 0.5..2.0f64, b in -1.0..1.0f64, k in 0.1..2.0f64, i in 0usize..21) {
        let omegas: Vec<f64> = (0..21).map(|j| 0.5 + 0.05 * j as f64).collect();
        let p: Vec<f64> = omegas.iter().map(|w| -(a + b * (k * w).sin()) * w * w).collect();
        let base = dynamic_bound(&omegas, &p, i).unwrap().value;
        for c in [0.5, 2.0] {
            let scaled: Vec<f64> = p.iter().map(|x| c * x).collect();
            let v = dynamic_bound(&omegas, &scaled, i).unwrap().value;
            prop_assert!((v - base).abs() <= 1e-12 * (1.0 + base.abs()));
        }
        prop_assert!(base >= 0.0);
    }
}

#[test]
fn effective_gap_decreases_with_coupling() {
    let values: Vec<f64> = (0..=45)
        .map(|i| delta_eff(1.0, 10.0, 0.01 * i as f64).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}
