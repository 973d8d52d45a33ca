//! Closed forms against the Fock-space density-matrix engine.

use nvsqueeze::linalg::{CMat, Csr};
use nvsqueeze::lindblad::{assemble, build_operators, steady_state, DensityMatrix, HilbertSpace, SteadyOptions};
use nvsqueeze::model::{dressed_frame, SystemParams};
use nvsqueeze::moments::{moment_rhs, steady_moments, steady_moments_two_mode, MomentState};
use nvsqueeze::reduced::{coefficients_exact, k_factors, reduced_generator_single, reduced_generator_two_mode, ReducedCoefficients};
use nvsqueeze::scalar::{c, cr, C};
use nvsqueeze::spinsolver::spin_steady_closed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(omega0: f64, omega1: f64) -> (SystemParams, ReducedCoefficients) {
    let p = SystemParams { omega0, omega1, ..SystemParams::baseline() }.locked().unwrap();
    let f = dressed_frame(&p);
    let c = coefficients_exact(&f, &spin_steady_closed(&p), p.gamma1).unwrap();
    (p, c)
}

/// Random density matrix supported on the lowest `k` Fock levels of a `d`-dim space.
fn low_rho(d: usize, k: usize, seed: u64) -> CMat<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMat::from_fn(d, d, |i, j| if i < k && j < k { c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) } else { C::default() });
    let r = &a * &a.adjoint();
    let tr = r.trace();
    r.scale(cr(1.0) / tr)
}

fn tr_op_rho(op: &Csr<f64>, m: &CMat<f64>) -> C<f64> {
    DensityMatrix::new(m.clone()).expect(op)
}

#[test]
fn moment_equations_follow_from_the_reduced_generator() {
    let (p, coef) = point(0.6, -0.4);
    let space = HilbertSpace::new(1, vec![14]).unwrap();
    let l = assemble(&reduced_generator_single(&coef, p.gamma_m, p.n_th), &space).unwrap();
    let ops = build_operators::<f64>(&space, None);
    let d = &ops.lower[0];
    let d2 = d.matmul(d);
    for seed in 0..3 {
        let rho = low_rho(14, 6, seed);
        let drho = l.apply(&rho);
        let s = MomentState {
            mean_d: tr_op_rho(d, &rho),
            occupancy: tr_op_rho(&ops.number[0], &rho).re,
            pair: tr_op_rho(&d2, &rho),
        };
        let want = moment_rhs(&s, &coef, p.gamma_m, p.n_th);
        let got_d = tr_op_rho(d, &drho);
        let got_n = tr_op_rho(&ops.number[0], &drho);
        let got_p = tr_op_rho(&d2, &drho);
        let scale = 1.0 + p.gamma_m * p.n_th;
        assert!((got_d - want.mean_d).norm() < 1e-14 * scale, "{got_d} vs {}", want.mean_d);
        assert!((got_n.re - want.occupancy).abs() < 1e-14 * scale && got_n.im.abs() < 1e-14);
        assert!((got_p - want.pair).norm() < 1e-14 * scale, "{got_p} vs {}", want.pair);
    }
}

#[test]
fn closed_moments_match_fock_steady_state() {
    for (w0, w1, gm, nth) in [(0.6, 0.0, 1e-3, 0.5), (0.366, -0.7, 2e-3, 0.2), (0.9, 0.3, 1e-3, 1.0)] {
        let (_, coef) = point(w0, w1);
        let (n, pair) = steady_moments(&coef, gm, nth).unwrap();
        let space = HilbertSpace::new(1, vec![48]).unwrap();
        let l = assemble(&reduced_generator_single(&coef, gm, nth), &space).unwrap();
        let rho = steady_state(&l, &SteadyOptions::default()).unwrap();
        let ops = build_operators::<f64>(&space, None);
        let fn_ = rho.expect(&ops.number[0]).re;
        let fp = rho.expect(&ops.lower[0].matmul(&ops.lower[0]));
        assert!((fn_ - n).abs() < 1e-8 * (1.0 + n), "({w0},{w1}) n: fock {fn_} closed {n}");
        assert!((fp - pair).norm() < 1e-8 * (1.0 + n), "({w0},{w1}) pair: fock {fp} closed {pair}");
        assert!(rho.fock_populations(&space, 0)[47] < 1e-12);
    }
}

#[test]
fn two_mode_sums_match_fock_steady_state() {
    let (_, coef) = point(0.6, -0.4);
    let (gm, nth) = (2e-3, 0.1);
    let (occ, pair) = steady_moments_two_mode(&coef, gm, nth).unwrap();
    let space = HilbertSpace::new(1, vec![9, 9]).unwrap();
    let phi = std::f64::consts::FRAC_PI_4;
    let l = assemble(&reduced_generator_two_mode(&coef, gm, nth, phi), &space).unwrap();
    let rho = steady_state(&l, &SteadyOptions::default()).unwrap();
    let ops = build_operators::<f64>(&space, None);
    let sum = ops.lower[0].add(&ops.lower[1]);
    let fock_occ = rho.expect(&sum.adjoint().matmul(&sum)).re;
    let fock_pair = rho.expect(&sum.matmul(&sum));
    // this point is strongly squeezed, so 9 levels per mode leave a ~1e-6 tail
    assert!((fock_occ - occ).abs() < 1e-5, "{fock_occ} vs {occ}");
    assert!((fock_pair - pair).norm() < 1e-5, "{fock_pair} vs {pair}");
}

/// Eliminating the spin by hand: the operator-valued solution of the two
/// coupled coherence equations, inserted back into the mechanical equation,
/// must reproduce the reduced generator with the closed coefficients.
#[test]
fn adiabatic_elimination_reproduces_reduced_generator() {
    for (w0, w1) in [(0.6, 0.0), (0.366, -0.7), (1.1, 0.5)] {
        let mut p = SystemParams { omega0: w0, omega1: w1, ..SystemParams::baseline() }.locked().unwrap();
        p.phi = 0.37;
        let f = dressed_frame(&p);
        let spin = spin_steady_closed(&p);
        let coef = coefficients_exact(&f, &spin, p.gamma1).unwrap();
        let k = k_factors(&f, p.gamma1);
        let n = 10;
        let space = HilbertSpace::new(1, vec![n]).unwrap();
        let ops = build_operators::<f64>(&space, None);
        let d = ops.lower[0].to_dense();
        let dd = d.adjoint();
        let gen = ReducedCoefficients { ..coef };
        let l = assemble(&reduced_generator_single(&gen, 0.0, 0.0), &space).unwrap();
        let s = &spin.dressed;
        let (raa, rbb, rcc, rac) = (s.rho_aa, s.rho_bb, s.rho_cc, s.rho_ac);
        let rca = rac.conj();
        let mi = c(0.0, -1.0);
        let (gs, gc) = (f.gs, f.gc);
        for seed in 0..2 {
            let rho = low_rho(n, 5, 100 + seed);
            let src_x = &(&(&d * &rho).scale(rcc) - &(&rho * &d).scale(rbb)).scale(mi * gs.conj())
                + &(&dd * &rho).scale(mi * gc.conj() * rac);
            let src_y = &(&(&dd * &rho).scale(raa) - &(&rho * &dd).scale(rbb)).scale(mi * gc.conj())
                + &(&d * &rho).scale(mi * gs.conj() * rca);
            let x = (&src_x.scale(k.k2) + &src_y.scale(k.k3)).scale(cr(1.0) / k.m);
            let y = (&src_y.scale(k.k1) + &src_x.scale(k.k3)).scale(cr(1.0) / k.m);
            let comm = |a: &CMat<f64>, b: &CMat<f64>| &(a * b) - &(b * a);
            let t = &comm(&dd, &x).scale(mi * gs) + &comm(&d, &y).scale(mi * gc);
            let lhs = &t + &t.adjoint();
            let rhs = l.apply(&rho);
            let err = (&lhs - &rhs).max_abs();
            assert!(err < 1e-15, "({w0},{w1}) mismatch {err:e}");
        }
    }
}
