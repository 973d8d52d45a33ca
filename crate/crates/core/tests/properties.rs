use nvsqueeze::lindblad::DensityMatrix;
use nvsqueeze::model::{detuning_for_resonance, dressed_frame};
use nvsqueeze::spinsolver::{bloch_rhs, spin_steady_closed};
use nvsqueeze::SystemParams;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SystemParams<f64>> {
    (0.01..1.4f64, -0.8..0.8f64, -3.0..1.0f64, 0.05..1.0f64, 1.0..4.0f64).prop_map(|(omega0, omega1, delta, gamma0, ratio)| {
        SystemParams { omega0, omega1, delta, gamma0, gamma1: gamma0 * ratio, ..SystemParams::baseline() }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_spin_state_is_a_fixed_point(p in params()) {
        let s = spin_steady_closed(&p);
        let rho = DensityMatrix::new(s.bare.matrix());
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-12);
        let r = bloch_rhs(&p, &s.bare).to_real();
        prop_assert!(r.iter().all(|x| x.abs() < 1e-12), "{r:?}");
    }

    #[test]
    fn resonance_lock_hits_omega_m(omega0 in 0.01..1.4f64, omega1 in -0.8..0.8f64) {
        if let Ok(delta) = detuning_for_resonance(1.0, omega0, omega1) {
            let f = dressed_frame(&SystemParams { omega0, omega1, delta, ..SystemParams::baseline() });
            prop_assert!(f.delta1.abs() < 1e-12, "Δ₁ = {}", f.delta1);
            prop_assert!((f.omega_ab + f.omega_bc - f.omega_ac).abs() < 1e-12);
        }
    }

    #[test]
    fn single_precision_tracks_double(p in params()) {
        let q = SystemParams::<f32> {
            omega_m: 1.0, delta: p.delta as f32, omega0: p.omega0 as f32, omega1: p.omega1 as f32,
            g: p.g as f32, phi: p.phi as f32, gamma_m: p.gamma_m as f32, n_th: p.n_th as f32,
            gamma0: p.gamma0 as f32, gamma1: p.gamma1 as f32,
        };
        let a = spin_steady_closed(&p).bare.to_real();
        let b = spin_steady_closed(&q).bare.to_real();
        for (x, y) in a.iter().zip(b) {
            prop_assert!((x - y as f64).abs() < 1e-4, "{x} vs {y}");
        }
    }
}
