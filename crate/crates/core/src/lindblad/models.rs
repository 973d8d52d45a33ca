use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::{bare_hamiltonian, dressed_frame, interaction_hamiltonian, nv_hamiltonian, DressedFrame, RwaCheck, SystemParams};
use crate::operator::{GeneratorSpec, OperatorSpec, SpinBasis};
use crate::scalar::Real;

/// Which picture the full spin ⊗ mode model is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelFrame {
    /// Lab frame, bare spin basis, no rotating-wave approximation.
    Bare,
    /// Dressed basis, interaction picture at ω_m, rotating-wave couplings.
    Interaction,
}

/// Pump channels in the bare basis: |0⟩⟨±1| at Γ₀ and pure dephasing of |±1⟩
/// at Γ₁ − Γ₀. Together they damp ρ_{±1,0} at Γ₁/2 and ρ_{−1,+1} at Γ₁.
pub fn spin_dissipator_effective<T: Real>(gamma0: T, gamma1: T) -> Result<Vec<(OperatorSpec<T>, T)>> {
    if !(gamma0 > T::zero()) || !(gamma1 >= gamma0) || !gamma1.is_finite() {
        return Err(Error::InvalidRates { gamma0: gamma0.to_f64_lossy(), gamma1: gamma1.to_f64_lossy() });
    }
    let kb = |i, j| OperatorSpec::spin_ket_bra(SpinBasis::Bare, i, j);
    let deph = gamma1 - gamma0;
    Ok(vec![(kb(0, 1), gamma0), (kb(0, 2), gamma0), (kb(1, 1), deph), (kb(2, 2), deph)])
}

/// Spin-only generator (driven triplet plus pump) on the 3-level space.
pub fn spin_bloch_generator<T: Real>(p: &SystemParams<T>) -> Result<GeneratorSpec<T>> {
    Ok(GeneratorSpec {
        hamiltonian: OperatorSpec::spin(SpinBasis::Bare, nv_hamiltonian(p)),
        lindblad_channels: spin_dissipator_effective(p.gamma0, p.gamma1)?,
        quadratic_terms: vec![],
    })
}

fn mechanical_bath<T: Real>(p: &SystemParams<T>) -> Vec<(OperatorSpec<T>, T)> {
    vec![(OperatorSpec::lower(0), p.gamma_m * (p.n_th + T::one())), (OperatorSpec::raise(0), p.gamma_m * p.n_th)]
}

fn rotate<T: Real>(op: &OperatorSpec<T>, u: &CMat<T>) -> OperatorSpec<T> {
    let ud = u.adjoint();
    OperatorSpec {
        basis: Some(SpinBasis::Dressed),
        terms: op
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.spin = t.spin.as_ref().map(|s| &(u * s) * &ud);
                t
            })
            .collect(),
    }
}

/// Spin ⊗ one mode in the lab frame: full bare Hamiltonian, bare pump
/// channels and the thermal mechanical bath.
pub fn bare_full_model<T: Real>(p: &SystemParams<T>) -> Result<GeneratorSpec<T>> {
    p.validate()?;
    let mut lindblad_channels = spin_dissipator_effective(p.gamma0, p.gamma1)?;
    lindblad_channels.extend(mechanical_bath(p));
    Ok(GeneratorSpec { hamiltonian: bare_hamiltonian(p), lindblad_channels, quadratic_terms: vec![] })
}

/// Spin ⊗ one mode in the dressed interaction picture: rotating-wave
/// Hamiltonian, the pump channels carried into the dressed basis (U L U†)
/// and the thermal mechanical bath. The spin index of states produced by
/// this generator is dressed: 0 = |a⟩, 1 = |b⟩, 2 = |c⟩.
pub fn interaction_full_model<T: Real>(p: &SystemParams<T>) -> Result<(GeneratorSpec<T>, DressedFrame<T>, RwaCheck<T>)> {
    p.validate()?;
    let frame = dressed_frame(p);
    let (hamiltonian, rwa) = interaction_hamiltonian(&frame, p);
    let u = frame.rotation();
    let mut lindblad_channels: Vec<(OperatorSpec<T>, T)> =
        spin_dissipator_effective(p.gamma0, p.gamma1)?.iter().map(|(l, r)| (rotate(l, &u), *r)).collect();
    lindblad_channels.extend(mechanical_bath(p));
    Ok((GeneratorSpec { hamiltonian, lindblad_channels, quadratic_terms: vec![] }, frame, rwa))
}

/// Full spin ⊗ mode generator in the requested picture.
pub fn full_model<T: Real>(p: &SystemParams<T>, frame: ModelFrame) -> Result<GeneratorSpec<T>> {
    match frame {
        ModelFrame::Bare => bare_full_model(p),
        ModelFrame::Interaction => interaction_full_model(p).map(|(g, _, _)| g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{assemble, steady_state, HilbertSpace, SteadyOptions};
    use crate::spinsolver::{bloch_rhs, spin_steady_closed, BareElements};

    fn spin_params() -> SystemParams<f64> {
        SystemParams { delta: 0.41666, omega0: 0.8, omega1: -0.7, gamma0: 0.25, gamma1: 0.4, ..SystemParams::baseline() }
    }

    #[test]
    fn dissipator_reproduces_bloch_equations_elementwise() {
        let p = spin_params();
        let space = HilbertSpace::new(3, vec![]).unwrap();
        let l = assemble(&spin_bloch_generator(&p).unwrap(), &space).unwrap();
        for seed in 0..4 {
            let x: Vec<f64> = (0..9).map(|k| ((k * 7 + seed * 13) % 11) as f64 / 11.0 - 0.4).collect();
            let r = BareElements::from_real(&x);
            let got = BareElements::from_matrix(&l.apply(&r.matrix()));
            let want = bloch_rhs(&p, &r);
            let d = got.to_real().iter().zip(want.to_real()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(d < 1e-14, "seed {seed}: {d}");
        }
    }

    #[test]
    fn spin_steady_state_matches_closed_form() {
        let p = spin_params();
        let space = HilbertSpace::new(3, vec![]).unwrap();
        let l = assemble(&spin_bloch_generator(&p).unwrap(), &space).unwrap();
        let rho = steady_state(&l, &SteadyOptions::default()).unwrap();
        let want = spin_steady_closed(&p).bare.matrix();
        assert!((&rho.mat - &want).max_abs() < 1e-12);
    }

    #[test]
    fn rates_are_checked() {
        assert!(matches!(spin_dissipator_effective(0.3, 0.2), Err(Error::InvalidRates { .. })));
        assert!(matches!(spin_dissipator_effective(0.0, 0.2), Err(Error::InvalidRates { .. })));
        assert!(spin_dissipator_effective(0.2, 0.2).unwrap().iter().all(|(_, r)| *r >= 0.0));
    }

    #[test]
    fn dressed_pump_channels_are_unitarily_equivalent() {
        let p = spin_params();
        let (spec, frame, _) = interaction_full_model(&p).unwrap();
        let u = frame.rotation();
        let bare = spin_dissipator_effective(p.gamma0, p.gamma1).unwrap();
        for ((d, _), (b, _)) in spec.lindblad_channels.iter().zip(&bare) {
            let ds = d.terms[0].spin.as_ref().unwrap();
            let bs = b.terms[0].spin.as_ref().unwrap();
            assert!((&(&(&u.adjoint() * ds) * &u) - bs).max_abs() < 1e-14);
        }
    }
}
