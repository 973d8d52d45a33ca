//! Adiabatic elimination of the driven spin: k-factors, the reduced-equation
//! coefficients (exact and first order), and the reduced mechanical generators.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::DressedFrame;
use crate::operator::{GeneratorSpec, OperatorSpec, QuadraticTerm};
use crate::scalar::{c, cr, Real, C};
use crate::spinsolver::{approx_populations, ApproxPopulations, SpinSteadyState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct KFactors<T: Real = f64> {
    pub k1: C<T>,
    pub k2: C<T>,
    pub k3: C<T>,
    pub m: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct ReducedCoefficients<T: Real = f64> {
    pub delta_shift: T,
    pub a_minus: T,
    pub a_plus: T,
    pub s1: C<T>,
    pub s2: C<T>,
}

impl<T: Real> ReducedCoefficients<T> {
    /// The eliminated rates are not guaranteed non-negative pointwise; callers may surface this.
    pub fn negative_rate(&self) -> bool {
        self.a_minus < T::zero() || self.a_plus < T::zero()
    }

    /// Net linear damping γ_m + A₋ − A₊.
    pub fn net_damping(&self, gamma_m: T) -> T {
        gamma_m + self.a_minus - self.a_plus
    }
}

pub fn k_factors<T: Real>(frame: &DressedFrame<T>, gamma1: T) -> KFactors<T> {
    let h = gamma1 * T::lit(0.5);
    let (s, co) = frame.theta.sin_cos();
    let k1 = c(h * (T::one() + s * s), -frame.delta1);
    let k2 = c(h * (T::one() + co * co), frame.delta2);
    let k3 = cr(h * s * co);
    KFactors { k1, k2, k3, m: k1 * k2 - k3 * k3 }
}

/// Exact reduced-equation coefficients from the dressed steady state.
pub fn coefficients_exact<T: Real>(
    frame: &DressedFrame<T>,
    spin: &SpinSteadyState<T>,
    gamma1: T,
) -> Result<ReducedCoefficients<T>> {
    let k = k_factors(frame, gamma1);
    let scale = (k.k1.norm() + k.k3.norm()) * (k.k2.norm() + k.k3.norm());
    if !(k.m.norm() > T::lit(1e3) * T::epsilon() * scale) || !k.m.norm().is_finite() {
        return Err(Error::DegenerateM(k.m.norm().to_f64_lossy()));
    }
    let d = &spin.dressed;
    let (raa, rbb, rcc, rac) = (d.rho_aa, d.rho_bb, d.rho_cc, d.rho_ac);
    let rca = rac.conj();
    let gs2 = cr(frame.gs.norm_sqr());
    let gc2 = cr(frame.gc.norm_sqr());
    let two = T::lit(2.0);
    let (k1m, k2m, k3m) = (k.k1 / k.m, k.k2 / k.m, k.k3 / k.m);

    let delta_shift =
        two * (gs2 * (k2m * rcc - k2m * rbb + k3m * rca) + gc2 * (k1m * raa - k1m * rbb + k3m * rac)).im;
    let a_minus = two * (gs2 * (k2m * rcc + k3m * rca) + gc2 * k1m * rbb).re;
    let a_plus = two * (gc2 * (k1m * raa + k3m * rac) + gs2 * k2m * rbb).re;
    let pre = cr(two * frame.gs.norm() * frame.gc.norm());
    let s1 = pre * (k3m * raa + k3m.conj() * rbb + k2m * rac);
    let s2 = pre * (k3m.conj() * rcc + k3m * rbb + k1m.conj() * rac);
    Ok(ReducedCoefficients { delta_shift, a_minus, a_plus, s1, s2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct ApproxCoefficients<T: Real = f64> {
    pub coeffs: ReducedCoefficients<T>,
    pub populations: ApproxPopulations<T>,
    /// Set when the frame is not at Δ₁ = 0, which the expansion assumes.
    pub off_resonance: bool,
}

/// First-order coefficients for Γ₀ = Γ₁ ≪ ω_m with the |c⟩→|b⟩ transition on resonance.
///
/// Validity gate: |Δ₂| ≥ 5Γ₀, otherwise `ApproxInvalid`.
pub fn coefficients_approx<T: Real>(frame: &DressedFrame<T>, gamma0: T, g: T) -> Result<ApproxCoefficients<T>> {
    if frame.delta2.abs() < T::lit(5.0) * gamma0 {
        return Err(Error::ApproxInvalid(format!("|Δ₂| = {} < 5Γ₀ = {}", frame.delta2.abs(), T::lit(5.0) * gamma0)));
    }
    let pops = approx_populations(frame, gamma0);
    let (s, co) = frame.theta.sin_cos();
    let gs = g * s;
    let gc = g * co;
    let two = T::lit(2.0);
    let one_s2 = T::one() + s * s;
    let g1 = gamma0;
    let a_minus = T::lit(4.0) * gs * gs * pops.rho_cc / (g1 * one_s2);
    let i_d2 = c(T::zero(), frame.delta2);
    let s1 = cr(two * gs * gc * s * co * pops.rho_aa) / (i_d2 * cr(one_s2))
        + pops.rho_ac * cr(T::lit(4.0) * gs * gc / (g1 * one_s2));
    let s2 = cr(two * gs * gc * s * co * pops.rho_cc) / (-i_d2 * cr(one_s2));
    let delta_shift = -two * gc * gc * pops.rho_aa / frame.delta2;
    let tol = T::lit(1e-9).max(T::lit(100.0) * T::epsilon());
    Ok(ApproxCoefficients {
        coeffs: ReducedCoefficients { delta_shift, a_minus, a_plus: T::zero(), s1, s2 },
        populations: pops,
        off_resonance: frame.delta1.abs() > tol,
    })
}

/// Closed-form cooling rate (g²/Γ₀)·8cos⁴θ sin²θ/((1+sin²θ)(1+cos²2θ)).
pub fn cooling_rate_closed<T: Real>(theta: T, g: T, gamma0: T) -> T {
    let (s, co) = theta.sin_cos();
    let c2 = (T::lit(2.0) * theta).cos();
    g * g / gamma0 * T::lit(8.0) * co.powi(4) * s * s / ((T::one() + s * s) * (T::one() + c2 * c2))
}

/// Reduced generator for a general mode operator `a` (single mode: a = d).
fn squeezing_generator<T: Real>(
    c: &ReducedCoefficients<T>,
    a: &OperatorSpec<T>,
    baths: Vec<(OperatorSpec<T>, T)>,
) -> GeneratorSpec<T> {
    let ad = a.adjoint();
    let half = cr(T::lit(0.5));
    let id = OperatorSpec::identity();
    let ad2 = &ad * &ad;
    let a2 = a * a;
    let hamiltonian = (&ad * a).scaled(cr(c.delta_shift * T::lit(0.5)));
    let mut lindblad_channels = vec![(a.clone(), c.a_minus), (ad.clone(), c.a_plus)];
    lindblad_channels.extend(baths);
    let q = |coeff: C<T>, left: &OperatorSpec<T>, right: &OperatorSpec<T>| QuadraticTerm {
        coeff: coeff * half,
        left: left.clone(),
        right: right.clone(),
    };
    let quadratic_terms = vec![
        q(c.s1, &ad2, &id),
        q(-c.s1, &ad, &ad),
        q(c.s2, &id, &ad2),
        q(-c.s2, &ad, &ad),
        q(c.s1.conj(), &id, &a2),
        q(-c.s1.conj(), a, a),
        q(c.s2.conj(), &a2, &id),
        q(-c.s2.conj(), a, a),
    ];
    GeneratorSpec { hamiltonian, lindblad_channels, quadratic_terms }
}

fn thermal_bath<T: Real>(mode: usize, gamma_m: T, n_th: T) -> Vec<(OperatorSpec<T>, T)> {
    vec![(OperatorSpec::lower(mode), gamma_m * (n_th + T::one())), (OperatorSpec::raise(mode), gamma_m * n_th)]
}

/// Single-mode reduced generator on mode 0.
pub fn reduced_generator_single<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> GeneratorSpec<T> {
    squeezing_generator(c, &OperatorSpec::lower(0), thermal_bath(0, gamma_m, n_th))
}

/// Two-mode reduced generator: the single-mode structure acting on
/// D = cosφ d₁ + sinφ d₂ (φ = π/4 gives (d₁+d₂)/√2), with independent
/// thermal baths on both modes.
pub fn reduced_generator_two_mode<T: Real>(
    c: &ReducedCoefficients<T>,
    gamma_m: T,
    n_th: T,
    phi: T,
) -> GeneratorSpec<T> {
    let (sp, cp) = phi.sin_cos();
    let dd = &OperatorSpec::lower(0).scaled(cr(cp)) + &OperatorSpec::lower(1).scaled(cr(sp));
    let mut baths = thermal_bath(0, gamma_m, n_th);
    baths.extend(thermal_bath(1, gamma_m, n_th));
    squeezing_generator(c, &dd, baths)
}

/// Spin elimination carried out on operators instead of coefficients.
///
/// The two mechanical-operator coherences X = ⟨b|ρ|c⟩-like and Y = ⟨b|ρ|a⟩-like
/// obey a 2×2 linear system with matrix [[k₁, −k₃], [−k₃, k₂]]; solving it and
/// feeding the result back through the coupling gives dρ_m/dt for a given
/// mechanical state `rho`. `d` is the annihilation operator on the same
/// truncated space. Agrees with the reduced generator (bath off) built from
/// [`coefficients_exact`] on states away from the truncation edge.
pub fn eliminated_action<T: Real>(
    frame: &DressedFrame<T>,
    spin: &SpinSteadyState<T>,
    gamma1: T,
    d: &CMat<T>,
    rho: &CMat<T>,
) -> Result<CMat<T>> {
    let k = k_factors(frame, gamma1);
    if !(k.m.norm() > T::zero()) {
        return Err(Error::DegenerateM(k.m.norm().to_f64_lossy()));
    }
    let s = &spin.dressed;
    let mi = c(T::zero(), -T::one());
    let (gs, gc) = (frame.gs, frame.gc);
    let dd = d.adjoint();
    let inv_m = C::<T>::new(T::one(), T::zero()) / k.m;
    let src_x = &(&(d * rho).scale(s.rho_cc) - &(rho * d).scale(s.rho_bb)).scale(mi * gs.conj())
        + &(&dd * rho).scale(mi * gc.conj() * s.rho_ac);
    let src_y = &(&(&dd * rho).scale(s.rho_aa) - &(rho * &dd).scale(s.rho_bb)).scale(mi * gc.conj())
        + &(d * rho).scale(mi * gs.conj() * s.rho_ac.conj());
    let x = (&src_x.scale(k.k2) + &src_y.scale(k.k3)).scale(inv_m);
    let y = (&src_y.scale(k.k1) + &src_x.scale(k.k3)).scale(inv_m);
    let comm = |a: &CMat<T>, b: &CMat<T>| &(a * b) - &(b * a);
    let t = &comm(&dd, &x).scale(mi * gs) + &comm(d, &y).scale(mi * gc);
    Ok(&t + &t.adjoint())
}

impl<T: Real> ReducedCoefficients<T> {
    pub fn is_zero(&self) -> bool {
        self.delta_shift.is_zero() && self.a_minus.is_zero() && self.a_plus.is_zero() && self.s1.is_zero() && self.s2.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dressed_frame, SystemParams};
    use crate::spinsolver::spin_steady_closed;

    fn fig4(omega0: f64, omega1: f64) -> SystemParams<f64> {
        SystemParams::<f64> { omega0, omega1, ..SystemParams::baseline() }.locked().unwrap()
    }

    #[test]
    fn k_factor_special_values() {
        let mut f = dressed_frame(&fig4(0.5, 0.0));
        f.theta = 0.0;
        f.delta1 = 0.0;
        let k = k_factors(&f, 0.3);
        assert_eq!(k.k1, cr(0.15));
        assert_eq!(k.k3, cr(0.0));
        assert_eq!(k.m, k.k1 * k.k2);

        f.theta = std::f64::consts::FRAC_PI_4;
        f.delta2 = 0.0;
        let k = k_factors(&f, 0.4);
        assert!((k.k1 - cr(0.3)).norm() < 1e-15 && (k.k2 - cr(0.3)).norm() < 1e-15);
        assert!((k.k3 - cr(0.1)).norm() < 1e-15);
        assert!((k.m - cr(0.08)).norm() < 1e-15);
    }

    #[test]
    fn zero_coupling_gives_zero_coefficients() {
        let p = SystemParams::<f64> { g: 0.0, ..fig4(0.6, 0.0) };
        let f = dressed_frame(&p);
        let c = coefficients_exact(&f, &spin_steady_closed(&p), p.gamma1).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn theta_zero_kills_cooling_and_squeezing() {
        let p = SystemParams::<f64> { omega0: 0.0, delta: -1.0, ..SystemParams::baseline() };
        let f = dressed_frame(&p);
        assert_eq!(f.theta, 0.0);
        let c = coefficients_exact(&f, &spin_steady_closed(&p), p.gamma1).unwrap();
        assert_eq!(c.s1, cr(0.0));
        assert_eq!(c.s2, cr(0.0));
        assert!(c.a_minus.abs() < 1e-18);
    }

    #[test]
    fn reference_coefficients() {
        // Ω₀ = 0.6, Ω₁ = 0 at resonance (Δ = −0.82); independent numpy evaluation
        let p = fig4(0.6, 0.0);
        let f = dressed_frame(&p);
        assert!((f.theta - 0.40124714191836086).abs() < 1e-14);
        let c = coefficients_exact(&f, &spin_steady_closed(&p), p.gamma1).unwrap();
        assert!((c.delta_shift + 3.861314987670282e-4).abs() < 1e-15);
        assert!((c.a_minus - 7.421978569421576e-3).abs() < 1e-15);
        // the heating coefficient can be slightly negative
        assert!((c.a_plus + 4.5649938884283615e-5).abs() < 1e-16);
        assert!((c.s1 - crate::scalar::c(9.027942312877309e-5, -9.452052160374883e-4)).norm() < 1e-16);
        assert!((c.s2 - crate::scalar::c(3.8888929761177795e-4, 8.662149784366218e-4)).norm() < 1e-16);
    }

    #[test]
    fn approx_cooling_rate_matches_closed_expression() {
        let p = fig4(0.4, -0.7);
        let f = dressed_frame(&p);
        let a = coefficients_approx(&f, p.gamma0, p.g).unwrap();
        let closed = cooling_rate_closed(f.theta, p.g, p.gamma0);
        assert!((a.coeffs.a_minus - closed).abs() < 1e-14 * closed.max(1e-300));
        assert!(!a.off_resonance);
        let quarter = cooling_rate_closed(std::f64::consts::FRAC_PI_4, 0.06, 0.25);
        assert!((quarter - 2.0 / 3.0 * 0.06 * 0.06 / 0.25).abs() < 1e-16);
        assert_eq!(cooling_rate_closed(0.0, 0.06, 0.25), 0.0);
        assert!(cooling_rate_closed(std::f64::consts::FRAC_PI_2, 0.06, 0.25).abs() < 1e-18);
    }

    #[test]
    fn approx_gate() {
        let mut f = dressed_frame(&fig4(0.4, 0.0));
        f.delta2 = 0.5;
        assert!(matches!(coefficients_approx(&f, 0.25, 0.06), Err(Error::ApproxInvalid(_))));
    }

    #[test]
    fn two_mode_generator_is_exchange_symmetric() {
        let p = fig4(0.6, 0.0);
        let f = dressed_frame(&p);
        let c = coefficients_exact(&f, &spin_steady_closed(&p), p.gamma1).unwrap();
        let g = reduced_generator_two_mode(&c, 1e-3, 0.1, std::f64::consts::FRAC_PI_4);
        assert_eq!(g.modes_used(), 2);
        assert_eq!(g.quadratic_terms.len(), 8);
        assert_eq!(g.lindblad_channels.len(), 6);
    }
}
