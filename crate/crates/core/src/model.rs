//! Physical parameters, the dressed frame of the microwave-driven ground
//! triplet, and the system Hamiltonians as operator specifications.
//!
//! Units: every frequency and rate is in the same unit as `omega_m` (the
//! library is normally used with `omega_m = 1`). Bare spin basis order is
//! {|0⟩, |+1⟩, |−1⟩}; dressed order is {|a⟩, |b⟩, |c⟩}.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::operator::{OperatorSpec, SpinBasis};
use crate::scalar::{c, cr, Real, C};

const HBAR: f64 = 1.054_571_817e-34;
const K_B: f64 = 1.380_649e-23;
const MU_B: f64 = 9.274_010_078_3e-24;
const G_LANDE: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct SystemParams<T: Real = f64> {
    pub omega_m: T,
    pub delta: T,
    pub omega0: T,
    /// Signed: negative encodes a π phase between the Ω₁ and Ω₀ drives.
    pub omega1: T,
    pub g: T,
    pub phi: T,
    pub gamma_m: T,
    pub n_th: T,
    #[serde(rename = "Gamma0")]
    pub gamma0: T,
    #[serde(rename = "Gamma1")]
    pub gamma1: T,
}

impl<T: Real> SystemParams<T> {
    /// Operating point of the single-mode figures: ω_m = 1, Q = 10⁶, n_th = 10³,
    /// Γ₀ = Γ₁ = ω_m/4, g = 0.06 ω_m, Ω₁ = 0. Δ and Ω₀ are left for the caller.
    pub fn baseline() -> Self {
        SystemParams {
            omega_m: T::one(),
            delta: T::zero(),
            omega0: T::lit(0.5),
            omega1: T::zero(),
            g: T::lit(0.06),
            phi: T::zero(),
            gamma_m: T::lit(1e-6),
            n_th: T::lit(1e3),
            gamma0: T::lit(0.25),
            gamma1: T::lit(0.25),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.omega_m, self.delta, self.omega0, self.omega1, self.g, self.phi, self.gamma_m, self.n_th,
            self.gamma0, self.gamma1,
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite field".into()));
        }
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.omega_m <= T::zero() {
            return bad("omega_m must be > 0");
        }
        if self.gamma_m < T::zero() {
            return bad("gamma_m must be >= 0");
        }
        if self.n_th < T::zero() {
            return bad("n_th must be >= 0");
        }
        if self.g < T::zero() {
            return bad("g must be >= 0");
        }
        if self.omega0 < T::zero() {
            return bad("omega0 must be >= 0");
        }
        if !(self.gamma0 > T::zero()) || self.gamma1 < self.gamma0 {
            return Err(Error::InvalidRates { gamma0: self.gamma0.to_f64_lossy(), gamma1: self.gamma1.to_f64_lossy() });
        }
        Ok(())
    }

    /// Same parameters with Δ re-solved so that ω_bc = ω_m.
    pub fn locked(mut self) -> Result<Self> {
        self.delta = detuning_for_resonance(self.omega_m, self.omega0, self.omega1)?;
        Ok(self)
    }

    /// g²/(Γ₀ γ_m n_th)
    pub fn cooperativity(&self) -> T {
        self.g * self.g / (self.gamma0 * self.gamma_m * self.n_th)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpParams<T: Real = f64> {
    pub omega_p: T,
    pub gamma0_exc: T,
    pub gamma1_exc: T,
}

impl<T: Real> PumpParams<T> {
    pub fn validate(&self) -> Result<()> {
        if [self.omega_p, self.gamma0_exc, self.gamma1_exc].iter().all(|x| x.is_finite() && *x > T::zero()) {
            Ok(())
        } else {
            Err(Error::InvalidParams("pump parameters must be finite and > 0".into()))
        }
    }

    /// True when Ω_p is not small against γ₀+γ₁ (the pump eliminations assume it is).
    pub fn strong_pump(&self) -> bool {
        self.omega_p > T::lit(0.1) * (self.gamma0_exc + self.gamma1_exc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpRates<T: Real = f64> {
    /// Ω_p²γ₀/(γ₁+γ₀)², the form the closed-form spin state is derived with.
    pub gamma0: T,
    /// Ω_p²γ₀/((γ₁+γ₀)² + Ω_p²)
    pub gamma0_exact: T,
    pub gamma1: T,
}

pub fn pump_rates<T: Real>(p: &PumpParams<T>) -> PumpRates<T> {
    let s = p.gamma0_exc + p.gamma1_exc;
    let w2 = p.omega_p * p.omega_p;
    PumpRates { gamma0: w2 * p.gamma0_exc / (s * s), gamma0_exact: w2 * p.gamma0_exc / (s * s + w2), gamma1: w2 / s }
}

/// Bose occupation at angular frequency `omega_m` (rad/s) and temperature in kelvin.
pub fn thermal_occupation<T: Real>(temperature: T, omega_m: T) -> T {
    if temperature <= T::zero() {
        return T::zero();
    }
    let x = T::lit(HBAR / K_B) * omega_m / temperature;
    T::one() / x.exp_m1()
}

/// g = g_l μ_B B₀ x₀/ħ in rad/s, with x₀ = √(ħ/2mω_m). SI inputs.
pub fn coupling_from_gradient<T: Real>(b0: T, mass: T, omega_m: T) -> T {
    let x0 = (T::lit(HBAR) / (T::lit(2.0) * mass * omega_m)).sqrt();
    T::lit(G_LANDE * MU_B / HBAR) * b0 * x0
}

/// Mass of a diamond sphere (density 3500 kg/m³) of the given radius in metres.
pub fn diamond_mass(radius: f64) -> f64 {
    4.0 / 3.0 * std::f64::consts::PI * radius.powi(3) * 3500.0
}

/// Spin-1 operators in the bare basis as used by the coupling:
/// S_z = |+1⟩⟨+1| − |−1⟩⟨−1|, S_y = −i|+1⟩⟨−1| + i|−1⟩⟨+1|, S_x = |+1⟩⟨−1| + |−1⟩⟨+1|.
pub fn spin_z<T: Real>() -> CMat<T> {
    CMat::diag(&[C::zero(), C::one(), cr(-T::one())])
}

pub fn spin_y<T: Real>() -> CMat<T> {
    let mut m = CMat::zeros(3, 3);
    m[(1, 2)] = c(T::zero(), -T::one());
    m[(2, 1)] = c(T::zero(), T::one());
    m
}

pub fn spin_x<T: Real>() -> CMat<T> {
    let mut m = CMat::zeros(3, 3);
    m[(1, 2)] = C::one();
    m[(2, 1)] = C::one();
    m
}

/// Microwave-driven ground-triplet Hamiltonian in the bare basis.
pub fn nv_hamiltonian<T: Real>(p: &SystemParams<T>) -> CMat<T> {
    let half = T::lit(0.5);
    let w0 = cr(p.omega0 * half);
    let w1 = cr(p.omega1 * half);
    let d = cr(-p.delta);
    CMat::from_rows(&[vec![C::zero(), w0, w0], vec![w0, d, w1], vec![w0, w1, d]])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct DressedFrame<T: Real = f64> {
    pub theta: T,
    pub omega_a: T,
    pub omega_b: T,
    pub omega_c: T,
    pub omega_ab: T,
    pub omega_bc: T,
    pub omega_ac: T,
    pub gs: C<T>,
    pub gc: C<T>,
    pub delta0: T,
    pub delta1: T,
    pub delta2: T,
}

impl<T: Real> DressedFrame<T> {
    /// Rows are ⟨a|, ⟨b|, ⟨c| in bare coordinates, so ρ_dressed = U ρ_bare U†.
    pub fn rotation(&self) -> CMat<T> {
        let (s, co) = self.theta.sin_cos();
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        let row = |a: T, b: T, cc: T| vec![cr(a), cr(b), cr(cc)];
        CMat::from_rows(&[row(s, co * r, co * r), row(z, r, -r), row(co, -s * r, -s * r)])
    }

    /// RWA validity of the interaction-picture model: max(|Δ₀|, |Δ₁|, Γ₀, Γ₁) ≤ ω_m.
    pub fn rwa_check(&self, p: &SystemParams<T>) -> RwaCheck<T> {
        let worst = self.delta0.abs().max(self.delta1.abs()).max(p.gamma0).max(p.gamma1) / p.omega_m;
        RwaCheck { valid: worst <= T::one(), worst }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RwaCheck<T: Real> {
    pub valid: bool,
    /// max(|Δ₀|, |Δ₁|, Γ₀, Γ₁)/ω_m
    pub worst: T,
}

/// Dressed eigenbasis of the driven triplet.
///
/// θ = ½·atan2(√2Ω₀, −(Δ−Ω₁/2)) so sinθ, cosθ ≥ 0 and ω_a ≥ ω_c. With Ω₀ = 0 and
/// Δ > Ω₁/2 this yields θ = π/2; the exactly degenerate Δ = Ω₁/2 gives π/4.
pub fn dressed_frame<T: Real>(p: &SystemParams<T>) -> DressedFrame<T> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let dp = p.delta - p.omega1 * half;
    let r = (dp * dp + two * p.omega0 * p.omega0).sqrt();
    let theta = if dp == T::zero() { T::FRAC_PI_4() } else { half * (T::SQRT_2() * p.omega0).atan2(-dp) };
    let omega_a = (-dp + r) * half;
    let omega_c = (-dp - r) * half;
    let omega_b = -p.delta - p.omega1 * half;
    let (omega_ab, omega_bc, omega_ac) = (omega_a - omega_b, omega_b - omega_c, r);
    let (s, co) = theta.sin_cos();
    let ph = C::from_polar(p.g, p.phi);
    let gs = ph * cr(-s);
    let gc = ph * cr(co);
    let delta0 = two * p.omega_m - omega_ac;
    let delta1 = p.omega_m - omega_bc;
    let delta2 = p.omega_m - omega_ab;
    DressedFrame { theta, omega_a, omega_b, omega_c, omega_ab, omega_bc, omega_ac, gs, gc, delta0, delta1, delta2 }
}

/// Δ such that ω_bc = ω_m (Δ₁ = 0).
pub fn detuning_for_resonance<T: Real>(omega_m: T, omega0: T, omega1: T) -> Result<T> {
    let den = T::lit(2.0) * (omega_m + omega1);
    if den.abs() <= T::epsilon() * omega_m {
        return Err(Error::NoResonance(format!("omega_m + omega1 = 0 (omega1 = {omega1})")));
    }
    let num = omega0 * omega0 - T::lit(2.0) * omega_m * omega_m - omega1 * omega1 - T::lit(3.0) * omega_m * omega1;
    let delta = num / den;
    if !(T::lit(2.0) * omega_m + delta + T::lit(1.5) * omega1 > T::zero()) {
        return Err(Error::NoResonance(format!(
            "branch condition 2ω_m + Δ + 3Ω₁/2 > 0 fails (Δ = {delta}, Ω₀ = {omega0}, Ω₁ = {omega1})"
        )));
    }
    let p = SystemParams { omega_m, delta, omega0, omega1, ..SystemParams::baseline() };
    let f = dressed_frame(&p);
    let scale = omega_m + delta.abs() + omega0 + omega1.abs();
    let tol = T::lit(1e-9).max(T::lit(64.0) * T::epsilon()) * scale;
    if (f.omega_bc - omega_m).abs() > tol {
        return Err(Error::NoResonance(format!("recomputed ω_bc = {} misses ω_m", f.omega_bc)));
    }
    Ok(delta)
}

/// Bare-frame Hamiltonian H_m + H_NV + g(cosφ S_z + sinφ S_y)(d + d†) on spin ⊗ one mode.
pub fn bare_hamiltonian<T: Real>(p: &SystemParams<T>) -> OperatorSpec<T> {
    let hm = OperatorSpec::number(0).scaled(cr(p.omega_m));
    let hnv = OperatorSpec::spin(SpinBasis::Bare, nv_hamiltonian(p));
    let (sp, cp) = p.phi.sin_cos();
    let coupling = &spin_z::<T>().scale(cr(p.g * cp)) + &spin_y::<T>().scale(cr(p.g * sp));
    let x = &OperatorSpec::lower(0) + &OperatorSpec::raise(0);
    let hint = &OperatorSpec::spin(SpinBasis::Bare, coupling) * &x;
    &(&hm + &hnv) + &hint
}

/// Interaction-picture RWA Hamiltonian on dressed spin ⊗ one mode:
/// −Δ₀|a⟩⟨a| − Δ₁|b⟩⟨b| + (g_s|c⟩⟨b|d† + g_c d|a⟩⟨b| + h.c.).
pub fn interaction_hamiltonian<T: Real>(frame: &DressedFrame<T>, p: &SystemParams<T>) -> (OperatorSpec<T>, RwaCheck<T>) {
    let proj = |i: usize| OperatorSpec::<T>::spin_ket_bra(SpinBasis::Dressed, i, i);
    let diag = &proj(0).scaled(cr(-frame.delta0)) + &proj(1).scaled(cr(-frame.delta1));
    let cb = OperatorSpec::spin_ket_bra(SpinBasis::Dressed, 2, 1);
    let ab = OperatorSpec::spin_ket_bra(SpinBasis::Dressed, 0, 1);
    let v = &(&cb * &OperatorSpec::raise(0)).scaled(frame.gs) + &(&OperatorSpec::lower(0) * &ab).scaled(frame.gc);
    let h = &diag + &(&v + &v.adjoint());
    (h, frame.rwa_check(p))
}

/// Two-mode bare Hamiltonian (both modes at ω_m, g₁ = g₂ = g):
/// d₁†d₁ + d₂†d₂ + H_NV + g[cosφ S_z + sinφ S_x](d₁+d₁†) + g[sinφ S_z − cosφ S_x](d₂+d₂†).
/// Provided for inspection; the reduced two-mode path drops the S_x terms.
pub fn two_mode_bare_hamiltonian<T: Real>(p: &SystemParams<T>) -> OperatorSpec<T> {
    let hm = &OperatorSpec::number(0).scaled(cr(p.omega_m)) + &OperatorSpec::number(1).scaled(cr(p.omega_m));
    let hnv = OperatorSpec::spin(SpinBasis::Bare, nv_hamiltonian(p));
    let (sp, cp) = p.phi.sin_cos();
    let x = |m: usize| &OperatorSpec::<T>::lower(m) + &OperatorSpec::raise(m);
    let s1 = &spin_z::<T>().scale(cr(p.g * cp)) + &spin_x::<T>().scale(cr(p.g * sp));
    let s2 = &spin_z::<T>().scale(cr(p.g * sp)) - &spin_x::<T>().scale(cr(p.g * cp));
    let i1 = &OperatorSpec::spin(SpinBasis::Bare, s1) * &x(0);
    let i2 = &OperatorSpec::spin(SpinBasis::Bare, s2) * &x(1);
    &(&hm + &hnv) + &(&i1 + &i2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;

    fn params(delta: f64, omega0: f64, omega1: f64) -> SystemParams<f64> {
        SystemParams { delta, omega0, omega1, ..SystemParams::baseline() }
    }

    #[test]
    fn zero_drive_limit() {
        let f = dressed_frame(&params(-1.0, 1e-12, 0.0));
        assert!(f.theta.abs() < 1e-11);
        assert!((f.omega_a - 1.0).abs() < 1e-12 && f.omega_c.abs() < 1e-12);
        assert!((f.omega_b - 1.0).abs() < 1e-12 && (f.omega_bc - 1.0).abs() < 1e-12);
        assert!(f.gs.norm() < 1e-12 && (f.gc.norm() - 0.06).abs() < 1e-15);
    }

    #[test]
    fn symmetric_mixing() {
        let f = dressed_frame(&params(0.0, 2f64.sqrt(), 0.0));
        assert_eq!(f.theta, std::f64::consts::FRAC_PI_4);
        assert!((f.omega_ac - 2.0).abs() < 1e-14);
        assert!((f.gs.norm() - 0.06 / 2f64.sqrt()).abs() < 1e-15);
        assert!((f.gc.norm() - 0.06 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frame_diagonalises_nv_hamiltonian() {
        let p = params(0.3, 0.8, -0.7);
        let f = dressed_frame(&p);
        let u = f.rotation();
        let d = u.matmul(&nv_hamiltonian(&p)).matmul(&u.adjoint());
        let want = [f.omega_a, f.omega_b, f.omega_c];
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((d[(i, j)].re - w).abs() < 1e-14 && d[(i, j)].im.abs() < 1e-14);
            }
        }
        let (mut ev, _) = eigh(&nv_hamiltonian(&p));
        let mut ours = want.to_vec();
        ours.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ours.iter().zip(&ev) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn resonance_examples() {
        assert!(detuning_for_resonance::<f64>(1.0, 2f64.sqrt(), 0.0).unwrap().abs() < 1e-15);
        assert!((detuning_for_resonance::<f64>(1.0, 0.0, 0.0).unwrap() + 1.0).abs() < 1e-15);
        let d = detuning_for_resonance::<f64>(1.0, 0.8, -0.7).unwrap();
        assert!((d - 0.25 / 0.6).abs() < 1e-14);
        let f = dressed_frame(&params(d, 0.8, -0.7));
        assert!((f.omega_bc - 1.0).abs() < 1e-12);
        assert!(matches!(detuning_for_resonance::<f64>(1.0, 0.5, -1.0), Err(Error::NoResonance(_))));
    }

    #[test]
    fn resonance_branch_condition() {
        // Ω₁ < −1 flips the sign of the denominator and lands on the wrong root
        assert!(matches!(detuning_for_resonance::<f64>(1.0, 0.1, -1.5), Err(Error::NoResonance(_))));
    }

    #[test]
    fn pump_and_thermal_numbers() {
        let r = pump_rates(&PumpParams::<f64> { omega_p: 1.0, gamma0_exc: 2.0, gamma1_exc: 3.0 });
        assert!((r.gamma0 - 0.08).abs() < 1e-15 && (r.gamma1 - 0.2).abs() < 1e-15);
        assert!((r.gamma0_exact - 2.0 / 26.0).abs() < 1e-15);
        let r = pump_rates(&PumpParams::<f64> { omega_p: 8.0, gamma0_exc: 40.0, gamma1_exc: 1e-12 });
        assert!((r.gamma0 - 1.6).abs() < 1e-9);
        assert!((thermal_occupation(HBAR / (K_B * 2f64.ln()), 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(thermal_occupation(0.0, 1.0), 0.0);
        let n = thermal_occupation(0.1, 2.0 * std::f64::consts::PI * 1e6);
        assert!((n - 2083.).abs() < 2.0, "{n}");
    }

    #[test]
    fn gradient_coupling_scaling() {
        let w = 2.0 * std::f64::consts::PI * 1e6;
        assert_eq!(coupling_from_gradient(0.0, 1e-18, w), 0.0);
        let g1 = coupling_from_gradient(1e5, 1e-18, w);
        let g4 = coupling_from_gradient(1e5, 4e-18, w);
        assert!((g1 / g4 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bare_hamiltonian_is_hermitian() {
        let space = crate::lindblad::HilbertSpace::new(3, vec![6]).unwrap();
        let h = space.realize(&bare_hamiltonian(&params(0.4, 0.6, 0.0))).unwrap().to_dense();
        assert!((&h - &h.adjoint()).max_abs() < 1e-14);
    }

    #[test]
    fn gradient_coupling_magnitude() {
        // 50 nm diamond at 1 MHz in 1e5 T/m: x_zpf ≈ 2.14e-12 m, g/ω_m ≈ 6.0e-3
        let w = 2.0 * std::f64::consts::PI * 1e6;
        let m = diamond_mass(50e-9);
        assert!((m - 1.8326e-18).abs() < 1e-22);
        let g = coupling_from_gradient(1e5, m, w) / w;
        assert!((g - 5.990e-3).abs() < 1e-5, "{g}");
    }
}
