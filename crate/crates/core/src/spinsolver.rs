//! Optically pumped steady state of the ground triplet.
//!
//! The Bloch system is written on six independent complex elements
//! (ρ₀₀, ρ₊₊, ρ₋₋, ρ₊₀, ρ₋₀, ρ₋₊), where ± stand for the |±1⟩ levels, and
//! real-vectorised in the fixed order
//! `[ρ₀₀, ρ₊₊, ρ₋₋, Re ρ₊₀, Re ρ₋₀, Re ρ₋₊, Im ρ₊₀, Im ρ₋₀, Im ρ₋₊]`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMat};
use crate::model::{dressed_frame, DressedFrame, PumpParams, SystemParams};
use crate::scalar::{c, ci, cr, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct BareElements<T: Real = f64> {
    pub rho_00: C<T>,
    pub rho_p1p1: C<T>,
    pub rho_m1m1: C<T>,
    pub rho_m1p1: C<T>,
    pub rho_m10: C<T>,
    pub rho_p10: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct DressedElements<T: Real = f64> {
    pub rho_aa: C<T>,
    pub rho_bb: C<T>,
    pub rho_cc: C<T>,
    /// ⟨a|ρ|c⟩; the conjugate element ρ_ca is its complex conjugate.
    pub rho_ac: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct SpinSteadyState<T: Real = f64> {
    pub bare: BareElements<T>,
    pub dressed: DressedElements<T>,
}

impl<T: Real> BareElements<T> {
    /// Full 3×3 matrix in the bare basis {|0⟩, |+1⟩, |−1⟩}.
    pub fn matrix(&self) -> CMat<T> {
        let (p10, m10, m1p1) = (self.rho_p10, self.rho_m10, self.rho_m1p1);
        CMat::from_rows(&[
            vec![self.rho_00, p10.conj(), m10.conj()],
            vec![p10, self.rho_p1p1, m1p1.conj()],
            vec![m10, m1p1, self.rho_m1m1],
        ])
    }

    pub fn from_matrix(m: &CMat<T>) -> Self {
        BareElements {
            rho_00: m[(0, 0)],
            rho_p1p1: m[(1, 1)],
            rho_m1m1: m[(2, 2)],
            rho_m1p1: m[(2, 1)],
            rho_m10: m[(2, 0)],
            rho_p10: m[(1, 0)],
        }
    }

    pub fn to_real(self) -> [T; 9] {
        [
            self.rho_00.re, self.rho_p1p1.re, self.rho_m1m1.re, self.rho_p10.re, self.rho_m10.re, self.rho_m1p1.re,
            self.rho_p10.im, self.rho_m10.im, self.rho_m1p1.im,
        ]
    }

    pub fn from_real(x: &[T]) -> Self {
        BareElements {
            rho_00: cr(x[0]),
            rho_p1p1: cr(x[1]),
            rho_m1m1: cr(x[2]),
            rho_p10: c(x[3], x[6]),
            rho_m10: c(x[4], x[7]),
            rho_m1p1: c(x[5], x[8]),
        }
    }
}

impl<T: Real> SpinSteadyState<T> {
    /// Rotate a bare-basis state into the dressed frame.
    pub fn from_bare(bare: BareElements<T>, frame: &DressedFrame<T>) -> Self {
        let u = frame.rotation();
        let d = u.matmul(&bare.matrix()).matmul(&u.adjoint());
        SpinSteadyState {
            bare,
            dressed: DressedElements { rho_aa: d[(0, 0)], rho_bb: d[(1, 1)], rho_cc: d[(2, 2)], rho_ac: d[(0, 2)] },
        }
    }

    pub fn dressed_matrix(&self, frame: &DressedFrame<T>) -> CMat<T> {
        let u = frame.rotation();
        u.matmul(&self.bare.matrix()).matmul(&u.adjoint())
    }
}

/// Time derivative of the six independent elements under the pumped Bloch
/// equations (driven triplet plus Γ₀ decay of |±1⟩ into |0⟩ and Γ₁/2 coherence damping).
pub fn bloch_rhs<T: Real>(p: &SystemParams<T>, r: &BareElements<T>) -> BareElements<T> {
    let i = ci::<T>();
    let h = T::lit(0.5);
    let (w0, w1) = (cr(p.omega0 * h), cr(p.omega1 * h));
    let (g0, g1) = (cr(p.gamma0), cr(p.gamma1));
    let (r00, rpp, rmm) = (r.rho_00, r.rho_p1p1, r.rho_m1m1);
    let (rp0, rm0, rmp) = (r.rho_p10, r.rho_m10, r.rho_m1p1);
    let (r0p, r0m, rpm) = (rp0.conj(), rm0.conj(), rmp.conj());
    let coh = c(-p.gamma1 * h, p.delta);
    BareElements {
        rho_p1p1: -g0 * rpp - i * w0 * (r0p - rp0) - i * w1 * (rmp - rpm),
        rho_m1m1: -g0 * rmm - i * w0 * (r0m - rm0) + i * w1 * (rmp - rpm),
        rho_00: g0 * (rpp + rmm) + i * w0 * (r0p - rp0) + i * w0 * (r0m - rm0),
        rho_p10: coh * rp0 - i * w0 * (r00 - rpp) + i * w0 * rpm - i * w1 * rm0,
        rho_m10: coh * rm0 - i * w0 * (r00 - rmm) + i * w0 * rmp - i * w1 * rp0,
        rho_m1p1: -g1 * rmp - i * w0 * (r0p - rm0) - i * w1 * (rpp - rmm),
    }
}

/// Real 9×9 Bloch generator in the documented layout (column j = response to unit coordinate j).
pub fn bloch_generator<T: Real>(p: &SystemParams<T>) -> [[T; 9]; 9] {
    let mut g = [[T::zero(); 9]; 9];
    for j in 0..9 {
        let mut x = [T::zero(); 9];
        x[j] = T::one();
        let dx = bloch_rhs(p, &BareElements::from_real(&x)).to_real();
        for (i, v) in dx.iter().enumerate() {
            g[i][j] = *v;
        }
    }
    g
}

/// Closed-form steady state: bare elements from the analytic Bloch solution and
/// dressed elements from their eigenbasis rearrangement.
pub fn spin_steady_closed<T: Real>(p: &SystemParams<T>) -> SpinSteadyState<T> {
    let two = T::lit(2.0);
    let (g0, g1, w0) = (p.gamma0, p.gamma1, p.omega0);
    let e = two * p.delta - p.omega1;
    let w02 = w0 * w0;
    let den = g0 * e * e + (T::lit(3.0) * g1 + g0) * w02 + g0 * g1 * g1;
    let pm = g1 * w02 / den;
    let coh = c(g0 * w0 * e, -g0 * w0 * g1) / cr(den);
    let bare = BareElements {
        rho_00: cr((g0 * e * e + (g1 + g0) * w02 + g0 * g1 * g1) / den),
        rho_p1p1: cr(pm),
        rho_m1m1: cr(pm),
        rho_m1p1: cr(g0 * w02 / den),
        rho_m10: coh,
        rho_p10: coh,
    };

    let dp = p.delta - p.omega1 / two;
    let r = (dp * dp + two * w02).sqrt();
    let half = T::lit(0.5);
    let rho_bb = (g1 - g0) * w02 / den;
    // Δ' / R → the cos 2θ limit when the drive vanishes
    let ratio = if r > T::zero() { dp / r } else { T::zero() };
    let tilt = half * ratio * (g0 * e * e + T::lit(8.0) * g0 * w02 + g0 * g1 * g1) / den;
    let rho_ac_re = if r > T::zero() { (w0 / T::SQRT_2()) / r * g0 * g1 * g1 / den } else { T::zero() };
    let dressed = DressedElements {
        rho_aa: cr(half - half * rho_bb + tilt),
        rho_bb: cr(rho_bb),
        rho_cc: cr(half - half * rho_bb - tilt),
        rho_ac: c(rho_ac_re, -T::SQRT_2() * g0 * w0 * g1 / den),
    };
    SpinSteadyState { bare, dressed }
}

/// Numerical steady state: null vector of the 9×9 real Bloch generator, taken
/// as the smallest-eigenvalue direction of GᵀG and normalised to unit trace.
pub fn spin_steady_numeric<T: Real>(p: &SystemParams<T>) -> Result<SpinSteadyState<T>> {
    let g = bloch_generator(p);
    let gtg = CMat::from_fn(9, 9, |i, j| {
        let mut s = T::zero();
        for row in &g {
            s = s + row[i] * row[j];
        }
        cr(s)
    });
    let (w, v) = eigh(&gtg);
    let top = w[8].abs().max(T::min_positive_value());
    let gap_ratio = w[1] / top;
    if !(gap_ratio > T::lit(1e3) * T::epsilon()) {
        return Err(Error::SingularGenerator(gap_ratio.to_f64_lossy()));
    }
    let x: Vec<T> = (0..9).map(|k| v[(k, 0)].re).collect();
    let tr = x[0] + x[1] + x[2];
    if tr.abs() <= T::epsilon() {
        return Err(Error::SingularGenerator(0.0));
    }
    let x: Vec<T> = x.iter().map(|&xi| xi / tr).collect();

    let gnorm = g.iter().map(|r| r.iter().map(|v| v.abs()).sum::<T>()).fold(T::zero(), T::max);
    let res = g.iter().map(|r| r.iter().zip(&x).map(|(a, b)| *a * *b).sum::<T>().abs()).fold(T::zero(), T::max);
    let tol = T::lit(1e-10).max(T::lit(100.0) * T::epsilon());
    if res > tol * gnorm {
        return Err(Error::NoConvergence(format!("spin null vector residual {res} > {tol}·{gnorm}")));
    }
    Ok(SpinSteadyState::from_bare(BareElements::from_real(&x), &dressed_frame(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct ExcitedFractions<T: Real = f64> {
    pub rho_e1e1: T,
    pub rho_e2e2: T,
    pub rho_e1p1: C<T>,
    pub rho_e2m1: C<T>,
}

/// Adiabatically eliminated excited-state elements driven from |±1⟩.
pub fn excited_fractions<T: Real>(p: &PumpParams<T>, rho_p1p1: T, rho_m1m1: T) -> ExcitedFractions<T> {
    let s = p.gamma0_exc + p.gamma1_exc;
    let den = s * s + p.omega_p * p.omega_p;
    let pop = p.omega_p * p.omega_p / den;
    let coh = p.omega_p * s / den;
    ExcitedFractions {
        rho_e1e1: pop * rho_p1p1,
        rho_e2e2: pop * rho_m1m1,
        rho_e1p1: c(T::zero(), -coh * rho_p1p1),
        rho_e2m1: c(T::zero(), -coh * rho_m1m1),
    }
}

/// First-order (Γ → 0) dressed populations and coherence used by the analytic approximations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct ApproxPopulations<T: Real = f64> {
    pub rho_aa: T,
    pub rho_cc: T,
    pub rho_ac: C<T>,
}

/// Valid for Γ₀ = Γ₁ ≪ ω_m. Uses Δ'²+Ω₀² = R²(1+cos²2θ)/2 with R = ω_ac.
pub fn approx_populations<T: Real>(frame: &DressedFrame<T>, gamma0: T) -> ApproxPopulations<T> {
    let two = T::lit(2.0);
    let c2 = (two * frame.theta).cos();
    let s2 = (two * frame.theta).sin();
    let q = T::one() + c2 * c2;
    let rho_cc = (T::one() + c2) * (T::one() + c2) / (two * q);
    let rho_aa = (T::one() - c2) * (T::one() - c2) / (two * q);
    let root = (frame.omega_ac * frame.omega_ac * q).sqrt();
    let im = if root > T::zero() { -(s2 / q.sqrt()) * (gamma0 / two) / root } else { T::zero() };
    ApproxPopulations { rho_aa, rho_cc, rho_ac: c(T::zero(), im) }
}

impl<T: Real> DressedElements<T> {
    pub fn trace(&self) -> C<T> {
        self.rho_aa + self.rho_bb + self.rho_cc
    }
}

impl<T: Real> Default for DressedElements<T> {
    fn default() -> Self {
        DressedElements { rho_aa: C::zero(), rho_bb: C::zero(), rho_cc: C::zero(), rho_ac: C::zero() }
    }
}
