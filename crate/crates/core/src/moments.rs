//! First and second moments of the reduced models, their steady states,
//! quadrature variances and the stability gate.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::poly_roots;
use crate::model::DressedFrame;
use crate::reduced::{ApproxCoefficients, ReducedCoefficients};
use crate::scalar::{cr, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct MomentState<T: Real = f64> {
    pub mean_d: C<T>,
    pub occupancy: T,
    pub pair: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct SqueezingReport<T: Real = f64> {
    pub n_ss: T,
    pub pair_ss: C<T>,
    pub var_x: T,
    /// Conjugate (anti-squeezed) quadrature variance ¼(2n+1+2|⟨d²⟩|).
    pub var_p: T,
    pub squeezing_db: T,
    pub stable: bool,
    pub quantum_squeezed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct Stability<T: Real = f64> {
    pub stable: bool,
    /// Eigenvalues of the (⟨d†d⟩, ⟨d²⟩, ⟨d†²⟩) drift matrix.
    pub second_moment: Vec<C<T>>,
    /// Eigenvalues of the (⟨d⟩, ⟨d†⟩) drift matrix.
    pub first_moment: Vec<C<T>>,
    pub max_re: T,
}

/// Moment equations implied by the reduced generator, with G = γ_m + A₋ − A₊ and σ = S₁ − S₂:
///
/// d⟨d⟩/dt   = −(G + iδ)/2 ⟨d⟩ + σ/2 ⟨d†⟩
/// d⟨d†d⟩/dt = −G⟨d†d⟩ + σ/2 ⟨d†²⟩ + σ*/2 ⟨d²⟩ + γ_m n_th + A₊
/// d⟨d²⟩/dt  = −(G + iδ)⟨d²⟩ + σ⟨d†d⟩ + S₁
pub fn moment_rhs<T: Real>(s: &MomentState<T>, c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> MomentState<T> {
    let g = c.net_damping(gamma_m);
    let z = C::new(g, c.delta_shift);
    let sig = c.s1 - c.s2;
    let half = cr(T::lit(0.5));
    let mean_d = -z * half * s.mean_d + sig * half * s.mean_d.conj();
    let occ = -g * s.occupancy + (sig * half * s.pair.conj() + sig.conj() * half * s.pair).re + gamma_m * n_th + c.a_plus;
    let pair = -z * s.pair + sig * cr(s.occupancy) + c.s1;
    MomentState { mean_d, occupancy: occ, pair }
}

/// Drift matrix of (n, p, p̄) and of (m, m̄); returned row-major.
pub fn drift_matrices<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T) -> ([[C<T>; 3]; 3], [[C<T>; 2]; 2]) {
    let g = c.net_damping(gamma_m);
    let z = C::new(g, c.delta_shift);
    let sig = c.s1 - c.s2;
    let half = cr(T::lit(0.5));
    let o = C::zero();
    let second = [[cr(-g), sig.conj() * half, sig * half], [sig, -z, o], [sig.conj(), o, -z.conj()]];
    let first = [[-z * half, sig * half], [sig.conj() * half, -z.conj() * half]];
    (second, first)
}

/// Hurwitz test on the (real) characteristic polynomials, with eigenvalues for reporting.
pub fn stability_check<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T) -> Stability<T> {
    let (a, b) = drift_matrices(c, gamma_m);
    // λ³ + a2 λ² + a1 λ + a0
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let (a2, a1, a0) = (-tr, minors, -det);
    let second = poly_roots(&[a2, a1, a0]);
    // λ² + b1 λ + b0
    let b1 = -(b[0][0] + b[1][1]);
    let b0 = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let first = poly_roots(&[b1, b0]);

    let hurwitz3 = a2.re > T::zero() && a0.re > T::zero() && a2.re * a1.re > a0.re;
    let hurwitz2 = b1.re > T::zero() && b0.re > T::zero();
    let max_re = second.iter().chain(&first).map(|z| z.re).fold(T::neg_infinity(), T::max);
    Stability { stable: hurwitz3 && hurwitz2, second_moment: second, first_moment: first, max_re }
}

/// Closed-form steady state (n_ss, ⟨d²⟩_ss); requires stability.
pub fn steady_moments<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> Result<(T, C<T>)> {
    let st = stability_check(c, gamma_m);
    if !st.stable {
        return Err(Error::Unstable(st.max_re.to_f64_lossy()));
    }
    Ok(steady_moments_unchecked(c, gamma_m, n_th))
}

/// The closed form without the stability gate (meaningless when unstable).
pub fn steady_moments_unchecked<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> (T, C<T>) {
    let g = c.net_damping(gamma_m);
    let z = C::new(g, c.delta_shift);
    let sig = c.s1 - c.s2;
    let num = gamma_m * n_th + c.a_plus + (sig.conj() * c.s1 / z).re;
    let den = g - (cr(sig.norm_sqr()) / z).re;
    let n = num / den;
    let p = (sig * cr(n) + c.s1) / z;
    (n, p)
}

/// Denominator of the closed-form occupancy; its sign change marks the stability boundary.
pub fn occupancy_denominator<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T) -> T {
    let g = c.net_damping(gamma_m);
    let z = C::new(g, c.delta_shift);
    g - (cr((c.s1 - c.s2).norm_sqr()) / z).re
}

/// Two-mode sums ⟨(d₁†+d₂†)(d₁+d₂)⟩ and ⟨(d₁+d₂)²⟩ at φ = π/4.
pub fn steady_moments_two_mode<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> Result<(T, C<T>)> {
    let st = stability_check(c, gamma_m);
    if !st.stable {
        return Err(Error::Unstable(st.max_re.to_f64_lossy()));
    }
    let two = T::lit(2.0);
    let g = c.net_damping(gamma_m);
    let z = C::new(g, c.delta_shift);
    let sig = c.s1 - c.s2;
    let num = two * gamma_m * n_th + two * c.a_plus + two * (sig.conj() * c.s1 / z).re;
    let den = g - (cr(sig.norm_sqr()) / z).re;
    let occ = num / den;
    let pair = (sig * cr(occ) + c.s1 * cr(two)) / z;
    Ok((occ, pair))
}

/// ¼(2n+1−2|⟨d²⟩|) and friends. Assumes ⟨d⟩ = 0, which holds for the undriven reduced model.
pub fn quadrature_variance<T: Real>(n_ss: T, pair_ss: C<T>) -> Result<SqueezingReport<T>> {
    let q = T::lit(0.25);
    let two = T::lit(2.0);
    let var_x = q * (two * n_ss + T::one() - two * pair_ss.norm());
    let var_p = q * (two * n_ss + T::one() + two * pair_ss.norm());
    let tol = T::lit(1e-12).max(T::lit(100.0) * T::epsilon());
    if var_x < -tol || !var_x.is_finite() {
        return Err(Error::NonPhysical(var_x.to_f64_lossy()));
    }
    let squeezing_db = -T::lit(10.0) * (T::lit(4.0) * var_x).log10();
    Ok(SqueezingReport { n_ss, pair_ss, var_x, var_p, squeezing_db, stable: true, quantum_squeezed: var_x < q })
}

/// Full single-mode chain from coefficients: stability gate, steady moments, variance.
pub fn analyze<T: Real>(c: &ReducedCoefficients<T>, gamma_m: T, n_th: T) -> Result<SqueezingReport<T>> {
    let (n, p) = steady_moments(c, gamma_m, n_th)?;
    quadrature_variance(n, p)
}

/// ¼(⟨(d₁†+d₂†)(d₁+d₂)⟩ − |⟨(d₁+d₂)²⟩| + 1)
pub fn two_mode_variance<T: Real>(sum_occupancy: T, sum_pair: C<T>) -> T {
    T::lit(0.25) * (sum_occupancy - sum_pair.norm() + T::one())
}

/// Two-term approximation of the variance with the cooling-limited occupancy.
pub fn variance_approx<T: Real>(
    _frame: &DressedFrame<T>,
    approx: &ApproxCoefficients<T>,
    gamma_m: T,
    n_th: T,
) -> T {
    let c = &approx.coeffs;
    let n = gamma_m * n_th / (gamma_m + c.a_minus);
    let r = (c.s1 / C::new(gamma_m + c.a_minus, c.delta_shift)).norm();
    let (q, h) = (T::lit(0.25), T::lit(0.5));
    q * (T::one() - T::lit(2.0) * r) + h * (T::one() - r) * n
}

/// ¼⟨(d e^{−iα} + d† e^{iα})²⟩ − ¼⟨d e^{−iα} + d† e^{iα}⟩² for a zero-mean state.
pub fn rotated_variance<T: Real>(n: T, pair: C<T>, alpha: T) -> T {
    let e = C::from_polar(T::one(), -T::lit(2.0) * alpha);
    T::lit(0.25) * (T::lit(2.0) * n + T::one() + T::lit(2.0) * (pair * e).re)
}

impl<T: Real> MomentState<T> {
    pub fn vacuum() -> Self {
        MomentState { mean_d: C::zero(), occupancy: T::zero(), pair: C::zero() }
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.mean_d - o.mean_d).norm().max((self.occupancy - o.occupancy).abs()).max((self.pair - o.pair).norm())
    }
}

impl<T: Real> SqueezingReport<T> {
    /// (Δx)²(Δp)² − 1/16
    pub fn heisenberg_margin(&self) -> T {
        self.var_x * self.var_p - T::lit(1.0 / 16.0)
    }
}
