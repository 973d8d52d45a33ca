use num_traits::Zero;

use super::space::{DensityMatrix, HilbertSpace};
use super::superop::Superoperator;
use crate::error::{Error, Result};
use crate::linalg::{BandLu, CMat};
use crate::scalar::{c, cr, Real, C};

#[derive(Clone, Copy, Debug)]
pub struct SteadyOptions<T: Real> {
    /// Residual tolerance relative to ‖L‖∞.
    pub residual_tol: T,
    /// Largest allowed distance between the two independent starts.
    pub kernel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SteadyOptions<T> {
    fn default() -> Self {
        SteadyOptions {
            residual_tol: T::lit(1e-9).max(T::lit(1e3) * T::epsilon()),
            kernel_tol: T::lit(1e-6).max(T::lit(1e4) * T::epsilon()),
            max_iter: 8,
        }
    }
}

fn normalize_inf<T: Real>(x: &mut [C<T>]) -> T {
    let m = x.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if m > T::zero() {
        let inv = cr(T::one() / m);
        x.iter_mut().for_each(|z| *z = *z * inv);
    }
    m
}

fn to_density<T: Real>(d: usize, x: Vec<C<T>>) -> Option<DensityMatrix<T>> {
    let m = CMat::from_vec(d, d, x).hermitian_part();
    let tr = m.trace().re;
    if !(tr.abs() > T::epsilon()) {
        return None;
    }
    Some(DensityMatrix::new(m.scale(cr(T::one() / tr))))
}

/// Deterministic full-rank positive start, independent of the identity start.
fn scrambled_start<T: Real>(d: usize) -> Vec<C<T>> {
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        T::lit((s >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
    };
    let a = CMat::from_fn(d, d, |_, _| c(next(), next()));
    let mut r = &a * &a.adjoint();
    for i in 0..d {
        r[(i, i)] = r[(i, i)] + cr(T::lit(0.1));
    }
    r.into_vec()
}

/// Kernel of L by shifted inverse iteration on a banded LU of L − μI.
///
/// Runs from two unrelated starts; if they land on different states the
/// kernel is degenerate and no unique steady state exists.
pub fn steady_state<T: Real>(l: &Superoperator<T>, opts: &SteadyOptions<T>) -> Result<DensityMatrix<T>> {
    let d = l.dim;
    let norm = l.norm_inf();
    if norm.is_zero() {
        return Err(Error::DegenerateKernel(0.0));
    }
    let mu = norm * T::lit(1e-12).max(T::lit(16.0) * T::epsilon());
    let lu = BandLu::factor(&l.matrix, cr(-mu))
        .ok_or_else(|| Error::NoConvergence("zero pivot in shifted Liouvillian".into()))?;

    let run = |start: Vec<C<T>>| -> Result<DensityMatrix<T>> {
        let mut x = start;
        let mut prev: Option<DensityMatrix<T>> = None;
        for _ in 0..opts.max_iter {
            x = lu.solve(&x);
            normalize_inf(&mut x);
            if let Some(rho) = to_density(d, x.clone()) {
                if l.residual(&rho) <= opts.residual_tol * norm {
                    if let Some(p) = &prev {
                        if (&p.mat - &rho.mat).max_abs() <= opts.residual_tol {
                            return Ok(rho);
                        }
                    }
                    prev = Some(rho);
                    continue;
                }
            }
            prev = None;
        }
        match prev {
            Some(rho) => Ok(rho),
            None => Err(Error::NoConvergence(format!("steady state residual above {:e}·‖L‖", opts.residual_tol))),
        }
    };

    let identity_start = CMat::<T>::identity(d).into_vec();
    let r1 = run(identity_start)?;
    let r2 = run(scrambled_start(d))?;
    let diff = (&r1.mat - &r2.mat).max_abs();
    if diff > opts.kernel_tol {
        return Err(Error::DegenerateKernel(diff.to_f64_lossy()));
    }
    Ok(r1)
}

/// Population in the top `tail` Fock levels, maximised over modes.
pub fn truncation_check<T: Real>(rho: &DensityMatrix<T>, space: &HilbertSpace, tail: usize) -> T {
    (0..space.modes())
        .map(|m| {
            let p = rho.fock_populations(space, m);
            p.iter().rev().take(tail).fold(T::zero(), |s, &x| s + x)
        })
        .fold(T::zero(), |a, b| a.max(b))
}

#[derive(Clone, Debug)]
pub struct Escalated<T: Real> {
    pub state: DensityMatrix<T>,
    pub space: HilbertSpace,
    pub truncation: T,
}

/// Steady state with the Fock cutoff doubled until the top-level weight is below `eps`.
pub fn steady_state_escalating<T: Real>(
    spin_dim: usize,
    modes: usize,
    start: usize,
    max_fock: usize,
    eps: T,
    build: impl Fn(&HilbertSpace) -> Result<Superoperator<T>>,
) -> Result<Escalated<T>> {
    let mut n = start;
    loop {
        let space = HilbertSpace::with_cap(spin_dim, vec![n; modes], usize::MAX)?;
        let l = build(&space)?;
        let state = steady_state(&l, &SteadyOptions::default())?;
        let truncation = truncation_check(&state, &space, 2);
        if truncation < eps {
            return Ok(Escalated { state, space, truncation });
        }
        if 2 * n > max_fock {
            return Err(Error::TruncationCapExceeded(space.dim()));
        }
        n *= 2;
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// Rescale to unit trace after every accepted step.
    pub renormalize: bool,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        EvolveOptions { rtol: T::lit(1e-8), atol: T::lit(1e-10), max_steps: 1_000_000, renormalize: true }
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrate dρ/dt = Lρ and return ρ at each of `times` (ascending, ≥ 0).
pub fn evolve<T: Real>(
    l: &Superoperator<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
    opts: &EvolveOptions<T>,
) -> Result<Vec<DensityMatrix<T>>> {
    let d = l.dim;
    let n = d * d;
    let mut y = rho0.mat.as_slice().to_vec();
    let mut t = T::zero();
    let mut h = (T::lit(0.01) / l.norm_inf().max(T::lit(1e-12))).max(T::lit(1e-8));
    let mut k: Vec<Vec<C<T>>> = vec![vec![C::zero(); n]; 7];
    let mut tmp = vec![C::zero(); n];
    l.matrix.matvec_into(&y, &mut k[0]);
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0usize;

    for &target in times {
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepFailure(t.to_f64_lossy()));
            }
            let hh = h.min(target - t);
            for s in 0..6 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s + 1) {
                        let a = A[s][j];
                        if a != 0.0 {
                            acc = acc + kj[i] * cr(hh * T::lit(a));
                        }
                    }
                    tmp[i] = acc;
                }
                let (head, tail) = k.split_at_mut(s + 1);
                let _ = head;
                l.matrix.matvec_into(&tmp, &mut tail[0]);
            }
            // tmp now holds the 5th-order solution (FSAL row); k[6] = L(tmp)
            let mut err = T::zero();
            for i in 0..n {
                let mut e = C::<T>::zero();
                for j in 0..7 {
                    e = e + k[j][i] * cr(T::lit(B5[j] - B4[j]));
                }
                let sc = opts.atol + opts.rtol * y[i].norm().max(tmp[i].norm());
                let r: T = (e * cr::<T>(hh)).norm() / sc;
                err = err.max(r);
            }
            if !err.is_finite() {
                return Err(Error::StepFailure(t.to_f64_lossy()));
            }
            if err <= T::one() {
                t = t + hh;
                y.copy_from_slice(&tmp);
                if opts.renormalize {
                    let tr = (0..d).fold(C::<T>::zero(), |s, i| s + y[i * d + i]);
                    if tr.norm() > T::zero() {
                        y.iter_mut().for_each(|z| *z = *z / tr);
                    }
                    l.matrix.matvec_into(&y, &mut k[0]);
                } else {
                    k.swap(0, 6);
                }
            }
            let fac = if err.is_zero() { T::lit(5.0) } else { T::lit(0.9) * err.powf(T::lit(-0.2)) };
            let fac = fac.min(T::lit(5.0)).max(T::lit(0.2));
            h = hh * fac;
            if h < T::lit(1e-14) * (T::one() + t) {
                return Err(Error::StepFailure(t.to_f64_lossy()));
            }
        }
        out.push(DensityMatrix::new(CMat::from_vec(d, d, y.clone())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::superop::assemble;
    use crate::operator::{GeneratorSpec, OperatorSpec};

    fn damped(n: usize, gamma: f64, nth: f64) -> (HilbertSpace, Superoperator<f64>) {
        let space = HilbertSpace::new(1, vec![n]).unwrap();
        let spec = GeneratorSpec {
            hamiltonian: OperatorSpec::number(0),
            lindblad_channels: vec![(OperatorSpec::lower(0), gamma * (nth + 1.0)), (OperatorSpec::raise(0), gamma * nth)],
            quadratic_terms: vec![],
        };
        let l = assemble(&spec, &space).unwrap();
        (space, l)
    }

    #[test]
    fn thermal_steady_state_is_geometric() {
        let nth = 0.8;
        let (space, l) = damped(40, 0.3, nth);
        let rho = steady_state(&l, &SteadyOptions::default()).unwrap();
        let p = rho.fock_populations(&space, 0);
        let q = nth / (nth + 1.0);
        for (k, pk) in p.iter().enumerate().take(10) {
            let want = q.powi(k as i32) / (nth + 1.0);
            assert!((pk - want).abs() < 1e-10, "k={k}: {pk} vs {want}");
        }
        assert!(rho.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn undamped_generator_has_degenerate_kernel() {
        let space = HilbertSpace::new(1, vec![4]).unwrap();
        let spec = GeneratorSpec::<f64> { hamiltonian: OperatorSpec::number(0), ..GeneratorSpec::empty() };
        let l = assemble(&spec, &space).unwrap();
        assert!(matches!(steady_state(&l, &SteadyOptions::default()), Err(Error::DegenerateKernel(_))));
    }

    #[test]
    fn decay_of_occupation_is_exponential() {
        let (space, l) = damped(12, 0.5, 0.0);
        let rho0 = DensityMatrix::basis_state(12, 3);
        let ts = [0.5, 1.0, 2.0];
        let out = evolve(&l, &rho0, &ts, &EvolveOptions::default()).unwrap();
        let ops = super::super::build_operators::<f64>(&space, None);
        for (r, t) in out.iter().zip(ts) {
            let n = r.expect(&ops.number[0]).re;
            assert!((n - 3.0 * (-0.5 * t).exp()).abs() < 1e-7, "t={t}: {n}");
        }
    }

    #[test]
    fn escalation_stops_once_tail_is_small() {
        let e = steady_state_escalating(1, 1, 8, 128, 1e-9, |s| {
            let spec = GeneratorSpec {
                hamiltonian: OperatorSpec::zero(),
                lindblad_channels: vec![(OperatorSpec::lower(0), 1.5), (OperatorSpec::raise(0), 0.5)],
                quadratic_terms: vec![],
            };
            assemble(&spec, s)
        })
        .unwrap();
        // nth = 0.5, ratio 1/3 per level: 3^-n < 1e-9 needs n ≥ 19
        assert_eq!(e.space.fock_dims, vec![32]);
        assert!(matches!(
            steady_state_escalating(1, 1, 8, 16, 1e-9, |s| assemble(
                &GeneratorSpec {
                    hamiltonian: OperatorSpec::zero(),
                    lindblad_channels: vec![(OperatorSpec::lower(0), 1.5), (OperatorSpec::raise(0), 0.5)],
                    quadratic_terms: vec![],
                },
                s
            )),
            Err(Error::TruncationCapExceeded(_))
        ));
    }
}
