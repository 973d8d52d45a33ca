use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMat, Csr};
use crate::model::{spin_x, spin_y, spin_z, DressedFrame};
use crate::operator::{Ladder, OperatorSpec};
use crate::scalar::{cr, Real, C};

pub const DEFAULT_DIM_CAP: usize = 700;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    pub spin_dim: usize,
    pub fock_dims: Vec<usize>,
    pub cap: usize,
}

impl HilbertSpace {
    pub fn new(spin_dim: usize, fock_dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(spin_dim, fock_dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(spin_dim: usize, fock_dims: Vec<usize>, cap: usize) -> Result<Self> {
        if spin_dim != 1 && spin_dim != 3 {
            return Err(Error::DimensionMismatch(format!("spin_dim must be 1 or 3, got {spin_dim}")));
        }
        if fock_dims.iter().any(|&n| n < 2) {
            return Err(Error::DimensionMismatch("every Fock dimension must be >= 2".into()));
        }
        let s = HilbertSpace { spin_dim, fock_dims, cap };
        if s.dim() > cap {
            return Err(Error::TruncationCapExceeded(s.dim()));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.spin_dim * self.fock_dims.iter().product::<usize>()
    }

    pub fn modes(&self) -> usize {
        self.fock_dims.len()
    }

    /// Fock number of `mode` for basis index `i`.
    pub fn occupation(&self, i: usize, mode: usize) -> usize {
        let mut rest = i / self.spin_dim;
        for m in (mode + 1..self.modes()).rev() {
            rest /= self.fock_dims[m];
        }
        rest % self.fock_dims[mode]
    }

    pub fn spin_index(&self, i: usize) -> usize {
        i % self.spin_dim
    }

    fn ladder_matrix<T: Real>(&self, l: Ladder) -> CMat<T> {
        let n = self.fock_dims[l.mode()];
        let mut m = CMat::zeros(n, n);
        for k in 1..n {
            let v = cr(T::lit(k as f64).sqrt());
            match l {
                Ladder::Lower(_) => m[(k - 1, k)] = v,
                Ladder::Raise(_) => m[(k, k - 1)] = v,
            }
        }
        m
    }

    /// Matrix of an operator spec on this space.
    pub fn realize<T: Real>(&self, op: &OperatorSpec<T>) -> Result<Csr<T>> {
        if op.modes_used() > self.modes() {
            return Err(Error::DimensionMismatch(format!(
                "operator uses {} modes, space has {}",
                op.modes_used(),
                self.modes()
            )));
        }
        if op.has_spin() && self.spin_dim != 3 {
            return Err(Error::DimensionMismatch("operator has a spin factor but the space has none".into()));
        }
        let d = self.dim();
        let mut total = Csr::zeros(d, d);
        for t in &op.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let mut factors: Vec<CMat<T>> = self.fock_dims.iter().map(|&n| CMat::identity(n)).collect();
            for l in &t.ladder {
                let f = &mut factors[l.mode()];
                *f = f.matmul(&self.ladder_matrix(*l));
            }
            let spin = match (&t.spin, self.spin_dim) {
                (Some(s), _) => s.clone(),
                (None, n) => CMat::identity(n),
            };
            let mut m = Csr::identity(1);
            for f in &factors {
                m = m.kron(&Csr::from_dense(f));
            }
            m = m.kron(&Csr::from_dense(&spin));
            total = total.add(&m.scale(t.coeff));
        }
        Ok(total)
    }
}

/// Ladder and spin matrices on a concrete space. Spin matrices are in the
/// bare basis; the dressed projectors are present when a frame is given.
#[derive(Clone, Debug)]
pub struct OperatorSet<T: Real> {
    pub lower: Vec<Csr<T>>,
    pub raise: Vec<Csr<T>>,
    pub number: Vec<Csr<T>>,
    pub sz: Option<Csr<T>>,
    pub sy: Option<Csr<T>>,
    pub sx: Option<Csr<T>>,
    pub proj_a: Option<Csr<T>>,
    pub proj_b: Option<Csr<T>>,
    pub proj_c: Option<Csr<T>>,
}

pub fn build_operators<T: Real>(space: &HilbertSpace, frame: Option<&DressedFrame<T>>) -> OperatorSet<T> {
    use crate::operator::SpinBasis::Bare;
    let r = |op: OperatorSpec<T>| space.realize(&op).expect("operator matches its own space");
    let m = space.modes();
    let has_spin = space.spin_dim == 3;
    let spin = |s: CMat<T>| has_spin.then(|| r(OperatorSpec::spin(Bare, s)));
    let proj = |k: usize| {
        frame.filter(|_| has_spin).map(|f| {
            let u = f.rotation();
            let p = CMat::from_fn(3, 3, |i, j| u[(k, i)].conj() * u[(k, j)]);
            r(OperatorSpec::spin(Bare, p))
        })
    };
    OperatorSet {
        lower: (0..m).map(|k| r(OperatorSpec::lower(k))).collect(),
        raise: (0..m).map(|k| r(OperatorSpec::raise(k))).collect(),
        number: (0..m).map(|k| r(OperatorSpec::number(k))).collect(),
        sz: spin(spin_z()),
        sy: spin(spin_y()),
        sx: spin(spin_x()),
        proj_a: proj(0),
        proj_b: proj(1),
        proj_c: proj(2),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    pub mat: CMat<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: CMat<T>) -> Self {
        assert!(mat.is_square());
        DensityMatrix { mat }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { mat: CMat::identity(d).scale(cr(T::one() / T::lit(d as f64))) }
    }

    /// |k⟩⟨k|
    pub fn basis_state(d: usize, k: usize) -> Self {
        let mut m = CMat::zeros(d, d);
        m[(k, k)] = C::one();
        DensityMatrix { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn trace(&self) -> C<T> {
        self.mat.trace()
    }

    /// tr(O ρ)
    pub fn expect(&self, op: &Csr<T>) -> C<T> {
        let mut s = C::zero();
        for (i, j, v) in op.iter() {
            s = s + v * self.mat[(j, i)];
        }
        s
    }

    pub fn min_eigenvalue(&self) -> T {
        eigh(&self.mat).0[0]
    }

    pub fn hermiticity_error(&self) -> T {
        self.mat.hermiticity_error()
    }

    /// Spin marginal (3×3) obtained by tracing out all modes.
    pub fn spin_marginal(&self, space: &HilbertSpace) -> CMat<T> {
        let s = space.spin_dim;
        let mut out = CMat::zeros(s, s);
        for blk in 0..self.dim() / s {
            for a in 0..s {
                for b in 0..s {
                    out[(a, b)] = out[(a, b)] + self.mat[(blk * s + a, blk * s + b)];
                }
            }
        }
        out
    }

    /// Population of each Fock level of `mode`.
    pub fn fock_populations(&self, space: &HilbertSpace, mode: usize) -> Vec<T> {
        let mut p = vec![T::zero(); space.fock_dims[mode]];
        for i in 0..self.dim() {
            p[space.occupation(i, mode)] = p[space.occupation(i, mode)] + self.mat[(i, i)].re;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dressed_frame, SystemParams};

    #[test]
    fn ladder_algebra_on_truncated_space() {
        let s = HilbertSpace::new(1, vec![6]).unwrap();
        let ops = build_operators::<f64>(&s, None);
        let comm = ops.lower[0].matmul(&ops.raise[0]).add(&ops.raise[0].matmul(&ops.lower[0]).scale(cr(-1.0)));
        for k in 0..6 {
            let want = if k < 5 { 1.0 } else { -5.0 };
            assert!((comm.get(k, k).re - want).abs() < 1e-14);
        }
        for k in 0..6 {
            assert!((ops.number[0].get(k, k).re - k as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn dressed_projectors_resolve_identity() {
        let s = HilbertSpace::new(3, vec![3]).unwrap();
        let p = SystemParams { delta: 0.3, omega0: 0.8, omega1: -0.7, ..SystemParams::baseline() };
        let f = dressed_frame(&p);
        let ops = build_operators(&s, Some(&f));
        let sum = ops.proj_a.unwrap().add(&ops.proj_b.unwrap()).add(&ops.proj_c.unwrap()).to_dense();
        assert!((&sum - &CMat::identity(9)).max_abs() < 1e-14);
    }

    #[test]
    fn index_layout_is_spin_fastest() {
        let s = HilbertSpace::new(3, vec![4, 5]).unwrap();
        let i = (2 * 5 + 3) * 3 + 1;
        assert_eq!((s.occupation(i, 0), s.occupation(i, 1), s.spin_index(i)), (2, 3, 1));
        assert!(matches!(HilbertSpace::new(3, vec![1]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(HilbertSpace::new(3, vec![300]), Err(Error::TruncationCapExceeded(900))));
    }
}
