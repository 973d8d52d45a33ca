use num_traits::Zero;

use super::space::{DensityMatrix, HilbertSpace};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Csr};
use crate::operator::GeneratorSpec;
use crate::scalar::{cr, Real, C};

/// A Liouvillian acting on row-major vec(ρ).
#[derive(Clone, Debug)]
pub struct Superoperator<T: Real> {
    pub dim: usize,
    pub matrix: Csr<T>,
}

fn conj_csr<T: Real>(a: &Csr<T>) -> Csr<T> {
    Csr::from_triplets(a.rows(), a.cols(), a.iter().map(|(i, j, v)| (i, j, v.conj())).collect())
}

/// Build the Liouvillian of `spec` on `space`.
///
/// −i[H,ρ] → −i H⊗I + i I⊗Hᵀ; D[L] → L⊗L̄ − ½ L†L⊗I − ½ I⊗(L†L)ᵀ; c·AρB → c A⊗Bᵀ.
pub fn assemble<T: Real>(spec: &GeneratorSpec<T>, space: &HilbertSpace) -> Result<Superoperator<T>> {
    for (_, rate) in &spec.lindblad_channels {
        // negative rates are allowed: the reduced generator need not be CP
        if !rate.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite channel rate {rate}")));
        }
    }
    let d = space.dim();
    let id = Csr::identity(d);
    let minus_i = C::new(T::zero(), -T::one());
    let half = cr(T::lit(0.5));

    let h = space.realize(&spec.hamiltonian)?;
    let mut l = h.kron(&id).scale(minus_i).add(&id.kron(&h.transpose()).scale(-minus_i));
    for (op, rate) in &spec.lindblad_channels {
        if rate.is_zero() {
            continue;
        }
        let a = space.realize(op)?;
        let ada = a.adjoint().matmul(&a);
        let jump = a.kron(&conj_csr(&a));
        let anti = ada.kron(&id).add(&id.kron(&ada.transpose())).scale(-half);
        l = l.add(&jump.add(&anti).scale(cr(*rate)));
    }
    for q in &spec.quadratic_terms {
        if q.coeff.is_zero() {
            continue;
        }
        let a = space.realize(&q.left)?;
        let b = space.realize(&q.right)?;
        l = l.add(&a.kron(&b.transpose()).scale(q.coeff));
    }
    Ok(Superoperator { dim: d, matrix: l })
}

impl<T: Real> Superoperator<T> {
    pub fn apply(&self, rho: &CMat<T>) -> CMat<T> {
        assert_eq!(rho.rows(), self.dim);
        CMat::from_vec(self.dim, self.dim, self.matrix.matvec(rho.as_slice()))
    }

    /// max over basis inputs of |tr L(|k⟩⟨l|)|.
    pub fn trace_preservation_error(&self) -> T {
        let d = self.dim;
        let mut col = vec![C::<T>::zero(); d * d];
        for (r, c, v) in self.matrix.iter() {
            if r / d == r % d {
                col[c] = col[c] + v;
            }
        }
        col.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// ‖L vec ρ‖∞
    pub fn residual(&self, rho: &DensityMatrix<T>) -> T {
        self.matrix.matvec(rho.mat.as_slice()).iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn norm_inf(&self) -> T {
        self.matrix.norm_inf()
    }
}
