//! Abstract operator specifications: sums of products of a 3×3 spin matrix and
//! ladder words on the mechanical modes. They are realised as matrices on a
//! concrete truncated space by `lindblad::HilbertSpace`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::scalar::{cr, Real, C};

/// Which 3-level basis a spin factor is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinBasis {
    /// {|0⟩, |+1⟩, |−1⟩}
    Bare,
    /// {|a⟩, |b⟩, |c⟩}
    Dressed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    Raise(usize),
    Lower(usize),
}

impl Ladder {
    pub fn mode(self) -> usize {
        match self {
            Ladder::Raise(m) | Ladder::Lower(m) => m,
        }
    }
    fn dagger(self) -> Self {
        match self {
            Ladder::Raise(m) => Ladder::Lower(m),
            Ladder::Lower(m) => Ladder::Raise(m),
        }
    }
}

/// coeff · spin ⊗ (ladder word, applied as a left-to-right operator product).
#[derive(Clone, Debug, PartialEq)]
pub struct Term<T: Real> {
    pub coeff: C<T>,
    pub spin: Option<CMat<T>>,
    pub ladder: Vec<Ladder>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec<T: Real> {
    pub basis: Option<SpinBasis>,
    pub terms: Vec<Term<T>>,
}

impl<T: Real> OperatorSpec<T> {
    pub fn zero() -> Self {
        OperatorSpec { basis: None, terms: vec![] }
    }

    pub fn identity() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(z: C<T>) -> Self {
        OperatorSpec { basis: None, terms: vec![Term { coeff: z, spin: None, ladder: vec![] }] }
    }

    pub fn spin(basis: SpinBasis, m: CMat<T>) -> Self {
        assert_eq!((m.rows(), m.cols()), (3, 3), "spin factors are 3x3");
        OperatorSpec { basis: Some(basis), terms: vec![Term { coeff: C::one(), spin: Some(m), ladder: vec![] }] }
    }

    /// |i⟩⟨j| in the given basis.
    pub fn spin_ket_bra(basis: SpinBasis, i: usize, j: usize) -> Self {
        let mut m = CMat::zeros(3, 3);
        m[(i, j)] = C::one();
        Self::spin(basis, m)
    }

    pub fn lower(mode: usize) -> Self {
        OperatorSpec { basis: None, terms: vec![Term { coeff: C::one(), spin: None, ladder: vec![Ladder::Lower(mode)] }] }
    }

    pub fn raise(mode: usize) -> Self {
        OperatorSpec { basis: None, terms: vec![Term { coeff: C::one(), spin: None, ladder: vec![Ladder::Raise(mode)] }] }
    }

    pub fn number(mode: usize) -> Self {
        &Self::raise(mode) * &Self::lower(mode)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    pub fn scaled(&self, z: C<T>) -> Self {
        OperatorSpec {
            basis: self.basis,
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff * z, ..t.clone() }).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        OperatorSpec {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.conj(),
                    spin: t.spin.as_ref().map(|s| s.adjoint()),
                    ladder: t.ladder.iter().rev().map(|l| l.dagger()).collect(),
                })
                .collect(),
        }
    }

    /// Number of mechanical modes referenced (max mode index + 1).
    pub fn modes_used(&self) -> usize {
        self.terms.iter().flat_map(|t| t.ladder.iter().map(|l| l.mode() + 1)).max().unwrap_or(0)
    }

    pub fn has_spin(&self) -> bool {
        self.terms.iter().any(|t| t.spin.is_some())
    }

    /// Merge basis tags; mixing bare and dressed factors is a programming error.
    fn join_basis(a: Option<SpinBasis>, b: Option<SpinBasis>) -> Option<SpinBasis> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "cannot combine operators written in different spin bases");
                Some(x)
            }
            (x, None) | (None, x) => x,
        }
    }
}

impl<T: Real> Add for &OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    fn add(self, o: &OperatorSpec<T>) -> OperatorSpec<T> {
        OperatorSpec {
            basis: OperatorSpec::<T>::join_basis(self.basis, o.basis),
            terms: self.terms.iter().chain(&o.terms).cloned().collect(),
        }
    }
}

impl<T: Real> Sub for &OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    fn sub(self, o: &OperatorSpec<T>) -> OperatorSpec<T> {
        self + &o.scaled(cr(-T::one()))
    }
}

impl<T: Real> Neg for &OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    fn neg(self) -> OperatorSpec<T> {
        self.scaled(cr(-T::one()))
    }
}

impl<T: Real> Mul for &OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    /// Operator product. Spin and mechanical factors act on different tensor
    /// slots and commute, so each side's factors multiply independently.
    fn mul(self, o: &OperatorSpec<T>) -> OperatorSpec<T> {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                let spin = match (&a.spin, &b.spin) {
                    (Some(x), Some(y)) => Some(x.matmul(y)),
                    (Some(x), None) => Some(x.clone()),
                    (None, Some(y)) => Some(y.clone()),
                    (None, None) => None,
                };
                let mut ladder = a.ladder.clone();
                ladder.extend_from_slice(&b.ladder);
                terms.push(Term { coeff: a.coeff * b.coeff, spin, ladder });
            }
        }
        OperatorSpec { basis: OperatorSpec::<T>::join_basis(self.basis, o.basis), terms }
    }
}

impl<T: Real> Add for OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    fn add(self, o: OperatorSpec<T>) -> OperatorSpec<T> {
        &self + &o
    }
}

impl<T: Real> Mul for OperatorSpec<T> {
    type Output = OperatorSpec<T>;
    fn mul(self, o: OperatorSpec<T>) -> OperatorSpec<T> {
        &self * &o
    }
}

/// One non-Lindblad piece `coeff · left ρ right`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticTerm<T: Real> {
    pub coeff: C<T>,
    pub left: OperatorSpec<T>,
    pub right: OperatorSpec<T>,
}

/// A master-equation generator: −i[H,ρ] + Σ rate·D[L]ρ + Σ coeff·LρR.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec<T: Real> {
    pub hamiltonian: OperatorSpec<T>,
    pub lindblad_channels: Vec<(OperatorSpec<T>, T)>,
    pub quadratic_terms: Vec<QuadraticTerm<T>>,
}

impl<T: Real> GeneratorSpec<T> {
    pub fn empty() -> Self {
        GeneratorSpec { hamiltonian: OperatorSpec::zero(), lindblad_channels: vec![], quadratic_terms: vec![] }
    }

    pub fn basis(&self) -> Option<SpinBasis> {
        let mut b = self.hamiltonian.basis;
        for (l, _) in &self.lindblad_channels {
            b = OperatorSpec::<T>::join_basis(b, l.basis);
        }
        for q in &self.quadratic_terms {
            b = OperatorSpec::<T>::join_basis(b, q.left.basis);
            b = OperatorSpec::<T>::join_basis(b, q.right.basis);
        }
        b
    }

    pub fn modes_used(&self) -> usize {
        let mut m = self.hamiltonian.modes_used();
        for (l, _) in &self.lindblad_channels {
            m = m.max(l.modes_used());
        }
        for q in &self.quadratic_terms {
            m = m.max(q.left.modes_used()).max(q.right.modes_used());
        }
        m
    }

    pub fn has_spin(&self) -> bool {
        self.hamiltonian.has_spin()
            || self.lindblad_channels.iter().any(|(l, _)| l.has_spin())
            || self.quadratic_terms.iter().any(|q| q.left.has_spin() || q.right.has_spin())
    }
}
