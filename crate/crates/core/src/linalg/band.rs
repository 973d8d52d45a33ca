use num_traits::Zero;

use super::Csr;
use crate::scalar::{Real, C};

/// LU factorisation with partial pivoting of a banded matrix.
///
/// Storage follows LAPACK `gbtrf`: column-major, leading dimension `2kl+ku+1`,
/// entry (i, j) at row `kl + ku + i - j` of column j. The extra `kl` rows hold
/// the fill produced by row interchanges.
#[derive(Clone, Debug)]
pub struct BandLu<T: Real> {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<C<T>>,
    piv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    /// Factor `a + shift·I`. Returns `None` on an exactly zero pivot.
    pub fn factor(a: &Csr<T>, shift: C<T>) -> Option<Self> {
        assert_eq!(a.rows(), a.cols());
        let n = a.rows();
        let (kl, ku) = a.bandwidth();
        let ld = 2 * kl + ku + 1;
        let mut ab = vec![C::zero(); ld * n];
        for (i, j, v) in a.iter() {
            ab[j * ld + kl + ku + i - j] = v;
        }
        for j in 0..n {
            let k = j * ld + kl + ku;
            ab[k] = ab[k] + shift;
        }
        let mut lu = BandLu { n, kl, ku, ld, ab, piv: vec![0; n] };
        lu.run()?;
        Some(lu)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    fn run(&mut self) -> Option<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = T::zero();
            for i in k..=last {
                let v = self.ab[self.at(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            self.piv[k] = p;
            if best == T::zero() {
                return None;
            }
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (self.at(k, j), self.at(p, j));
                    self.ab.swap(a, b);
                }
            }
            let inv = C::new(T::one(), T::zero()) / self.ab[self.at(k, k)];
            for i in k + 1..=last {
                let idx = self.at(i, k);
                self.ab[idx] = self.ab[idx] * inv;
            }
            for j in k + 1..=jmax {
                let ukj = self.ab[self.at(k, j)];
                if ukj.is_zero() {
                    continue;
                }
                // rows k+1..=last of column j are contiguous, as are the multipliers in column k
                let lk = self.at(k + 1, k);
                let dj = self.at(k + 1, j);
                for r in 0..last - k {
                    let l = self.ab[lk + r];
                    self.ab[dj + r] = self.ab[dj + r] - l * ukj;
                }
            }
        }
        Some(())
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            if xk.is_zero() {
                continue;
            }
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] = x[i] - self.ab[self.at(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let xk = x[k] / self.ab[self.at(k, k)];
            x[k] = xk;
            let lo = k.saturating_sub(kl + ku);
            for i in lo..k {
                x[i] = x[i] - self.ab[self.at(i, k)] * xk;
            }
        }
        x
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}
