use num_traits::Zero;

use super::CMat;
use crate::scalar::{Real, C};

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr<T: Real> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<C<T>>,
}

impl<T: Real> Csr<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Csr { rows, cols, row_ptr: vec![0; rows + 1], col_idx: vec![], vals: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, C::new(T::one(), T::zero()))).collect())
    }

    /// Duplicates are summed (in input order, so results are reproducible) and exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut t: Vec<(usize, usize, C<T>)>) -> Self {
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut vals: Vec<C<T>> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut last_row = Vec::with_capacity(t.len());
        for (i, j, v) in t {
            assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
            if last == Some((i, j)) {
                let k = vals.len() - 1;
                vals[k] = vals[k] + v;
            } else {
                col_idx.push(j);
                vals.push(v);
                last_row.push(i);
                last = Some((i, j));
            }
        }
        let keep: Vec<bool> = vals.iter().map(|v| !v.is_zero()).collect();
        let mut ci = Vec::with_capacity(col_idx.len());
        let mut vv = Vec::with_capacity(vals.len());
        for (k, &kp) in keep.iter().enumerate() {
            if kp {
                ci.push(col_idx[k]);
                vv.push(vals[k]);
                row_ptr[last_row[k] + 1] += 1;
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { rows, cols, row_ptr, col_idx: ci, vals: vv }
    }

    pub fn from_dense(m: &CMat<T>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C<T>)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.vals[k]))
        })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C<T>)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.vals[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.row(i).find(|(c, _)| *c == j).map_or(C::zero(), |(_, v)| v)
    }

    pub fn to_dense(&self) -> CMat<T> {
        let mut m = CMat::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        let mut y = vec![C::zero(); self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[C<T>], y: &mut [C<T>]) {
        assert_eq!(x.len(), self.cols);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = C::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s = s + self.vals[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v = *v * s);
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_triplets(self.rows, self.cols, self.iter().chain(o.iter()).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.iter().map(|(i, j, v)| (j, i, v)).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.iter().map(|(i, j, v)| (j, i, v.conj())).collect())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut t = Vec::new();
        for (i, k, a) in self.iter() {
            for (j, b) in o.row(k) {
                t.push((i, j, a * b));
            }
        }
        Self::from_triplets(self.rows, o.cols, t)
    }

    pub fn kron(&self, o: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * o.nnz());
        for (i, j, a) in self.iter() {
            for (k, l, b) in o.iter() {
                t.push((i * o.rows + k, j * o.cols + l, a * b));
            }
        }
        Self::from_triplets(self.rows * o.rows, self.cols * o.cols, t)
    }

    /// (lower, upper) bandwidth.
    pub fn bandwidth(&self) -> (usize, usize) {
        self.iter().fold((0, 0), |(kl, ku), (i, j, _)| {
            if i > j {
                (kl.max(i - j), ku)
            } else {
                (kl, ku.max(j - i))
            }
        })
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows).fold(T::zero(), |m, i| m.max(self.row(i).map(|(_, v)| v.norm()).sum::<T>()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = Csr::<f64>::from_triplets(
            2,
            2,
            vec![(1, 0, c(1.0, 0.0)), (0, 1, c(2.0, 0.0)), (1, 0, c(0.5, 1.0)), (0, 0, c(1.0, 0.0)), (0, 0, c(-1.0, 0.0))],
        );
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 0), c(1.5, 1.0));
        assert_eq!(m.bandwidth(), (1, 1));
    }

    #[test]
    fn sparse_kron_matches_dense() {
        let a = CMat::from_fn(2, 2, |i, j| c((i * 2 + j) as f64, 0.5));
        let b = CMat::from_fn(3, 3, |i, j| if i == j + 1 { c(1.0, 0.0) } else { C::zero() });
        let k = Csr::from_dense(&a).kron(&Csr::from_dense(&b)).to_dense();
        assert_eq!(k, a.kron(&b));
        let p = Csr::from_dense(&b).matmul(&Csr::from_dense(&b)).to_dense();
        assert_eq!(p, b.matmul(&b));
    }
}
