use num_traits::{One, Zero};

use super::CMat;
use crate::scalar::{c, cr, Real, C};

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors. Only the Hermitian part of `a` is used.
pub fn eigh<T: Real>(a: &CMat<T>) -> (Vec<T>, CMat<T>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMat::identity(n);
    let scale = m.frobenius().max(T::min_positive_value());
    let tol = T::epsilon() * scale;
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                let e = apq / cr(r);
                let tau = (m[(q, q)].re - m[(p, p)].re) / (T::lit(2.0) * r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let (cc, s) = (cr(cs), cr(sn));
                let eb = e.conj();
                // M <- M J, V <- V J with J = [[c, s], [-s ē, c ē]]
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = cc * mkp - s * eb * mkq;
                    m[(k, q)] = s * mkp + cc * eb * mkq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = cc * vkp - s * eb * vkq;
                    v[(k, q)] = s * vkp + cc * eb * vkq;
                }
                // M <- J† M
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = cc * mpk - s * e * mqk;
                    m[(q, k)] = s * mpk + cc * e * mqk;
                }
                m[(p, q)] = C::zero();
                m[(q, p)] = C::zero();
                m[(p, p)] = cr(m[(p, p)].re);
                m[(q, q)] = cr(m[(q, q)].re);
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let vals = idx.iter().map(|&i| m[(i, i)].re).collect();
    let vecs = CMat::from_fn(n, n, |r, k| v[(r, idx[k])]);
    (vals, vecs)
}

/// Roots of the monic polynomial z^n + coeffs[0] z^(n-1) + ... + coeffs[n-1]
/// by Weierstrass (Durand–Kerner) iteration. Meant for degree ≤ 4.
pub fn poly_roots<T: Real>(coeffs: &[C<T>]) -> Vec<C<T>> {
    let n = coeffs.len();
    let eval = |z: C<T>| -> C<T> { coeffs.iter().fold(C::<T>::one(), |acc, a| acc * z + *a) };
    let bound = T::one() + coeffs.iter().fold(T::zero(), |m, a| m.max(a.norm()));
    let seed = c(T::lit(0.4), T::lit(0.9));
    let mut z: Vec<C<T>> = (0..n).map(|k| seed.powu(k as u32) * cr(bound)).collect();
    for _ in 0..500 {
        let mut moved = T::zero();
        for i in 0..n {
            let mut den: C<T> = C::one();
            for j in 0..n {
                if i != j {
                    den = den * (z[i] - z[j]);
                }
            }
            if den.is_zero() {
                den = cr(T::epsilon());
            }
            let dz: C<T> = eval(z[i]) / den;
            z[i] = z[i] - dz;
            moved = moved.max(dz.norm());
        }
        if moved <= T::epsilon() * bound {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalises_complex_hermitian() {
        let a = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, 0.25), c(0.0, -0.3)],
            vec![c(0.5, -0.25), c(-2.0, 0.0), c(0.7, 0.0)],
            vec![c(0.0, 0.3), c(0.7, 0.0), c(0.4, 0.0)],
        ]);
        let (w, v) = eigh(&a);
        assert!(w[0] <= w[1] && w[1] <= w[2]);
        let d = v.adjoint().matmul(&a).matmul(&v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { w[i] } else { 0.0 };
                assert!((d[(i, j)] - cr(want)).norm() < 1e-13);
            }
        }
        let tr: f64 = w.iter().sum();
        assert!((tr - a.trace().re).abs() < 1e-13);
    }

    #[test]
    fn cubic_roots_recovered() {
        let r = [c(-1.0, 0.5), c(-1.0, -0.5), c(-0.02, 0.0)];
        // expand (z - r0)(z - r1)(z - r2)
        let a2 = -(r[0] + r[1] + r[2]);
        let a1 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let a0 = -(r[0] * r[1] * r[2]);
        let mut got = poly_roots(&[a2, a1, a0]);
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        let want = [r[1], r[0], r[2]];
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }
}
