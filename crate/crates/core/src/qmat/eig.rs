use super::{CMat, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigen<const N: usize> {
    /// Ascending.
    pub values: [f64; N],
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMat<N>,
}

impl<const N: usize> Eigen<N> {
    pub fn vector(&self, k: usize) -> [C64; N] {
        core::array::from_fn(|i| self.vectors.0[i][k])
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMat<N> {
        let fv = self.values.map(f);
        let v = &self.vectors;
        CMat::from_fn(|i, j| (0..N).map(|k| v.0[i][k] * fv[k] * v.0[j][k].conj()).sum())
    }
}

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
///
/// Only the Hermitian part of `m` is used. Jacobi rotations keep the
/// eigenvalues accurate relative to the matrix norm even for tiny
/// eigenvalues of density matrices, which the entropies depend on.
pub fn hermitian_eig<const N: usize>(m: &CMat<N>) -> Eigen<N> {
    let mut a = CMat::<N>::from_fn(|i, j| (m.0[i][j] + m.0[j][i].conj()) * 0.5);
    let mut v = CMat::<N>::identity();

    let scale = a.frobenius_norm();
    if scale > 0.0 {
        let target = (f64::EPSILON * scale).powi(2) * 1e-4;
        for _sweep in 0..64 {
            let off: f64 = (0..N)
                .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a.0[i][j].norm_sqr())
                .sum();
            if off <= target {
                break;
            }
            for p in 0..N {
                for q in p + 1..N {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: [usize; N] = core::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    Eigen {
        values: order.map(|k| a.0[k][k].re),
        vectors: CMat::from_fn(|i, c| v.0[i][order[c]]),
    }
}

fn rotate<const N: usize>(a: &mut CMat<N>, v: &mut CMat<N>, p: usize, q: usize) {
    let apq = a.0[p][q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    // Phase-strip a_pq, then a real symmetric Jacobi rotation.
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
    let ph = phase.conj();
    let j00 = C64::new(c, 0.0);
    let j01 = C64::new(s, 0.0);
    let j10 = -ph * s;
    let j11 = ph * c;

    for k in 0..N {
        let (akp, akq) = (a.0[k][p], a.0[k][q]);
        a.0[k][p] = akp * j00 + akq * j10;
        a.0[k][q] = akp * j01 + akq * j11;
    }
    for k in 0..N {
        let (apk, aqk) = (a.0[p][k], a.0[q][k]);
        a.0[p][k] = j00.conj() * apk + j10.conj() * aqk;
        a.0[q][k] = j01.conj() * apk + j11.conj() * aqk;
    }
    a.0[p][q] = C64::new(0.0, 0.0);
    a.0[q][p] = C64::new(0.0, 0.0);
    a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
    a.0[q][q] = C64::new(a.0[q][q].re, 0.0);

    for k in 0..N {
        let (vkp, vkq) = (v.0[k][p], v.0[k][q]);
        v.0[k][p] = vkp * j00 + vkq * j10;
        v.0[k][q] = vkp * j01 + vkq * j11;
    }
}
