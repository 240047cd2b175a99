use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};
#[allow(unused_imports)]
use num_traits::Float;

use super::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense `N × N` complex matrix, row-major (`m[(row, col)]`).
#[derive(Clone, Copy, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;
/// Superoperator on 4 × 4 operators, acting on column-stacked vectors.
pub type Mat16 = CMat<16>;

impl<const N: usize> CMat<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    pub fn real_diag(d: [f64; N]) -> Self {
        Self::diag(d.map(|x| C64::new(x, 0.0)))
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64; N], v: &[C64; N]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `Tr[A B]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for i in 0..N {
            for k in 0..N {
                acc += self.0[i][k] * other.0[k][i];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.0[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Column-stacked vectorisation: `vec(A)[i + N j] = A[i][j]`.
    pub fn vec_into<const M: usize>(&self) -> [C64; M] {
        const { assert!(M == N * N) };
        let mut out = [ZERO; M];
        for j in 0..N {
            for i in 0..N {
                out[i + N * j] = self.0[i][j];
            }
        }
        out
    }

    pub fn unvec<const M: usize>(v: &[C64; M]) -> Self {
        const { assert!(M == N * N) };
        Self::from_fn(|i, j| v[i + N * j])
    }

    /// Matrix exponential by scaling and squaring with a degree-13 Padé
    /// approximant. Intended for the non-normal Liouvillian; Hermitian
    /// generators go through the spectral route in [`super::Hermitian`].
    pub fn exp(&self) -> Self {
        const THETA_13: f64 = 5.371_920_351_148_152;
        const B: [f64; 14] = [
            64_764_752_532_480_000.0,
            32_382_376_266_240_000.0,
            7_771_770_303_897_600.0,
            1_187_353_796_428_800.0,
            129_060_195_264_000.0,
            10_559_470_521_600.0,
            670_442_572_800.0,
            33_522_128_640.0,
            1_323_241_920.0,
            40_840_800.0,
            960_960.0,
            16_380.0,
            182.0,
            1.0,
        ];

        let norm = self.one_norm();
        let squarings = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil() as i32
        } else {
            0
        };
        let a = self.scale_re(0.5_f64.powi(squarings));
        let id = Self::identity();
        let a2 = a * a;
        let a4 = a2 * a2;
        let a6 = a4 * a2;

        let u_inner = a6 * (a6.scale_re(B[13]) + a4.scale_re(B[11]) + a2.scale_re(B[9]))
            + a6.scale_re(B[7])
            + a4.scale_re(B[5])
            + a2.scale_re(B[3])
            + id.scale_re(B[1]);
        let u = a * u_inner;
        let v = a6 * (a6.scale_re(B[12]) + a4.scale_re(B[10]) + a2.scale_re(B[8]))
            + a6.scale_re(B[6])
            + a4.scale_re(B[4])
            + a2.scale_re(B[2])
            + id.scale_re(B[0]);

        let mut r = solve(v - u, v + u);
        for _ in 0..squarings {
            r = r * r;
        }
        r
    }
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: CMat<N>, mut b: CMat<N>) -> CMat<N> {
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a.0[i][col].norm().total_cmp(&a.0[j][col].norm()))
            .unwrap_or(col);
        a.0.swap(col, pivot);
        b.0.swap(col, pivot);
        let p = a.0[col][col];
        for row in col + 1..N {
            let f = a.0[row][col] / p;
            if f == ZERO {
                continue;
            }
            for k in col..N {
                let t = a.0[col][k];
                a.0[row][k] -= f * t;
            }
            for k in 0..N {
                let t = b.0[col][k];
                b.0[row][k] -= f * t;
            }
        }
    }
    let mut x = CMat::<N>::zeros();
    for k in 0..N {
        for row in (0..N).rev() {
            let mut s = b.0[row][k];
            for j in row + 1..N {
                s -= a.0[row][j] * x.0[j][k];
            }
            x.0[row][k] = s / a.0[row][row];
        }
    }
    x
}

/// Kronecker product `a ⊗ b`; the output dimension is checked at compile time.
pub fn kron<const A: usize, const B: usize, const C: usize>(a: &CMat<A>, b: &CMat<B>) -> CMat<C> {
    const { assert!(A * B == C) };
    CMat::<C>::from_fn(|i, j| a.0[i / B][j / B] * b.0[i % B][j % B])
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> AddAssign for CMat<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> SubAssign for CMat<N> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> fmt::Debug for CMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat<{N}> [")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_shapes_and_entries() {
        let sz = Mat2::real_diag([1.0, -1.0]);
        let id = Mat2::identity();
        let out: Mat4 = kron(&sz, &id);
        assert_eq!(out, Mat4::real_diag([1.0, 1.0, -1.0, -1.0]));
        let id4: Mat4 = kron(&id, &id);
        assert_eq!(id4, Mat4::identity());
    }

    #[test]
    fn vec_round_trip_is_column_major() {
        let m = Mat2::from_fn(|i, j| c((i * 2 + j) as f64, 0.0));
        let v: [C64; 4] = m.vec_into();
        assert_eq!(v[1], m[(1, 0)]);
        assert_eq!(Mat2::unvec(&v), m);
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert_eq!(Mat4::zeros().exp().max_abs_diff(&Mat4::identity()), 0.0);
        let d = Mat2::diag([c(0.0, 1.3), c(-2.0, 0.0)]);
        let e = d.exp();
        assert!((e[(0, 0)] - c(0.0, 1.3).exp()).norm() < 1e-14);
        assert!((e[(1, 1)].re - (-2.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn exp_nilpotent_and_large_norm() {
        // exp([[0, a], [0, 0]]) = [[1, a], [0, 1]] exactly.
        let n = Mat2::from_fn(|i, j| {
            if i == 0 && j == 1 {
                c(3.0e4, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let e = n.exp();
        assert!((e[(0, 1)] - c(3.0e4, 0.0)).norm() < 1e-9);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        // Rotation generator with a large angle exercises the squaring phase.
        let theta = 123.456;
        let g = Mat2::from_real([[0.0, -theta], [theta, 0.0]]);
        let r = g.exp();
        assert!((r[(0, 0)].re - theta.cos()).abs() < 1e-11);
        assert!((r[(1, 0)].re - theta.sin()).abs() < 1e-11);
    }

    #[test]
    fn exp_semigroup_property() {
        let a = Mat4::from_fn(|i, j| c((i as f64 - j as f64) * 0.7, ((i * j) as f64).sin()));
        let full = a.scale_re(2.0).exp();
        let half = a.exp();
        assert!(full.max_abs_diff(&(half * half)) < 1e-10 * full.max_abs());
    }
}
