use super::{hermitian_eig, kron, tol, CMat, Eigen, Mat2, Mat4, C64};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Hermitian operator (Hamiltonians in rad/s, observables).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hermitian<const N: usize>(CMat<N>);

impl<const N: usize> Hermitian<N> {
    pub fn new(m: CMat<N>) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > tol::OPERATOR_HERMITIAN * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { asymmetry: defect });
        }
        Ok(Self::hermitize(m))
    }

    /// Symmetrises `m`; for operators that are Hermitian by construction.
    pub(crate) fn hermitize(m: CMat<N>) -> Self {
        Hermitian(CMat::from_fn(|i, j| (m.0[i][j] + m.0[j][i].conj()) * 0.5))
    }

    pub fn from_real_diag(d: [f64; N]) -> Self {
        Hermitian(CMat::real_diag(d))
    }

    pub fn matrix(&self) -> &CMat<N> {
        &self.0
    }

    pub fn eig(&self) -> Eigen<N> {
        hermitian_eig(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Hermitian(self.0.scale_re(s))
    }

    /// `Tr[ρ H]`.
    pub fn expectation(&self, rho: &DensityMatrix<N>) -> f64 {
        rho.matrix().trace_product(&self.0).re
    }

    /// `exp(-i H t)`, computed spectrally.
    pub fn propagator(&self, t: f64) -> CMat<N> {
        self.eig().map(|e| C64::new(0.0, -e * t).exp())
    }
}

impl Hermitian<2> {
    pub fn sigma_x() -> Self {
        Hermitian(super::pauli::sigma_x())
    }

    pub fn sigma_y() -> Self {
        Hermitian(super::pauli::sigma_y())
    }

    pub fn sigma_z() -> Self {
        Hermitian(super::pauli::sigma_z())
    }

    /// `(ω/2) σ_z`.
    pub fn qubit(omega: f64) -> Self {
        Self::from_real_diag([omega / 2.0, -omega / 2.0])
    }
}

/// Normalised pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ket<const N: usize>([C64; N]);

impl<const N: usize> Ket<N> {
    pub fn new(amplitudes: [C64; N]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Ket(amplitudes))
    }

    pub fn basis(k: usize) -> Self {
        Ket(core::array::from_fn(|i| {
            C64::new(if i == k { 1.0 } else { 0.0 }, 0.0)
        }))
    }

    pub fn amplitudes(&self) -> &[C64; N] {
        &self.0
    }

    pub fn projector(&self) -> DensityMatrix<N> {
        DensityMatrix(CMat::outer(&self.0, &self.0))
    }
}

impl Ket<2> {
    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Ket([C64::new(c, 0.0), C64::from_polar(s, phi)])
    }

    /// The orthogonal state, antipodal on the Bloch sphere.
    pub fn orthogonal(&self) -> Self {
        let [a, b] = self.0;
        Ket([-b.conj(), a.conj()])
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<const N: usize>(CMat<N>);

impl<const N: usize> DensityMatrix<N> {
    pub fn new(m: CMat<N>) -> Result<Self> {
        Self::with_positivity_tolerance(m, tol::POSITIVITY)
    }

    /// Validates with a caller-chosen positivity slack (propagators use a
    /// looser bound than [`tol::POSITIVITY`]).
    pub fn with_positivity_tolerance(m: CMat<N>, positivity: f64) -> Result<Self> {
        let asymmetry = m.hermitian_defect();
        if asymmetry > tol::DENSITY_HERMITIAN {
            return Err(Error::NotHermitian { asymmetry });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > tol::DENSITY_TRACE {
            return Err(Error::NotUnitTrace { trace });
        }
        let min_eigenvalue = hermitian_eig(&m).values[0];
        if min_eigenvalue < -positivity {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix(CMat::from_fn(|i, j| {
            (m.0[i][j] + m.0[j][i].conj()) * 0.5
        })))
    }

    /// Wraps a matrix that is a state by construction (exact Gibbs weights,
    /// products of states, unitary conjugation).
    pub(crate) fn trusted(m: CMat<N>) -> Self {
        DensityMatrix(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(CMat::identity().scale_re(1.0 / N as f64))
    }

    pub fn from_populations(p: [f64; N]) -> Result<Self> {
        Self::new(CMat::real_diag(p))
    }

    pub fn matrix(&self) -> &CMat<N> {
        &self.0
    }

    pub fn into_matrix(self) -> CMat<N> {
        self.0
    }

    pub fn eig(&self) -> Eigen<N> {
        hermitian_eig(&self.0)
    }

    /// Eigenvalues with round-off negatives clamped to zero.
    pub fn spectrum(&self) -> [f64; N] {
        self.eig().values.map(|x| x.max(0.0))
    }

    pub fn population(&self, k: usize) -> f64 {
        self.0 .0[k][k].re
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMat<N>) -> Self {
        DensityMatrix(*u * self.0 * u.adjoint())
    }
}

/// Kronecker product of two single-qubit states.
pub fn tensor_product(a: &DensityMatrix<2>, b: &DensityMatrix<2>) -> DensityMatrix<4> {
    DensityMatrix(kron(a.matrix(), b.matrix()))
}

/// Which qubit of a pair. The refrigerant `S` is the first (most significant)
/// tensor factor, the auxiliary `A` the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    S,
    A,
}

/// Reduced state of one qubit of a pair.
pub fn partial_trace(rho: &DensityMatrix<4>, keep: Subsystem) -> DensityMatrix<2> {
    DensityMatrix(partial_trace_matrix(rho.matrix(), keep))
}

/// Partial trace of an arbitrary 4×4 operator.
pub fn partial_trace_matrix(m: &Mat4, keep: Subsystem) -> Mat2 {
    Mat2::from_fn(|i, j| match keep {
        Subsystem::S => (0..2).map(|k| m.0[2 * i + k][2 * j + k]).sum(),
        Subsystem::A => (0..2).map(|k| m.0[2 * k + i][2 * k + j]).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::pauli;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn tensor_product_examples() {
        let id = DensityMatrix::<2>::maximally_mixed();
        assert_eq!(
            tensor_product(&id, &id)
                .matrix()
                .max_abs_diff(&Mat4::identity().scale_re(0.25)),
            0.0
        );
        let szi: Mat4 = kron(&pauli::sigma_z(), &pauli::identity());
        assert_eq!(szi, Mat4::real_diag([1.0, 1.0, -1.0, -1.0]));
        let xx: Mat4 = kron(&pauli::sigma_x(), &pauli::sigma_x());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(i, j)], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let rs = DensityMatrix::from_populations([0.3, 0.7]).unwrap();
        let ra = Ket::bloch(1.1, 0.4).projector();
        let prod = tensor_product(&rs, &ra);
        assert!(
            partial_trace(&prod, Subsystem::S)
                .matrix()
                .max_abs_diff(rs.matrix())
                < 1e-15
        );
        assert!(
            partial_trace(&prod, Subsystem::A)
                .matrix()
                .max_abs_diff(ra.matrix())
                < 1e-15
        );

        let s = FRAC_1_SQRT_2;
        let bell = Ket::new([s, 0.0, 0.0, s].map(|x| C64::new(x, 0.0)))
            .unwrap()
            .projector();
        let red = partial_trace(&bell, Subsystem::S);
        assert!(red.matrix().max_abs_diff(&Mat2::identity().scale_re(0.5)) < 1e-15);
        assert!((red.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation_errors() {
        assert!(matches!(
            DensityMatrix::from_populations([0.6, 0.6]),
            Err(Error::NotUnitTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::from_populations([1.1, -0.1]),
            Err(Error::NotPositive { .. })
        ));
        let skew = Mat2::from_real([[0.5, 0.1], [0.0, 0.5]]);
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(Error::NotHermitian { .. })
        ));
        // Round-off negativity inside the tolerance is accepted.
        assert!(DensityMatrix::from_populations([1.0 + 5e-10, -5e-10]).is_ok());
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        assert!(matches!(
            Hermitian::new(pauli::sigma_plus()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn ket_orthogonal_is_antipodal() {
        let k = Ket::bloch(0.9, 2.1);
        let o = k.orthogonal();
        let overlap: C64 = k
            .amplitudes()
            .iter()
            .zip(o.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(overlap.norm() < 1e-15);
        assert!(Ket::new([C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn propagator_examples() {
        let h = Hermitian::sigma_z();
        assert!(h.propagator(0.0).max_abs_diff(&Mat2::identity()) < 1e-15);
        let u = h.propagator(core::f64::consts::FRAC_PI_2);
        assert!((u[(0, 0)] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-15);
        let g = Hermitian::new(Mat4::from_fn(|i, j| {
            C64::new(
                (i + j) as f64,
                if i < j {
                    0.3
                } else if i > j {
                    -0.3
                } else {
                    0.0
                },
            )
        }))
        .unwrap();
        let u = g.propagator(2.7);
        assert!((u * u.adjoint()).max_abs_diff(&Mat4::identity()) < 1e-13);
    }
}
