//! Dense complex linear algebra and quantum-information primitives for
//! qubits (dimension 2), qubit pairs (dimension 4) and their superoperators
//! (dimension 16).

mod eig;
mod info;
mod matrix;
pub mod pauli;
mod state;

pub use eig::{hermitian_eig, Eigen};
pub use info::{
    gibbs_state, mutual_information, relative_entropy, trace_distance, von_neumann_entropy,
};
pub use matrix::{kron, CMat, Mat16, Mat2, Mat4};
pub use state::{
    partial_trace, partial_trace_matrix, tensor_product, DensityMatrix, Hermitian, Ket, Subsystem,
};

pub use num_complex::Complex64 as C64;

/// Tolerances shared by the validated types.
pub mod tol {
    /// Allowed Hermiticity defect of a density matrix.
    pub const DENSITY_HERMITIAN: f64 = 1e-10;
    /// Allowed trace defect of a density matrix.
    pub const DENSITY_TRACE: f64 = 1e-10;
    /// Eigenvalues in `[-POSITIVITY, 0)` are round-off and clamped to zero.
    pub const POSITIVITY: f64 = 1e-9;
    /// Relative Hermiticity defect allowed for Hamiltonians.
    pub const OPERATOR_HERMITIAN: f64 = 1e-12;
}
