//! Single-qubit operators in the `{|0⟩, |1⟩}` basis with `σ_z|0⟩ = +|0⟩`,
//! so `|0⟩` is the excited state of `(ω/2) σ_z`.

use super::{Mat2, C64};

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn sigma_x() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y() -> Mat2 {
    let i = C64::new(0.0, 1.0);
    super::CMat([[C64::new(0.0, 0.0), -i], [i, C64::new(0.0, 0.0)]])
}

pub fn sigma_z() -> Mat2 {
    Mat2::real_diag([1.0, -1.0])
}

/// `|0⟩⟨1|`: raises `|1⟩` to `|0⟩`.
pub fn sigma_plus() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [0.0, 0.0]])
}

/// `|1⟩⟨0|`.
pub fn sigma_minus() -> Mat2 {
    Mat2::from_real([[0.0, 0.0], [1.0, 0.0]])
}
