use super::state::partial_trace_matrix;
use super::{hermitian_eig, tol, CMat, DensityMatrix, Hermitian, Subsystem};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// `½ Tr|ρ − σ|`.
pub fn trace_distance<const N: usize>(rho: &DensityMatrix<N>, sigma: &DensityMatrix<N>) -> f64 {
    let diff = *rho.matrix() - *sigma.matrix();
    0.5 * hermitian_eig(&diff)
        .values
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `−Tr[ρ ln ρ]` in nats.
pub fn von_neumann_entropy<const N: usize>(rho: &DensityMatrix<N>) -> f64 {
    -rho.spectrum().iter().map(|&p| xlnx(p)).sum::<f64>()
}

/// Quantum relative entropy `Tr[ρ (ln ρ − ln σ)]`.
///
/// Fails when `ρ` has weight outside the support of `σ`.
pub fn relative_entropy<const N: usize>(
    rho: &DensityMatrix<N>,
    sigma: &DensityMatrix<N>,
) -> Result<f64> {
    const SUPPORT_WEIGHT: f64 = 1e-12;

    let neg_entropy: f64 = rho.spectrum().iter().map(|&p| xlnx(p)).sum();
    let es = sigma.eig();
    let mut cross = 0.0;
    for k in 0..N {
        let s = es.values[k];
        let v = es.vector(k);
        let mv = rho.matrix().mul_vec(&v);
        let weight: f64 = v
            .iter()
            .zip(&mv)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>();
        if s <= tol::POSITIVITY.min(f64::MIN_POSITIVE.sqrt()) {
            if weight > SUPPORT_WEIGHT {
                return Err(Error::DivergentRelativeEntropy { weight });
            }
            continue;
        }
        cross += weight * s.ln();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `e^{−βH} / Tr e^{−βH}`.
///
/// `β = 0` gives the maximally mixed state and `β = +∞` the (uniformly
/// weighted) ground space projector.
pub fn gibbs_state<const N: usize>(h: &Hermitian<N>, beta: f64) -> Result<DensityMatrix<N>> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    let e = h.eig();
    let ground = e.values[0];
    let weights = if beta.is_infinite() {
        let scale = e.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        e.values.map(|x| {
            if x - ground <= 1e-12 * scale {
                1.0
            } else {
                0.0
            }
        })
    } else {
        e.values.map(|x| (-beta * (x - ground)).exp())
    };
    let z: f64 = weights.iter().sum();
    let p = weights.map(|w| w / z);
    let v = &e.vectors;
    Ok(DensityMatrix::trusted(CMat::from_fn(|i, j| {
        (0..N).map(|k| v[(i, k)] * v[(j, k)].conj() * p[k]).sum()
    })))
}

/// `S(ρ_S) + S(ρ_A) − S(ρ_SA)` in nats.
pub fn mutual_information(rho: &DensityMatrix<4>) -> f64 {
    let rs = DensityMatrix::trusted(partial_trace_matrix(rho.matrix(), Subsystem::S));
    let ra = DensityMatrix::trusted(partial_trace_matrix(rho.matrix(), Subsystem::A));
    (von_neumann_entropy(&rs) + von_neumann_entropy(&ra) - von_neumann_entropy(rho)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tensor_product, Ket, Mat2, Mat4, C64};
    use core::f64::consts::{FRAC_1_SQRT_2, LN_2};
    use proptest::prelude::*;

    fn pure0() -> DensityMatrix<2> {
        Ket::basis(0).projector()
    }

    fn pure1() -> DensityMatrix<2> {
        Ket::basis(1).projector()
    }

    #[test]
    fn trace_distance_examples() {
        assert!((trace_distance(&pure0(), &pure1()) - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::<2>::maximally_mixed();
        assert_eq!(trace_distance(&mixed, &mixed), 0.0);
        assert!((trace_distance(&pure0(), &mixed) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&Ket::bloch(0.3, 1.0).projector()).abs() < 1e-14);
        assert!((von_neumann_entropy(&DensityMatrix::<2>::maximally_mixed()) - LN_2).abs() < 1e-15);
        assert!(
            (von_neumann_entropy(&DensityMatrix::<4>::maximally_mixed()) - 2.0 * LN_2).abs()
                < 1e-15
        );
    }

    #[test]
    fn relative_entropy_examples() {
        let r = DensityMatrix::from_populations([0.6, 0.4]).unwrap();
        assert!(relative_entropy(&r, &r).unwrap().abs() < 1e-15);
        let mixed = DensityMatrix::<2>::maximally_mixed();
        assert!((relative_entropy(&pure0(), &mixed).unwrap() - LN_2).abs() < 1e-15);
        // Classical KL divergence 0.6 ln 1.2 + 0.4 ln 0.8.
        let kl = 0.6 * 1.2f64.ln() + 0.4 * 0.8f64.ln();
        assert!((kl - 0.020_135_513).abs() < 1e-9);
        assert!((relative_entropy(&r, &mixed).unwrap() - kl).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_support_violation() {
        assert!(matches!(
            relative_entropy(&pure1(), &pure0()),
            Err(Error::DivergentRelativeEntropy { .. })
        ));
        // Support inclusion in the other direction is fine.
        assert!(relative_entropy(&pure0(), &pure0()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gibbs_examples() {
        let h = Hermitian::qubit(3.0);
        let inf_t = gibbs_state(&h, 0.0).unwrap();
        assert!(inf_t.matrix().max_abs_diff(&Mat2::identity().scale_re(0.5)) < 1e-15);
        // βω = 2 ln 2: excited/ground = 1/4.
        let g = gibbs_state(&h, 2.0 * LN_2 / 3.0).unwrap();
        assert!((g.population(0) - 0.2).abs() < 1e-15);
        assert!((g.population(1) - 0.8).abs() < 1e-15);
        assert!(g.matrix().commutator(h.matrix()).max_abs() < 1e-15);
        let zero_t = gibbs_state(&h, f64::INFINITY).unwrap();
        assert_eq!(zero_t.population(1), 1.0);
        assert!(matches!(gibbs_state(&h, -1.0), Err(Error::InvalidBeta(_))));
        assert!(matches!(
            gibbs_state(&h, f64::NAN),
            Err(Error::InvalidBeta(_))
        ));
    }

    #[test]
    fn mutual_information_examples() {
        let prod = tensor_product(
            &DensityMatrix::from_populations([0.3, 0.7]).unwrap(),
            &DensityMatrix::from_populations([0.9, 0.1]).unwrap(),
        );
        assert!(mutual_information(&prod) < 1e-14);
        let s = FRAC_1_SQRT_2;
        let bell = Ket::new([s, 0.0, 0.0, s].map(|x| C64::new(x, 0.0)))
            .unwrap()
            .projector();
        assert!((mutual_information(&bell) - 2.0 * LN_2).abs() < 1e-14);
    }

    fn arb_state4() -> impl Strategy<Value = DensityMatrix<4>> {
        prop::array::uniform32(-1.0f64..1.0).prop_map(|x| {
            let g = Mat4::from_fn(|i, j| C64::new(x[4 * i + j], x[16 + 4 * i + j]));
            let m = g * g.adjoint() + Mat4::identity().scale_re(1e-3);
            let t = m.trace().re;
            DensityMatrix::new(m.scale_re(1.0 / t)).unwrap()
        })
    }

    fn arb_state2() -> impl Strategy<Value = DensityMatrix<2>> {
        prop::array::uniform8(-1.0f64..1.0).prop_map(|x| {
            let g = Mat2::from_fn(|i, j| C64::new(x[2 * i + j], x[4 + 2 * i + j]));
            let m = g * g.adjoint();
            let t = m.trace().re.max(1e-12);
            DensityMatrix::new(m.scale_re(1.0 / t))
                .unwrap_or_else(|_| DensityMatrix::maximally_mixed())
        })
    }

    fn arb_hermitian4() -> impl Strategy<Value = Hermitian<4>> {
        prop::array::uniform32(-5.0f64..5.0).prop_map(|x| {
            let g = Mat4::from_fn(|i, j| C64::new(x[4 * i + j], x[16 + 4 * i + j]));
            Hermitian::hermitize(g + g.adjoint())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn trace_distance_triangle(a in arb_state4(), b in arb_state4(), c in arb_state4()) {
            let ab = trace_distance(&a, &b);
            let bc = trace_distance(&b, &c);
            let ac = trace_distance(&a, &c);
            prop_assert!(ac <= ab + bc + 1e-10);
            prop_assert!((ab - trace_distance(&b, &a)).abs() < 1e-14);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        }
    }

    proptest! {
        #[test]
        fn klein_inequality(a in arb_state4(), b in arb_state4()) {
            prop_assert!(relative_entropy(&a, &b).unwrap() >= 0.0);
        }

        #[test]
        fn gibbs_populations_monotone(h in arb_hermitian4(), beta in 0.01f64..3.0) {
            let g = gibbs_state(&h, beta).unwrap();
            let e = h.eig();
            let pops: [f64; 4] = core::array::from_fn(|k| {
                let v = e.vector(k);
                let mv = g.matrix().mul_vec(&v);
                v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
            });
            for w in pops.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12);
            }
        }

        #[test]
        fn partial_trace_recovers_factors(a in arb_state2(), b in arb_state2()) {
            let p = tensor_product(&a, &b);
            prop_assert!(crate::qmat::partial_trace(&p, Subsystem::S).matrix().max_abs_diff(a.matrix()) < 1e-12);
            prop_assert!(crate::qmat::partial_trace(&p, Subsystem::A).matrix().max_abs_diff(b.matrix()) < 1e-12);
        }

        #[test]
        fn eig_reconstructs_random_hermitian(h in arb_hermitian4()) {
            let e = h.eig();
            let back: CMat<4> = e.map(|x| C64::new(x, 0.0));
            prop_assert!(back.max_abs_diff(h.matrix()) < 1e-10);
            let vv = e.vectors.adjoint() * e.vectors;
            prop_assert!(vv.max_abs_diff(&Mat4::identity()) < 1e-10);
        }
    }
}
