//! Trace-distance (BLP) witness of non-Markovian refrigerant dynamics.
//!
//! Two refrigerant states are each paired with the same auxiliary state,
//! propagated under the reservoir generator, and compared through their
//! reduced refrigerant states. Any increase of the trace distance is
//! information flowing back from the reservoir.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{Propagator, MAX_STEP};
use crate::khz_to_rad_per_s;
use crate::qmat::{
    gibbs_state, partial_trace, tensor_product, trace_distance, DensityMatrix, Hermitian, Ket,
    Subsystem,
};
use crate::reservoir::{build_generator, ReservoirParams};
use crate::{Error, Result};

pub const DEFAULT_T_MAX: f64 = 0.3;
pub const DEFAULT_GRID_STEP: f64 = MAX_STEP;
/// Derivatives at or below this many s⁻¹ count as non-positive.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessConfig {
    pub params: ReservoirParams,
    pub t_max: f64,
    pub grid_step: f64,
    pub pair: (Ket<2>, Ket<2>),
    /// Auxiliary state shared by both runs.
    pub aux: DensityMatrix<2>,
    pub tolerance: f64,
}

impl WitnessConfig {
    /// Resonant 2.2 kHz qubits, `κ = 20 s⁻¹`, bath at `T = 2ω_A`, the
    /// `(|0⟩, |1⟩)` pair and an auxiliary qubit thermal at the bath
    /// temperature.
    pub fn standard(j_over_kappa: f64) -> Result<Self> {
        let w = khz_to_rad_per_s(2.2);
        let params = ReservoirParams::from_ratio(w, w, j_over_kappa, 20.0, 0.5 / w)?;
        Self::new(params, DEFAULT_T_MAX, DEFAULT_GRID_STEP)
    }

    pub fn new(params: ReservoirParams, t_max: f64, grid_step: f64) -> Result<Self> {
        if !(grid_step > 0.0 && grid_step.is_finite()) {
            return Err(Error::param("grid_step", "must be positive and finite"));
        }
        if !(t_max >= 2.0 * grid_step && t_max.is_finite()) {
            return Err(Error::param("t_max", "must span at least two grid steps"));
        }
        Ok(Self {
            params,
            t_max,
            grid_step,
            pair: (Ket::basis(0), Ket::basis(1)),
            aux: gibbs_state(&Hermitian::qubit(params.omega_a), params.beta_c)?,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn with_pair(self, pair: (Ket<2>, Ket<2>)) -> Self {
        Self { pair, ..self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub times: Vec<f64>,
    pub d: Vec<f64>,
    /// Central differences inside the grid, second-order one-sided
    /// differences at the two ends.
    pub ddt: Vec<f64>,
    /// `max(0, max dD/dt)`.
    pub max_positive_derivative: f64,
    pub tolerance: f64,
    pub is_non_markovian: bool,
}

/// Samples `D(t)` between the reduced refrigerant states and its derivative.
pub fn trace_distance_trajectory(cfg: &WitnessConfig) -> Result<WitnessReport> {
    let gen = build_generator(&cfg.params)?;
    let prop = Propagator::new(&gen, cfg.grid_step)?;
    let run = |k: &Ket<2>| prop.run(&tensor_product(&k.projector(), &cfg.aux), cfg.t_max);
    let (a, b) = (run(&cfg.pair.0)?, run(&cfg.pair.1)?);
    let d: Vec<f64> = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| {
            trace_distance(
                &partial_trace(x, Subsystem::S),
                &partial_trace(y, Subsystem::S),
            )
        })
        .collect();
    Ok(report(a.times, d, cfg.tolerance))
}

fn report(times: Vec<f64>, d: Vec<f64>, tolerance: f64) -> WitnessReport {
    let n = d.len();
    let ddt: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                let h = times[1] - times[0];
                (-3.0 * d[0] + 4.0 * d[1] - d[2]) / (2.0 * h)
            } else if i == n - 1 {
                let h = times[n - 1] - times[n - 2];
                (3.0 * d[n - 1] - 4.0 * d[n - 2] + d[n - 3]) / (2.0 * h)
            } else {
                (d[i + 1] - d[i - 1]) / (times[i + 1] - times[i - 1])
            }
        })
        .collect();
    let max_positive_derivative = ddt.iter().fold(0.0f64, |m, &x| m.max(x));
    WitnessReport {
        times,
        d,
        ddt,
        max_positive_derivative,
        tolerance,
        is_non_markovian: max_positive_derivative > tolerance,
    }
}

/// Trapezoid integral of `dD/dt` over the samples where it exceeds the
/// report's tolerance (zero elsewhere), so the result is zero exactly when
/// the report is Markovian.
pub fn blp_accumulator(report: &WitnessReport) -> f64 {
    let f = |x: f64| if x > report.tolerance { x } else { 0.0 };
    report
        .times
        .windows(2)
        .zip(report.ddt.windows(2))
        .map(|(t, g)| 0.5 * (f(g[0]) + f(g[1])) * (t[1] - t[0]))
        .sum()
}

/// `n` pure states spread evenly (by area) over the upper Bloch hemisphere,
/// each paired with its antipode. The first state is `|0⟩`.
pub fn hemisphere_pairs(n: usize) -> Vec<(Ket<2>, Ket<2>)> {
    let golden = core::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - k as f64 / n as f64;
            let k = Ket::bloch(z.acos(), golden * k as f64);
            (k, k.orthogonal())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairScanReport {
    /// Max positive derivative per pair, in grid order.
    pub per_pair: Vec<f64>,
    pub max_positive_derivative: f64,
    pub worst_pair: usize,
    pub is_non_markovian: bool,
}

impl PairScanReport {
    pub fn from_maxima(per_pair: Vec<f64>, tolerance: f64) -> Self {
        let (worst_pair, max_positive_derivative) =
            per_pair
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, 0.0f64),
                    |best, (i, x)| if x > best.1 { (i, x) } else { best },
                );
        Self {
            per_pair,
            max_positive_derivative,
            worst_pair,
            is_non_markovian: max_positive_derivative > tolerance,
        }
    }
}

/// Runs the witness over [`hemisphere_pairs`], sequentially.
pub fn pair_scan(base: &WitnessConfig, n_pairs: usize) -> Result<PairScanReport> {
    if n_pairs == 0 {
        return Err(Error::param("n_pairs", "must be at least 1"));
    }
    let per_pair = hemisphere_pairs(n_pairs)
        .into_iter()
        .map(|p| Ok(trace_distance_trajectory(&base.with_pair(p))?.max_positive_derivative))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairScanReport::from_maxima(per_pair, base.tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn short(jk: f64) -> WitnessConfig {
        WitnessConfig {
            t_max: 0.1,
            ..WitnessConfig::standard(jk).unwrap()
        }
    }

    #[test]
    fn starts_orthogonal_and_stays_bounded() {
        for jk in [0.5, 40.0] {
            let r = trace_distance_trajectory(&short(jk)).unwrap();
            assert!((r.d[0] - 1.0).abs() < 1e-15);
            assert!(r.d.iter().all(|&d| (0.0..=1.0 + 1e-12).contains(&d)));
            assert_eq!(r.d.len(), r.times.len());
            assert_eq!(r.ddt.len(), r.times.len());
        }
    }

    #[test]
    fn strong_coupling_is_non_markovian() {
        let r10 = trace_distance_trajectory(&short(10.0)).unwrap();
        let r40 = trace_distance_trajectory(&short(40.0)).unwrap();
        assert!(r10.is_non_markovian && r40.is_non_markovian);
        assert!(blp_accumulator(&r40) > blp_accumulator(&r10));
    }

    #[test]
    fn derivative_is_bounded_by_the_generator() {
        // Only the coupling and the dissipator change the reduced distance:
        // |dD/dt| ≤ 2J + O(κ).
        for jk in [0.5, 10.0, 40.0] {
            let cfg = short(jk);
            let r = trace_distance_trajectory(&cfg).unwrap();
            let bound = 2.0 * cfg.params.j + 10.0 * cfg.params.kappa;
            assert!(r.ddt.iter().all(|x| x.abs() <= bound), "J/κ = {jk}");
        }
    }

    #[test]
    fn swapping_the_pair_changes_nothing() {
        let cfg = short(10.0);
        let (a, b) = cfg.pair;
        let r1 = trace_distance_trajectory(&cfg).unwrap();
        let r2 = trace_distance_trajectory(&cfg.with_pair((b, a))).unwrap();
        assert_eq!(r1.d, r2.d);
    }

    #[test]
    fn result_independent_of_aux_preparation() {
        let cfg = short(40.0);
        let base = trace_distance_trajectory(&cfg).unwrap();
        for aux in [
            Ket::basis(0).projector(),
            Ket::basis(1).projector(),
            DensityMatrix::maximally_mixed(),
        ] {
            let r = trace_distance_trajectory(&WitnessConfig { aux, ..cfg }).unwrap();
            let diff = r
                .ddt
                .iter()
                .zip(&base.ddt)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-8, "aux preparation changed dD/dt by {diff:e}");
        }
    }

    #[test]
    fn accumulator_examples() {
        let times: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        // Decreasing: Markovian, zero accumulator.
        let down = report(
            times.clone(),
            times.iter().map(|t| 1.0 - 0.5 * t).collect(),
            1e-6,
        );
        assert!(!down.is_non_markovian);
        assert_eq!(blp_accumulator(&down), 0.0);
        // Constant slope s over the whole window w: s·w.
        let up = report(
            times.clone(),
            times.iter().map(|t| 0.2 + 0.3 * t).collect(),
            1e-6,
        );
        assert!(up.is_non_markovian);
        assert!((blp_accumulator(&up) - 0.3 * 1.0).abs() < 1e-12);
        // Increases below the tolerance do not count.
        let flat = report(
            times.clone(),
            times.iter().map(|t| 0.5 + 1e-7 * t).collect(),
            1e-6,
        );
        assert!(!flat.is_non_markovian);
        assert_eq!(blp_accumulator(&flat), 0.0);
    }

    #[test]
    fn hemisphere_grid() {
        let pairs = hemisphere_pairs(1);
        assert_eq!(pairs[0].0, Ket::basis(0));
        assert!((pairs[0].1.amplitudes()[1].re - 1.0).abs() < 1e-15);
        for (a, b) in hemisphere_pairs(50) {
            let z = a.amplitudes()[0].norm_sqr() - a.amplitudes()[1].norm_sqr();
            assert!(z > 0.0);
            let overlap: crate::qmat::C64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x.conj() * y)
                .sum();
            assert!(overlap.norm() < 1e-15);
        }
    }

    #[test]
    fn single_pair_scan_is_the_basis_pair() {
        let cfg = short(10.0);
        let scan = pair_scan(&cfg, 1).unwrap();
        let r = trace_distance_trajectory(&cfg).unwrap();
        assert_eq!(scan.per_pair, vec![r.max_positive_derivative]);
        assert_eq!(scan.is_non_markovian, r.is_non_markovian);
        assert!(pair_scan(&cfg, 0).is_err());
    }

    #[test]
    fn config_validation() {
        let p = WitnessConfig::standard(1.0).unwrap().params;
        assert!(WitnessConfig::new(p, 0.3, 0.0).is_err());
        assert!(WitnessConfig::new(p, 1e-4, 1e-4).is_err());
    }
}
