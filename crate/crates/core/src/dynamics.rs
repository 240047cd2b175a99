//! Time evolution for the three kinds of stroke: GKSL propagation of the
//! refrigerant–auxiliary pair, unitary commuting ramps of the refrigerant,
//! and the ideal Gibbs reset.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::qmat::{gibbs_state, hermitian_eig, DensityMatrix, Hermitian, Mat16, Mat2, Mat4, C64};
use crate::reservoir::GKSLGenerator;
use crate::{Error, Result};

/// Largest internal integration step, in seconds.
pub const MAX_STEP: f64 = 1e-4;
/// Eigenvalues below `-POSITIVITY_ABORT` abort a propagation.
pub const POSITIVITY_ABORT: f64 = 1e-7;
/// Allowed trace drift per internal step.
pub const TRACE_DRIFT_PER_STEP: f64 = 1e-10;

/// Sampled states, `times` strictly increasing from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix<4>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix<4> {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }
}

/// Exact one-step maps of a GKSL generator for a fixed sampling grid.
///
/// The sample map is `exp(L h)^n` with `h = sample_step / n ≤ MAX_STEP`, so
/// long runs reuse a single 16×16 exponential.
#[derive(Clone, Debug)]
pub struct Propagator {
    liouvillian: Mat16,
    sample_step: f64,
    substeps: usize,
    sample_map: Mat16,
}

impl Propagator {
    pub fn new(gen: &GKSLGenerator, sample_step: f64) -> Result<Self> {
        if !(sample_step > 0.0 && sample_step.is_finite()) {
            return Err(Error::param("sample_step", "must be positive and finite"));
        }
        let substeps = (sample_step / MAX_STEP).ceil().max(1.0) as usize;
        let h = sample_step / substeps as f64;
        let step_map = gen.liouvillian.scale_re(h).exp();
        let mut sample_map = step_map;
        for _ in 1..substeps {
            sample_map = step_map * sample_map;
        }
        Ok(Self {
            liouvillian: gen.liouvillian,
            sample_step,
            substeps,
            sample_map,
        })
    }

    pub fn sample_step(&self) -> f64 {
        self.sample_step
    }

    /// Internal step count per sample.
    pub fn substeps(&self) -> usize {
        self.substeps
    }

    /// Samples at `k·sample_step` plus a final sample at exactly `duration`.
    pub fn run(&self, rho0: &DensityMatrix<4>, duration: f64) -> Result<Trajectory> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::param("duration", "must be non-negative and finite"));
        }
        let full = (duration / self.sample_step * (1.0 + 1e-12)).floor() as usize;
        let remainder = duration - full as f64 * self.sample_step;
        let tail = remainder > 1e-12 * self.sample_step;

        let mut times = Vec::with_capacity(full + 2);
        let mut states = Vec::with_capacity(full + 2);
        times.push(0.0);
        states.push(*rho0);

        let mut v: [C64; 16] = rho0.matrix().vec_into();
        let mut steps = 0usize;
        for k in 1..=full {
            v = self.sample_map.mul_vec(&v);
            steps += self.substeps;
            let t = if !tail && k == full {
                duration
            } else {
                k as f64 * self.sample_step
            };
            times.push(t);
            states.push(checked_state(&v, t, steps)?);
        }
        if tail {
            let n = (remainder / MAX_STEP).ceil().max(1.0) as usize;
            let step = self.liouvillian.scale_re(remainder / n as f64).exp();
            for _ in 0..n {
                v = step.mul_vec(&v);
            }
            steps += n;
            times.push(duration);
            states.push(checked_state(&v, duration, steps)?);
        }
        Ok(Trajectory { times, states })
    }

    /// Final state only.
    pub fn evolve(&self, rho0: &DensityMatrix<4>, duration: f64) -> Result<DensityMatrix<4>> {
        Ok(*self.run(rho0, duration)?.last())
    }
}

fn checked_state(v: &[C64; 16], time: f64, steps: usize) -> Result<DensityMatrix<4>> {
    let m = Mat4::unvec(v);
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_DRIFT_PER_STEP * steps.max(1) as f64 {
        return Err(Error::TraceDrift { time, trace });
    }
    let min_eigenvalue = hermitian_eig(&m).values[0];
    if min_eigenvalue < -POSITIVITY_ABORT {
        return Err(Error::PositivityLost {
            time,
            min_eigenvalue,
        });
    }
    let m = Mat4::from_fn(|i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    Ok(DensityMatrix::trusted(m.scale_re(1.0 / trace)))
}

/// Propagates `rho0` under `gen` for `duration` seconds, sampling every
/// `sample_step` seconds and at the end.
pub fn propagate_gksl(
    rho0: &DensityMatrix<4>,
    gen: &GKSLGenerator,
    duration: f64,
    sample_step: f64,
) -> Result<Trajectory> {
    Propagator::new(gen, sample_step)?.run(rho0, duration)
}

/// Linear frequency ramp `ω(t) = ω_start + (ω_end − ω_start) t/τ` of the
/// refrigerant Hamiltonian `ω(t) σ_z / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RampSpec {
    pub omega_start: f64,
    pub omega_end: f64,
    pub duration: f64,
}

impl RampSpec {
    pub fn new(omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        if !(omega_start > 0.0 && omega_start.is_finite()) {
            return Err(Error::param("omega_start", "must be positive and finite"));
        }
        if !(omega_end > 0.0 && omega_end.is_finite()) {
            return Err(Error::param("omega_end", "must be positive and finite"));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::param("duration", "must be positive and finite"));
        }
        Ok(Self {
            omega_start,
            omega_end,
            duration,
        })
    }

    pub fn omega_at(&self, t: f64) -> f64 {
        self.omega_start + (self.omega_end - self.omega_start) * (t / self.duration)
    }

    /// `Φ = ∫ ω(s) ds = τ (ω_start + ω_end) / 2`.
    pub fn phase(&self) -> f64 {
        0.5 * self.duration * (self.omega_start + self.omega_end)
    }
}

/// `exp(−i σ_z Φ/2)`. The ramp Hamiltonians commute at all times, so no
/// time ordering is needed.
pub fn ramp_propagator(ramp: &RampSpec) -> Mat2 {
    let half = 0.5 * ramp.phase();
    Mat2::diag([C64::new(0.0, -half).exp(), C64::new(0.0, half).exp()])
}

/// Complete thermalisation: the Gibbs state of `h` at `beta`.
pub fn thermal_reset<const N: usize>(h: &Hermitian<N>, beta: f64) -> Result<DensityMatrix<N>> {
    if !(beta > 0.0) {
        return Err(Error::InvalidBeta(beta));
    }
    gibbs_state(h, beta)
}
