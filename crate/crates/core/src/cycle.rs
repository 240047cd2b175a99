//! The four-stroke Otto refrigerator.
//!
//! 1. compression ramp `ω0 → ωτ1` of the isolated refrigerant;
//! 2. contact with the engineered cold reservoir for `Δτ_c`;
//! 3. expansion ramp `ωτ1 → ω0`;
//! 4. complete thermalisation with the hot bath.
//!
//! Energies are in rad/s. Signs follow "absorbed by the refrigerant is
//! positive", so a working refrigerator has `Q_c > 0`, `W_net > 0` and
//! `Q_h < 0`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{ramp_propagator, thermal_reset, Propagator, RampSpec, MAX_STEP};
use crate::qmat::{
    gibbs_state, mutual_information, partial_trace, relative_entropy, tensor_product,
    trace_distance, DensityMatrix, Hermitian, Mat2, Subsystem,
};
use crate::reservoir::{build_generator, interaction_hamiltonian, GKSLGenerator, ReservoirParams};
use crate::{khz_to_rad_per_s, Error, Result};

/// Default `β_h ω0`.
pub const DEFAULT_BETA_H_OMEGA0: f64 = 2.5;
/// Default `β_c ωτ1`. The cold bath must be hotter than the refrigerant
/// leaving the compression stroke (`β_c ωτ1 < β_h ω0`) for heat to flow in.
pub const DEFAULT_BETA_C_OMEGA_TAU1: f64 = 2.0;
pub const DEFAULT_OMEGA0_KHZ: f64 = 3.6;
pub const DEFAULT_OMEGA_TAU1_KHZ: f64 = 2.2;
pub const DEFAULT_TAU1: f64 = 7.5e-4;
pub const DEFAULT_DELTA_TAU_H: f64 = 0.25;
pub const DEFAULT_KAPPA: f64 = 20.0;
pub const DEFAULT_GAMMA_H: f64 = 20.0;

/// How the auxiliary qubit is prepared at the start of stroke 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AuxInit {
    /// Gibbs state of `(ω_A/2) σ_z` at `β_c`, every cycle.
    #[default]
    FreshGibbs,
    /// The auxiliary state left by the previous cycle's stroke 2.
    CarryOver,
}

/// Cycle parameters. Frequencies in rad/s, times in s, inverse
/// temperatures in s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleConfig {
    pub omega0: f64,
    pub omega_tau1: f64,
    pub tau1: f64,
    pub delta_tau_c: f64,
    pub delta_tau_h: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub j_over_kappa: f64,
    pub kappa: f64,
    pub omega_a: f64,
    /// Hot-bath rate; unused by the ideal reset, kept for reporting.
    pub gamma_h: f64,
    pub aux_init: AuxInit,
    /// Sampling step of the stroke-2 propagation.
    pub sample_step: f64,
}

impl CycleConfig {
    /// The standard operating point: 3.6 → 2.2 kHz ramps of 0.75 ms, an
    /// auxiliary qubit resonant with `ωτ1`, `κ = 20 s⁻¹`.
    pub fn standard(j_over_kappa: f64, delta_tau_c: f64) -> Self {
        let omega0 = khz_to_rad_per_s(DEFAULT_OMEGA0_KHZ);
        let omega_tau1 = khz_to_rad_per_s(DEFAULT_OMEGA_TAU1_KHZ);
        Self {
            omega0,
            omega_tau1,
            tau1: DEFAULT_TAU1,
            delta_tau_c,
            delta_tau_h: DEFAULT_DELTA_TAU_H,
            beta_h: DEFAULT_BETA_H_OMEGA0 / omega0,
            beta_c: DEFAULT_BETA_C_OMEGA_TAU1 / omega_tau1,
            j_over_kappa,
            kappa: DEFAULT_KAPPA,
            omega_a: omega_tau1,
            gamma_h: DEFAULT_GAMMA_H,
            aux_init: AuxInit::FreshGibbs,
            sample_step: MAX_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        if !(self.omega_tau1 > 0.0 && finite(self.omega_tau1)) {
            return Err(Error::param("omega_tau1", "must be positive and finite"));
        }
        if !(self.omega0 > self.omega_tau1 && finite(self.omega0)) {
            return Err(Error::param("omega0", "must exceed omega_tau1"));
        }
        for (name, t) in [
            ("tau1", self.tau1),
            ("delta_tau_c", self.delta_tau_c),
            ("delta_tau_h", self.delta_tau_h),
        ] {
            if !(t >= 0.0 && finite(t)) {
                return Err(Error::param(name, "must be non-negative and finite"));
            }
        }
        if !(self.beta_h > 0.0 && finite(self.beta_h)) {
            return Err(Error::InvalidBeta(self.beta_h));
        }
        if !(self.beta_c > self.beta_h) {
            return Err(Error::param(
                "beta_c",
                "cold bath must be colder than the hot bath",
            ));
        }
        if !(self.sample_step > 0.0 && finite(self.sample_step)) {
            return Err(Error::param("sample_step", "must be positive and finite"));
        }
        self.reservoir().map(|_| ())
    }

    pub fn reservoir(&self) -> Result<ReservoirParams> {
        ReservoirParams::from_ratio(
            self.omega_tau1,
            self.omega_a,
            self.j_over_kappa,
            self.kappa,
            self.beta_c,
        )
    }

    /// `τ_cycle = 2τ1 + Δτ_c + Δτ_h`.
    pub fn tau_cycle(&self) -> f64 {
        2.0 * self.tau1 + self.delta_tau_c + self.delta_tau_h
    }

    /// `ωτ1/(ω0 − ωτ1)`.
    pub fn cop_otto(&self) -> f64 {
        self.omega_tau1 / (self.omega0 - self.omega_tau1)
    }

    /// `1/(β_c/β_h − 1)`.
    pub fn cop_carnot(&self) -> f64 {
        1.0 / (self.beta_c / self.beta_h - 1.0)
    }

    pub fn h0(&self) -> Hermitian<2> {
        Hermitian::qubit(self.omega0)
    }

    pub fn h_tau1(&self) -> Hermitian<2> {
        Hermitian::qubit(self.omega_tau1)
    }

    /// Gibbs state of the bare auxiliary qubit at `β_c`.
    pub fn aux_gibbs(&self) -> Result<DensityMatrix<2>> {
        gibbs_state(&Hermitian::qubit(self.omega_a), self.beta_c)
    }

    fn ramp(&self, from: f64, to: f64) -> Result<Mat2> {
        if self.tau1 == 0.0 {
            return Ok(Mat2::identity());
        }
        Ok(ramp_propagator(&RampSpec::new(from, to, self.tau1)?))
    }
}

/// Internal energies, exchanges and snapshots of one cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrokeLedger {
    pub u0: f64,
    pub u_tau1: f64,
    pub u_tau2: f64,
    pub u_tau3: f64,
    pub u_tau4: f64,
    pub w1: f64,
    pub w3: f64,
    pub w_net: f64,
    pub qc_s: f64,
    pub qh: f64,
    /// `ΔV_SA = Tr[ρ^SA_τ2 H_int] − Tr[ρ^SA_τ1 H_int]`.
    pub dv_sa: f64,
    /// Change of `Tr[ρ^SA H^SA]` over stroke 2.
    pub de_sa: f64,
    /// Change of the bare auxiliary energy over stroke 2.
    pub du_a: f64,
    pub rho: [DensityMatrix<2>; 5],
    pub rho_sa_tau1: DensityMatrix<4>,
    pub rho_sa_tau2: DensityMatrix<4>,
}

impl StrokeLedger {
    /// `−Q_c^R = Q_c^S + ΔV_SA`, the energy drawn out of the cold reservoir.
    pub fn released_by_reservoir(&self) -> f64 {
        self.qc_s + self.dv_sa
    }

    pub fn aux_tau2(&self) -> DensityMatrix<2> {
        partial_trace(&self.rho_sa_tau2, Subsystem::A)
    }
}

/// Operating-regime conditions of a refrigerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegimeFlags {
    pub qc_r_released: bool,
    pub w_net_positive: bool,
    pub qh_rejected: bool,
    pub gamma_positive: bool,
}

impl RegimeFlags {
    /// `−Q_c^R > 0`, `W_net > 0` and `Q_h < 0`.
    pub fn is_refrigerator(&self) -> bool {
        self.qc_r_released && self.w_net_positive && self.qh_rejected
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    /// `(Q_c^S + ΔV_SA)/W_net`; `None` when no net work is done.
    pub cop: Option<f64>,
    /// `1 + ΔV_SA/Q_c^S`; `None` when no heat is absorbed.
    pub gamma: Option<f64>,
    pub cooling_power: f64,
    pub injected_power: f64,
    pub cop_lag: Option<f64>,
    pub quasistatic_lag: Option<f64>,
    pub cop_otto: f64,
    pub cop_carnot: f64,
    pub flags: RegimeFlags,
}

impl Metrics {
    /// Factor by which ignoring the interaction energy inflates COP and
    /// cooling power.
    pub fn overestimation_factor(&self) -> Option<f64> {
        self.gamma.map(|g| 1.0 / g)
    }
}

/// Exchanges at or below this fraction of `ω0` count as zero.
const ZERO_ENERGY: f64 = 1e-13;

pub fn figures_of_merit(ledger: &StrokeLedger, cfg: &CycleConfig) -> Metrics {
    let zero = ZERO_ENERGY * cfg.omega0;
    let released = ledger.released_by_reservoir();
    let tau = cfg.tau_cycle();
    let cop = (ledger.w_net.abs() > zero).then(|| released / ledger.w_net);
    let gamma = (ledger.qc_s.abs() > zero).then(|| 1.0 + ledger.dv_sa / ledger.qc_s);
    let [_, rho1, rho2, rho3, _] = &ledger.rho;

    let cop_lag = (ledger.qc_s.abs() > zero)
        .then(|| -> Result<f64> {
            let g1 = gibbs_state(&cfg.h_tau1(), cfg.beta_c)?;
            let g3 = gibbs_state(&cfg.h0(), cfg.beta_h)?;
            let num = relative_entropy(rho1, &g1)? - relative_entropy(rho2, &g1)?
                + relative_entropy(rho3, &g3)?;
            Ok(num / (cfg.beta_h * ledger.qc_s))
        })
        .and_then(Result::ok);

    let quasistatic_lag = (|| -> Result<f64> {
        let r = cfg.omega0 / cfg.omega_tau1;
        let qs_h = gibbs_state(&cfg.h_tau1(), cfg.beta_h * r)?;
        let qs_c = gibbs_state(&cfg.h0(), cfg.beta_c / r)?;
        let eq_c = gibbs_state(&cfg.h_tau1(), cfg.beta_c)?;
        Ok(relative_entropy(rho1, &qs_h)?
            + cfg.beta_h * r / cfg.beta_c
                * (relative_entropy(rho3, &qs_c)? - relative_entropy(rho2, &eq_c)?))
    })()
    .ok();

    let flags = RegimeFlags {
        qc_r_released: released > 0.0,
        w_net_positive: ledger.w_net > 0.0,
        qh_rejected: ledger.qh < 0.0,
        gamma_positive: gamma.is_some_and(|g| g > 0.0),
    };
    Metrics {
        cop,
        gamma,
        cooling_power: released / tau,
        injected_power: ledger.w_net / tau,
        cop_lag,
        quasistatic_lag,
        cop_otto: cfg.cop_otto(),
        cop_carnot: cfg.cop_carnot(),
        flags,
    }
}

/// Tolerances of [`IdentityReport::breaches`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityTolerances {
    pub first_law: f64,
    pub energy_released: f64,
    pub cop_lag_form: f64,
    pub quasistatic_lag: f64,
    pub otto_form: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        Self {
            first_law: 1e-9,
            energy_released: 1e-9,
            cop_lag_form: 1e-6,
            quasistatic_lag: 1e-8,
            otto_form: 1e-6,
        }
    }
}

/// Residuals of the thermodynamic identities. `None` means the identity
/// does not apply (an undefined COP or γ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport {
    /// `|W1 + W3 + Q_c + Q_h| / |W_net|` (absolute when `W_net = 0`).
    pub first_law: f64,
    /// Relative mismatch between `ΔE_SA − ΔU_A` and `Q_c^S + ΔV_SA`.
    pub energy_released: f64,
    /// `|ε − γ ε_C/(1 + ε_C L)| / |ε|`.
    pub cop_lag_form: Option<f64>,
    /// `|𝓕|`.
    pub quasistatic_lag: Option<f64>,
    /// `|ε − γ ε_Otto| / |ε|`.
    pub otto_form: Option<f64>,
    /// `false` only if the regime flags hold while `γ ≤ 0`.
    pub gamma_necessity: bool,
}

impl IdentityReport {
    /// Names of the identities outside tolerance.
    pub fn breaches(&self, tol: &IdentityTolerances) -> Vec<&'static str> {
        let over = |x: Option<f64>, t: f64| x.is_some_and(|x| !(x <= t));
        let mut out = Vec::new();
        if !(self.first_law <= tol.first_law) {
            out.push("first_law");
        }
        if !(self.energy_released <= tol.energy_released) {
            out.push("energy_released");
        }
        if over(self.cop_lag_form, tol.cop_lag_form) {
            out.push("cop_lag_form");
        }
        if over(self.quasistatic_lag, tol.quasistatic_lag) {
            out.push("quasistatic_lag");
        }
        if over(self.otto_form, tol.otto_form) {
            out.push("otto_form");
        }
        if !self.gamma_necessity {
            out.push("gamma_necessity");
        }
        out
    }

    pub fn passes(&self, tol: &IdentityTolerances) -> bool {
        self.breaches(tol).is_empty()
    }
}

pub fn cop_identity_checks(ledger: &StrokeLedger, m: &Metrics) -> IdentityReport {
    let closure = ledger.w1 + ledger.w3 + ledger.qc_s + ledger.qh;
    let first_law = if ledger.w_net != 0.0 {
        (closure / ledger.w_net).abs()
    } else {
        closure.abs()
    };

    let released = ledger.released_by_reservoir();
    let via_pair = ledger.de_sa - ledger.du_a;
    let scale = released
        .abs()
        .max(ledger.qc_s.abs())
        .max(ledger.dv_sa.abs());
    let energy_released = if scale > 0.0 {
        (via_pair - released).abs() / scale
    } else {
        via_pair.abs()
    };

    let rel = |a: f64, b: f64| (a - b).abs() / a.abs();
    let cop_lag_form = match (m.cop, m.gamma, m.cop_lag) {
        (Some(c), Some(g), Some(l)) => Some(rel(c, g * m.cop_carnot / (1.0 + m.cop_carnot * l))),
        _ => None,
    };
    let otto_form = match (m.cop, m.gamma) {
        (Some(c), Some(g)) => Some(rel(c, g * m.cop_otto)),
        _ => None,
    };
    IdentityReport {
        first_law,
        energy_released,
        cop_lag_form,
        quasistatic_lag: m.quasistatic_lag.map(f64::abs),
        otto_form,
        gamma_necessity: !m.flags.is_refrigerator() || m.flags.gamma_positive,
    }
}

/// Everything computed for one cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleOutcome {
    /// Contact time the cycle ran with.
    pub delta_tau_c: f64,
    pub ledger: StrokeLedger,
    pub metrics: Metrics,
    pub identities: IdentityReport,
}

/// Cycle pieces that do not depend on the contact time.
struct Strokes {
    cfg: CycleConfig,
    generator: GKSLGenerator,
    rho0: DensityMatrix<2>,
    rho_tau1: DensityMatrix<2>,
    rho_sa_tau1: DensityMatrix<4>,
    expansion: Mat2,
}

impl Strokes {
    fn new(cfg: &CycleConfig, aux: &DensityMatrix<2>) -> Result<Self> {
        cfg.validate()?;
        let generator = build_generator(&cfg.reservoir()?)?;
        let rho0 = thermal_reset(&cfg.h0(), cfg.beta_h)?;
        let rho_tau1 = rho0.conjugate(&cfg.ramp(cfg.omega0, cfg.omega_tau1)?);
        Ok(Self {
            cfg: *cfg,
            generator,
            rho0,
            rho_tau1,
            rho_sa_tau1: tensor_product(&rho_tau1, aux),
            expansion: cfg.ramp(cfg.omega_tau1, cfg.omega0)?,
        })
    }

    fn propagator(&self, sample_step: f64) -> Result<Propagator> {
        Propagator::new(&self.generator, sample_step)
    }

    /// Strokes 3 and 4 and the bookkeeping, given the pair state at `τ2`.
    fn finish(&self, delta_tau_c: f64, rho_sa_tau2: DensityMatrix<4>) -> Result<CycleOutcome> {
        let cfg = CycleConfig {
            delta_tau_c,
            ..self.cfg
        };
        let (h0, h1) = (cfg.h0(), cfg.h_tau1());
        let rho_tau2 = partial_trace(&rho_sa_tau2, Subsystem::S);
        let rho_tau3 = rho_tau2.conjugate(&self.expansion);
        let rho_tau4 = thermal_reset(&h0, cfg.beta_h)?;

        let u0 = h0.expectation(&self.rho0);
        let u_tau1 = h1.expectation(&self.rho_tau1);
        let u_tau2 = h1.expectation(&rho_tau2);
        let u_tau3 = h0.expectation(&rho_tau3);
        let u_tau4 = h0.expectation(&rho_tau4);

        let h_int = interaction_hamiltonian(self.generator.params.j);
        let h_sa = &self.generator.hamiltonian;
        let h_a = Hermitian::qubit(cfg.omega_a);
        let aux1 = partial_trace(&self.rho_sa_tau1, Subsystem::A);
        let aux2 = partial_trace(&rho_sa_tau2, Subsystem::A);

        let w1 = u_tau1 - u0;
        let w3 = u_tau3 - u_tau2;
        let ledger = StrokeLedger {
            u0,
            u_tau1,
            u_tau2,
            u_tau3,
            u_tau4,
            w1,
            w3,
            w_net: w1 + w3,
            qc_s: u_tau2 - u_tau1,
            qh: u_tau4 - u_tau3,
            dv_sa: h_int.expectation(&rho_sa_tau2) - h_int.expectation(&self.rho_sa_tau1),
            de_sa: h_sa.expectation(&rho_sa_tau2) - h_sa.expectation(&self.rho_sa_tau1),
            du_a: h_a.expectation(&aux2) - h_a.expectation(&aux1),
            rho: [self.rho0, self.rho_tau1, rho_tau2, rho_tau3, rho_tau4],
            rho_sa_tau1: self.rho_sa_tau1,
            rho_sa_tau2,
        };
        let metrics = figures_of_merit(&ledger, &cfg);
        let identities = cop_identity_checks(&ledger, &metrics);
        Ok(CycleOutcome {
            delta_tau_c,
            ledger,
            metrics,
            identities,
        })
    }
}

/// One cycle with the auxiliary qubit prepared in `aux` before stroke 2.
pub fn run_cycle_with_aux(cfg: &CycleConfig, aux: &DensityMatrix<2>) -> Result<CycleOutcome> {
    let s = Strokes::new(cfg, aux)?;
    let step = cfg.sample_step.min(cfg.delta_tau_c.max(f64::MIN_POSITIVE));
    let rho_sa_tau2 = s
        .propagator(step)?
        .evolve(&s.rho_sa_tau1, cfg.delta_tau_c)?;
    s.finish(cfg.delta_tau_c, rho_sa_tau2)
}

/// One cycle starting from the Gibbs-prepared auxiliary qubit.
pub fn run_cycle(cfg: &CycleConfig) -> Result<CycleOutcome> {
    run_cycle_with_aux(cfg, &cfg.aux_gibbs()?)
}

/// Cycles for `Δτ_c = k·step`, `k = 0..count`, all read off a single
/// stroke-2 trajectory. `cfg.delta_tau_c` is ignored.
pub fn sweep_contact_times(
    cfg: &CycleConfig,
    step: f64,
    count: usize,
) -> Result<Vec<CycleOutcome>> {
    if count == 0 {
        return Err(Error::param("count", "sweep grid is empty"));
    }
    let s = Strokes::new(cfg, &cfg.aux_gibbs()?)?;
    let tr = s
        .propagator(step)?
        .run(&s.rho_sa_tau1, step * (count - 1) as f64)?;
    tr.times
        .iter()
        .zip(&tr.states)
        .map(|(&t, rho)| s.finish(t, *rho))
        .collect()
}

/// A converged sequence of carried-over cycles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCycle {
    pub outcome: CycleOutcome,
    pub iterations: usize,
    /// Trace distance between the last two `τ2` pair states.
    pub last_delta: f64,
}

/// Repeats cycles until the `τ2` pair state stops changing.
///
/// With [`AuxInit::CarryOver`] each cycle starts the auxiliary qubit in the
/// state the previous stroke 2 left it in; with [`AuxInit::FreshGibbs`]
/// every cycle is identical and this returns after one iteration.
pub fn run_to_limit_cycle(cfg: &CycleConfig, max_iters: usize, tol: f64) -> Result<LimitCycle> {
    if max_iters == 0 {
        return Err(Error::param("max_iters", "must be at least 1"));
    }
    let mut outcome = run_cycle(cfg)?;
    if cfg.aux_init == AuxInit::FreshGibbs {
        return Ok(LimitCycle {
            outcome,
            iterations: 1,
            last_delta: 0.0,
        });
    }
    let mut last_delta = f64::INFINITY;
    for iterations in 2..=max_iters {
        let next = run_cycle_with_aux(cfg, &outcome.ledger.aux_tau2())?;
        last_delta = trace_distance(&next.ledger.rho_sa_tau2, &outcome.ledger.rho_sa_tau2);
        outcome = next;
        if last_delta < tol {
            return Ok(LimitCycle {
                outcome,
                iterations,
                last_delta,
            });
        }
    }
    Err(Error::LimitCycleNotConverged {
        iterations: max_iters,
        last_delta,
    })
}

/// `I(S:A)` of the pair state at the end of stroke 2, in nats.
pub fn mutual_information_at_tau2(ledger: &StrokeLedger) -> f64 {
    mutual_information(&ledger.rho_sa_tau2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::Ket;

    fn tanh(x: f64) -> f64 {
        let e = (2.0 * x).exp();
        (e - 1.0) / (e + 1.0)
    }

    #[test]
    fn config_validation() {
        let ok = CycleConfig::standard(0.5, 0.12);
        assert!(ok.validate().is_ok());
        let bad = [
            CycleConfig {
                omega0: ok.omega_tau1,
                ..ok
            },
            CycleConfig {
                omega_tau1: -1.0,
                ..ok
            },
            CycleConfig { tau1: -1e-3, ..ok },
            CycleConfig {
                delta_tau_c: f64::NAN,
                ..ok
            },
            CycleConfig {
                beta_c: ok.beta_h,
                ..ok
            },
            CycleConfig { kappa: 0.0, ..ok },
            CycleConfig {
                j_over_kappa: -1.0,
                ..ok
            },
        ];
        for cfg in bad {
            assert!(run_cycle(&cfg).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn reference_cops() {
        let cfg = CycleConfig::standard(0.5, 0.12);
        assert!((cfg.cop_otto() - 11.0 / 7.0).abs() < 1e-14);
        // β_c/β_h = ω0/ωτ1 makes Carnot and Otto coincide.
        let tied = CycleConfig {
            beta_c: 2.5 / cfg.omega_tau1,
            ..cfg
        };
        assert!((tied.cop_carnot() - 11.0 / 7.0).abs() < 1e-12);
        assert!((cfg.tau_cycle() - (1.5e-3 + 0.12 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn compression_work_closed_form() {
        let cfg = CycleConfig::standard(10.0, 0.01);
        let out = run_cycle(&cfg).unwrap();
        let want = 0.5 * (cfg.omega0 - cfg.omega_tau1) * tanh(1.25);
        assert!((out.ledger.w1 - want).abs() < 1e-12 * want);
        assert!((want / (cfg.omega0 - cfg.omega_tau1) - 0.4241).abs() < 1e-4);
    }

    #[test]
    fn no_contact_no_refrigeration() {
        let out = run_cycle(&CycleConfig::standard(10.0, 0.0)).unwrap();
        assert!(out.ledger.qc_s.abs() < 1e-9);
        assert!(out.ledger.dv_sa.abs() < 1e-12);
        assert!(!out.metrics.flags.is_refrigerator());
        assert_eq!(out.metrics.gamma, None);
        assert!(out.identities.first_law < 1e-9);
    }

    #[test]
    fn markovian_reaches_otto_cop() {
        let out = run_cycle(&CycleConfig::standard(0.5, 0.12)).unwrap();
        let r = out.metrics.cop.unwrap() / out.metrics.cop_otto;
        assert!((0.98..=1.001).contains(&r), "cop/otto = {r}");
        assert!(out.metrics.flags.is_refrigerator());
        assert!(mutual_information_at_tau2(&out.ledger) < 1e-2);
    }

    #[test]
    fn identities_hold_across_regimes() {
        let tol = IdentityTolerances::default();
        for jk in [0.5, 10.0, 40.0] {
            for tc in [0.003, 0.02, 0.05, 0.12] {
                let out = run_cycle(&CycleConfig::standard(jk, tc)).unwrap();
                let b = out.identities.breaches(&tol);
                assert!(
                    b.is_empty(),
                    "J/κ={jk} Δτc={tc}: {b:?} {:?}",
                    out.identities
                );
                assert!(out.identities.quasistatic_lag.unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn ledger_relations() {
        let out = run_cycle(&CycleConfig::standard(40.0, 0.037)).unwrap();
        let l = &out.ledger;
        assert_eq!(l.w_net, l.w1 + l.w3);
        assert_eq!(l.qc_s, l.u_tau2 - l.u_tau1);
        assert_eq!(l.qh, l.u_tau4 - l.u_tau3);
        assert_eq!(l.rho[4], l.rho[0]);
        // ⟨σ_z⟩ survives both ramps.
        let sz = Hermitian::<2>::sigma_z();
        assert_eq!(sz.expectation(&l.rho[1]), sz.expectation(&l.rho[0]));
        assert!((sz.expectation(&l.rho[3]) - sz.expectation(&l.rho[2])).abs() < 1e-15);
        // Parity keeps the reduced refrigerant state diagonal.
        assert!(l.rho[2].matrix()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn weak_coupling_recovers_bare_merit() {
        let cfg = CycleConfig::standard(10.0, 0.05);
        let mut out = run_cycle(&cfg).unwrap();
        out.ledger.dv_sa = 0.0;
        let m = figures_of_merit(&out.ledger, &cfg);
        assert_eq!(m.gamma, Some(1.0));
        assert_eq!(m.cop, Some(out.ledger.qc_s / out.ledger.w_net));
    }

    #[test]
    fn overestimation_factor() {
        let cfg = CycleConfig::standard(10.0, 0.05);
        let mut m = run_cycle(&cfg).unwrap().metrics;
        m.gamma = Some(0.9);
        assert!((m.overestimation_factor().unwrap() - 1.0 / 0.9).abs() < 1e-15);
        assert!((m.overestimation_factor().unwrap() - 1.111).abs() < 1e-3);
    }

    #[test]
    fn sweep_matches_single_runs() {
        let cfg = CycleConfig::standard(10.0, 0.0);
        let sweep = sweep_contact_times(&cfg, 2.5e-4, 41).unwrap();
        assert_eq!(sweep.len(), 41);
        for k in [0, 7, 40] {
            let single = run_cycle(&CycleConfig {
                delta_tau_c: 2.5e-4 * k as f64,
                ..cfg
            })
            .unwrap();
            let a = sweep[k].metrics.cooling_power;
            let b = single.metrics.cooling_power;
            assert!(
                (a - b).abs() <= 1e-9 * b.abs().max(1e-9),
                "k={k}: {a} vs {b}"
            );
        }
        assert!(sweep_contact_times(&cfg, 2.5e-4, 0).is_err());
    }

    #[test]
    fn fresh_policy_converges_immediately() {
        let lc = run_to_limit_cycle(&CycleConfig::standard(40.0, 0.005), 10, 1e-9).unwrap();
        assert_eq!(lc.iterations, 1);
    }

    #[test]
    fn carry_over_markovian_matches_fresh() {
        // Long enough for the pair to forget the auxiliary preparation.
        let long = 50.0 / DEFAULT_KAPPA;
        let cfg = CycleConfig {
            aux_init: AuxInit::CarryOver,
            ..CycleConfig::standard(0.5, long)
        };
        let lc = run_to_limit_cycle(&cfg, 50, 1e-10).unwrap();
        let fresh = run_cycle(&CycleConfig::standard(0.5, long)).unwrap();
        let d = trace_distance(&lc.outcome.ledger.rho_sa_tau2, &fresh.ledger.rho_sa_tau2);
        assert!(d < 1e-6, "limit cycle differs from fresh by {d:e}");
    }

    #[test]
    fn carry_over_strong_coupling_differs() {
        let cfg = CycleConfig {
            aux_init: AuxInit::CarryOver,
            ..CycleConfig::standard(40.0, 0.003)
        };
        let lc = run_to_limit_cycle(&cfg, 200, 1e-10).unwrap();
        let fresh = run_cycle(&CycleConfig::standard(40.0, 0.003)).unwrap();
        let d = trace_distance(&lc.outcome.ledger.rho_sa_tau2, &fresh.ledger.rho_sa_tau2);
        assert!(d > 1e-4, "carry-over should shift the τ2 state, got {d:e}");
        assert!(run_to_limit_cycle(&cfg, 0, 1e-10).is_err());
        assert!(matches!(
            run_to_limit_cycle(&cfg, 2, 0.0),
            Err(Error::LimitCycleNotConverged { iterations: 2, .. })
        ));
    }

    #[test]
    fn mutual_information_examples() {
        let mut out = run_cycle(&CycleConfig::standard(10.0, 0.0)).unwrap();
        assert!(mutual_information_at_tau2(&out.ledger) < 1e-12);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        out.ledger.rho_sa_tau2 = Ket::new([s, 0.0, 0.0, s].map(|x| crate::qmat::C64::new(x, 0.0)))
            .unwrap()
            .projector();
        let i = mutual_information_at_tau2(&out.ledger);
        assert!((i - 2.0 * core::f64::consts::LN_2).abs() < 1e-12);
    }
}
