//! Run configuration: one flat TOML table, unknown keys rejected.
//!
//! Frequencies are ordinary frequencies in kHz and are converted with
//! `ω = 2π·f·10³ rad/s`; rates are in s⁻¹, times in s. Temperatures are given
//! as the dimensionless products `β·ω` against the gap they refer to.

use std::path::Path;

use otto_core::cycle::{self, AuxInit, CycleConfig};
use otto_core::khz_to_rad_per_s;
use otto_core::reservoir::ReservoirParams;
use otto_core::witness::{self, WitnessConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuxPolicy {
    FreshGibbs,
    CarryOver,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    // Cycle.
    pub omega0_khz: f64,
    pub omega_tau1_khz: f64,
    /// Auxiliary gap; defaults to `omega_tau1_khz` when absent.
    pub omega_a_khz: Option<f64>,
    pub tau1_s: f64,
    pub delta_tau_c_s: f64,
    pub delta_tau_h_s: f64,
    pub beta_h_omega0: f64,
    pub beta_c_omega_tau1: f64,
    pub kappa: f64,
    pub gamma_h: f64,
    pub j_over_kappa: f64,
    pub aux_init: AuxPolicy,
    pub sample_step_s: f64,

    // Sweeps.
    pub ratios: Vec<f64>,
    pub tauc_max_s: f64,
    pub tauc_step_s: f64,
    pub jkappa_min: f64,
    pub jkappa_max: f64,
    /// Log-spaced points between the two ends, both included.
    pub jkappa_points: usize,
    pub tauc_values_s: Vec<f64>,

    // Witness.
    pub witness_omega_khz: f64,
    /// `β·ω` of the witness bath; 0.5 is `T = 2ω`.
    pub witness_beta_omega: f64,
    pub witness_t_max_s: f64,
    pub witness_grid_step_s: f64,
    pub witness_tolerance: f64,
    pub n_pairs: usize,

    // Limit cycle.
    pub limit_cycle_max_iters: usize,
    pub limit_cycle_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            omega0_khz: cycle::DEFAULT_OMEGA0_KHZ,
            omega_tau1_khz: cycle::DEFAULT_OMEGA_TAU1_KHZ,
            omega_a_khz: None,
            tau1_s: cycle::DEFAULT_TAU1,
            delta_tau_c_s: 0.12,
            delta_tau_h_s: cycle::DEFAULT_DELTA_TAU_H,
            beta_h_omega0: cycle::DEFAULT_BETA_H_OMEGA0,
            beta_c_omega_tau1: cycle::DEFAULT_BETA_C_OMEGA_TAU1,
            kappa: cycle::DEFAULT_KAPPA,
            gamma_h: cycle::DEFAULT_GAMMA_H,
            j_over_kappa: 0.5,
            aux_init: AuxPolicy::FreshGibbs,
            sample_step_s: otto_core::dynamics::MAX_STEP,
            ratios: vec![40.0, 10.0, 0.5],
            tauc_max_s: 0.12,
            tauc_step_s: 2.5e-4,
            jkappa_min: 0.1,
            jkappa_max: 50.0,
            jkappa_points: 100,
            tauc_values_s: vec![0.003, 0.05, 0.12],
            witness_omega_khz: 2.2,
            witness_beta_omega: 0.5,
            witness_t_max_s: witness::DEFAULT_T_MAX,
            witness_grid_step_s: witness::DEFAULT_GRID_STEP,
            witness_tolerance: witness::DEFAULT_TOLERANCE,
            n_pairs: 1000,
            limit_cycle_max_iters: 200,
            limit_cycle_tol: 1e-10,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `path`, or returns the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    /// The resolved configuration on one line, for CSV headers.
    pub fn one_line(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Cycle parameters at the given coupling ratio and contact time.
    pub fn cycle(&self, j_over_kappa: f64, delta_tau_c: f64) -> Result<CycleConfig, CliError> {
        let omega0 = khz_to_rad_per_s(self.omega0_khz);
        let omega_tau1 = khz_to_rad_per_s(self.omega_tau1_khz);
        let cfg = CycleConfig {
            omega0,
            omega_tau1,
            tau1: self.tau1_s,
            delta_tau_c,
            delta_tau_h: self.delta_tau_h_s,
            beta_h: self.beta_h_omega0 / omega0,
            beta_c: self.beta_c_omega_tau1 / omega_tau1,
            j_over_kappa,
            kappa: self.kappa,
            omega_a: khz_to_rad_per_s(self.omega_a_khz.unwrap_or(self.omega_tau1_khz)),
            gamma_h: self.gamma_h,
            aux_init: match self.aux_init {
                AuxPolicy::FreshGibbs => AuxInit::FreshGibbs,
                AuxPolicy::CarryOver => AuxInit::CarryOver,
            },
            sample_step: self.sample_step_s,
        };
        cfg.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn witness(&self, j_over_kappa: f64) -> Result<WitnessConfig, CliError> {
        let w = khz_to_rad_per_s(self.witness_omega_khz);
        let bad = |e: otto_core::Error| CliError::Config(e.to_string());
        let params = ReservoirParams::from_ratio(
            w,
            w,
            j_over_kappa,
            self.kappa,
            self.witness_beta_omega / w,
        )
        .map_err(bad)?;
        let cfg = WitnessConfig::new(params, self.witness_t_max_s, self.witness_grid_step_s)
            .map_err(bad)?;
        Ok(WitnessConfig {
            tolerance: self.witness_tolerance,
            ..cfg
        })
    }

    pub fn require_ratios(&self) -> Result<&[f64], CliError> {
        if self.ratios.is_empty() {
            return Err(CliError::Usage("`ratios` must not be empty".into()));
        }
        Ok(&self.ratios)
    }

    /// `Δτ_c` grid of the contact-time sweep as `(step, count)`.
    pub fn tauc_grid(&self) -> Result<(f64, usize), CliError> {
        let (step, max) = (self.tauc_step_s, self.tauc_max_s);
        if !(step > 0.0 && max >= 0.0 && (max / step).is_finite()) {
            return Err(CliError::Usage(
                "contact-time grid needs tauc_step_s > 0 and tauc_max_s >= 0".into(),
            ));
        }
        Ok((step, (max / step + 1e-9).floor() as usize + 1))
    }

    pub fn jkappa_grid(&self) -> Result<Vec<f64>, CliError> {
        let (a, b, n) = (self.jkappa_min, self.jkappa_max, self.jkappa_points);
        if n == 0 || !(a > 0.0 && b >= a && b.is_finite()) {
            return Err(CliError::Usage(
                "J/κ grid needs 0 < jkappa_min <= jkappa_max and jkappa_points >= 1".into(),
            ));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let r = (b / a).ln() / (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a * (r * i as f64).exp()
                }
            })
            .collect())
    }
}
