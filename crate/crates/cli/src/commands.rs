//! Subcommands. Work is spread over the current rayon pool; results are
//! collected in input order, so output bytes do not depend on `--jobs`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use otto_core::cycle::{
    mutual_information_at_tau2, run_cycle, run_to_limit_cycle, sweep_contact_times, CycleOutcome,
    IdentityTolerances,
};
use otto_core::qmat::Ket;
use otto_core::witness::{
    blp_accumulator, hemisphere_pairs, trace_distance_trajectory, PairScanReport, WitnessReport,
};
use rayon::prelude::*;

use crate::output::{header_line, num, opt, write_table, Table};
use crate::{CliError, Config, Status};

pub const SWEEP_COLUMNS: [&str; 10] = [
    "delta_tau_c_s",
    "J_over_kappa",
    "cop",
    "gamma",
    "cooling_power",
    "injected_power",
    "cop_lag_L",
    "F_lag",
    "I_SA_nat",
    "flags",
];

pub const WITNESS_COLUMNS: [&str; 4] = ["t_s", "D", "dDdt", "J_over_kappa"];

const DIAGNOSTIC_COLUMNS: [&str; 9] = [
    "delta_tau_c_s",
    "J_over_kappa",
    "breaches",
    "first_law",
    "energy_released",
    "cop_lag_form",
    "quasistatic_lag",
    "otto_form",
    "gamma_necessity",
];

#[derive(Debug, Parser)]
#[command(
    name = "otto",
    version,
    about = "Finite-time quantum Otto refrigerator with an engineered cold reservoir"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Grid step in s: the contact-time step for sweep-tauc, the sampling
    /// step for witness and pair-scan, the propagation sample step otherwise.
    #[arg(long, global = true)]
    pub step: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Trace-distance trajectory of the (|0>, |1>) pair, one block per ratio.
    Witness,
    /// Witness over a hemisphere grid of antipodal pure pairs.
    PairScan,
    /// One cycle with its ledger, metrics and identity residuals.
    Cycle,
    /// Figures of merit against the contact time, one block per ratio.
    SweepTauc,
    /// Figures of merit against J/kappa at fixed contact times.
    SweepJkappa,
    /// Repeated cycles until the end-of-contact pair state converges.
    LimitCycle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Witness => "witness",
            Command::PairScan => "pair-scan",
            Command::Cycle => "cycle",
            Command::SweepTauc => "sweep-tauc",
            Command::SweepJkappa => "sweep-jkappa",
            Command::LimitCycle => "limit-cycle",
        }
    }

    /// Applies `--step` to the config key this command grids over.
    pub fn apply_step(self, cfg: &mut Config, step: f64) -> Result<(), CliError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::Usage("--step must be positive".into()));
        }
        match self {
            Command::SweepTauc => cfg.tauc_step_s = step,
            Command::Witness | Command::PairScan => cfg.witness_grid_step_s = step,
            Command::Cycle | Command::SweepJkappa | Command::LimitCycle => cfg.sample_step_s = step,
        }
        Ok(())
    }
}

pub fn run(cmd: Command, cfg: &Config, out: &Path) -> Result<Status, CliError> {
    match cmd {
        Command::Witness => cmd_witness(cfg, out),
        Command::PairScan => cmd_pair_scan(cfg, out),
        Command::Cycle => cmd_cycle(cfg, out),
        Command::SweepTauc => cmd_sweep_tauc(cfg, out),
        Command::SweepJkappa => cmd_sweep_jkappa(cfg, out),
        Command::LimitCycle => cmd_limit_cycle(cfg, out),
    }
}

/// One evaluated sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub delta_tau_c: f64,
    pub j_over_kappa: f64,
    pub outcome: CycleOutcome,
    pub mutual_information: f64,
}

impl SweepRow {
    fn new(j_over_kappa: f64, outcome: CycleOutcome) -> Self {
        Self {
            delta_tau_c: outcome.delta_tau_c,
            j_over_kappa,
            mutual_information: mutual_information_at_tau2(&outcome.ledger),
            outcome,
        }
    }

    pub fn breaches(&self) -> Vec<&'static str> {
        self.outcome
            .identities
            .breaches(&IdentityTolerances::default())
    }

    fn fields(&self) -> Vec<String> {
        let m = &self.outcome.metrics;
        vec![
            num(self.delta_tau_c),
            num(self.j_over_kappa),
            opt(m.cop),
            opt(m.gamma),
            num(m.cooling_power),
            num(m.injected_power),
            opt(m.cop_lag),
            opt(m.quasistatic_lag),
            num(self.mutual_information),
            flag_string(&self.outcome),
        ]
    }

    fn diagnostics(&self) -> Vec<String> {
        let r = &self.outcome.identities;
        vec![
            num(self.delta_tau_c),
            num(self.j_over_kappa),
            self.breaches().join("|"),
            num(r.first_law),
            num(r.energy_released),
            opt(r.cop_lag_form),
            opt(r.quasistatic_lag),
            opt(r.otto_form),
            r.gamma_necessity.to_string(),
        ]
    }
}

/// `Q`, `W`, `H`, `G` for the released-heat, positive-work, rejected-heat
/// and positive-γ flags; `-` where a flag fails.
pub fn flag_string(o: &CycleOutcome) -> String {
    let f = &o.metrics.flags;
    [
        (f.qc_r_released, 'Q'),
        (f.w_net_positive, 'W'),
        (f.qh_rejected, 'H'),
        (f.gamma_positive, 'G'),
    ]
    .iter()
    .map(|&(ok, c)| if ok { c } else { '-' })
    .collect()
}

/// Contact-time sweep, ratios in config order, each read off one trajectory.
pub fn sweep_tauc_rows(cfg: &Config) -> Result<Vec<SweepRow>, CliError> {
    let ratios = cfg.require_ratios()?;
    let (step, count) = cfg.tauc_grid()?;
    let blocks = ratios
        .par_iter()
        .map(|&jk| {
            let outcomes = sweep_contact_times(&cfg.cycle(jk, 0.0)?, step, count)?;
            Ok(outcomes
                .into_iter()
                .map(|o| SweepRow::new(jk, o))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Coupling sweep, contact times in config order, `J/κ` ascending.
pub fn sweep_jkappa_rows(cfg: &Config) -> Result<Vec<SweepRow>, CliError> {
    if cfg.tauc_values_s.is_empty() {
        return Err(CliError::Usage("`tauc_values_s` must not be empty".into()));
    }
    let grid = cfg.jkappa_grid()?;
    let points: Vec<(f64, f64)> = cfg
        .tauc_values_s
        .iter()
        .flat_map(|&tc| grid.iter().map(move |&jk| (tc, jk)))
        .collect();
    points
        .par_iter()
        .map(|&(tc, jk)| Ok(SweepRow::new(jk, run_cycle(&cfg.cycle(jk, tc)?)?)))
        .collect()
}

fn write_sweep(
    cfg: &Config,
    out: &Path,
    command: &str,
    stem: &str,
    rows: &[SweepRow],
) -> Result<Status, CliError> {
    let header = header_line(command, cfg);
    let mut good = Table::new(&SWEEP_COLUMNS);
    let mut bad = Table::new(&DIAGNOSTIC_COLUMNS);
    for r in rows {
        if r.breaches().is_empty() {
            good.push(r.fields());
        } else {
            bad.push(r.diagnostics());
        }
    }
    let path = write_table(out, &format!("{stem}.csv"), &header, &good)?;
    println!("{}: {} rows", path.display(), good.rows.len());
    finish_diagnostics(cfg, out, command, stem, &bad)
}

/// Writes the diagnostics file when there are breaches, and removes a stale
/// one otherwise.
fn finish_diagnostics(
    cfg: &Config,
    out: &Path,
    command: &str,
    stem: &str,
    bad: &Table,
) -> Result<Status, CliError> {
    let name = format!("{stem}_diagnostics.csv");
    if bad.rows.is_empty() {
        match std::fs::remove_file(out.join(&name)) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => return Err(e.into()),
            _ => {}
        }
        return Ok(Status::Success);
    }
    let path = write_table(out, &name, &header_line(command, cfg), bad)?;
    eprintln!(
        "{} identity breaches written to {}",
        bad.rows.len(),
        path.display()
    );
    Ok(Status::IdentityBreach)
}

pub fn cmd_sweep_tauc(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let rows = sweep_tauc_rows(cfg)?;
    write_sweep(cfg, out, "sweep-tauc", "sweep_tauc", &rows)
}

pub fn cmd_sweep_jkappa(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let rows = sweep_jkappa_rows(cfg)?;
    write_sweep(cfg, out, "sweep-jkappa", "sweep_jkappa", &rows)
}

/// Witness trajectories of the configured pair for every ratio.
pub fn witness_reports(cfg: &Config) -> Result<Vec<(f64, WitnessReport)>, CliError> {
    cfg.require_ratios()?
        .par_iter()
        .map(|&jk| Ok((jk, trace_distance_trajectory(&cfg.witness(jk)?)?)))
        .collect()
}

pub fn cmd_witness(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let reports = witness_reports(cfg)?;
    let mut t = Table::new(&WITNESS_COLUMNS);
    for (jk, r) in &reports {
        for i in 0..r.times.len() {
            t.push(vec![num(r.times[i]), num(r.d[i]), num(r.ddt[i]), num(*jk)]);
        }
        println!(
            "J/kappa = {jk}: max dD/dt = {:.6e} 1/s, accumulator = {:.6e}, {}",
            r.max_positive_derivative,
            blp_accumulator(r),
            verdict(r.is_non_markovian)
        );
    }
    let path = write_table(out, "witness.csv", &header_line("witness", cfg), &t)?;
    println!("{}: {} rows", path.display(), t.rows.len());
    Ok(Status::Success)
}

fn verdict(non_markovian: bool) -> &'static str {
    if non_markovian {
        "non-markovian"
    } else {
        "markovian"
    }
}

/// An antipodal pair of refrigerant states.
pub type Pair = (Ket<2>, Ket<2>);

pub struct PairScan {
    pub pairs: Vec<Pair>,
    /// One report per configured ratio, in config order.
    pub reports: Vec<(f64, PairScanReport)>,
}

/// Pair scan for every ratio: the pairs used and one report per ratio.
pub fn pair_scan_reports(cfg: &Config) -> Result<PairScan, CliError> {
    let ratios = cfg.require_ratios()?;
    if cfg.n_pairs == 0 {
        return Err(CliError::Usage("`n_pairs` must be at least 1".into()));
    }
    let pairs = hemisphere_pairs(cfg.n_pairs);
    let bases = ratios
        .iter()
        .map(|&jk| cfg.witness(jk))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, usize)> = (0..ratios.len())
        .flat_map(|r| (0..pairs.len()).map(move |p| (r, p)))
        .collect();
    let maxima = jobs
        .par_iter()
        .map(|&(r, p)| {
            Ok(trace_distance_trajectory(&bases[r].with_pair(pairs[p]))?.max_positive_derivative)
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    let reports = maxima
        .chunks(pairs.len())
        .zip(ratios.iter().zip(&bases))
        .map(|(m, (&jk, b))| (jk, PairScanReport::from_maxima(m.to_vec(), b.tolerance)))
        .collect();
    Ok(PairScan { pairs, reports })
}

fn bloch_vector(k: &Ket<2>) -> [f64; 3] {
    let [a, b] = *k.amplitudes();
    let c = a.conj() * b;
    [2.0 * c.re, 2.0 * c.im, a.norm_sqr() - b.norm_sqr()]
}

pub fn cmd_pair_scan(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let PairScan { pairs, reports } = pair_scan_reports(cfg)?;
    let header = header_line("pair-scan", cfg);
    let mut per = Table::new(&[
        "J_over_kappa",
        "pair_index",
        "bloch_x",
        "bloch_y",
        "bloch_z",
        "max_dDdt",
        "non_markovian",
    ]);
    let mut summary = Table::new(&[
        "J_over_kappa",
        "n_pairs",
        "max_dDdt",
        "worst_pair",
        "verdict",
    ]);
    for (jk, r) in &reports {
        for (i, (m, (k, _))) in r.per_pair.iter().zip(&pairs).enumerate() {
            let [x, y, z] = bloch_vector(k);
            per.push(vec![
                num(*jk),
                i.to_string(),
                num(x),
                num(y),
                num(z),
                num(*m),
                (*m > cfg.witness_tolerance).to_string(),
            ]);
        }
        summary.push(vec![
            num(*jk),
            pairs.len().to_string(),
            num(r.max_positive_derivative),
            r.worst_pair.to_string(),
            verdict(r.is_non_markovian).into(),
        ]);
        println!(
            "J/kappa = {jk}: {} pairs, max dD/dt = {:.6e} 1/s (pair {}), {}",
            pairs.len(),
            r.max_positive_derivative,
            r.worst_pair,
            verdict(r.is_non_markovian)
        );
    }
    write_table(out, "pair_scan.csv", &header, &per)?;
    let path = write_table(out, "pair_scan_summary.csv", &header, &summary)?;
    println!("{}", path.display());
    Ok(Status::Success)
}

fn ledger_table(o: &CycleOutcome, extra: &[(&str, String)]) -> Table {
    let l = &o.ledger;
    let m = &o.metrics;
    let r = &o.identities;
    let f = &m.flags;
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    for (k, v) in [
        ("delta_tau_c_s", o.delta_tau_c),
        ("u0", l.u0),
        ("u_tau1", l.u_tau1),
        ("u_tau2", l.u_tau2),
        ("u_tau3", l.u_tau3),
        ("u_tau4", l.u_tau4),
        ("w1", l.w1),
        ("w3", l.w3),
        ("w_net", l.w_net),
        ("qc_s", l.qc_s),
        ("qh", l.qh),
        ("dv_sa", l.dv_sa),
        ("de_sa", l.de_sa),
        ("du_a", l.du_a),
        ("qc_released_by_reservoir", l.released_by_reservoir()),
    ] {
        row(k, num(v));
    }
    row("cop", opt(m.cop));
    row("gamma", opt(m.gamma));
    row("overestimation_factor", opt(m.overestimation_factor()));
    row("cooling_power", num(m.cooling_power));
    row("injected_power", num(m.injected_power));
    row("cop_lag_L", opt(m.cop_lag));
    row("F_lag", opt(m.quasistatic_lag));
    row("cop_otto", num(m.cop_otto));
    row("cop_carnot", num(m.cop_carnot));
    row("I_SA_nat", num(mutual_information_at_tau2(l)));
    row("residual_first_law", num(r.first_law));
    row("residual_energy_released", num(r.energy_released));
    row("residual_cop_lag_form", opt(r.cop_lag_form));
    row("residual_quasistatic_lag", opt(r.quasistatic_lag));
    row("residual_otto_form", opt(r.otto_form));
    row("gamma_necessity", r.gamma_necessity.to_string());
    row("flag_qc_r_released", f.qc_r_released.to_string());
    row("flag_w_net_positive", f.w_net_positive.to_string());
    row("flag_qh_rejected", f.qh_rejected.to_string());
    row("flag_gamma_positive", f.gamma_positive.to_string());
    for (k, v) in extra {
        row(k, v.clone());
    }
    t
}

fn print_report(t: &Table) {
    for r in &t.rows {
        println!("{:<28} {}", r[0], r[1]);
    }
}

fn cycle_status(o: &CycleOutcome) -> Status {
    let breaches = o.identities.breaches(&IdentityTolerances::default());
    if !breaches.is_empty() {
        eprintln!("identity breaches: {}", breaches.join(", "));
        Status::IdentityBreach
    } else if !o.metrics.flags.is_refrigerator() {
        eprintln!("not a refrigerator: flags {}", flag_string(o));
        Status::NotRefrigerator
    } else {
        Status::Success
    }
}

pub fn cmd_cycle(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let o = run_cycle(&cfg.cycle(cfg.j_over_kappa, cfg.delta_tau_c_s)?)?;
    let t = ledger_table(&o, &[]);
    print_report(&t);
    write_table(out, "cycle.csv", &header_line("cycle", cfg), &t)?;
    Ok(cycle_status(&o))
}

pub fn cmd_limit_cycle(cfg: &Config, out: &Path) -> Result<Status, CliError> {
    let lc = run_to_limit_cycle(
        &cfg.cycle(cfg.j_over_kappa, cfg.delta_tau_c_s)?,
        cfg.limit_cycle_max_iters,
        cfg.limit_cycle_tol,
    )?;
    let t = ledger_table(
        &lc.outcome,
        &[
            ("iterations", lc.iterations.to_string()),
            ("last_delta", num(lc.last_delta)),
        ],
    );
    print_report(&t);
    write_table(out, "limit_cycle.csv", &header_line("limit-cycle", cfg), &t)?;
    Ok(cycle_status(&lc.outcome))
}
