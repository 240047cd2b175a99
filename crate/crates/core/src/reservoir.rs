//! The engineered cold reservoir: refrigerant `S` coupled through
//! `J σ_x⊗σ_x` to an auxiliary qubit `A`, which in turn decays into a flat
//! Markovian bosonic bath of rate `κ` at inverse temperature `β_c`.
//!
//! Everything is built in the dressed eigenbasis of the pair, so the
//! dissipator is the global (secular) one: its stationary state is the
//! Gibbs state of the full two-qubit Hamiltonian.

use crate::qmat::{kron, pauli, CMat, Hermitian, Mat16, Mat4, C64};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Physical constants of the reservoir. Frequencies in rad/s, `kappa` in 1/s,
/// `beta_c` in s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirParams {
    pub omega_s: f64,
    pub omega_a: f64,
    pub j: f64,
    pub kappa: f64,
    pub beta_c: f64,
}

impl ReservoirParams {
    pub fn new(omega_s: f64, omega_a: f64, j: f64, kappa: f64, beta_c: f64) -> Result<Self> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(omega_s) {
            return Err(Error::param("omega_s", "must be positive and finite"));
        }
        if !positive(omega_a) {
            return Err(Error::param("omega_a", "must be positive and finite"));
        }
        if !(j >= 0.0 && j.is_finite()) {
            return Err(Error::param("j", "must be non-negative and finite"));
        }
        if !positive(kappa) {
            return Err(Error::param("kappa", "must be positive and finite"));
        }
        // β_c = +∞ (zero temperature) is a legitimate limit.
        if beta_c.is_nan() || beta_c <= 0.0 {
            return Err(Error::InvalidBeta(beta_c));
        }
        Ok(Self {
            omega_s,
            omega_a,
            j,
            kappa,
            beta_c,
        })
    }

    /// Parameters with the coupling given as the ratio `J/κ`.
    pub fn from_ratio(
        omega_s: f64,
        omega_a: f64,
        j_over_kappa: f64,
        kappa: f64,
        beta_c: f64,
    ) -> Result<Self> {
        Self::new(omega_s, omega_a, j_over_kappa * kappa, kappa, beta_c)
    }

    /// `Δ = ω_S − ω_A`.
    pub fn detuning(&self) -> f64 {
        self.omega_s - self.omega_a
    }

    /// `Ω = ω_S + ω_A`.
    pub fn total(&self) -> f64 {
        self.omega_s + self.omega_a
    }

    pub fn j_over_kappa(&self) -> f64 {
        self.j / self.kappa
    }
}

/// `(ω_S/2) σ_z⊗I + (ω_A/2) I⊗σ_z + J σ_x⊗σ_x`.
pub fn two_qubit_hamiltonian(p: &ReservoirParams) -> Hermitian<4> {
    let zi: Mat4 = kron(&pauli::sigma_z(), &pauli::identity());
    let iz: Mat4 = kron(&pauli::identity(), &pauli::sigma_z());
    let m = zi.scale_re(p.omega_s / 2.0) + iz.scale_re(p.omega_a / 2.0);
    Hermitian::hermitize(m + *interaction_hamiltonian(p.j).matrix())
}

/// `J σ_x⊗σ_x`.
pub fn interaction_hamiltonian(j: f64) -> Hermitian<4> {
    let xx: Mat4 = kron(&pauli::sigma_x(), &pauli::sigma_x());
    Hermitian::hermitize(xx.scale_re(j))
}

/// Closed-form spectrum of the pair Hamiltonian.
///
/// `|E3⟩ = α|00⟩ + ξ|11⟩`, `|E2⟩ = η|01⟩ − δ|10⟩`, `|E1⟩ = δ|01⟩ + η|10⟩`,
/// `|E0⟩ = −ξ|00⟩ + α|11⟩`, with `E0 = −E3` and `E1 = −E2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem {
    /// Ascending, `[E0, E1, E2, E3]`.
    pub energies: [f64; 4],
    /// `vectors[k]` holds `|E_k⟩` in the product basis `{00, 01, 10, 11}`.
    pub vectors: [[f64; 4]; 4],
    pub alpha: f64,
    pub xi: f64,
    pub eta: f64,
    pub delta: f64,
}

impl EigenSystem {
    pub fn ket(&self, k: usize) -> [C64; 4] {
        self.vectors[k].map(|x| C64::new(x, 0.0))
    }

    /// `|E_n⟩⟨E_m|`.
    pub fn outer(&self, n: usize, m: usize) -> Mat4 {
        CMat::outer(&self.ket(n), &self.ket(m))
    }

    pub fn projector(&self, k: usize) -> Mat4 {
        self.outer(k, k)
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn basis_change(&self) -> Mat4 {
        Mat4::from_fn(|i, k| C64::new(self.vectors[k][i], 0.0))
    }

    /// Matrix elements `⟨E_n|M|E_m⟩`.
    pub fn to_eigenbasis(&self, m: &Mat4) -> Mat4 {
        let v = self.basis_change();
        v.adjoint() * *m * v
    }
}

/// Normalised `(a, b) / √(a² + b²)`.
fn unit(a: f64, b: f64) -> (f64, f64) {
    let n = a.hypot(b);
    (a / n, b / n)
}

pub fn analytic_eigensystem(p: &ReservoirParams) -> EigenSystem {
    let (j, d, o) = (p.j, p.detuning(), p.total());
    let r_o = (4.0 * j * j + o * o).sqrt();
    let r_d = (4.0 * j * j + d * d).sqrt();

    // Ω > 0, so Ω + √(4J²+Ω²) never cancels.
    let (alpha, xi) = unit(o + r_o, 2.0 * j);
    let (eta, delta) = if j == 0.0 && d == 0.0 {
        // Resonant limit of the closed forms.
        (
            core::f64::consts::FRAC_1_SQRT_2,
            -core::f64::consts::FRAC_1_SQRT_2,
        )
    } else if d >= 0.0 {
        unit(d + r_d, -2.0 * j)
    } else {
        // Δ + √(4J²+Δ²) = 4J²/(√(4J²+Δ²) − Δ); rescaled to avoid cancellation.
        unit(2.0 * j, -(r_d - d))
    };

    let e3 = r_o / 2.0;
    let e2 = r_d / 2.0;
    EigenSystem {
        energies: [-e3, -e2, e2, e3],
        vectors: [
            [-xi, 0.0, 0.0, alpha],
            [0.0, delta, eta, 0.0],
            [0.0, eta, -delta, 0.0],
            [alpha, 0.0, 0.0, xi],
        ],
        alpha,
        xi,
        eta,
        delta,
    }
}

/// The two positive transition frequencies `(ε1, ε2)`:
/// `ε1 = E1 − E0 = E3 − E2`, `ε2 = E2 − E0 = E3 − E1`.
pub fn transition_frequencies(es: &EigenSystem) -> (f64, f64) {
    let [_, _, e2, e3] = es.energies;
    (e3 - e2, e3 + e2)
}

/// Bose–Einstein occupation `1/(e^{βε} − 1)`.
pub fn bose_einstein(beta: f64, eps: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * eps).exp_m1()
    }
}

/// `(γ↓, γ↑) = (κ/2 (1 + n), κ/2 n)` for a flat spectral density.
pub fn decay_rates(eps: f64, p: &ReservoirParams) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveFrequency(eps));
    }
    let n = bose_einstein(p.beta_c, eps);
    Ok((0.5 * p.kappa * (1.0 + n), 0.5 * p.kappa * n))
}

/// Frequencies, occupations and rates of the two transitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionData {
    pub eps: [f64; 2],
    pub n_be: [f64; 2],
    pub rate_down: [f64; 2],
    pub rate_up: [f64; 2],
}

impl TransitionData {
    pub fn new(es: &EigenSystem, p: &ReservoirParams) -> Result<Self> {
        let (e1, e2) = transition_frequencies(es);
        let (d1, u1) = decay_rates(e1, p)?;
        let (d2, u2) = decay_rates(e2, p)?;
        Ok(Self {
            eps: [e1, e2],
            n_be: [bose_einstein(p.beta_c, e1), bose_einstein(p.beta_c, e2)],
            rate_down: [d1, d2],
            rate_up: [u1, u2],
        })
    }
}

/// One dissipative channel `γ (L ρ L† − ½{L†L, ρ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub operator: Mat4,
    pub rate: f64,
}

/// `L1 = 2αη(|E0⟩⟨E1| + |E2⟩⟨E3|)` and `L2 = 2αδ(−|E0⟩⟨E2| + |E1⟩⟨E3|)`,
/// in the order `(L1, γ↓(ε1)), (L2, γ↓(ε2)), (L1†, γ↑(ε1)), (L2†, γ↑(ε2))`.
pub fn lindblad_channels(es: &EigenSystem, td: &TransitionData) -> [Channel; 4] {
    let l1 = (es.outer(0, 1) + es.outer(2, 3)).scale_re(2.0 * es.alpha * es.eta);
    let l2 = (es.outer(1, 3) - es.outer(0, 2)).scale_re(2.0 * es.alpha * es.delta);
    [
        Channel {
            operator: l1,
            rate: td.rate_down[0],
        },
        Channel {
            operator: l2,
            rate: td.rate_down[1],
        },
        Channel {
            operator: l1.adjoint(),
            rate: td.rate_up[0],
        },
        Channel {
            operator: l2.adjoint(),
            rate: td.rate_up[1],
        },
    ]
}

/// Auxiliary coupling operators `A1 = I⊗σ_x`, `A2 = I⊗σ_y`.
pub fn coupling_operators() -> [Mat4; 2] {
    [
        kron(&pauli::identity(), &pauli::sigma_x()),
        kron(&pauli::identity(), &pauli::sigma_y()),
    ]
}

/// `Π_n A_k Π_m` for `k ∈ {1, 2}`.
pub fn sector_block(es: &EigenSystem, k: usize, n: usize, m: usize) -> Mat4 {
    assert!(k == 1 || k == 2, "coupling operator index must be 1 or 2");
    es.projector(n) * coupling_operators()[k - 1] * es.projector(m)
}

/// Jump operators `A_k(ω)` at the positive transition frequencies.
///
/// `eps1[k-1] = Π0 A_k Π1 + Π2 A_k Π3`, `eps2[k-1] = Π0 A_k Π2 + Π1 A_k Π3`;
/// the negative frequencies are the adjoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorOperators {
    pub eps1: [Mat4; 2],
    pub eps2: [Mat4; 2],
    /// Sectors of `ω03` and `ω12`, which vanish for this coupling.
    pub omega03: [Mat4; 2],
    pub omega12: [Mat4; 2],
}

pub fn sector_operators(es: &EigenSystem) -> SectorOperators {
    let op = |k: usize, pairs: &[(usize, usize)]| {
        pairs.iter().fold(Mat4::zeros(), |acc, &(n, m)| {
            acc + sector_block(es, k, n, m)
        })
    };
    let both = |pairs: &[(usize, usize)]| [op(1, pairs), op(2, pairs)];
    SectorOperators {
        eps1: both(&[(0, 1), (2, 3)]),
        eps2: both(&[(0, 2), (1, 3)]),
        omega03: both(&[(0, 3)]),
        omega12: both(&[(1, 2)]),
    }
}

/// Closed-form eigenbasis matrix `⟨E_n|A_k|E_m⟩` in terms of `α, ξ, η, δ`.
pub fn eigenbasis_coupling(es: &EigenSystem, k: usize) -> Mat4 {
    let (a, x, e, d) = (es.alpha, es.xi, es.eta, es.delta);
    let z = C64::new(0.0, 0.0);
    match k {
        1 => {
            let p = C64::new(a * e - d * x, 0.0);
            let q = C64::new(a * d + e * x, 0.0);
            CMat([[z, p, -q, z], [p, z, z, q], [-q, z, z, p], [z, q, p, z]])
        }
        2 => {
            let p = C64::new(0.0, a * e + d * x);
            let q = C64::new(0.0, a * d - e * x);
            CMat([[z, p, -q, z], [-p, z, z, q], [q, z, z, p], [z, -q, -p, z]])
        }
        _ => panic!("coupling operator index must be 1 or 2"),
    }
}

/// Dissipator in the double-sum form
/// `Σ_ω Σ_kl γ_kl(ω) [A_l(ω) ρ A_k†(ω) − ½{A_k†(ω) A_l(ω), ρ}]`
/// with `γ(ε) = γ↓ [[1, −i], [i, 1]]` and `γ(−ε) = γ↑ [[1, i], [−i, 1]]`.
///
/// Kept as an independent cross-check of [`lindblad_channels`].
pub fn double_sum_dissipator(es: &EigenSystem, td: &TransitionData, rho: &Mat4) -> Mat4 {
    let so = sector_operators(es);
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let mut out = Mat4::zeros();
    for (t, ops) in [so.eps1, so.eps2].into_iter().enumerate() {
        let up = ops.map(|a| a.adjoint());
        let terms = [
            (ops, [[one, -i], [i, one]], td.rate_down[t]),
            (up, [[one, i], [-i, one]], td.rate_up[t]),
        ];
        for (a, g, rate) in terms {
            for k in 0..2 {
                for l in 0..2 {
                    let c = g[k][l] * rate;
                    let ak_dag = a[k].adjoint();
                    let term =
                        a[l] * *rho * ak_dag - (ak_dag * a[l]).anticommutator(rho).scale_re(0.5);
                    out += term.scale(c);
                }
            }
        }
    }
    out
}

/// Matrix of a linear map on 4×4 matrices acting on column-stacked vectors.
pub fn superoperator(f: impl Fn(&Mat4) -> Mat4) -> Mat16 {
    let mut s = Mat16::zeros();
    for c in 0..4 {
        for r in 0..4 {
            let mut e = Mat4::zeros();
            e[(r, c)] = C64::new(1.0, 0.0);
            let col: [C64; 16] = f(&e).vec_into();
            for (k, z) in col.into_iter().enumerate() {
                s[(k, r + 4 * c)] = z;
            }
        }
    }
    s
}

/// The full master-equation generator `−i[H, ρ] + D(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GKSLGenerator {
    pub params: ReservoirParams,
    pub hamiltonian: Hermitian<4>,
    pub eigensystem: EigenSystem,
    pub transitions: TransitionData,
    pub channels: [Channel; 4],
    /// Acts on column-stacked density matrices.
    pub liouvillian: Mat16,
}

impl GKSLGenerator {
    /// Direct action on an operator.
    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        apply_gksl(self.hamiltonian.matrix(), &self.channels, rho)
    }

    /// Dissipative part only.
    pub fn dissipator(&self, rho: &Mat4) -> Mat4 {
        apply_gksl(&Mat4::zeros(), &self.channels, rho)
    }
}

fn apply_gksl(h: &Mat4, channels: &[Channel; 4], rho: &Mat4) -> Mat4 {
    let mut out = h.commutator(rho).scale(C64::new(0.0, -1.0));
    for ch in channels {
        let l = &ch.operator;
        let ld = l.adjoint();
        let term = *l * *rho * ld - (ld * *l).anticommutator(rho).scale_re(0.5);
        out += term.scale_re(ch.rate);
    }
    out
}

pub fn build_generator(p: &ReservoirParams) -> Result<GKSLGenerator> {
    let hamiltonian = two_qubit_hamiltonian(p);
    let eigensystem = analytic_eigensystem(p);
    let transitions = TransitionData::new(&eigensystem, p)?;
    let channels = lindblad_channels(&eigensystem, &transitions);
    let liouvillian = superoperator(|x| apply_gksl(hamiltonian.matrix(), &channels, x));
    Ok(GKSLGenerator {
        params: *p,
        hamiltonian,
        eigensystem,
        transitions,
        channels,
        liouvillian,
    })
}
