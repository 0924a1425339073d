//! Discrimination protocols: exact success probabilities for single-qubit
//! strategies (with exhaustive strategy enumeration and exact probe
//! optimization) and for the two-qubit protocol.
//!
//! Register conventions, used consistently everywhere:
//! - the dilation U acts on auxiliary (x) signal;
//! - the auxiliary starts in |0> and is measured along z with outcome j;
//! - the signal is measured along z with outcome b;
//! - in the two-qubit protocol the total space is ordered
//!   Alice (x) auxiliary (x) signal.

use serde::Serialize;

use crate::channels::{build_bell_diagonal_family, check_settings, SubchannelFamily};
use crate::error::{Error, Result};
use crate::matrix::{max_eigenvalue_hermitian, tensor, ComplexMatrix};
use crate::states::{bell_diagonal_state, projector, BlochVector, DensityMatrix, MeasurementSetting};

/// Per-gate rule mapping Bob's signal outcome b to a guess of the branch j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GuessRule {
    /// Guess j = 0 regardless of b.
    Const0,
    /// Guess j = 1 regardless of b.
    Const1,
    /// Guess j = b.
    MatchOutcome,
    /// Guess j = b xor 1.
    FlipOutcome,
}

impl GuessRule {
    /// All rules, in the order used for lexicographic strategy enumeration.
    pub const ALL: [GuessRule; 4] = [
        GuessRule::Const0,
        GuessRule::Const1,
        GuessRule::MatchOutcome,
        GuessRule::FlipOutcome,
    ];

    pub fn guess(self, b: u8) -> u8 {
        match self {
            GuessRule::Const0 => 0,
            GuessRule::Const1 => 1,
            GuessRule::MatchOutcome => b,
            GuessRule::FlipOutcome => b ^ 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GuessRule::Const0 => "0",
            GuessRule::Const1 => "1",
            GuessRule::MatchOutcome => "b",
            GuessRule::FlipOutcome => "b^1",
        }
    }
}

/// One rule per gate; the discrete object the single-qubit protocol
/// optimizes over (4^m strategies for m gates).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuessStrategy {
    rules: Vec<GuessRule>,
}

impl GuessStrategy {
    pub fn new(rules: Vec<GuessRule>) -> Self {
        GuessStrategy { rules }
    }

    pub fn rules(&self) -> &[GuessRule] {
        &self.rules
    }

    pub fn gate_count(&self) -> usize {
        self.rules.len()
    }

    pub fn guess(&self, gate: usize, b: u8) -> u8 {
        self.rules[gate].guess(b)
    }

    /// All 4^m strategies in lexicographic order (first gate most
    /// significant, rules ordered as in [`GuessRule::ALL`]).
    pub fn enumerate(gate_count: usize) -> impl Iterator<Item = GuessStrategy> {
        let total = 4usize.pow(gate_count as u32);
        (0..total).map(move |idx| {
            let rules = (0..gate_count)
                .map(|k| GuessRule::ALL[(idx >> (2 * (gate_count - 1 - k))) & 3])
                .collect();
            GuessStrategy { rules }
        })
    }

    /// Compact label like `0|b|b^1`.
    pub fn label(&self) -> String {
        self.rules
            .iter()
            .map(|r| r.label())
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Alice's measurement direction for every (b, gate) pair.
#[derive(Clone, Debug, Serialize)]
pub struct AliceDirectionTable {
    pub n: usize,
    /// Indexed by gate, then by Bob's outcome b.
    entries: Vec<[BlochVector; 2]>,
}

impl AliceDirectionTable {
    pub fn direction(&self, b: u8, gate: usize) -> &BlochVector {
        &self.entries[gate][b as usize]
    }

    pub fn gate_count(&self) -> usize {
        self.entries.len()
    }
}

/// Measurement directions used by Alice, per setting count.
pub fn alice_directions(n: usize) -> Result<AliceDirectionTable> {
    check_settings(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = BlochVector::new;
    let entries = match n {
        2 => vec![[v(h, 0.0, h), v(-h, 0.0, h)]],
        3 => vec![
            [v(h, 0.0, h), v(-h, 0.0, h)],
            [v(h, 0.0, h), v(0.0, 1.0, 0.0)],
            [v(0.0, 1.0, 0.0), v(-h, 0.0, h)],
        ],
        4 => {
            let (g, d) = cube_components();
            vec![
                [v(g, 0.0, d), v(-g, 0.0, d)],
                [v(0.0, -g, d), v(0.0, g, d)],
            ]
        }
        6 => {
            let (a, b) = icosahedron_components();
            vec![
                [v(a, 0.0, b), v(-a, 0.0, b)],
                [v(0.0, -b, a), v(0.0, -b, -a)],
                [v(b, -a, 0.0), v(b, a, 0.0)],
            ]
        }
        10 => {
            let (g, d) = cube_components();
            let (p, q, r, s, t, u) = dodecahedron_components();
            vec![
                [v(g, 0.0, d), v(-g, 0.0, d)],
                [v(0.0, g, d), v(-r, -r, s)],
                [v(-q, p, 0.0), v(0.0, -g, d)],
                [v(-r, -r, -s), v(t, -t, u)],
                [v(p, -q, 0.0), v(-t, t, u)],
            ]
        }
        _ => unreachable!(),
    };
    Ok(AliceDirectionTable { n, entries })
}

/// (sqrt(2/3), sqrt(1/3)): components of the cube-vertex directions.
pub fn cube_components() -> (f64, f64) {
    ((2f64 / 3.0).sqrt(), (1f64 / 3.0).sqrt())
}

/// (alpha, beta) with alpha = sqrt(50 + 10 sqrt(5))/10: icosahedron vertices.
pub fn icosahedron_components() -> (f64, f64) {
    let s5 = 5f64.sqrt();
    ((50.0 + 10.0 * s5).sqrt() / 10.0, (50.0 - 10.0 * s5).sqrt() / 10.0)
}

/// Recurring components of the dodecahedron-vertex directions.
pub fn dodecahedron_components() -> (f64, f64, f64, f64, f64, f64) {
    let s5 = 5f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let p = 1.0 / s6;
    let q = s5 / s6;
    let r = std::f64::consts::SQRT_2 / (15f64.sqrt() - s3);
    let s = (s5 - 1.0) / (2.0 * s3);
    let t = (s5 - 1.0) / (2.0 * s6);
    let u = 2.0 / (15f64.sqrt() - s3);
    (p, q, r, s, t, u)
}

/// How a success probability was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComputationMethod {
    Exact,
    MonteCarlo,
}

/// Optimal probe and strategy attaining a single-qubit bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundWitness {
    pub probe: BlochVector,
    pub strategy: GuessStrategy,
}

/// Success probability plus provenance.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolResult {
    pub success_probability: f64,
    pub method: ComputationMethod,
    /// Zero for exact results.
    pub std_error: f64,
    pub witness: Option<BoundWitness>,
}

impl ProtocolResult {
    pub fn exact(p: f64) -> Self {
        ProtocolResult {
            success_probability: p,
            method: ComputationMethod::Exact,
            std_error: 0.0,
            witness: None,
        }
    }
}

/// Joint probabilities p[j][b] of (auxiliary outcome j, signal outcome b)
/// for one dilation pass of the prepared probe, per gate:
/// Tr[U (|0><0| (x) g rho g†) U† (Pi_j (x) Pi_b)].
pub(crate) fn gate_outcome_probs(
    u: &ComplexMatrix,
    gates: &[ComplexMatrix],
    probe: &ComplexMatrix,
) -> Vec<[[f64; 2]; 2]> {
    let udag = u.dagger();
    gates
        .iter()
        .map(|g| {
            let evolved = &(g * probe) * &g.dagger();
            let mut input = ComplexMatrix::zeros(4, 4);
            for r in 0..2 {
                for c in 0..2 {
                    input[(r, c)] = evolved[(r, c)];
                }
            }
            let output = &(u * &input) * &udag;
            // (Pi_j (x) Pi_b) picks out the diagonal entry 2j + b
            [
                [output[(0, 0)].re, output[(1, 1)].re],
                [output[(2, 2)].re, output[(3, 3)].re],
            ]
        })
        .collect()
}

fn check_probe(probe: &DensityMatrix) -> Result<()> {
    if probe.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "probe must be a qubit state, got dimension {}",
            probe.dim()
        )));
    }
    Ok(())
}

fn check_strategy(strategy: &GuessStrategy, gates: usize) -> Result<()> {
    if strategy.gate_count() != gates {
        return Err(Error::StrategyGateMismatch {
            strategy: strategy.gate_count(),
            gates,
        });
    }
    Ok(())
}

/// Per-gate success probabilities sum_b p[guess(m, b)][b] of a strategy.
pub fn single_qubit_success_per_gate(
    family: &SubchannelFamily,
    strategy: &GuessStrategy,
    probe: &DensityMatrix,
) -> Result<Vec<f64>> {
    check_probe(probe)?;
    check_strategy(strategy, family.gate_count())?;
    let probs = gate_outcome_probs(&family.u, &family.gates, probe.matrix());
    Ok(probs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            (0..2u8)
                .map(|b| p[strategy.guess(k, b) as usize][b as usize])
                .sum()
        })
        .collect())
}

/// Average over gates of the per-gate success probabilities:
/// (1/m) sum_m sum_b Tr[U (|0><0| (x) g_m rho g_m†) U† (Pi_guess (x) Pi_b)].
pub fn single_qubit_success(
    family: &SubchannelFamily,
    strategy: &GuessStrategy,
    probe: &DensityMatrix,
) -> Result<f64> {
    let per_gate = single_qubit_success_per_gate(family, strategy, probe)?;
    Ok(per_gate.iter().sum::<f64>() / per_gate.len() as f64)
}

/// The Hermitian observable O_s with Tr[O_s rho] equal to the strategy's
/// success probability: O_s = (1/m) sum_m g_m† (sum_b A_guess† Pi_b A_guess) g_m.
pub fn strategy_observable(
    family: &SubchannelFamily,
    strategy: &GuessStrategy,
) -> Result<ComplexMatrix> {
    check_strategy(strategy, family.gate_count())?;
    Ok(observable_from_blocks(
        &family.a0,
        &family.a1,
        &family.gates,
        strategy,
    ))
}

fn observable_from_blocks(
    a0: &ComplexMatrix,
    a1: &ComplexMatrix,
    gates: &[ComplexMatrix],
    strategy: &GuessStrategy,
) -> ComplexMatrix {
    let z = MeasurementSetting::along(0.0, 0.0, 1.0);
    let pi = [
        projector(&z, 0).expect("unit direction"),
        projector(&z, 1).expect("unit direction"),
    ];
    let blocks = [a0, a1];
    // W[j][b] = A_j† Pi_b A_j
    let w: Vec<Vec<ComplexMatrix>> = (0..2)
        .map(|j| {
            (0..2)
                .map(|b| &(&blocks[j].dagger() * &pi[b]) * blocks[j])
                .collect()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(2, 2);
    for (k, g) in gates.iter().enumerate() {
        let mut per_gate = ComplexMatrix::zeros(2, 2);
        for b in 0..2u8 {
            per_gate = &per_gate + &w[strategy.guess(k, b) as usize][b as usize];
        }
        total = &total + &(&(&g.dagger() * &per_gate) * g);
    }
    total.scale_re(1.0 / gates.len() as f64)
}

fn bloch_of_pure(vec: &[num_complex::Complex64]) -> BlochVector {
    let w = vec[0].conj() * vec[1];
    BlochVector::new(
        2.0 * w.re,
        2.0 * w.im,
        vec[0].norm_sqr() - vec[1].norm_sqr(),
    )
}

fn bound_from_blocks(
    a0: &ComplexMatrix,
    a1: &ComplexMatrix,
    gates: &[ComplexMatrix],
) -> ProtocolResult {
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    for strategy in GuessStrategy::enumerate(gates.len()) {
        let observable = observable_from_blocks(a0, a1, gates, &strategy);
        let (lambda, vec) =
            max_eigenvalue_hermitian(&observable).expect("observable is Hermitian");
        // the margin keeps the lexicographically first of the co-optimal
        // strategies in the face of eigenvalue rounding
        if lambda > best + 1e-12 {
            best = lambda;
            witness = Some(BoundWitness {
                probe: bloch_of_pure(&vec),
                strategy,
            });
        }
    }
    ProtocolResult {
        success_probability: best,
        method: ComputationMethod::Exact,
        std_error: 0.0,
        witness,
    }
}

/// Exact single-qubit bound: success is linear in the probe, so the optimum
/// over states is the largest eigenvalue of the strategy observable,
/// maximized over all 4^m strategies.
pub fn single_qubit_bound(family: &SubchannelFamily) -> ProtocolResult {
    bound_from_blocks(&family.a0, &family.a1, &family.gates)
}

/// Evenly distributed points on the unit sphere (Fibonacci lattice).
pub fn fibonacci_sphere(count: usize) -> Vec<BlochVector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * i as f64;
            BlochVector::new(r * theta.cos(), r * theta.sin(), z)
        })
        .collect()
}

/// Grid-search lower bound on [`single_qubit_bound`]: maximizes the direct
/// trace-formula success over a Fibonacci lattice of pure probes and all
/// strategies. Converges to the exact bound from below as the grid grows.
pub fn single_qubit_bound_grid_oracle(family: &SubchannelFamily, grid_size: usize) -> f64 {
    let m = family.gate_count();
    let mut best = 0.0f64;
    for point in fibonacci_sphere(grid_size) {
        let probe = point.density().expect("lattice points are unit vectors");
        let probs = gate_outcome_probs(&family.u, &family.gates, probe.matrix());
        // per-gate contribution of each rule
        let contrib: Vec<[f64; 4]> = probs
            .iter()
            .map(|p| {
                [
                    p[0][0] + p[0][1],
                    p[1][0] + p[1][1],
                    p[0][0] + p[1][1],
                    p[1][0] + p[0][1],
                ]
            })
            .collect();
        let total = 4usize.pow(m as u32);
        for idx in 0..total {
            let mut sum = 0.0;
            for (k, c) in contrib.iter().enumerate() {
                sum += c[(idx >> (2 * (m - 1 - k))) & 3];
            }
            let value = sum / m as f64;
            if value > best {
                best = value;
            }
        }
    }
    best
}

/// Embeds a state of Alice (x) signal into Alice (x) auxiliary (x) signal
/// with the auxiliary prepared in |0>.
fn embed_with_ancilla(rho_ab: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |row, col| {
        let (a, x, s) = (row / 4, (row / 2) % 2, row % 2);
        let (a2, x2, s2) = (col / 4, (col / 2) % 2, col % 2);
        if x == 0 && x2 == 0 {
            rho_ab[(2 * a + s, 2 * a2 + s2)]
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    })
}

/// Two-qubit protocol success on the full Alice (x) auxiliary (x) signal
/// space. Bob applies g then the dilation; Alice measures along the
/// direction picked by (b, gate) and the guess is j = a.
fn two_qubit_trace(
    rho_ab: &DensityMatrix,
    u: &ComplexMatrix,
    gates: &[ComplexMatrix],
    direction: impl Fn(u8, usize) -> BlochVector,
) -> Result<f64> {
    if rho_ab.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit protocol needs a 4x4 state, got dimension {}",
            rho_ab.dim()
        )));
    }
    let id2 = ComplexMatrix::identity(2);
    let z = MeasurementSetting::along(0.0, 0.0, 1.0);
    let embedded = embed_with_ancilla(rho_ab.matrix());
    let mut total = 0.0;
    for (k, g) in gates.iter().enumerate() {
        let bob = u * &tensor(&id2, g);
        let full = tensor(&id2, &bob);
        let output = &(&full * &embedded) * &full.dagger();
        for j in 0..2u8 {
            for b in 0..2u8 {
                let alice = projector(&MeasurementSetting::new(direction(b, k)), j)?;
                let effect = tensor(
                    &alice,
                    &tensor(&projector(&z, j)?, &projector(&z, b)?),
                );
                total += (&effect * &output).trace().re;
            }
        }
    }
    Ok(total / gates.len() as f64)
}

/// Success probability of the two-qubit protocol for an arbitrary two-qubit
/// state, computed by the full trace on the 8-dimensional space.
pub fn two_qubit_success(
    rho_ab: &DensityMatrix,
    family: &SubchannelFamily,
    table: &AliceDirectionTable,
) -> Result<ProtocolResult> {
    if table.n != family.n || table.gate_count() != family.gate_count() {
        return Err(Error::DimensionMismatch(format!(
            "direction table for n={} used with family n={}",
            table.n, family.n
        )));
    }
    let p = two_qubit_trace(rho_ab, &family.u, &family.gates, |b, k| {
        *table.direction(b, k)
    })?;
    Ok(ProtocolResult::exact(p))
}

/// Bell-diagonal protocol (t_y = t_x): Alice measures along -z when b = 0
/// and along +x when b = 1. Computed by the full protocol trace; equals
/// (2 + t_x - t_z)/4 on the positivity triangle.
pub fn bell_diagonal_success(tx: f64, tz: f64) -> Result<ProtocolResult> {
    let rho = bell_diagonal_state(tx, tx, tz)?;
    let family = build_bell_diagonal_family();
    let gates = vec![ComplexMatrix::identity(2)];
    let p = two_qubit_trace(&rho, &family.u, &gates, |b, _| {
        if b == 0 {
            BlochVector::new(0.0, 0.0, -1.0)
        } else {
            BlochVector::new(1.0, 0.0, 0.0)
        }
    })?;
    Ok(ProtocolResult::exact(p))
}

/// Single-qubit bound of the Bell-diagonal family, via the same strategy
/// enumeration used for the Werner families (single identity gate).
pub fn bell_diagonal_bound() -> ProtocolResult {
    let family = build_bell_diagonal_family();
    bound_from_blocks(&family.a0, &family.a1, &[ComplexMatrix::identity(2)])
}
