//! Reference optima of the single-qubit protocol: for every supported
//! setting count, the co-optimal guessing strategies with their optimal
//! probe states and the per-gate success probabilities they attain. Every
//! value is kept in closed form; the verification suite reproduces each row
//! through the protocol trace.

use crate::channels::check_settings;
use crate::error::Result;
use crate::protocols::{
    cube_components, dodecahedron_components, icosahedron_components, GuessRule, GuessStrategy,
};
use crate::states::BlochVector;

/// One reference optimum: a strategy, its optimal probe, and the success
/// probability per gate (whose mean is the single-qubit bound).
#[derive(Clone, Debug)]
pub struct StrategyOptimum {
    pub strategy: GuessStrategy,
    pub probe: BlochVector,
    pub per_gate: Vec<f64>,
}

impl StrategyOptimum {
    pub fn average(&self) -> f64 {
        self.per_gate.iter().sum::<f64>() / self.per_gate.len() as f64
    }
}

use GuessRule::{Const0 as C0, Const1 as C1, FlipOutcome as NB, MatchOutcome as B};

fn row(rules: &[GuessRule], probe: (f64, f64, f64), per_gate: &[f64]) -> StrategyOptimum {
    StrategyOptimum {
        strategy: GuessStrategy::new(rules.to_vec()),
        probe: BlochVector::new(probe.0, probe.1, probe.2),
        per_gate: per_gate.to_vec(),
    }
}

/// The co-optimal strategy rows of the n-setting single-qubit protocol.
pub fn strategy_optima(n: usize) -> Result<Vec<StrategyOptimum>> {
    check_settings(n)?;
    let s2 = std::f64::consts::SQRT_2;
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let h = 1.0 / s2;
    let p2 = (1.0 + 1.0 / s2) / 2.0;
    let p3 = (1.0 + 1.0 / s3) / 2.0;

    Ok(match n {
        2 => vec![
            row(&[C0], (0.0, 0.0, 1.0), &[p2]),
            row(&[C1], (0.0, 0.0, -1.0), &[p2]),
            row(&[B], (1.0, 0.0, 0.0), &[p2]),
            row(&[NB], (-1.0, 0.0, 0.0), &[p2]),
        ],
        3 => {
            let a = 1.0 / s3;
            let b = s2 / s3;
            vec![
                row(&[C0, C0, C0], (0.0, -a, b), &[p3; 3]),
                row(&[C1, C1, C1], (0.0, a, -b), &[p3; 3]),
                row(&[C0, B, NB], (0.0, a, b), &[p3; 3]),
                row(&[C1, NB, B], (0.0, -a, -b), &[p3; 3]),
                row(&[B, B, C1], (b, a, 0.0), &[p3; 3]),
                row(&[NB, NB, C0], (-b, -a, 0.0), &[p3; 3]),
                row(&[B, C0, B], (b, -a, 0.0), &[p3; 3]),
                row(&[NB, C1, NB], (-b, a, 0.0), &[p3; 3]),
            ]
        }
        4 => vec![
            row(&[C0, C0], (0.0, 0.0, 1.0), &[p3; 2]),
            row(&[C1, C1], (0.0, 0.0, -1.0), &[p3; 2]),
            row(&[B, B], (h, h, 0.0), &[p3; 2]),
            row(&[NB, NB], (-h, -h, 0.0), &[p3; 2]),
            row(&[B, NB], (h, -h, 0.0), &[p3; 2]),
            row(&[NB, B], (-h, h, 0.0), &[p3; 2]),
        ],
        6 => {
            let (a, b) = icosahedron_components();
            let hi = (15.0 + s5) / 20.0;
            let lo = (5.0 + s5) / 10.0;
            vec![
                row(&[B, B, C0], (a, 0.0, b), &[hi, lo, lo]),
                row(&[NB, NB, C1], (-a, 0.0, -b), &[hi, lo, lo]),
                row(&[NB, B, C1], (-a, 0.0, b), &[hi, lo, lo]),
                row(&[B, NB, C0], (a, 0.0, -b), &[hi, lo, lo]),
                row(&[B, C0, B], (b, a, 0.0), &[lo, lo, hi]),
                row(&[NB, C1, NB], (-b, -a, 0.0), &[lo, lo, hi]),
                row(&[NB, C0, B], (-b, a, 0.0), &[lo, lo, hi]),
                row(&[B, C1, NB], (b, -a, 0.0), &[lo, lo, hi]),
                row(&[C0, B, B], (0.0, b, a), &[lo, hi, lo]),
                row(&[C1, NB, NB], (0.0, -b, -a), &[lo, hi, lo]),
                row(&[C0, B, NB], (0.0, -b, a), &[lo, hi, lo]),
                row(&[C1, NB, B], (0.0, b, -a), &[lo, hi, lo]),
            ]
        }
        10 => {
            let (g, d) = cube_components();
            let (p, q, r, s, t, u) = dodecahedron_components();
            let w1 = 5.0 / 6.0;
            let w2 = 2.0 / 3.0;
            let w3 = (7.0 + s5) / 12.0;
            let w4 = (3.0 + s5) / 6.0;
            vec![
                row(&[B, B, NB, NB, C0], (g, 0.0, d), &[w1, w2, w3, w4, w2]),
                row(&[B, NB, NB, C0, B], (p, q, 0.0), &[w2, w3, w4, w2, w1]),
                row(&[NB, NB, C0, B, B], (-r, r, -s), &[w3, w4, w2, w1, w2]),
                row(&[NB, C0, B, B, NB], (-q, -p, 0.0), &[w4, w2, w1, w2, w3]),
                row(&[C0, B, B, NB, NB], (0.0, -g, d), &[w2, w1, w2, w3, w4]),
                row(&[NB, NB, B, B, C1], (-g, 0.0, -d), &[w1, w2, w3, w4, w2]),
                row(&[NB, B, B, C1, NB], (-p, -q, 0.0), &[w2, w3, w4, w2, w1]),
                row(&[B, B, C1, NB, NB], (r, -r, s), &[w3, w4, w2, w1, w2]),
                row(&[B, C1, NB, NB, B], (q, p, 0.0), &[w4, w2, w1, w2, w3]),
                row(&[C1, NB, NB, B, B], (0.0, g, -d), &[w2, w1, w2, w3, w4]),
                row(&[NB, C0, C0, C0, NB], (-g, 0.0, d), &[w1, w3, w3, w2, w3]),
                row(&[C0, C0, C0, NB, NB], (-t, -t, u), &[w3, w3, w2, w3, w1]),
                row(&[C0, C0, NB, NB, C0], (t, t, u), &[w3, w2, w3, w1, w3]),
                row(&[C0, NB, NB, C0, C0], (0.0, g, d), &[w2, w3, w1, w3, w3]),
                row(&[NB, NB, C0, C0, C0], (-r, r, s), &[w3, w1, w3, w3, w2]),
                row(&[B, C1, C1, C1, B], (g, 0.0, -d), &[w1, w3, w3, w2, w3]),
                row(&[C1, C1, C1, B, B], (t, t, -u), &[w3, w3, w2, w3, w1]),
                row(&[C1, C1, B, B, C1], (-t, -t, -u), &[w3, w2, w3, w1, w3]),
                row(&[C1, B, B, C1, C1], (0.0, -g, -d), &[w2, w3, w1, w3, w3]),
                row(&[B, B, C1, C1, C1], (r, -r, -s), &[w3, w1, w3, w3, w2]),
            ]
        }
        _ => unreachable!(),
    })
}

/// Closed-form single-qubit bound for each supported setting count.
pub fn exact_bound(n: usize) -> Result<f64> {
    check_settings(n)?;
    let s5 = 5f64.sqrt();
    Ok(match n {
        2 => (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0,
        3 | 4 => (1.0 + 1.0 / 3f64.sqrt()) / 2.0,
        6 => (7.0 + s5) / 12.0,
        10 => (13.0 + s5) / 20.0,
        _ => unreachable!(),
    })
}
