//! Local-hidden-state bounds and nonlocality classification of Werner
//! states, plus the sweep generator behind the figure data.

use serde::Serialize;

use crate::channels::{build_family, check_settings};
use crate::error::Result;
use crate::protocols::{alice_directions, single_qubit_bound, two_qubit_success};
use crate::sig9;
use crate::states::werner_state;
use crate::Error;

/// Werner visibility above which the Bell-CHSH inequality is violated.
pub const CHSH_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Werner visibility at or below which a local-hidden-variable model is
/// known to exist. External constant; not derivable inside this toolkit.
pub const BELL_LOCAL_THRESHOLD: f64 = 0.683;

/// Werner visibility above which the state is entangled.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1.0 / 3.0;

/// Local-hidden-state visibility bound eta*_n for Werner states under n
/// regularly spaced measurement settings.
pub fn lhs_bound(n: usize) -> Result<f64> {
    check_settings(n)?;
    let s5 = 5f64.sqrt();
    Ok(match n {
        2 => std::f64::consts::FRAC_1_SQRT_2,
        3 | 4 => 1.0 / 3f64.sqrt(),
        // follows from the bound (7 + sqrt(5))/12 through eta* = 2 P - 1
        6 => (1.0 + s5) / 6.0,
        10 => (3.0 + s5) / 10.0,
        _ => unreachable!(),
    })
}

/// Nonlocality regime flags for a Werner state. All "above threshold"
/// flags use strict inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NonlocalityClass {
    pub separable: bool,
    pub entangled: bool,
    pub steerable_at_n: bool,
    pub chsh_violating: bool,
    pub known_bell_local: bool,
}

/// Classifies a Werner state at visibility `eta` under `n` settings.
pub fn classify_werner(eta: f64, n: usize) -> Result<NonlocalityClass> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(Error::EtaOutOfRange(eta));
    }
    let entangled = eta > ENTANGLEMENT_THRESHOLD;
    Ok(NonlocalityClass {
        separable: !entangled,
        entangled,
        steerable_at_n: eta > lhs_bound(n)?,
        chsh_violating: eta > CHSH_THRESHOLD,
        known_bell_local: eta <= BELL_LOCAL_THRESHOLD,
    })
}

/// One point of a visibility sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub eta: f64,
    pub n: usize,
    pub p_two_qubit: f64,
    pub p_single_bound: f64,
    pub class: NonlocalityClass,
}

/// Exact two-qubit success and classification across a visibility grid.
/// The single-qubit bound is computed once per call.
pub fn sweep_werner(eta_grid: &[f64], n: usize) -> Result<Vec<SweepRecord>> {
    let family = build_family(n)?;
    let table = alice_directions(n)?;
    let p_single = single_qubit_bound(&family).success_probability;
    eta_grid
        .iter()
        .map(|&eta| {
            let rho = werner_state(eta)?;
            let p = two_qubit_success(&rho, &family, &table)?.success_probability;
            Ok(SweepRecord {
                eta,
                n,
                p_two_qubit: p,
                p_single_bound: p_single,
                class: classify_werner(eta, n)?,
            })
        })
        .collect()
}

/// Header of the sweep CSV schema.
pub const SWEEP_CSV_HEADER: &str =
    "eta,n,p_two_qubit,p_single_bound,entangled,steerable,chsh_violating,bell_local";

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            sig9(self.eta),
            self.n,
            sig9(self.p_two_qubit),
            sig9(self.p_single_bound),
            self.class.entangled,
            self.class.steerable_at_n,
            self.class.chsh_violating,
            self.class.known_bell_local,
        )
    }
}
