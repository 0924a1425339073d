//! Simulation toolkit for subchannel discrimination with two-qubit
//! resources: constructs the per-setting subchannel families, computes
//! exact single-qubit discrimination bounds and two-qubit success
//! probabilities, classifies Werner states by nonlocality regime, emulates
//! finite photon-counting statistics, and checks the wave-plate recipes
//! that realize the gate sets.

pub mod channels;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod protocols;
pub mod reference;
pub mod states;
pub mod steering;
pub mod waveplates;

pub use channels::{
    build_bell_diagonal_family, build_family, design_conditions_check, validate_channel,
    BellDiagonalFamily, SubchannelFamily, ValidationReport, SUPPORTED_SETTINGS,
};
pub use error::{Error, Result};
pub use experiment::{estimate_eta_by_fidelity, simulate_run, CountRecord, EstimateResult};
pub use matrix::{max_eigenvalue_hermitian, tensor, ComplexMatrix};
pub use protocols::{
    alice_directions, bell_diagonal_bound, bell_diagonal_success, single_qubit_bound,
    single_qubit_bound_grid_oracle, single_qubit_success, single_qubit_success_per_gate,
    two_qubit_success, AliceDirectionTable, BoundWitness, ComputationMethod, GuessRule,
    GuessStrategy, ProtocolResult,
};
pub use states::{
    bell_diagonal_state, bell_phi, chsh_optimal_settings, chsh_parameter, concurrence, fidelity,
    projector, werner_state, BlochVector, DensityMatrix, MeasurementSetting,
};
pub use steering::{classify_werner, lhs_bound, sweep_werner, NonlocalityClass, SweepRecord};
pub use waveplates::{
    compile, distance_up_to_phase, jones_hwp, jones_qwp, verify_recipes, PlateKind, RecipeCheck,
    WavePlate, WavePlateSequence,
};

/// Formats a float with nine significant digits (scientific notation), the
/// fixed representation used in all CSV output.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}
