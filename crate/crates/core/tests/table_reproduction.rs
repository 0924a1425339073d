//! Reproduces every reference strategy-table row through the protocol
//! trace: stated probe + stated strategy must give the stated per-gate
//! probabilities and their average.

use steersd::protocols::single_qubit_success_per_gate;
use steersd::reference::{exact_bound, strategy_optima};
use steersd::{build_family, SUPPORTED_SETTINGS};

#[test]
fn every_reference_row_is_reproduced() {
    for n in SUPPORTED_SETTINGS {
        let family = build_family(n).unwrap();
        for (idx, opt) in strategy_optima(n).unwrap().iter().enumerate() {
            let per_gate = single_qubit_success_per_gate(
                &family,
                &opt.strategy,
                &opt.probe.density().unwrap(),
            )
            .unwrap();
            assert_eq!(per_gate.len(), opt.per_gate.len());
            for (gate, (got, want)) in per_gate.iter().zip(&opt.per_gate).enumerate() {
                assert!(
                    (got - want).abs() < 1e-9,
                    "n={n} row {idx} gate {gate}: {got} vs {want}"
                );
            }
            let average = per_gate.iter().sum::<f64>() / per_gate.len() as f64;
            assert!(
                (average - opt.average()).abs() < 1e-9,
                "n={n} row {idx}: average {average}"
            );
        }
    }
}

#[test]
fn row_averages_equal_the_bound() {
    for n in SUPPORTED_SETTINGS {
        let bound = exact_bound(n).unwrap();
        for opt in strategy_optima(n).unwrap() {
            assert!((opt.average() - bound).abs() < 1e-9, "n={n}");
        }
    }
}

#[test]
fn six_and_ten_setting_averages_are_the_closed_forms() {
    let s5 = 5f64.sqrt();
    for opt in strategy_optima(6).unwrap() {
        assert!((opt.average() - (7.0 + s5) / 12.0).abs() < 1e-12);
    }
    for opt in strategy_optima(10).unwrap() {
        assert!((opt.average() - (13.0 + s5) / 20.0).abs() < 1e-12);
    }
}
