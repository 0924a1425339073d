//! Wire-format checks: family JSON export, sweep CSV schema, and matrix
//! round trips.

use proptest::prelude::*;
use steersd::matrix::ComplexMatrix;
use steersd::steering::{sweep_werner, SWEEP_CSV_HEADER};
use steersd::{build_family, sig9};

#[test]
fn family_export_carries_every_operator() {
    let family = build_family(10).unwrap();
    let doc = family.to_json();
    for key in ["n", "e", "v1", "v2", "v3", "cnot1", "cnot2", "u", "a0", "a1", "kraus", "gates"] {
        assert!(!doc[key].is_null(), "missing key {key}");
    }
    assert_eq!(doc["kraus"].as_array().unwrap().len(), 4);
    assert_eq!(doc["gates"].as_array().unwrap().len(), 5);
    // entries are [re, im] pairs
    let entry = &doc["u"]["entries"][0];
    assert!(entry.is_array() && entry.as_array().unwrap().len() == 2);

    // matrices deserialize back bit-identically
    let u: ComplexMatrix = serde_json::from_value(doc["u"].clone()).unwrap();
    assert!(u.approx_eq(&family.u, 0.0));
}

#[test]
fn sweep_csv_matches_schema() {
    let rows = sweep_werner(&[0.0, 0.45, 0.6, 0.75, 1.0], 10).unwrap();
    assert_eq!(
        SWEEP_CSV_HEADER,
        "eta,n,p_two_qubit,p_single_bound,entangled,steerable,chsh_violating,bell_local"
    );
    for row in &rows {
        let line = row.csv_row();
        assert_eq!(line.split(',').count(), 8);
    }
    // spot checks of the flags in the emitted text
    assert!(rows[1].csv_row().ends_with("true,false,false,true"));
    assert!(rows[2].csv_row().ends_with("true,true,false,true"));
    assert!(rows[3].csv_row().ends_with("true,true,true,false"));
}

#[test]
fn sig9_is_nine_significant_digits() {
    assert_eq!(sig9(0.5), "5.00000000e-1");
    assert_eq!(sig9(2.0 * std::f64::consts::SQRT_2), "2.82842712e0");
}

proptest! {
    #[test]
    fn matrix_json_roundtrip(entries in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 16)) {
        let m = ComplexMatrix::from_fn(4, 4, |r, c| {
            let (re, im) = entries[4 * r + c];
            num_complex::Complex64::new(re, im)
        });
        let json = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        prop_assert!(m.approx_eq(&back, 0.0));
    }
}
