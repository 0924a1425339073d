//! Construction and validation of the subchannel families.
//!
//! Each supported setting count n carries a fixed single-qubit rotation E,
//! three fixed single-qubit gates V1-V3, two CNOTs on the auxiliary/signal
//! pair, and a gate set {g_m}. The dilation
//!
//!   U = (I (x) V3) . CNOT2 . (I (x) V2) . CNOT1 . (E (x) V1)
//!
//! acts on auxiliary (first register) and signal (second register); its
//! 2x2 blocks are the intermediate subchannels A_0 and A_1 and the Kraus
//! operators follow as K_ij = |i><i| . A_j.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix, STRUCTURAL_TOL};
use crate::states::BlochVector;

/// Setting counts with a defined subchannel family.
pub const SUPPORTED_SETTINGS: [usize; 5] = [2, 3, 4, 6, 10];

/// Checks a setting count and reports the supported values on failure.
pub fn check_settings(n: usize) -> Result<()> {
    if SUPPORTED_SETTINGS.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedSettings(n))
    }
}

/// Full operator bundle for one setting count.
#[derive(Clone, Debug, Serialize)]
pub struct SubchannelFamily {
    pub n: usize,
    pub e: ComplexMatrix,
    pub v1: ComplexMatrix,
    pub v2: ComplexMatrix,
    pub v3: ComplexMatrix,
    pub cnot1: ComplexMatrix,
    pub cnot2: ComplexMatrix,
    /// Block dilation [[A0, -A1], [A1, A0]], auxiliary register first.
    pub u: ComplexMatrix,
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    /// K_00, K_01, K_10, K_11 with K_ij = |i><i| . A_j.
    pub kraus: [ComplexMatrix; 4],
    /// g_1..g_m; g_1 is always the identity.
    pub gates: Vec<ComplexMatrix>,
}

impl SubchannelFamily {
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// JSON document with every matrix as `[re, im]` entry pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("family serialization cannot fail")
    }
}

/// The intermediate subchannels tailored to Bell-diagonal states, with the
/// same dilation layout as [`SubchannelFamily`].
#[derive(Clone, Debug, Serialize)]
pub struct BellDiagonalFamily {
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub kraus: [ComplexMatrix; 4],
    pub u: ComplexMatrix,
}

fn rotation(c: f64, s: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![c, -s], vec![s, c]])
}

fn e_matrix(n: usize) -> ComplexMatrix {
    let pi8 = std::f64::consts::PI / 8.0;
    match n {
        2 | 3 => rotation(pi8.cos(), pi8.sin()),
        4 | 10 => rotation(
            ((3.0 + 3f64.sqrt()) / 6.0).sqrt(),
            ((3.0 - 3f64.sqrt()) / 6.0).sqrt(),
        ),
        6 => {
            let w = (2.0 - 2.0 / 5f64.sqrt()).sqrt();
            rotation(0.5 * (2.0 + w).sqrt(), 0.5 * (2.0 - w).sqrt())
        }
        _ => unreachable!("unsupported setting count"),
    }
}

fn gate_set(n: usize) -> Vec<ComplexMatrix> {
    let c = Complex64::new;
    let id = ComplexMatrix::identity(2);
    match n {
        2 => vec![id],
        3 => {
            let s2 = std::f64::consts::SQRT_2;
            let g2 = ComplexMatrix::from_rows(&[
                vec![c(s2 / 2.0, 0.5), c(0.0, 0.5)],
                vec![c(0.0, 0.5), c(s2 / 2.0, -0.5)],
            ]);
            let g3 = ComplexMatrix::from_rows(&[
                vec![c(-s2 / 2.0, 0.5), c(0.0, -0.5)],
                vec![c(0.0, -0.5), c(-s2 / 2.0, -0.5)],
            ]);
            vec![id, g2, g3]
        }
        4 => {
            let g2 = ComplexMatrix::from_rows(&[
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, -1.0)],
            ]);
            vec![id, g2]
        }
        6 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let g2 = ComplexMatrix::from_rows(&[
                vec![c(h, 0.0), c(0.0, -h)],
                vec![c(h, 0.0), c(0.0, h)],
            ]);
            let g3 = ComplexMatrix::from_rows(&[
                vec![c(h, 0.0), c(h, 0.0)],
                vec![c(0.0, h), c(0.0, -h)],
            ]);
            vec![id, g2, g3]
        }
        10 => {
            let s5 = 5f64.sqrt();
            let s2 = std::f64::consts::SQRT_2;
            let off = (s5 - 1.0) / (4.0 * s2);
            let g2 = ComplexMatrix::from_rows(&[
                vec![c((1.0 + s5) / 4.0, -0.5), c(-off, off)],
                vec![c(off, off), c((1.0 + s5) / 4.0, 0.5)],
            ]);
            let g3 = &g2 * &g2;
            let g4 = &g3 * &g2;
            let g5 = &g4 * &g2;
            vec![id, g2, g3, g4, g5]
        }
        _ => unreachable!("unsupported setting count"),
    }
}

fn v_gates() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v1 = ComplexMatrix::from_real_rows(&[vec![h, -h], vec![h, h]]);
    let v2 = ComplexMatrix::from_real_rows(&[vec![h, h], vec![-h, h]]);
    let v3 = v1.clone();
    (v1, v2, v3)
}

fn cnot_gates() -> (ComplexMatrix, ComplexMatrix) {
    // CNOT1: control on the auxiliary register, target on the signal.
    let cnot1 = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ]);
    // CNOT2: control on the signal register, target on the auxiliary.
    let cnot2 = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
    ]);
    (cnot1, cnot2)
}

fn kraus_from_blocks(a0: &ComplexMatrix, a1: &ComplexMatrix) -> [ComplexMatrix; 4] {
    let ket = |i: usize| {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        m
    };
    [
        &ket(0) * a0,
        &ket(0) * a1,
        &ket(1) * a0,
        &ket(1) * a1,
    ]
}

/// Builds the full subchannel family for a supported setting count.
pub fn build_family(n: usize) -> Result<SubchannelFamily> {
    check_settings(n)?;
    let e = e_matrix(n);
    let (v1, v2, v3) = v_gates();
    let (cnot1, cnot2) = cnot_gates();
    let id = ComplexMatrix::identity(2);

    let u = &(&(&tensor(&id, &v3) * &cnot2) * &tensor(&id, &v2)) * &(&cnot1 * &tensor(&e, &v1));
    let a0 = u.block(0, 0, 2, 2);
    let a1 = u.block(2, 0, 2, 2);
    let kraus = kraus_from_blocks(&a0, &a1);
    let gates = gate_set(n);

    debug_assert!(u.is_unitary(STRUCTURAL_TOL));
    debug_assert!(block_form_defect(&u, &a0, &a1) <= STRUCTURAL_TOL);

    Ok(SubchannelFamily {
        n,
        e,
        v1,
        v2,
        v3,
        cnot1,
        cnot2,
        u,
        a0,
        a1,
        kraus,
        gates,
    })
}

/// max-entry deviation of `u` from [[A0, -A1], [A1, A0]].
pub fn block_form_defect(u: &ComplexMatrix, a0: &ComplexMatrix, a1: &ComplexMatrix) -> f64 {
    let mut rebuilt = ComplexMatrix::zeros(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            rebuilt[(r, c)] = a0[(r, c)];
            rebuilt[(r, c + 2)] = -a1[(r, c)];
            rebuilt[(r + 2, c)] = a1[(r, c)];
            rebuilt[(r + 2, c + 2)] = a0[(r, c)];
        }
    }
    u.max_abs_diff(&rebuilt)
}

/// Builds the Bell-diagonal family with the printed intermediate subchannels.
pub fn build_bell_diagonal_family() -> BellDiagonalFamily {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a0 = ComplexMatrix::from_real_rows(&[vec![h, 0.0], vec![0.5, 0.5]]);
    let a1 = ComplexMatrix::from_real_rows(&[vec![0.0, h], vec![0.5, -0.5]]);
    let kraus = kraus_from_blocks(&a0, &a1);
    let mut u = ComplexMatrix::zeros(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            u[(r, c)] = a0[(r, c)];
            u[(r, c + 2)] = -a1[(r, c)];
            u[(r + 2, c)] = a1[(r, c)];
            u[(r + 2, c + 2)] = a0[(r, c)];
        }
    }
    debug_assert!(u.is_unitary(STRUCTURAL_TOL));
    BellDiagonalFamily { a0, a1, kraus, u }
}

/// Channel-validity diagnostics for a Kraus decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// max entry of |sum K†K - I|.
    pub completeness_defect: f64,
    /// Largest eigenvalue of K†K per subchannel; trace non-increase requires
    /// all of them <= 1 + 1e-10.
    pub effect_max_eigenvalues: Vec<f64>,
    /// Minimum Choi eigenvalue per subchannel.
    pub choi_min_eigenvalues: Vec<f64>,
    /// Minimum Choi eigenvalue of the total channel.
    pub total_choi_min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn trace_non_increasing(&self) -> bool {
        self.effect_max_eigenvalues.iter().all(|&l| l <= 1.0 + 1e-10)
    }

    pub fn completely_positive(&self) -> bool {
        self.choi_min_eigenvalues.iter().all(|&l| l >= -1e-10)
            && self.total_choi_min_eigenvalue >= -1e-10
    }

    pub fn is_valid(&self) -> bool {
        self.completeness_defect <= STRUCTURAL_TOL
            && self.trace_non_increasing()
            && self.completely_positive()
    }
}

/// Choi matrix (I (x) K) |Omega><Omega| (I (x) K)† with unnormalized
/// |Omega> = sum_i |ii>.
pub fn choi_matrix(k: &ComplexMatrix) -> ComplexMatrix {
    let d = k.rows();
    let d2 = d * d;
    let mut omega = ComplexMatrix::zeros(d2, 1);
    for i in 0..d {
        omega[(i * d + i, 0)] = Complex64::new(1.0, 0.0);
    }
    let ext = tensor(&ComplexMatrix::identity(d), k);
    let v = &ext * &omega;
    &v * &v.dagger()
}

/// Validates a Kraus decomposition: completeness, trace non-increase of each
/// subchannel, and complete positivity through Choi eigenvalues.
pub fn validate_channel(kraus: &[ComplexMatrix]) -> Result<ValidationReport> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty Kraus list".into()))?;
    let d = first.rows();
    if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
        return Err(Error::DimensionMismatch(
            "Kraus operators must be square matrices of equal dimension".into(),
        ));
    }

    let mut sum = ComplexMatrix::zeros(d, d);
    let mut effect_max = Vec::with_capacity(kraus.len());
    let mut choi_min = Vec::with_capacity(kraus.len());
    let mut total_choi = ComplexMatrix::zeros(d * d, d * d);
    for k in kraus {
        let effect = &k.dagger() * k;
        let eig = effect.hermitian_eigen()?;
        effect_max.push(*eig.eigenvalues.last().expect("non-empty spectrum"));
        sum = &sum + &effect;
        let choi = choi_matrix(k);
        choi_min.push(choi.min_eigenvalue()?);
        total_choi = &total_choi + &choi;
    }

    Ok(ValidationReport {
        completeness_defect: sum.max_abs_diff(&ComplexMatrix::identity(d)),
        effect_max_eigenvalues: effect_max,
        choi_min_eigenvalues: choi_min,
        total_choi_min_eigenvalue: total_choi.min_eigenvalue()?,
    })
}

/// Checks M against lambda * (I + n.sigma)/2 for the nonnegative lambda = Tr M.
fn proportional_to_projector(m: &ComplexMatrix, direction: &BlochVector, tol: f64) -> bool {
    let lambda = m.trace();
    if lambda.im.abs() > tol || lambda.re < -tol {
        return false;
    }
    let proj = (&ComplexMatrix::identity(2) + &direction.dot_sigma()).scale_re(0.5);
    m.max_abs_diff(&proj.scale_re(lambda.re)) <= tol
}

/// Verifies the four design conditions of the two-setting family: each
/// A_j† |i><i| A_j must be proportional to the projector onto the stated
/// measurement direction (outcome 0 of n_i for A_0, its antipode for A_1).
pub fn design_conditions_check(
    family: &SubchannelFamily,
    n0: &BlochVector,
    n1: &BlochVector,
) -> bool {
    let tol = 1e-10;
    let ket = |i: usize| {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        m
    };
    let conj = |a: &ComplexMatrix, i: usize| &(&a.dagger() * &ket(i)) * a;
    proportional_to_projector(&conj(&family.a0, 0), n0, tol)
        && proportional_to_projector(&conj(&family.a1, 0), &n0.negate(), tol)
        && proportional_to_projector(&conj(&family.a0, 1), n1, tol)
        && proportional_to_projector(&conj(&family.a1, 1), &n1.negate(), tol)
}
