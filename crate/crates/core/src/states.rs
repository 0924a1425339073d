//! Qubit states, projective measurements, and two-qubit figures of merit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix, STRUCTURAL_TOL};

const SQRT_2_INV: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Eigenvalue floor when checking positivity of density matrices.
pub const PSD_FLOOR: f64 = -1e-10;

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
}

/// Real three-vector on (or inside) the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn negate(&self) -> Self {
        BlochVector::new(-self.x, -self.y, -self.z)
    }

    /// n . sigma
    pub fn dot_sigma(&self) -> ComplexMatrix {
        let xs = sigma_x().scale_re(self.x);
        let ys = sigma_y().scale_re(self.y);
        let zs = sigma_z().scale_re(self.z);
        &(&xs + &ys) + &zs
    }

    /// (I + n . sigma) / 2, valid for |n| <= 1.
    pub fn density(&self) -> Result<DensityMatrix> {
        if self.norm() > 1.0 + STRUCTURAL_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "Bloch vector norm {} exceeds 1",
                self.norm()
            )));
        }
        let m = (&ComplexMatrix::identity(2) + &self.dot_sigma()).scale_re(0.5);
        DensityMatrix::new(m)
    }
}

/// A projective qubit measurement direction. Outcome `a` corresponds to the
/// projector (I + (-1)^a n . sigma) / 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub direction: BlochVector,
}

impl MeasurementSetting {
    pub const fn new(direction: BlochVector) -> Self {
        MeasurementSetting { direction }
    }

    pub const fn along(x: f64, y: f64, z: f64) -> Self {
        MeasurementSetting::new(BlochVector::new(x, y, z))
    }
}

/// Projector for `outcome` of a projective measurement along a unit direction.
pub fn projector(setting: &MeasurementSetting, outcome: u8) -> Result<ComplexMatrix> {
    assert!(outcome < 2, "outcome must be a bit");
    let norm = setting.direction.norm();
    if (norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::NonUnitDirection { norm });
    }
    let sign = if outcome == 0 { 1.0 } else { -1.0 };
    Ok((&ComplexMatrix::identity(2) + &setting.direction.dot_sigma().scale_re(sign)).scale_re(0.5))
}

/// Density matrix on 2, 4 or 8 dimensions: Hermitian, unit trace, positive
/// semidefinite up to an eigenvalue floor of -1e-10.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        let herm = matrix.hermiticity_defect();
        if herm > STRUCTURAL_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity defect {herm}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = matrix.min_eigenvalue()?;
        if min < PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// I/d on a d-dimensional space.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// Pure state |psi><psi| from a column of amplitudes (normalized here).
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-15 {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let d = amplitudes.len();
        let m = ComplexMatrix::from_fn(d, d, |r, c| {
            amplitudes[r] * amplitudes[c].conj() / (norm * norm)
        });
        Ok(DensityMatrix { matrix: m })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .hermitian_eigen()
            .expect("density matrix is Hermitian by construction")
            .eigenvalues
    }
}

/// |Phi> = (|00> + |11>)/sqrt(2).
pub fn bell_phi() -> DensityMatrix {
    let h = Complex64::new(SQRT_2_INV, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[h, zero, zero, h]).expect("valid Bell state")
}

/// eta |Phi><Phi| + (1 - eta) I/4 with |Phi> = (|00> + |11>)/sqrt(2).
pub fn werner_state(eta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(Error::EtaOutOfRange(eta));
    }
    let phi = bell_phi();
    let m = &phi.matrix().scale_re(eta) + &ComplexMatrix::identity(4).scale_re((1.0 - eta) / 4.0);
    DensityMatrix::new(m)
}

/// Bell-diagonal state (I + sum_i t_i sigma_i (x) sigma_i) / 4.
///
/// The parameter vector must lie inside the positivity tetrahedron; the
/// check is done spectrally.
pub fn bell_diagonal_state(tx: f64, ty: f64, tz: f64) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::identity(4);
    m = &m + &tensor(&sigma_x(), &sigma_x()).scale_re(tx);
    m = &m + &tensor(&sigma_y(), &sigma_y()).scale_re(ty);
    m = &m + &tensor(&sigma_z(), &sigma_z()).scale_re(tz);
    let m = m.scale_re(0.25);
    let min = m.min_eigenvalue()?;
    if min < PSD_FLOOR {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    DensityMatrix::new(m)
}

/// Uhlmann fidelity [Tr sqrt(sqrt(t) e sqrt(t))]^2.
///
/// Since sqrt(t) e sqrt(t) = M M† with M = sqrt(t) sqrt(e), the trace of its
/// square root is the sum of singular values of M.
pub fn fidelity(target: &DensityMatrix, actual: &DensityMatrix) -> Result<f64> {
    if target.dim() != actual.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}x{} against {}x{}",
            target.dim(),
            target.dim(),
            actual.dim(),
            actual.dim()
        )));
    }
    let rt = target.matrix().psd_sqrt()?;
    let re = actual.matrix().psd_sqrt()?;
    let tr: f64 = (&rt * &re).singular_values().iter().sum();
    Ok(tr * tr)
}

/// Two-qubit concurrence via the spin-flip construction.
///
/// With Y = sigma_y (x) sigma_y and rho~ = Y rho* Y, the construction's
/// lambda_i are the singular values of sqrt(rho) Y sqrt(rho)^T, using
/// sqrt(rho)^T sqrt(rho)* = rho^T.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let yy = tensor(&sigma_y(), &sigma_y());
    let rt = rho.matrix().psd_sqrt()?;
    let m = &(&rt * &yy) * &rt.transpose();
    let lambdas = m.singular_values();
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Correlator Tr[rho (a . sigma) (x) (b . sigma)].
pub fn correlator(rho: &DensityMatrix, a: &BlochVector, b: &BlochVector) -> f64 {
    let op = tensor(&a.dot_sigma(), &b.dot_sigma());
    (&op * rho.matrix()).trace().re
}

/// CHSH combination S = E(a,b) + E(a',b) + E(a,b') - E(a',b') for the four
/// settings [a, a', b, b'].
pub fn chsh_parameter(rho: &DensityMatrix, settings: &[MeasurementSetting; 4]) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "CHSH needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    for s in settings {
        let norm = s.direction.norm();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NonUnitDirection { norm });
        }
    }
    let [a, ap, b, bp] = settings;
    Ok(correlator(rho, &a.direction, &b.direction)
        + correlator(rho, &ap.direction, &b.direction)
        + correlator(rho, &a.direction, &bp.direction)
        - correlator(rho, &ap.direction, &bp.direction))
}

/// Settings maximizing S for Werner states: a = z, a' = x, b = (z + x)/sqrt(2),
/// b' = (z - x)/sqrt(2). All four lie in the x-z plane.
pub fn chsh_optimal_settings() -> [MeasurementSetting; 4] {
    [
        MeasurementSetting::along(0.0, 0.0, 1.0),
        MeasurementSetting::along(1.0, 0.0, 0.0),
        MeasurementSetting::along(SQRT_2_INV, 0.0, SQRT_2_INV),
        MeasurementSetting::along(-SQRT_2_INV, 0.0, SQRT_2_INV),
    ]
}
