//! Density operators, projectors, trace distance and the two numeric lemma
//! checks (gentle measurement, distinguishing implies mapping).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{DenseState, QStateError};

/// Tolerance on Hermiticity, positivity, trace and idempotence.
pub const VALIDITY_TOL: f64 = 1e-10;
/// Slack allowed on the gentle-measurement inequality.
pub const GENTLE_SLACK: f64 = 1e-9;
/// Slack allowed on the distinguishing-implies-mapping inequality.
pub const DIM_SLACK: f64 = 1e-9;

type CMatrix = DMatrix<Complex64>;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    SymmetricEigen::new(m.clone()).eigenvalues
}

fn check_hermitian(m: &CMatrix, what: fn(String) -> QStateError) -> Result<(), QStateError> {
    if !m.is_square() {
        return Err(what(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let dev = max_abs(&(m - m.adjoint()));
    if dev > VALIDITY_TOL {
        return Err(what(format!("not Hermitian (deviation {dev:e})")));
    }
    Ok(())
}

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self, QStateError> {
        check_hermitian(&matrix, QStateError::InvalidDensity)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > VALIDITY_TOL || trace.im.abs() > VALIDITY_TOL {
            return Err(QStateError::InvalidDensity(format!(
                "trace {trace} differs from 1"
            )));
        }
        let min = hermitian_eigenvalues(&matrix).min();
        if min < -VALIDITY_TOL {
            return Err(QStateError::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(matrix))
    }

    pub fn from_pure(state: &DenseState) -> Self {
        let v = DVector::from_column_slice(state.amplitudes());
        Self(&v * v.adjoint())
    }

    /// Mixture `sum_i p_i rho_i`; weights must be a probability vector.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self, QStateError> {
        let first = parts
            .first()
            .ok_or_else(|| QStateError::InvalidDensity("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (p, rho) in parts {
            if rho.dim() != dim {
                return Err(QStateError::DimensionMismatch {
                    left: dim,
                    right: rho.dim(),
                });
            }
            acc += rho.matrix() * Complex64::new(*p, 0.0);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

impl From<&DenseState> for DensityMatrix {
    fn from(state: &DenseState) -> Self {
        Self::from_pure(state)
    }
}

/// A validated orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(CMatrix);

impl Projector {
    pub fn new(matrix: CMatrix) -> Result<Self, QStateError> {
        check_hermitian(&matrix, QStateError::InvalidProjector)?;
        let dev = max_abs(&(&matrix * &matrix - &matrix));
        if dev > VALIDITY_TOL {
            return Err(QStateError::InvalidProjector(format!(
                "not idempotent (deviation {dev:e})"
            )));
        }
        Ok(Self(matrix))
    }

    /// Projector onto the span of the given orthonormal vectors.
    pub fn onto(vectors: &[DVector<Complex64>], dim: usize) -> Result<Self, QStateError> {
        let mut acc = CMatrix::zeros(dim, dim);
        for v in vectors {
            if v.len() != dim {
                return Err(QStateError::DimensionMismatch {
                    left: dim,
                    right: v.len(),
                });
            }
            acc += v * v.adjoint();
        }
        Self::new(acc)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }
}

/// `TD(rho, sigma) = 1/2 Tr|rho - sigma|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QStateError> {
    if rho.dim() != sigma.dim() {
        return Err(QStateError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    let td = 0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|l| l.abs())
            .sum::<f64>();
    Ok(td.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentleReport {
    pub delta: f64,
    pub trace_distance: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// Post-selects `rho` on the first outcome of `(Pi, I - Pi)` and compares the
/// disturbance with `2 sqrt(delta)`, `delta = 1 - Tr(Pi rho)`.
pub fn check_gentle_measurement(
    rho: &DensityMatrix,
    projector: &Projector,
) -> Result<GentleReport, QStateError> {
    if rho.dim() != projector.dim() {
        return Err(QStateError::DimensionMismatch {
            left: rho.dim(),
            right: projector.dim(),
        });
    }
    let pi = projector.matrix();
    let accept = (pi * rho.matrix()).trace().re;
    if accept <= VALIDITY_TOL {
        return Err(QStateError::ZeroAcceptance(accept));
    }
    let post = pi * rho.matrix() * pi / Complex64::new(accept, 0.0);
    let post = DensityMatrix::new(post)?;
    let delta = (1.0 - accept).max(0.0);
    let td = trace_distance(rho, &post)?;
    let bound = 2.0 * delta.sqrt();
    Ok(GentleReport {
        delta,
        trace_distance: td,
        bound,
        satisfied: td <= bound + GENTLE_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Evaluates both sides of
/// `|P1 D P0 psi|^2 + |P0 D P1 psi|^2 >= 1/2 (|D psi|^2 - (|D P0 psi|^2 + |D P1 psi|^2))^2`.
pub fn check_distinguish_implies_map(
    d: &Projector,
    p0: &Projector,
    p1: &Projector,
    psi: &DenseState,
) -> Result<DistinguishReport, QStateError> {
    let dim = psi.dim();
    for p in [d, p0, p1] {
        if p.dim() != dim {
            return Err(QStateError::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
    }
    let overlap = (p0.matrix() * p1.matrix()).singular_values().max();
    if overlap > VALIDITY_TOL {
        return Err(QStateError::Precondition(format!(
            "projectors are not orthogonal (|P0 P1| = {overlap:e})"
        )));
    }
    let v = DVector::from_column_slice(psi.amplitudes());
    let v0 = p0.apply(&v);
    let v1 = p1.apply(&v);
    let residue = (&v0 + &v1 - &v).norm();
    if residue > VALIDITY_TOL {
        return Err(QStateError::Precondition(format!(
            "state is not in the image of P0 + P1 (residue {residue:e})"
        )));
    }
    let sq = |x: DVector<Complex64>| x.norm_squared();
    let lhs = sq(p1.apply(&d.apply(&v0))) + sq(p0.apply(&d.apply(&v1)));
    let inner = sq(d.apply(&v)) - (sq(d.apply(&v0)) + sq(d.apply(&v1)));
    let rhs = 0.5 * inner * inner;
    Ok(DistinguishReport {
        lhs,
        rhs,
        satisfied: lhs + DIM_SLACK >= rhs,
    })
}
