//! Random instances for the dense checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DenseState, DensityMatrix, Projector, DEFAULT_DENSE_CAP};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction
/// on the diagonal of R.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

pub fn pure_state<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> DenseState {
    let amps = (0..1usize << qubits).map(|_| gaussian(rng)).collect();
    DenseState::normalized(amps, DEFAULT_DENSE_CAP).expect("non-zero with probability one")
}

/// Random mixed state `G G^dag / Tr(G G^dag)` from a Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // symmetrize away rounding so validation sees an exactly Hermitian matrix
    m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(m).expect("Ginibre construction is a density operator")
}

/// Projector onto `rank` columns of a Haar-random unitary.
pub fn projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Projector {
    let u = unitary(dim, rng);
    let cols: Vec<DVector<Complex64>> = (0..rank).map(|j| u.column(j).into_owned()).collect();
    Projector::onto(&cols, dim).expect("orthonormal columns")
}

/// Inputs for the distinguishing-implies-mapping check.
#[derive(Debug, Clone)]
pub struct DistinguishInstance {
    pub d: Projector,
    pub p0: Projector,
    pub p1: Projector,
    pub psi: DenseState,
}

/// `P0`, `P1` span disjoint random column sets of one Haar unitary, `psi` is a
/// random unit vector in their joint image and `D` an independent random
/// projector.
pub fn distinguish_instance<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DistinguishInstance {
    assert!(dim >= 2 && dim.is_power_of_two());
    let u = unitary(dim, rng);
    let r0 = rng.random_range(1..dim);
    let r1 = rng.random_range(1..=dim - r0);
    let col = |j: usize| u.column(j).into_owned();
    let p0 = Projector::onto(&(0..r0).map(col).collect::<Vec<_>>(), dim).expect("orthonormal");
    let p1 =
        Projector::onto(&(r0..r0 + r1).map(col).collect::<Vec<_>>(), dim).expect("orthonormal");
    let mut v = DVector::<Complex64>::zeros(dim);
    for j in 0..r0 + r1 {
        v += col(j) * gaussian(rng);
    }
    let norm = v.norm();
    let v = v / Complex64::new(norm, 0.0);
    let psi =
        DenseState::normalized(v.iter().copied().collect(), DEFAULT_DENSE_CAP).expect("non-zero");
    let d_rank = rng.random_range(0..=dim);
    let d = projector(dim, d_rank, rng);
    DistinguishInstance { d, p0, p1, psi }
}
