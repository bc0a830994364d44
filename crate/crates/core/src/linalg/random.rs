//! Seeded random matrices for property tests and sampling oracles.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMat, DensityMatrix, HermitianMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub(crate) fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Hilbert–Schmidt random state `G G† / Tr(G G†)` with `G` complex Ginibre.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_density(dim, &mut rng)
}

pub(crate) fn sample_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let m = super::hermitian_part(&w.unscale(tr));
    DensityMatrix::from_hermitian_unchecked(HermitianMatrix::new(m).expect("Gram matrix is Hermitian"))
}

/// Haar-random unit vector.
pub fn random_pure_state(dim: usize, seed: u64) -> DVector<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_pure(dim, &mut rng)
}

pub(crate) fn sample_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE up to scaling).
pub fn random_hermitian(dim: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(dim, dim, &mut rng);
    super::hermitian_part(&g)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with the
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary(dim: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_unitary(dim, &mut rng)
}

pub(crate) fn sample_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
