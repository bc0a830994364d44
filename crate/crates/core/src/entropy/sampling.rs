//! Seeded random distributions and state pairs for property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::{DistancePair, ProbabilityVector};
use crate::linalg::{sample_density, sample_unitary, CMat, DensityMatrix, HermitianMatrix, C64};

fn flat_dirichlet<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Dirichlet draw on a random support of `1..=d` points, so boundary
/// distributions are hit as well.
fn sparse_dirichlet<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let k = rng.random_range(1..=d);
    let mut w = vec![0.0; d];
    let mut idx: Vec<usize> = (0..d).collect();
    for i in 0..k {
        let j = rng.random_range(i..d);
        idx.swap(i, j);
    }
    for (&i, v) in idx[..k].iter().zip(flat_dirichlet(k, rng)) {
        w[i] = v;
    }
    w
}

fn pv(w: Vec<f64>) -> ProbabilityVector {
    ProbabilityVector::new(w).expect("normalized by construction")
}

/// Flat Dirichlet distribution on `d` points.
pub fn random_distribution(d: usize, seed: u64) -> ProbabilityVector {
    pv(flat_dirichlet(d, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn draw_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (ProbabilityVector, ProbabilityVector) {
    match rng.random_range(0..3) {
        0 => (pv(flat_dirichlet(d, rng)), pv(flat_dirichlet(d, rng))),
        1 => (pv(sparse_dirichlet(d, rng)), pv(sparse_dirichlet(d, rng))),
        _ => {
            // q = (1 − t)p + t r covers small distances
            let p = flat_dirichlet(d, rng);
            let r = sparse_dirichlet(d, rng);
            let t: f64 = rng.random::<f64>().powi(2);
            let q = p.iter().zip(&r).map(|(a, b)| (1.0 - t) * a + t * b).collect();
            (pv(p), pv(q))
        }
    }
}

/// `n` pairs mixing independent flat, sparse, and convex-combination draws.
pub fn random_distribution_pairs(d: usize, n: usize, seed: u64) -> Vec<(ProbabilityVector, ProbabilityVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw_pair(d, &mut rng)).collect()
}

/// Pairs spread over the `(TV, LO/TV)` unit square: proposals are accepted
/// only while their cell of the `cells × cells` grid holds fewer than
/// `per_cell` pairs. Stops after `max_draws` proposals.
pub fn bucketed_pairs(
    d: usize,
    cells: usize,
    per_cell: usize,
    max_draws: usize,
    seed: u64,
) -> Vec<(ProbabilityVector, ProbabilityVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fill = vec![0usize; cells * cells];
    let mut out = Vec::new();
    let cell = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    for _ in 0..max_draws {
        if out.len() == fill.len() * per_cell {
            break;
        }
        let (p, q) = draw_pair(d, &mut rng);
        let pair = DistancePair::between(&p, &q).expect("same length");
        if pair.tv == 0.0 {
            continue;
        }
        let k = cell(pair.tv) * cells + cell(pair.local / pair.tv);
        if fill[k] < per_cell {
            fill[k] += 1;
            out.push((p, q));
        }
    }
    out
}

fn mix(a: &DensityMatrix, b: &CMat, t: f64) -> DensityMatrix {
    let m = a.matrix() * C64::new(1.0 - t, 0.0) + b * C64::new(t, 0.0);
    let h = HermitianMatrix::new(crate::linalg::hermitian_part(&m)).expect("Hermitian by construction");
    DensityMatrix::from_hermitian_unchecked(h)
}

/// `n` pairs of `d`-dimensional states: independent Hilbert–Schmidt draws,
/// convex combinations towards a second draw, and small unitary rotations.
pub fn random_state_pairs(d: usize, n: usize, seed: u64) -> Vec<(DensityMatrix, DensityMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            let rho = sample_density(d, &mut rng);
            let other = sample_density(d, &mut rng);
            let t: f64 = rng.random::<f64>().powi(2);
            let sigma = match k % 3 {
                0 => other,
                1 => mix(&rho, other.matrix(), t),
                _ => {
                    let u = sample_unitary(d, &mut rng);
                    let rotated = &u * rho.matrix() * u.adjoint();
                    mix(&rho, &rotated, t)
                }
            };
            (rho, sigma)
        })
        .collect()
}
