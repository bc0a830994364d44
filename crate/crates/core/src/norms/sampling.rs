use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HermitianMapDiff, NEGLIGIBLE_ENTRY};
use crate::linalg::{sample_density, sample_pure};
use crate::linalg::{hermitian_part, jacobi_eigen, max_abs_entry, CMat, C64};
use crate::optim::NelderMead;

pub const DEFAULT_SAMPLES: usize = 10_000;
const REFINEMENTS: usize = 50;
/// Seed used by [`unstabilized_norm_sampling`].
pub const SAMPLING_SEED: u64 = 0x5eed_0f_d1a6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnstabilizedNorm {
    /// `‖Δ‖_1^D = max_ρ ‖Δ(ρ)‖₁`.
    One,
    /// `‖Δ‖_∞^D = max_ρ ‖Δ(ρ)‖_∞`.
    Infinity,
}

fn output_norm(delta: &HermitianMapDiff, rho: &CMat, p: UnstabilizedNorm) -> f64 {
    let out = delta.map().apply_matrix(rho).expect("dimension fixed by the caller");
    let ev = jacobi_eigen(&hermitian_part(&out)).values;
    match p {
        UnstabilizedNorm::One => ev.iter().map(|x| x.abs()).sum(),
        UnstabilizedNorm::Infinity => ev.iter().map(|x| x.abs()).fold(0.0, f64::max),
    }
}

fn projector(psi: &DVector<C64>) -> CMat {
    let n = psi.norm_squared();
    psi * psi.adjoint() / C64::new(n, 0.0)
}

/// Computational basis states and the `(|i⟩ ± |j⟩)/√2`, `(|i⟩ ± i|j⟩)/√2`
/// superpositions; for a qubit these are the six Pauli eigenstates.
fn stabilizer_like(d: usize) -> Vec<DVector<C64>> {
    let mut out = Vec::new();
    for i in 0..d {
        out.push(DVector::from_fn(d, |k, _| C64::new(if k == i { 1.0 } else { 0.0 }, 0.0)));
        for j in i + 1..d {
            for phase in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut v = DVector::from_element(d, C64::new(0.0, 0.0));
                v[i] = C64::new(1.0, 0.0);
                v[j] = phase;
                out.push(v);
            }
        }
    }
    out
}

fn leading_vector(rho: &CMat) -> DVector<C64> {
    jacobi_eigen(rho).vectors.column(0).into_owned()
}

fn pack(psi: &DVector<C64>) -> Vec<f64> {
    psi.iter().map(|z| z.re).chain(psi.iter().map(|z| z.im)).collect()
}

fn unpack(x: &[f64]) -> DVector<C64> {
    let d = x.len() / 2;
    DVector::from_fn(d, |k, _| C64::new(x[k], x[d + k]))
}

/// Lower bound on `‖Δ‖_{1→p}^D` from `samples` Hilbert–Schmidt random states,
/// the basis and two-term superposition states, and Nelder–Mead refinement of
/// the best candidates over unnormalized pure-state vectors. The objective is
/// convex in `ρ`, so the maximum sits on pure states. Deterministic.
pub fn unstabilized_norm_sampling(delta: &HermitianMapDiff, p: UnstabilizedNorm, samples: usize) -> f64 {
    unstabilized_norm_sampling_seeded(delta, p, samples, SAMPLING_SEED)
}

/// [`unstabilized_norm_sampling`] with an explicit seed for the random states.
pub fn unstabilized_norm_sampling_seeded(
    delta: &HermitianMapDiff,
    p: UnstabilizedNorm,
    samples: usize,
    seed: u64,
) -> f64 {
    // same zero test as the norm programs
    if max_abs_entry(delta.choi()) <= NEGLIGIBLE_ENTRY {
        return 0.0;
    }
    let d = delta.dim_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<CMat> = stabilizer_like(d).iter().map(projector).collect();
    for _ in 0..samples {
        candidates.push(sample_density(d, &mut rng).matrix().clone());
    }
    for _ in 0..samples.min(REFINEMENTS * 4) {
        candidates.push(projector(&sample_pure(d, &mut rng)));
    }
    let mut scored: Vec<(f64, usize)> =
        candidates.par_iter().enumerate().map(|(k, rho)| (output_norm(delta, rho, p), k)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let best = scored.first().map_or(0.0, |s| s.0);
    let nm = NelderMead { max_iterations: 400, initial_step: 0.1, f_tol: 1e-14 };
    let objective = |x: &[f64]| {
        let psi = unpack(x);
        if psi.norm() < 1e-12 {
            return 0.0;
        }
        -output_norm(delta, &projector(&psi), p)
    };
    scored
        .par_iter()
        .take(REFINEMENTS)
        .map(|&(_, k)| -nm.minimize(objective, &pack(&leading_vector(&candidates[k]))).1)
        .reduce(|| best, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{depolarizing, random_channel};

    fn depol_diff(p: f64, q: f64) -> HermitianMapDiff {
        HermitianMapDiff::between(&depolarizing(p).unwrap(), &depolarizing(q).unwrap()).unwrap()
    }

    #[test]
    fn depolarizing_closed_forms() {
        let (p, q) = (0.1, 0.35);
        let d = depol_diff(p, q);
        let one = unstabilized_norm_sampling(&d, UnstabilizedNorm::One, 2000);
        let inf = unstabilized_norm_sampling(&d, UnstabilizedNorm::Infinity, 2000);
        assert!((one - 4.0 / 3.0 * (q - p)).abs() < 1e-4);
        assert!((inf - 2.0 / 3.0 * (q - p)).abs() < 1e-4);
    }

    #[test]
    fn zero_map_and_determinism() {
        let d = depol_diff(0.3, 0.3);
        assert_eq!(unstabilized_norm_sampling(&d, UnstabilizedNorm::One, 100), 0.0);
        let a = random_channel(2, 2, 2, 1).unwrap();
        let b = random_channel(2, 2, 2, 2).unwrap();
        let d = HermitianMapDiff::between(&a, &b).unwrap();
        let x = unstabilized_norm_sampling(&d, UnstabilizedNorm::One, 500);
        let y = unstabilized_norm_sampling(&d, UnstabilizedNorm::One, 500);
        assert_eq!(x, y);
        let inf = unstabilized_norm_sampling(&d, UnstabilizedNorm::Infinity, 500);
        assert!(inf <= x / 2.0 + 1e-9);
    }

    #[test]
    fn stabilizer_states_for_a_qubit() {
        assert_eq!(stabilizer_like(2).len(), 6);
        assert_eq!(stabilizer_like(3).len(), 3 + 4 * 3);
    }
}
