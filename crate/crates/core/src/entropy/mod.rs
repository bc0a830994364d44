//! Classical and quantum entropies, distances between distributions, and
//! two-distance continuity bounds.
//!
//! All logarithms are base 2.

mod bounds;
mod majorization;
mod sampling;
mod saturate;

pub use bounds::{
    bound_afp, bound_csiszar, bound_fd, bound_sason, bound_vn_two_distance, two_distance_threshold,
    RemainderDecomposition,
};
pub use majorization::{majorizes, transfer_weight};
pub use sampling::{bucketed_pairs, random_distribution, random_distribution_pairs, random_state_pairs};
pub use saturate::saturating_pair;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// Tolerance on the normalization of a probability vector.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Entries above `-CLAMP_TOL` are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;
/// Snapping tolerance for `ε/ν`, applied both to the ratio and to `ε − kν`.
pub const SNAP_TOL: f64 = 1e-12;

/// `ε/ν`, snapped to the nearest integer `k` when the ratio is within
/// `SNAP_TOL` of `k` or `ε` is within `SNAP_TOL` of `kν`. The second test
/// absorbs rounding in measured distances, whose absolute error does not
/// shrink with `ν`.
pub fn snap_ratio(eps: f64, nu: f64) -> f64 {
    let x = eps / nu;
    let k = x.round();
    if (x - k).abs() <= SNAP_TOL || (eps - k * nu).abs() <= SNAP_TOL {
        k
    } else {
        x
    }
}

/// `-x log₂ x` with `0 log 0 = 0`.
pub(crate) fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// `x log₂ x` with `0 log 0 = 0`.
pub(crate) fn xlogx(x: f64) -> f64 {
    -xlogx_neg(x)
}

/// Finite probability distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        let mut weights = weights;
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(Error::InvalidDistribution("non-finite weight".into()));
            }
            if *w < -CLAMP_TOL {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Point mass on `index` in a space of size `len`.
    pub fn point_mass(len: usize, index: usize) -> Self {
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        Self { weights }
    }

    pub fn uniform(len: usize) -> Self {
        Self { weights: vec![1.0 / len as f64; len] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `H(p) = -Σ p log₂ p`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_of(p.weights())
}

/// Shannon entropy of a raw weight vector, nonpositive entries contributing 0.
pub(crate) fn entropy_of(w: &[f64]) -> f64 {
    w.iter().map(|&x| xlogx_neg(x)).sum()
}

/// `S(ρ) = -Tr ρ log₂ ρ`, eigenvalues clamped at zero.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> f64 {
    entropy_of(&rho.eigenvalues())
}

fn same_len(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    Ok(())
}

/// Total variation distance `½ Σ |p − q|`, evaluated as the larger of the
/// positive- and negative-part masses (equal for normalized inputs) so that
/// `max |p − q| ≤ TV` holds exactly in floating point; clamped to 1.
pub fn tv_distance(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    same_len(p, q)?;
    let (mut pos, mut neg) = (0.0, 0.0);
    for (a, b) in p.weights.iter().zip(&q.weights) {
        let x = a - b;
        if x > 0.0 {
            pos += x;
        } else {
            neg -= x;
        }
    }
    Ok(f64::max(pos, neg).min(1.0))
}

/// Local distance `max |p − q|`.
pub fn local_distance(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    same_len(p, q)?;
    Ok(p.weights.iter().zip(&q.weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Binary entropy `h(ε)` on `[0, 1]`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("binary entropy needs eps in [0,1], got {eps}")));
    }
    Ok(h2(eps))
}

pub(crate) fn h2(eps: f64) -> f64 {
    xlogx_neg(eps) + xlogx_neg(1.0 - eps)
}

/// `g(ε) = (1+ε) log₂(1+ε) − ε log₂ ε` for `ε ≥ 0`.
pub fn bosonic_g(eps: f64) -> Result<f64> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("g needs eps >= 0, got {eps}")));
    }
    Ok(g2(eps))
}

pub(crate) fn g2(eps: f64) -> f64 {
    xlogx(1.0 + eps) - xlogx(eps)
}

/// A pair of distances `(ε, ν)`: total variation / trace distance and local /
/// operator-norm distance, with `0 ≤ ν ≤ ε ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistancePair {
    pub tv: f64,
    pub local: f64,
}

impl DistancePair {
    pub fn new(tv: f64, local: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tv) || !(0.0..=1.0).contains(&local) {
            return Err(Error::Domain(format!("distances must lie in [0,1]: eps={tv}, nu={local}")));
        }
        if local > tv + CLAMP_TOL {
            return Err(Error::Domain(format!("need nu <= eps, got eps={tv}, nu={local}")));
        }
        Ok(Self { tv, local: local.min(tv) })
    }

    /// Measured distances between two distributions.
    pub fn between(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<Self> {
        let tv = tv_distance(p, q)?;
        let local = local_distance(p, q)?;
        Ok(Self { tv: tv.min(1.0), local: local.min(tv).min(1.0) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(w: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(w.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0, 0.0])), 0.0);
        assert!((shannon_entropy(&pv(&[0.5, 0.5])) - 1.0).abs() < 1e-15);
        assert!((shannon_entropy(&pv(&[0.5, 0.3, 0.2])) - 1.48548).abs() < 5e-6);
    }

    #[test]
    fn distance_examples() {
        let p = pv(&[0.5, 0.5]);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(local_distance(&p, &p).unwrap(), 0.0);
        let a = pv(&[1.0, 0.0]);
        let b = pv(&[0.0, 1.0]);
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
        assert_eq!(local_distance(&a, &b).unwrap(), 1.0);
        let x = pv(&[0.6, 0.4, 0.0]);
        let y = pv(&[0.3, 0.4, 0.3]);
        assert!((tv_distance(&x, &y).unwrap() - 0.3).abs() < 1e-15);
        assert!((local_distance(&x, &y).unwrap() - 0.3).abs() < 1e-15);
        assert!(tv_distance(&x, &a).is_err());
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.1, -0.1]).is_err());
        let p = ProbabilityVector::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(p.weights()[1], 0.0);
    }

    #[test]
    fn h_and_g_values() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert_eq!(bosonic_g(0.0).unwrap(), 0.0);
        assert!((bosonic_g(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(bosonic_g(-0.1).is_err());
    }

    #[test]
    fn von_neumann_matches_shannon_for_diagonal() {
        let rho = HermitianMatrix::from_real_diagonal(&[0.5, 0.3, 0.2]);
        assert!((von_neumann_entropy(&rho) - shannon_entropy(&pv(&[0.5, 0.3, 0.2]))).abs() < 1e-14);
    }

    #[test]
    fn distance_pair_rejects_nu_above_eps() {
        assert!(DistancePair::new(0.2, 0.3).is_err());
        assert!(DistancePair::new(1.2, 0.3).is_err());
        assert!(DistancePair::new(0.3, 0.3).is_ok());
    }
}
