use super::{DistancePair, ProbabilityVector, RemainderDecomposition};
use crate::error::Result;

/// Pair `(q̃, p̃)` attaining `H(p̃) − H(q̃) = f_d(ε, ν)` with `TV = ε`, `LO = ν`.
///
/// `q̃` puts `ν/ε` on the first `d₊` letters and `μ/ε` on the next one; `p̃`
/// scales that block by `1 − ε` and spreads `ε` uniformly over the remaining
/// `d₋` letters.
pub fn saturating_pair(d: usize, pair: DistancePair) -> Result<(ProbabilityVector, ProbabilityVector)> {
    if pair.tv == 0.0 {
        return Ok((ProbabilityVector::point_mass(d, 0), ProbabilityVector::point_mass(d, 0)));
    }
    let r = RemainderDecomposition::new(d.max(2), pair)?;
    let eps = pair.tv;
    let mut q = vec![0.0; d];
    let mut p = vec![0.0; d];
    for x in 0..r.d_plus {
        q[x] = r.nu / eps;
        p[x] = (1.0 - eps) * r.nu / eps;
    }
    let mut next = r.d_plus;
    if !r.is_integral() {
        q[next] = r.mu / eps;
        p[next] = (1.0 - eps) * r.mu / eps;
        next += 1;
    }
    for x in next..d {
        p[x] = eps / r.d_minus as f64;
    }
    Ok((ProbabilityVector::new(q)?, ProbabilityVector::new(p)?))
}
