use serde::{Deserialize, Serialize};

use super::{h2, snap_ratio, xlogx, DistancePair};
use crate::error::{Error, Result};

/// Slack allowed when comparing ε against a hypothesis threshold.
const THRESHOLD_SLACK: f64 = 1e-12;

/// Quotient/remainder split `ε = d₊ν + μ` with `d₋ = d − ⌈ε/ν⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderDecomposition {
    pub d_plus: usize,
    pub mu: f64,
    pub d_minus: usize,
    pub eps: f64,
    pub nu: f64,
}

impl RemainderDecomposition {
    /// Requires `ν > 0` and the feasibility condition `d ≥ 2⌈ε/ν⌉`.
    pub fn new(d: usize, pair: DistancePair) -> Result<Self> {
        let DistancePair { tv: eps, local: nu } = pair;
        if nu <= 0.0 {
            return Err(Error::Domain(format!("local distance must be positive when eps = {eps} > 0")));
        }
        let ratio = snap_ratio(eps, nu);
        let d_plus = ratio.floor();
        let ceil = ratio.ceil();
        if (d as f64) < 2.0 * ceil {
            return Err(Error::Domain(format!(
                "infeasible: d = {d} < 2*ceil(eps/nu) = {} (Lemma 4 needs d >= 2*ceil(eps/nu))",
                2.0 * ceil
            )));
        }
        let mu = if ratio == d_plus { 0.0 } else { (eps - d_plus * nu).clamp(0.0, nu) };
        Ok(Self { d_plus: d_plus as usize, mu, d_minus: d - ceil as usize, eps, nu })
    }

    pub fn is_integral(&self) -> bool {
        self.mu == 0.0
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("alphabet size must exceed 1, got {d}")));
    }
    Ok(())
}

/// Tight two-distance bound on `|H(p) − H(q)|`:
/// `f_d(ε,ν) = h(ε) + d₊ ν log ν + μ log μ + ε log d₋ − ε log ε`.
pub fn bound_fd(d: usize, pair: DistancePair) -> Result<f64> {
    check_d(d)?;
    if pair.tv == 0.0 {
        return Ok(0.0);
    }
    let r = RemainderDecomposition::new(d, pair)?;
    let eps = pair.tv;
    Ok(h2(eps) + r.d_plus as f64 * xlogx(r.nu) + xlogx(r.mu) + eps * (r.d_minus as f64).log2()
        - xlogx(eps))
}

/// `ε log(βd − 1) + h(ε)` with `β = ν/ε`.
fn sason_expr(d: usize, eps: f64, nu: f64) -> Result<f64> {
    let bd = nu / eps * d as f64;
    if bd <= 1.0 {
        return Err(Error::Domain(format!("need beta*d > 1, got {bd}")));
    }
    Ok(eps * (bd - 1.0).log2() + h2(eps))
}

/// Sason's bound `ε log(βd − 1) + h(ε)`, `β = ν/ε`.
pub fn bound_sason(d: usize, pair: DistancePair) -> Result<f64> {
    check_d(d)?;
    if pair.tv == 0.0 {
        return Ok(0.0);
    }
    if pair.local <= 0.0 {
        return Err(Error::Domain("local distance must be positive".into()));
    }
    sason_expr(d, pair.tv, pair.local)
}

/// Csiszár's bound `ε log(d − 1) + h(ε)`.
pub fn bound_csiszar(d: usize, eps: f64) -> Result<f64> {
    check_d(d)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps must lie in [0,1], got {eps}")));
    }
    Ok(eps * ((d - 1) as f64).log2() + h2(eps))
}

/// Audenaert–Fannes–Petz bound on `|S(ρ) − S(σ)|`; same expression as Csiszár's.
pub fn bound_afp(d: usize, eps: f64) -> Result<f64> {
    bound_csiszar(d, eps)
}

/// `νd / (νd + 3)`: the largest trace distance for which the two-distance
/// von Neumann bound holds.
pub fn two_distance_threshold(d: usize, nu: f64) -> f64 {
    let nd = nu * d as f64;
    nd / (nd + 3.0)
}

/// Two-distance bound on `|S(ρ) − S(σ)|`, valid when `ε ≤ νd/(νd + 3)`.
pub fn bound_vn_two_distance(d: usize, pair: DistancePair) -> Result<f64> {
    check_d(d)?;
    if pair.tv == 0.0 {
        return Ok(0.0);
    }
    let threshold = two_distance_threshold(d, pair.local);
    if pair.tv > threshold + THRESHOLD_SLACK {
        return Err(Error::Hypothesis { eps: pair.tv, threshold });
    }
    sason_expr(d, pair.tv, pair.local)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(e: f64, n: f64) -> DistancePair {
        DistancePair::new(e, n).unwrap()
    }

    // direct evaluation of the closed forms, written out independently
    fn fd_oracle(d: f64, eps: f64, nu: f64, d_plus: f64, mu: f64, d_minus: f64) -> f64 {
        let h = -eps * eps.log2() - (1.0 - eps) * (1.0 - eps).log2();
        let mu_term = if mu > 0.0 { mu * mu.log2() } else { 0.0 };
        let _ = d;
        h + d_plus * nu * nu.log2() + mu_term + eps * d_minus.log2() - eps * eps.log2()
    }

    #[test]
    fn fd_examples() {
        let v = bound_fd(4, pair(0.5, 0.25)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        assert!((v - fd_oracle(4.0, 0.5, 0.25, 2.0, 0.0, 2.0)).abs() < 1e-14);
        let w = bound_fd(10, pair(0.5, 0.3)).unwrap();
        assert!((w - fd_oracle(10.0, 0.5, 0.3, 1.0, 0.2, 8.0)).abs() < 1e-13);
        assert!((w - 2.01452).abs() < 5e-6);
        assert_eq!(bound_fd(7, pair(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn fd_rejects_infeasible() {
        // d = 3 forces nu = eps
        assert!(matches!(bound_fd(3, pair(0.5, 0.2)), Err(Error::Domain(_))));
        assert!(bound_fd(3, pair(0.5, 0.5)).is_ok());
        assert!(bound_fd(1, pair(0.5, 0.5)).is_err());
        assert!(bound_fd(4, pair(0.5, 0.0)).is_err());
    }

    #[test]
    fn sason_and_csiszar_examples() {
        let s = bound_sason(10, pair(0.5, 0.3)).unwrap();
        assert!((s - (0.5 * 5f64.log2() + 1.0)).abs() < 1e-14);
        assert!((s - 2.16096).abs() < 5e-6);
        let c = bound_csiszar(10, 0.5).unwrap();
        assert!((bound_sason(10, pair(0.5, 0.5)).unwrap() - c).abs() < 1e-14);
        assert!((bound_sason(4, pair(0.5, 0.25)).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(bound_csiszar(5, 0.0).unwrap(), 0.0);
        assert!((bound_csiszar(2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((c - (0.5 * 9f64.log2() + 1.0)).abs() < 1e-14);
        assert!((c - 2.58496).abs() < 5e-6);
        assert_eq!(bound_afp(10, 0.5).unwrap(), c);
        // beta * d <= 1
        assert!(bound_sason(2, pair(0.9, 0.4)).is_err());
    }

    #[test]
    fn vn_two_distance_examples() {
        let a = bound_vn_two_distance(10, pair(0.5, 0.3)).unwrap();
        assert!((a - 2.16096).abs() < 5e-6);
        let b = bound_vn_two_distance(20, pair(0.5, 0.25)).unwrap();
        assert!((b - (0.5 * 9f64.log2() + 1.0)).abs() < 1e-14);
        assert!((b - 2.58496).abs() < 5e-6);
        match bound_vn_two_distance(4, pair(0.5, 0.25)) {
            Err(Error::Hypothesis { threshold, .. }) => assert!((threshold - 0.25).abs() < 1e-15),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn snapping_matches_exact_integer_and_below_is_continuous() {
        // exact integer ratio
        let exact = bound_fd(10, pair(0.5, 0.25)).unwrap();
        // ratio 2 - tiny: continuous approach from below
        let below = bound_fd(10, pair(0.5, 0.25 + 1e-9)).unwrap();
        assert!((exact - below).abs() < 1e-6);
        // ratio within the snap tolerance lands on the integer branch
        let snapped = bound_fd(10, pair(0.5, 0.5 / (2.0 + 5e-13))).unwrap();
        assert!((snapped - exact).abs() < 1e-10);
        // from above the d_- count drops by one: one-sided jump of eps*log((d-k)/(d-k-1))
        let above = bound_fd(10, pair(0.5, 0.25 - 1e-9)).unwrap();
        let jump = 0.5 * (8f64 / 7.0).log2();
        assert!((exact - above - jump).abs() < 1e-6);
    }

    #[test]
    fn decomposition_invariants() {
        for &(d, e, n) in &[(10usize, 0.5, 0.3), (12, 0.7, 0.2), (6, 0.3, 0.1), (8, 0.9, 0.9)] {
            let r = RemainderDecomposition::new(d, pair(e, n)).unwrap();
            assert!((r.d_plus as f64 * n + r.mu - e).abs() < 1e-12);
            assert!(r.mu >= 0.0 && r.mu < n);
            assert_eq!(r.d_minus, d - (e / n).ceil() as usize);
        }
    }
}
