//! Capacity upper bounds for `(ε, ν)`-degradable channels and their convex
//! combination with comparison curves.

mod envelope;
mod sweep;

pub use envelope::{convex_envelope, envelope_resolution, pointwise_min};
pub use sweep::{
    assemble, default_grid, depolarizing_sweep, sweep_point, uniform_grid, BoundReport, SweepConfig, DEFAULT_GRID_POINTS,
    THREADS_ENV,
};

use serde::{Deserialize, Serialize};

use crate::channel::ChoiChannel;
use crate::entropy::{g2, h2};
use crate::error::{Error, Result};

const HYPOTHESIS_SLACK: f64 = 1e-12;

/// `2νd_E / (νd_E + 3)`, the largest `ε₁` the corrections accept.
pub fn hypothesis_threshold(nu: f64, d_e: usize) -> f64 {
    let nd = nu * d_e as f64;
    2.0 * nd / (nd + 3.0)
}

/// Norm witnesses for one degrading channel `Λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradabilityCertificate {
    pub eps_diamond: f64,
    pub eps1: f64,
    pub nu: f64,
    /// `2ν/ε₁`, or 0 when `ε₁ = 0`.
    pub beta: f64,
    pub d_e: usize,
    pub lambda_choi: ChoiChannel,
    pub hypothesis_ok: bool,
}

impl DegradabilityCertificate {
    pub fn new(eps_diamond: f64, eps1: f64, nu: f64, d_e: usize, lambda: ChoiChannel) -> Result<Self> {
        for (name, v) in [("eps_diamond", eps_diamond), ("eps1", eps1), ("nu", nu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        if d_e == 0 {
            return Err(Error::Domain("environment dimension must be positive".into()));
        }
        let beta = if eps1 > 0.0 { 2.0 * nu / eps1 } else { 0.0 };
        let hypothesis_ok = eps1 <= hypothesis_threshold(nu, d_e) + HYPOTHESIS_SLACK;
        Ok(Self { eps_diamond, eps1, nu, beta, d_e, lambda_choi: lambda, hypothesis_ok })
    }

    fn check(&self) -> Result<()> {
        if self.hypothesis_ok {
            Ok(())
        } else {
            Err(Error::Hypothesis { eps: self.eps1, threshold: hypothesis_threshold(self.nu, self.d_e) })
        }
    }
}

fn log2(x: f64) -> f64 {
    x.log2()
}

/// `(ε/2) log(βd − 1) + h(ε/2)` with the `ε = 0` value 0.
fn two_distance_term(eps: f64, beta: f64, d: usize) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    0.5 * eps * log2(beta * d as f64 - 1.0) + h2(0.5 * eps)
}

/// `ε log d + g(ε/2)`.
fn stabilized_term(eps: f64, d: usize) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    eps * log2(d as f64) + g2(0.5 * eps)
}

/// `(ε₁/2) log(βd_E − 1) + h(ε₁/2) + ε_⋄ log d_E + g(ε_⋄/2)` without the
/// hypothesis check.
pub fn corr_quantum_unchecked(eps1: f64, nu: f64, eps_diamond: f64, d_e: usize) -> f64 {
    let beta = if eps1 > 0.0 { 2.0 * nu / eps1 } else { 0.0 };
    two_distance_term(eps1, beta, d_e) + stabilized_term(eps_diamond, d_e)
}

/// `(ε₁/2) log(βd_E − 1) + h(ε₁/2) + 3ε_⋄ log d_E + 3g(ε_⋄/2)` without the
/// hypothesis check.
pub fn corr_private_unchecked(eps1: f64, nu: f64, eps_diamond: f64, d_e: usize) -> f64 {
    let beta = if eps1 > 0.0 { 2.0 * nu / eps1 } else { 0.0 };
    two_distance_term(eps1, beta, d_e) + 3.0 * stabilized_term(eps_diamond, d_e)
}

/// Additive correction to `Q¹` for an `(ε₁, ν)`-certificate with diamond
/// distance `ε_⋄`.
pub fn corr_quantum(cert: &DegradabilityCertificate) -> Result<f64> {
    cert.check()?;
    Ok(corr_quantum_unchecked(cert.eps1, cert.nu, cert.eps_diamond, cert.d_e))
}

/// Additive correction to `P¹`; equals
/// `corr_quantum + 2(ε_⋄ log d_E + g(ε_⋄/2))`.
pub fn corr_private(cert: &DegradabilityCertificate) -> Result<f64> {
    cert.check()?;
    Ok(corr_private_unchecked(cert.eps1, cert.nu, cert.eps_diamond, cert.d_e))
}

/// Correction for the stabilized pair `(‖·‖_⋄ ≤ ε, ‖·‖_cb ≤ ν)`:
/// `(ε/2) log(βd_E − 1) + h(ε/2) + ε log d_E + g(ε/2)`, `β = 2ν/ε`.
pub fn corr_quantum_cbnorm(eps: f64, nu: f64, d_e: usize) -> Result<f64> {
    if !(eps >= 0.0 && nu >= 0.0 && eps.is_finite() && nu.is_finite()) {
        return Err(Error::Domain(format!("need finite eps, nu >= 0, got ({eps}, {nu})")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let threshold = hypothesis_threshold(nu, d_e);
    if eps > threshold + HYPOTHESIS_SLACK {
        return Err(Error::Hypothesis { eps, threshold });
    }
    Ok(two_distance_term(eps, 2.0 * nu / eps, d_e) + stabilized_term(eps, d_e))
}

/// The single-parameter correction `(ε/2) log(d_E − 1) + h(ε/2) + ε log d_E +
/// g(ε/2)`, the `β = 1` case.
pub fn corr_single_epsilon(eps: f64, d_e: usize) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    // (ε/2) log(d_E − 1) vanishes for d_E ≤ 2
    let first = if d_e > 2 { 0.5 * eps * log2(d_e as f64 - 1.0) } else { 0.0 };
    first + h2(0.5 * eps) + stabilized_term(eps, d_e)
}

/// `γ(p) = 4(√(1−p) − 1 + p)` and `θ(p) = h((1+γ)/2) − h(γ/2)` on `[0, ¼]`.
pub fn theta_gamma(p: f64) -> Result<(f64, f64)> {
    if !(0.0..=0.25).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, 1/4], got {p}")));
    }
    let gamma = 4.0 * ((1.0 - p).sqrt() - 1.0 + p);
    Ok((h2(0.5 * (1.0 + gamma)) - h2(0.5 * gamma), gamma))
}

/// `1 − h(p)`.
pub fn one_minus_h(p: f64) -> f64 {
    1.0 - h2(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::identity;

    fn cert(eps_d: f64, eps1: f64, nu: f64, d_e: usize) -> DegradabilityCertificate {
        DegradabilityCertificate::new(eps_d, eps1, nu, d_e, identity(2)).unwrap()
    }

    #[test]
    fn zero_certificate() {
        let c = cert(0.0, 0.0, 0.0, 4);
        assert!(c.hypothesis_ok);
        assert_eq!(c.beta, 0.0);
        assert_eq!(corr_quantum(&c).unwrap(), 0.0);
        assert_eq!(corr_private(&c).unwrap(), 0.0);
    }

    #[test]
    fn direct_evaluations() {
        // h(0.01) + 0.03·2 + g(0.015); the log term vanishes at βd_E = 2
        let h = -(0.01f64 * 0.01f64.log2() + 0.99 * 0.99f64.log2());
        let g = 1.015 * 1.015f64.log2() - 0.015 * 0.015f64.log2();
        let want = h + 0.06 + g;
        assert!((corr_quantum_unchecked(0.02, 0.005, 0.03, 4) - want).abs() < 1e-14);
        assert!((want - 0.25348).abs() < 5e-6);
        assert!((corr_private_unchecked(0.02, 0.005, 0.03, 4) - 0.59885).abs() < 5e-6);
        // that certificate violates ε₁ ≤ 2νd_E/(νd_E + 3) = 0.013245…
        let c = cert(0.03, 0.02, 0.005, 4);
        assert!(!c.hypothesis_ok);
        assert!(matches!(corr_quantum(&c), Err(Error::Hypothesis { .. })));
        assert!(corr_private(&c).is_err());
        assert!((hypothesis_threshold(0.005, 4) - 0.04 / 3.02).abs() < 1e-15);
    }

    #[test]
    fn cbnorm_variant() {
        assert_eq!(corr_quantum_cbnorm(0.0, 0.3, 4).unwrap(), 0.0);
        let want = 0.02 * 7f64.log2() + h2(0.02) + 0.08 + g2(0.02);
        let got = corr_quantum_cbnorm(0.04, 0.04, 4).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.419605).abs() < 5e-7);
        // β = 1 collapse
        let (e, d) = (0.05, 4);
        assert!((corr_quantum_cbnorm(e, e / 2.0, d).unwrap() - corr_single_epsilon(e, d)).abs() < 1e-15);
        assert!(corr_quantum_cbnorm(0.5, 0.01, 4).is_err());
    }

    #[test]
    fn beta_one_collapse_and_private_identity() {
        for &(e, d) in &[(0.01, 4usize), (0.1, 4), (0.03, 5), (0.2, 8)] {
            let c = cert(e, e, e / 2.0, d);
            assert!(c.hypothesis_ok);
            assert!((c.beta - 1.0).abs() < 1e-15);
            assert!((corr_quantum(&c).unwrap() - corr_single_epsilon(e, d)).abs() < 1e-14);
            let diff = corr_private(&c).unwrap() - corr_quantum(&c).unwrap();
            assert!((diff - 2.0 * (e * (d as f64).log2() + g2(e / 2.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_gamma_values() {
        let (t, g) = theta_gamma(0.0).unwrap();
        assert_eq!(g, 0.0);
        assert_eq!(t, 1.0);
        let (_, g) = theta_gamma(0.25).unwrap();
        assert!((g - 4.0 * (0.75f64.sqrt() - 0.75)).abs() < 1e-15);
        assert!((g - 0.46410).abs() < 5e-6);
        assert!(theta_gamma(0.3).is_err());
        let mut prev = -1.0;
        for k in 0..=1000 {
            let (_, g) = theta_gamma(0.25 * k as f64 / 1000.0).unwrap();
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn corrections_grow_with_each_distance() {
        let (nu, d) = (0.02, 4);
        let top = hypothesis_threshold(nu, d);
        let mut prev = 0.0;
        for k in 1..=200 {
            let e1 = top * k as f64 / 200.0;
            let v = corr_quantum(&cert(0.05, e1, nu, d)).unwrap();
            assert!(v >= prev - 1e-15, "eps1 = {e1}");
            prev = v;
        }
        let mut prev = 0.0;
        for k in 0..=200 {
            let ed = 0.5 * k as f64 / 200.0;
            let v = corr_quantum(&cert(ed, 0.03, nu, d)).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }
}
