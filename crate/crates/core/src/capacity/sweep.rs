use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    convex_envelope, corr_private, corr_quantum, corr_single_epsilon, envelope_resolution, one_minus_h,
    theta_gamma, DegradabilityCertificate,
};
use crate::channel::{coherent_info_depolarizing, depolarizing, kraus_and_complementary, s_phi_lambda};
use crate::error::{Error, Result};
use crate::norms::{fit_degrading, HermitianMapDiff, NormBundle};
use crate::sdp::SolveStatus;

pub const DEFAULT_GRID_POINTS: usize = 251;
/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CAPBOUND_THREADS";
const P_MAX: f64 = 0.025;

/// `n` uniform points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(a < b) {
        return Err(Error::Domain(format!("need n >= 2 and a < b, got n = {n}, [{a}, {b}]")));
    }
    Ok((0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect())
}

/// 251 points on `[0, 0.025]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.0, P_MAX, DEFAULT_GRID_POINTS).expect("constant grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: Vec<f64>,
    /// Also evaluate `S(E_p, Λ_p)` by search over qubit inputs.
    pub s_phi_lambda: bool,
    /// Worker threads; `None` reads [`THREADS_ENV`], falling back to rayon's default.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { grid: default_grid(), s_phi_lambda: true, threads: None }
    }
}

/// One row of the depolarizing sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    pub q1: f64,
    /// `max{Q¹, 0}`.
    pub lower_bound: f64,
    pub s_phi_lambda: Option<f64>,
    /// SDP value of `ε_{E_p}` before `Λ_p` is rounded to a channel; `None`
    /// when the solve stalled and `Λ_p` came from the final iterate.
    pub eps_phi_sdp: Option<f64>,
    pub eps_phi_status: Option<SolveStatus>,
    pub norms: Option<NormBundle>,
    pub certificate: Option<DegradabilityCertificate>,
    pub corr_new: Option<f64>,
    pub corr_sutter: Option<f64>,
    pub corr_private: Option<f64>,
    pub theta: f64,
    pub one_minus_h: f64,
    pub one_minus_4p: f64,
    pub bound_sutter: f64,
    pub bound_new: f64,
    pub error: Option<String>,
}

struct Point {
    eps_sdp: Option<f64>,
    status: SolveStatus,
    norms: NormBundle,
    cert: DegradabilityCertificate,
    s: Option<f64>,
}

/// Norm certificate for `E_p` with the SDP-optimal degrading map.
fn certify(p: f64, with_s: bool) -> Result<Point> {
    let e = depolarizing(p)?;
    let (_, comp) = kraus_and_complementary(&e)?;
    let fit = fit_degrading(&e, &comp)?;
    let lambda = fit.lambda;
    let degraded = lambda.compose(&e)?;
    let delta = HermitianMapDiff::between(&comp, &degraded)?;
    let norms = NormBundle::compute(&delta)?;
    let cert = DegradabilityCertificate::new(norms.diamond, norms.eps1, norms.nu, comp.dim_out(), lambda)?;
    let s = if with_s { Some(s_phi_lambda(&e, &cert.lambda_choi)?) } else { None };
    Ok(Point { eps_sdp: fit.value, status: fit.status, norms, cert, s })
}

/// Row for a single `p`, before the envelopes are taken.
pub fn sweep_point(p: f64, with_s: bool) -> Result<BoundReport> {
    if !(0.0..=P_MAX).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, {P_MAX}], got {p}")));
    }
    let q1 = coherent_info_depolarizing(p)?;
    let (theta, _) = theta_gamma(p)?;
    let mut row = BoundReport {
        p,
        q1,
        lower_bound: q1.max(0.0),
        s_phi_lambda: None,
        eps_phi_sdp: None,
        eps_phi_status: None,
        norms: None,
        certificate: None,
        corr_new: None,
        corr_sutter: None,
        corr_private: None,
        theta,
        one_minus_h: one_minus_h(p),
        one_minus_4p: 1.0 - 4.0 * p,
        bound_sutter: f64::NAN,
        bound_new: f64::NAN,
        error: None,
    };
    match certify(p, with_s) {
        Ok(pt) => {
            row.corr_sutter = Some(corr_single_epsilon(pt.cert.eps_diamond, pt.cert.d_e));
            match (corr_quantum(&pt.cert), corr_private(&pt.cert)) {
                (Ok(q), Ok(pr)) => {
                    row.corr_new = Some(q);
                    row.corr_private = Some(pr);
                }
                (Err(e), _) | (_, Err(e)) => row.error = Some(e.to_string()),
            }
            row.s_phi_lambda = pt.s;
            row.eps_phi_sdp = pt.eps_sdp;
            row.eps_phi_status = Some(pt.status);
            row.norms = Some(pt.norms);
            row.certificate = Some(pt.cert);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let n = threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok())).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Error::Domain(e.to_string()))
}

/// Envelopes `conv{Q¹ + corr, 1 − h, θ, 1 − 4p}` for both corrections.
/// Points without a valid correction drop out of the first curve only.
pub fn assemble(rows: &mut [BoundReport]) -> Result<f64> {
    let grid: Vec<f64> = rows.iter().map(|r| r.p).collect();
    let plus = |c: fn(&BoundReport) -> Option<f64>| -> Vec<f64> {
        rows.iter().map(|r| c(r).map_or(f64::NAN, |v| r.q1 + v)).collect()
    };
    let common = [
        rows.iter().map(|r| r.one_minus_h).collect::<Vec<_>>(),
        rows.iter().map(|r| r.theta).collect(),
        rows.iter().map(|r| r.one_minus_4p).collect(),
    ];
    let mut new_curves = vec![plus(|r| r.corr_new)];
    new_curves.extend(common.iter().cloned());
    let mut sutter_curves = vec![plus(|r| r.corr_sutter)];
    sutter_curves.extend(common.iter().cloned());
    let new = convex_envelope(&grid, &new_curves)?;
    let sutter = convex_envelope(&grid, &sutter_curves)?;
    for (r, (n, s)) in rows.iter_mut().zip(new.into_iter().zip(sutter)) {
        r.bound_new = n;
        r.bound_sutter = s;
    }
    Ok(envelope_resolution(&grid, &new_curves)?.max(envelope_resolution(&grid, &sutter_curves)?))
}

/// Full sweep: parallel over grid points, envelopes taken afterwards. Returns
/// the rows and the envelope resolution estimate.
pub fn depolarizing_sweep(config: &SweepConfig) -> Result<(Vec<BoundReport>, f64)> {
    if config.grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let mut rows: Vec<BoundReport> = pool(config.threads)?
        .install(|| config.grid.par_iter().map(|&p| sweep_point(p, config.s_phi_lambda)).collect::<Result<_>>())?;
    let res = assemble(&mut rows)?;
    Ok((rows, res))
}
