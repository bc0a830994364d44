use std::fs;
use std::io::Write;

use capbound::capacity::{depolarizing_sweep, hypothesis_threshold, BoundReport, SweepConfig, THREADS_ENV};
use capbound::channel::{depolarizing, kraus_and_complementary, ChoiChannel};
use capbound::entropy::{
    bound_csiszar, bound_fd, bound_sason, saturating_pair, shannon_entropy, snap_ratio, DistancePair,
};
use capbound::norms::{
    fit_degrading, unstabilized_norm_sampling_seeded, HermitianMapDiff, NormBundle, UnstabilizedNorm,
};
use capbound::sdp::SolveStatus;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::csv_out::{write_bounds, write_norms, SampledNorms};
use crate::svg::{Plot, Series, Stroke};
use crate::{CliError, CliResult};

/// Worker count from the flag, then [`THREADS_ENV`]; `None` leaves rayon's default.
pub fn thread_cap(flag: Option<usize>) -> CliResult<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::BadInput(format!("{THREADS_ENV} must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShannonReport {
    pub d: usize,
    pub eps: f64,
    pub nu: f64,
    pub f_d: f64,
    /// `None` where `βd ≤ 1` leaves Sason's bound undefined.
    pub sason: Option<f64>,
    pub csiszar: f64,
    pub saturating_q: Vec<f64>,
    pub saturating_p: Vec<f64>,
    /// `H(p̃) − H(q̃)`.
    pub attained: f64,
}

pub fn shannon_report(d: usize, eps: f64, nu: Option<f64>) -> CliResult<ShannonReport> {
    let nu = nu.unwrap_or(eps);
    let pair = DistancePair::new(eps, nu)?;
    if d < 2 {
        return Err(CliError::BadInput(format!("alphabet size must exceed 1, got {d}")));
    }
    if eps > 0.0 {
        let need = 2.0 * snap_ratio(eps, nu).ceil();
        if nu == 0.0 || (d as f64) < need {
            return Err(CliError::BadInput(format!(
                "infeasible distances: need d ≥ 2⌈ε/ν⌉, got d = {d}, 2⌈ε/ν⌉ = {}",
                if nu == 0.0 { "∞".into() } else { need.to_string() }
            )));
        }
    }
    let f_d = bound_fd(d, pair)?;
    let (q, p) = saturating_pair(d, pair)?;
    Ok(ShannonReport {
        d,
        eps,
        nu,
        f_d,
        sason: bound_sason(d, pair).ok(),
        csiszar: bound_csiszar(d, eps)?,
        attained: shannon_entropy(&p) - shannon_entropy(&q),
        saturating_q: q.weights().to_vec(),
        saturating_p: p.weights().to_vec(),
    })
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn bound_shannon<W: Write>(d: usize, eps: f64, nu: Option<f64>, json: bool, out: &mut W) -> CliResult<()> {
    let r = shannon_report(d, eps, nu)?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &r)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "d = {}, eps = {}, nu = {}", r.d, r.eps, r.nu)?;
    writeln!(out, "f_d      {:.12}", r.f_d)?;
    match r.sason {
        Some(s) => writeln!(out, "sason    {s:.12}")?,
        None => writeln!(out, "sason    undefined (beta*d <= 1)")?,
    }
    writeln!(out, "csiszar  {:.12}", r.csiszar)?;
    writeln!(out, "saturating pair")?;
    writeln!(out, "  q = {}", list(&r.saturating_q))?;
    writeln!(out, "  p = {}", list(&r.saturating_p))?;
    writeln!(out, "  H(p) - H(q) = {:.12}", r.attained)?;
    Ok(())
}

/// `Φᶜ − Λ∘Φ` for the SDP-fitted degrading map.
pub struct DegradingDifference {
    pub delta: HermitianMapDiff,
    pub d_e: usize,
    pub eps_phi_sdp: Option<f64>,
    pub status: SolveStatus,
}

pub fn degrading_difference(phi: &ChoiChannel) -> CliResult<DegradingDifference> {
    let (_, comp) = kraus_and_complementary(phi)?;
    let fit = fit_degrading(phi, &comp)?;
    let delta = HermitianMapDiff::between(&comp, &fit.lambda.compose(phi)?)?;
    Ok(DegradingDifference { delta, d_e: comp.dim_out(), eps_phi_sdp: fit.value, status: fit.status })
}

/// Same difference rebuilt from a stored degrading map.
fn difference_with(phi: &ChoiChannel, lambda: &ChoiChannel) -> CliResult<HermitianMapDiff> {
    let (_, comp) = kraus_and_complementary(phi)?;
    Ok(HermitianMapDiff::between(&comp, &lambda.compose(phi)?)?)
}

pub fn sample_norms(delta: &HermitianMapDiff, samples: usize, seed: u64) -> SampledNorms {
    SampledNorms {
        one: unstabilized_norm_sampling_seeded(delta, UnstabilizedNorm::One, samples, seed),
        infinity: unstabilized_norm_sampling_seeded(delta, UnstabilizedNorm::Infinity, samples, seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGaps {
    /// Worst relative duality gap of the norm programs.
    pub duality: f64,
    /// `ε₁ − sampled ‖Δ‖_1^D`.
    pub one: f64,
    /// `ν − sampled ‖Δ‖_∞^D`.
    pub infinity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsReport {
    pub channel: String,
    pub p: f64,
    pub d_e: usize,
    pub bundle: NormBundle,
    pub eps_phi_sdp: Option<f64>,
    pub eps_phi_status: SolveStatus,
    pub hypothesis_threshold: f64,
    pub hypothesis_ok: bool,
    pub samples: usize,
    pub seed: u64,
    pub sampled: SampledNorms,
    pub gaps: NormGaps,
}

pub fn norms_report(p: f64, samples: usize, seed: u64) -> CliResult<NormsReport> {
    let phi = depolarizing(p)?;
    let dd = degrading_difference(&phi)?;
    let bundle = NormBundle::compute(&dd.delta)?;
    let sampled = sample_norms(&dd.delta, samples, seed);
    let threshold = hypothesis_threshold(bundle.nu, dd.d_e);
    Ok(NormsReport {
        channel: "depolarizing".into(),
        p,
        d_e: dd.d_e,
        bundle,
        eps_phi_sdp: dd.eps_phi_sdp,
        eps_phi_status: dd.status,
        hypothesis_threshold: threshold,
        hypothesis_ok: bundle.eps1 <= threshold + 1e-12,
        samples,
        seed,
        sampled,
        gaps: NormGaps {
            duality: bundle.max_relative_gap,
            one: bundle.eps1 - sampled.one,
            infinity: bundle.nu - sampled.infinity,
        },
    })
}

pub fn norms<W: Write>(p: f64, samples: usize, seed: u64, json: bool, out: &mut W) -> CliResult<()> {
    let r = norms_report(p, samples, seed)?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &r)?;
        writeln!(out)?;
        return Ok(());
    }
    let b = &r.bundle;
    writeln!(out, "depolarizing p = {}, d_E = {}", r.p, r.d_e)?;
    for (k, v) in [
        ("eps_diamond", b.diamond),
        ("M1-", b.m1_minus),
        ("M1+", b.m1_plus),
        ("Minf-", b.minf_minus),
        ("Minf+", b.minf_plus),
        ("eps_1", b.eps1),
        ("nu", b.nu),
        ("threshold", r.hypothesis_threshold),
        ("sampled_1", r.sampled.one),
        ("sampled_inf", r.sampled.infinity),
        ("duality_gap", r.gaps.duality),
    ] {
        writeln!(out, "{k:<12} {v:.6e}")?;
    }
    writeln!(out, "hypothesis   {}", if r.hypothesis_ok { "ok" } else { "violated" })?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(flatten)]
    pub bound: BoundReport,
    pub sampled: Option<SampledNorms>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub s_phi_lambda: bool,
    pub samples: usize,
    pub envelope_resolution: f64,
    pub warnings: Vec<String>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepArgs {
    pub config: RunConfig,
    pub s_phi_lambda: bool,
    /// Random states per point for the sampled norm lower bounds; 0 skips them.
    pub samples: usize,
    pub threads: Option<usize>,
}

/// Per-point seed for the sampled norms.
fn point_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn run_sweep(args: &SweepArgs) -> CliResult<SweepReport> {
    args.config.validate()?;
    let grid = args.config.grid.points()?;
    let cfg = SweepConfig { grid, s_phi_lambda: args.s_phi_lambda, threads: args.threads };
    let (rows, resolution) = depolarizing_sweep(&cfg)?;
    let mut warnings = Vec::new();
    let mut out = Vec::with_capacity(rows.len());
    for (k, row) in rows.into_iter().enumerate() {
        if let Some(e) = &row.error {
            warnings.push(format!("p = {}: {e}", row.p));
        }
        if let Some(c) = row.certificate.as_ref().filter(|c| !c.hypothesis_ok) {
            warnings.push(format!(
                "p = {}: eps_1 = {} exceeds 2*nu*d_E/(nu*d_E + 3) = {}",
                row.p,
                c.eps1,
                hypothesis_threshold(c.nu, c.d_e)
            ));
        }
        let sampled = match (&row.certificate, args.samples) {
            (Some(c), n) if n > 0 => {
                let delta = difference_with(&depolarizing(row.p)?, &c.lambda_choi)?;
                Some(sample_norms(&delta, n, point_seed(args.config.seed, k)))
            }
            _ => None,
        };
        out.push(ReportRow { bound: row, sampled });
    }
    Ok(SweepReport {
        config: args.config.clone(),
        s_phi_lambda: args.s_phi_lambda,
        samples: args.samples,
        envelope_resolution: resolution,
        warnings,
        rows: out,
    })
}

fn metadata(r: &SweepReport) -> Vec<(&'static str, String)> {
    let g = &r.config.grid;
    vec![
        ("grid", format!("p in [{}, {}], {} points", g.p_min, g.p_max, g.n_points)),
        ("seed", r.config.seed.to_string()),
        ("envelope_resolution", format!("{:e}", r.envelope_resolution)),
    ]
}

pub fn bounds_plot(r: &SweepReport) -> Plot {
    let pts = |f: fn(&BoundReport) -> f64| -> Vec<(f64, f64)> {
        r.rows.iter().map(|row| (row.bound.p, f(&row.bound))).collect()
    };
    Plot {
        title: "Quantum capacity bounds, qubit depolarizing channel".into(),
        x_label: "p".into(),
        y_label: "capacity (qubits per use)".into(),
        series: vec![
            Series { name: "coherent information".into(), color: "black", stroke: Stroke::Dotted, points: pts(|b| b.lower_bound) },
            Series { name: "single-epsilon bound".into(), color: "#1f4fb4", stroke: Stroke::Dashed, points: pts(|b| b.bound_sutter) },
            Series { name: "two-distance bound".into(), color: "#c0262d", stroke: Stroke::Solid, points: pts(|b| b.bound_new) },
        ],
    }
}

pub fn norms_plot(r: &SweepReport) -> Plot {
    let cert = |row: &ReportRow, f: fn(&capbound::capacity::DegradabilityCertificate) -> f64| {
        (row.bound.p, row.bound.certificate.as_ref().map_or(f64::NAN, f))
    };
    Plot {
        title: "Hypothesis check along the sweep".into(),
        x_label: "p".into(),
        y_label: "distance".into(),
        series: vec![
            Series {
                name: "eps_1".into(),
                color: "#c0262d",
                stroke: Stroke::Solid,
                points: r.rows.iter().map(|row| cert(row, |c| c.eps1)).collect(),
            },
            Series {
                name: "2 nu d_E / (nu d_E + 3)".into(),
                color: "#1f4fb4",
                stroke: Stroke::Dashed,
                points: r.rows.iter().map(|row| cert(row, |c| hypothesis_threshold(c.nu, c.d_e))).collect(),
            },
        ],
    }
}

/// Writes the selected outputs; files are produced one after another from
/// the finished report.
pub fn write_outputs(r: &SweepReport) -> CliResult<Vec<std::path::PathBuf>> {
    let dir = &r.config.output_dir;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let meta = metadata(r);
    let bounds: Vec<BoundReport> = r.rows.iter().map(|row| row.bound.clone()).collect();
    let mut formats = r.config.formats.clone();
    formats.sort();
    formats.dedup();
    for f in formats {
        match f {
            Format::Csv => {
                let path = dir.join("bounds.csv");
                write_bounds(fs::File::create(&path)?, &meta, &bounds)?;
                written.push(path);
                let path = dir.join("norms.csv");
                let sampled: Vec<_> = r.rows.iter().map(|row| row.sampled).collect();
                write_norms(fs::File::create(&path)?, &meta, &bounds, &sampled)?;
                written.push(path);
            }
            Format::Json => {
                let path = dir.join("report.json");
                let mut file = fs::File::create(&path)?;
                serde_json::to_writer_pretty(&mut file, r)?;
                writeln!(file)?;
                written.push(path);
            }
            Format::Svg => {
                for (name, plot) in [("bounds.svg", bounds_plot(r)), ("norms.svg", norms_plot(r))] {
                    let path = dir.join(name);
                    fs::write(&path, plot.render())?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}

/// Runs the sweep and writes its files. Row failures become warnings on
/// `err`; the command fails only when no row succeeded.
pub fn depol_sweep<W: Write>(args: &SweepArgs, err: &mut W) -> CliResult<SweepReport> {
    let report = run_sweep(args)?;
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    if report.rows.iter().all(|r| r.bound.error.is_some()) {
        return Err(CliError::Solver("every sweep point failed".into()));
    }
    write_outputs(&report)?;
    Ok(report)
}
