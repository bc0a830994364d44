//! CSV emission. Numbers carry 12 significant digits and are printed in the
//! shortest form that parses back to the rounded value; missing values are
//! empty fields. Leading `#` lines hold run metadata.

use std::io::Write;

use capbound::capacity::{hypothesis_threshold, BoundReport};

use crate::CliResult;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let r = round_sig(x);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

/// Inverse of [`num`]: `None` for an empty field.
pub fn parse_num(s: &str) -> Option<f64> {
    if s.is_empty() {
        None
    } else {
        s.parse().ok()
    }
}

/// Sampled lower bounds on the unstabilized norms of one row's difference.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampledNorms {
    pub one: f64,
    pub infinity: f64,
}

fn metadata<W: Write>(out: &mut W, meta: &[(&str, String)]) -> CliResult<()> {
    for (k, v) in meta {
        writeln!(out, "# {k}: {v}")?;
    }
    Ok(())
}

pub const BOUNDS_COLUMNS: [&str; 9] =
    ["p", "q1", "eps_diamond", "eps_1", "nu", "beta", "hypothesis_ok", "bound_sutter", "bound_new"];

pub fn write_bounds<W: Write>(mut out: W, meta: &[(&str, String)], rows: &[BoundReport]) -> CliResult<()> {
    metadata(&mut out, meta)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUNDS_COLUMNS)?;
    for r in rows {
        let c = r.certificate.as_ref();
        w.write_record([
            num(r.p),
            num(r.q1),
            opt(c.map(|c| c.eps_diamond)),
            opt(c.map(|c| c.eps1)),
            opt(c.map(|c| c.nu)),
            opt(c.map(|c| c.beta)),
            c.is_some_and(|c| c.hypothesis_ok).to_string(),
            num(r.bound_sutter),
            num(r.bound_new),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const NORMS_COLUMNS: [&str; 21] = [
    "p",
    "d_e",
    "eps_diamond",
    "m1_minus",
    "m1_plus",
    "minf_minus",
    "minf_plus",
    "eps_1",
    "nu",
    "threshold",
    "max_relative_gap",
    "eps_phi_sdp",
    "eps_phi_status",
    "s_phi_lambda",
    "sampled_one",
    "sampled_infinity",
    "corr_new",
    "corr_sutter",
    "corr_private",
    "q1",
    "error",
];

pub fn write_norms<W: Write>(
    mut out: W,
    meta: &[(&str, String)],
    rows: &[BoundReport],
    sampled: &[Option<SampledNorms>],
) -> CliResult<()> {
    metadata(&mut out, meta)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(NORMS_COLUMNS)?;
    for (r, s) in rows.iter().zip(sampled) {
        let n = r.norms.as_ref();
        let c = r.certificate.as_ref();
        w.write_record([
            num(r.p),
            c.map_or_else(String::new, |c| c.d_e.to_string()),
            opt(n.map(|n| n.diamond)),
            opt(n.map(|n| n.m1_minus)),
            opt(n.map(|n| n.m1_plus)),
            opt(n.map(|n| n.minf_minus)),
            opt(n.map(|n| n.minf_plus)),
            opt(n.map(|n| n.eps1)),
            opt(n.map(|n| n.nu)),
            opt(c.map(|c| hypothesis_threshold(c.nu, c.d_e))),
            opt(n.map(|n| n.max_relative_gap)),
            opt(r.eps_phi_sdp),
            r.eps_phi_status.map_or_else(String::new, |s| format!("{s:?}")),
            opt(r.s_phi_lambda),
            opt(s.map(|s| s.one)),
            opt(s.map(|s| s.infinity)),
            opt(r.corr_new),
            opt(r.corr_sutter),
            opt(r.corr_private),
            num(r.q1),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
