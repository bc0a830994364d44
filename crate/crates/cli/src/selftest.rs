//! Invariant suite behind `capbound selftest`.

use std::io::Write;
use std::time::Instant;

use capbound::capacity::{
    corr_private, corr_quantum, corr_single_epsilon, default_grid, depolarizing_sweep, uniform_grid,
    DegradabilityCertificate, SweepConfig,
};
use capbound::channel::{
    amplitude_damping, coherent_info_depolarizing, coherent_info_numeric, depolarizing, identity, random_channel,
    ChoiChannel,
};
use capbound::entropy::{
    bosonic_g, bound_fd, bound_sason, bound_vn_two_distance, random_distribution_pairs, random_state_pairs,
    saturating_pair, shannon_entropy, snap_ratio, two_distance_threshold, von_neumann_entropy, DistancePair,
};
use capbound::linalg::{operator_distance, random_density, trace_distance, DensityMatrix};
use capbound::norms::{
    diamond_norm_detailed, eps_phi, nu_phi, unstabilized_norm_sampling_seeded, HermitianMapDiff, NormBundle,
    UnstabilizedNorm,
};

use crate::csv_out::{num, round_sig};

pub type Outcome = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn(&Settings) -> Outcome,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    /// Smaller samples and an 11-point sweep.
    pub quick: bool,
    pub seed: u64,
}

impl Settings {
    fn pick(&self, quick: usize, full: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: capbound::Error) -> String {
    err.to_string()
}

fn classical_tightness(_: &Settings) -> Outcome {
    let mut n = 0;
    for d in 3..=12usize {
        for a in 1..=20 {
            let nu = a as f64 / 40.0;
            for r in [1.0, 1.25, 1.5, 2.0, 2.7, 3.0, 4.5, 6.0] {
                let eps: f64 = r * nu;
                if eps > 1.0 || (d as f64) < 2.0 * snap_ratio(eps, nu).ceil() {
                    continue;
                }
                let pair = DistancePair::new(eps, nu).map_err(e)?;
                let (q, p) = saturating_pair(d, pair).map_err(e)?;
                let gap = shannon_entropy(&p) - shannon_entropy(&q);
                let f = bound_fd(d, pair).map_err(e)?;
                ensure((gap - f).abs() <= 1e-10, || format!("d={d} eps={eps} nu={nu}: {gap} vs {f}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} grid points"))
}

fn classical_dominance(s: &Settings) -> Outcome {
    let per_d = s.pick(2_000, 20_000);
    let mut worst = f64::NEG_INFINITY;
    for d in 3..=8 {
        for (p, q) in random_distribution_pairs(d, per_d, s.seed ^ d as u64) {
            let pair = DistancePair::between(&p, &q).map_err(e)?;
            let f = bound_fd(d, pair).map_err(e)?;
            let diff = (shannon_entropy(&p) - shannon_entropy(&q)).abs();
            worst = worst.max(diff - f);
            ensure(diff <= f + 1e-10, || format!("d={d}: |ΔH| = {diff} > f_d = {f}"))?;
        }
    }
    Ok(format!("{} pairs, max excess {worst:.2e}", 6 * per_d))
}

fn sharper_than_sason(_: &Settings) -> Outcome {
    let mut n = 0;
    for d in 3..=12usize {
        for a in 1..=10 {
            let nu = a as f64 / 25.0;
            for r in [1.0, 1.3, 1.5, 2.0, 2.5, 3.0, 3.9, 5.0] {
                let eps: f64 = r * nu;
                if eps > 1.0 || (d as f64) < 2.0 * snap_ratio(eps, nu).ceil() {
                    continue;
                }
                let pair = DistancePair::new(eps, nu).map_err(e)?;
                let f = bound_fd(d, pair).map_err(e)?;
                let g = bound_sason(d, pair).map_err(e)?;
                if r.fract() == 0.0 {
                    ensure((g - f).abs() <= 1e-12, || format!("d={d} eps={eps} nu={nu}: {g} != {f}"))?;
                } else {
                    ensure(g > f, || format!("d={d} eps={eps} nu={nu}: sason {g} <= f_d {f}"))?;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} grid points"))
}

fn distances(r: &DensityMatrix, s: &DensityMatrix) -> Result<(f64, f64), String> {
    Ok((trace_distance(r, s).map_err(e)?, operator_distance(r, s).map_err(e)?))
}

fn quantum_dominance(s: &Settings) -> Outcome {
    let per_d = s.pick(300, 2_000);
    let mut used = 0;
    for d in [4usize, 6, 8] {
        for (rho, sigma) in random_state_pairs(d, per_d, s.seed ^ (d as u64) << 8) {
            let (t, nu) = distances(&rho, &sigma)?;
            if t == 0.0 || t > two_distance_threshold(d, nu) {
                continue;
            }
            let b = bound_vn_two_distance(d, DistancePair::new(t, nu).map_err(e)?).map_err(e)?;
            let diff = (von_neumann_entropy(rho.hermitian()) - von_neumann_entropy(sigma.hermitian())).abs();
            ensure(diff <= b + 1e-10, || format!("d={d}: |ΔS| = {diff} > {b}"))?;
            used += 1;
        }
        // commuting saturators at integral ε/ν
        let nu = 0.05;
        for k in 1..=d / 2 {
            let eps = k as f64 * nu;
            if eps > two_distance_threshold(d, nu) {
                break;
            }
            let pair = DistancePair::new(eps, nu).map_err(e)?;
            let (q, p) = saturating_pair(d, pair).map_err(e)?;
            let (rq, rp) =
                (DensityMatrix::diagonal(q.weights()).map_err(e)?, DensityMatrix::diagonal(p.weights()).map_err(e)?);
            let diff = von_neumann_entropy(rp.hermitian()) - von_neumann_entropy(rq.hermitian());
            let b = bound_vn_two_distance(d, pair).map_err(e)?;
            ensure((diff - b).abs() <= 1e-10, || format!("d={d} eps={eps}: saturator {diff} vs {b}"))?;
        }
    }
    Ok(format!("{used} pairs inside the threshold"))
}

fn universality(s: &Settings) -> Outcome {
    let per_d = s.pick(300, 2_000);
    let mut n = 0;
    for d in 2..=8usize {
        for (rho, sigma) in random_state_pairs(d, per_d, s.seed.wrapping_add(d as u64)) {
            let (t, nu) = distances(&rho, &sigma)?;
            if t == 0.0 {
                continue;
            }
            ensure(nu <= t, || format!("d={d}: nu = {nu} > T = {t}"))?;
            let need = 2.0 * snap_ratio(t, nu).ceil();
            ensure(d as f64 >= need, || format!("d={d}: 2⌈T/ν⌉ = {need}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs"))
}

fn states_are_states(s: &Settings) -> Outcome {
    for d in 1..=6 {
        for k in 0..20 {
            let rho = random_density(d, s.seed.wrapping_add(100 * d as u64 + k));
            let tr = rho.hermitian().trace();
            ensure((tr - 1.0).abs() < 1e-12, || format!("trace {tr}"))?;
            ensure(rho.hermitian().min_eigenvalue() > -1e-12, || "negative eigenvalue".into())?;
        }
    }
    Ok("120 samples".into())
}

fn depolarizing_oracles(s: &Settings) -> Outcome {
    let n = s.pick(4, 20);
    let samples = s.pick(300, 2_000);
    let mut worst_gap: f64 = 0.0;
    for k in 0..n {
        // deterministic spread over [0, 1]
        let p = ((k as f64 + 0.5) * 0.618_034).fract();
        let q = ((k as f64 + 0.5) * 0.414_214).fract();
        let delta = HermitianMapDiff::between(&depolarizing(p).map_err(e)?, &depolarizing(q).map_err(e)?).map_err(e)?;
        let dia = diamond_norm_detailed(&delta).map_err(e)?;
        let dq = (p - q).abs();
        ensure((dia.value - 2.0 * dq).abs() <= 1e-6, || format!("diamond {} vs {}", dia.value, 2.0 * dq))?;
        worst_gap = worst_gap.max(dia.relative_gap);
        let one = unstabilized_norm_sampling_seeded(&delta, UnstabilizedNorm::One, samples, s.seed);
        let inf = unstabilized_norm_sampling_seeded(&delta, UnstabilizedNorm::Infinity, samples, s.seed);
        ensure((one - 4.0 / 3.0 * dq).abs() <= 1e-4, || format!("sampled 1-norm {one} vs {}", 4.0 / 3.0 * dq))?;
        ensure((inf - 2.0 / 3.0 * dq).abs() <= 1e-4, || format!("sampled inf-norm {inf} vs {}", 2.0 / 3.0 * dq))?;
    }
    ensure(worst_gap <= 1e-7, || format!("relative duality gap {worst_gap}"))?;
    Ok(format!("{n} pairs, max gap {worst_gap:.1e}"))
}

fn degradable_zeros(_: &Settings) -> Outcome {
    for (name, ch) in [("identity", identity(2)), ("amplitude damping 0.3", amplitude_damping(0.3).map_err(e)?)] {
        let (eps, _) = eps_phi(&ch).map_err(e)?;
        let (nu, _) = nu_phi(&ch).map_err(e)?;
        ensure(eps <= 1e-6 && nu <= 1e-6, || format!("{name}: eps_phi = {eps}, nu_phi = {nu}"))?;
    }
    Ok("identity, amplitude damping".into())
}

fn ordering_chain(s: &Settings) -> Outcome {
    let n = s.pick(6, 50);
    let samples = s.pick(300, 2_000);
    let mut slack = f64::INFINITY;
    for k in 0..n as u64 {
        let a = random_channel(2, 2, 1 + (k % 3) as usize, s.seed.wrapping_add(2 * k)).map_err(e)?;
        let b = random_channel(2, 2, 1 + ((k + 1) % 3) as usize, s.seed.wrapping_add(2 * k + 1)).map_err(e)?;
        let delta = HermitianMapDiff::between(&a, &b).map_err(e)?;
        let nb = NormBundle::compute(&delta).map_err(e)?;
        let one = unstabilized_norm_sampling_seeded(&delta, UnstabilizedNorm::One, samples, s.seed);
        let inf = unstabilized_norm_sampling_seeded(&delta, UnstabilizedNorm::Infinity, samples, s.seed);
        let m = (nb.eps1 - 2.0 * nb.nu).min(nb.diamond - nb.eps1).min(one / 2.0 - inf);
        slack = slack.min(m);
        ensure(m >= -1e-6, || format!("channel pair {k}: slack {m}"))?;
    }
    Ok(format!("{n} differences, min slack {slack:.2e}"))
}

fn sweep_ordering(s: &Settings) -> Outcome {
    let grid = if s.quick { uniform_grid(0.0, 0.025, 11).map_err(e)? } else { default_grid() };
    let n = grid.len();
    let (rows, res) =
        depolarizing_sweep(&SweepConfig { grid, s_phi_lambda: false, threads: None }).map_err(e)?;
    for r in &rows {
        let c = r.certificate.as_ref().ok_or_else(|| format!("p = {}: {:?}", r.p, r.error))?;
        ensure(c.hypothesis_ok, || format!("p = {}: hypothesis violated", r.p))?;
        ensure(c.beta <= 1.0 + 1e-9, || format!("p = {}: beta = {}", r.p, c.beta))?;
        ensure(r.bound_new <= r.bound_sutter + 1e-9, || format!("p = {}: new above sutter", r.p))?;
        ensure(r.bound_new >= r.q1 - 1e-12, || format!("p = {}: new below q1", r.p))?;
    }
    ensure(rows[0].bound_new == 1.0, || format!("p = 0: bound {}", rows[0].bound_new))?;
    Ok(format!("{n} points, envelope resolution {res:.1e}"))
}

fn coherent_info(_: &Settings) -> Outcome {
    for p in [0.0, 0.05, 0.1, 0.2] {
        let num = coherent_info_numeric(&depolarizing(p).map_err(e)?).map_err(e)?;
        // pure inputs give 0, so the maximum is the closed form's positive part
        let exact = coherent_info_depolarizing(p).map_err(e)?.max(0.0);
        ensure((num - exact).abs() <= 1e-4, || format!("p = {p}: {num} vs {exact}"))?;
    }
    Ok("p = 0, 0.05, 0.1, 0.2".into())
}

fn correction_identities(_: &Settings) -> Outcome {
    for &(eps, d_e) in &[(0.01, 4usize), (0.1, 4), (0.03, 5), (0.2, 8)] {
        let c = DegradabilityCertificate::new(eps, eps, eps / 2.0, d_e, identity(2)).map_err(e)?;
        let q = corr_quantum(&c).map_err(e)?;
        let pr = corr_private(&c).map_err(e)?;
        let g = bosonic_g(eps / 2.0).map_err(e)?;
        let diff = pr - q - 2.0 * (eps * (d_e as f64).log2() + g);
        ensure(diff.abs() <= 1e-12, || format!("eps={eps} d_E={d_e}: private identity off by {diff}"))?;
        let single = corr_single_epsilon(eps, d_e);
        ensure((q - single).abs() <= 1e-14, || format!("eps={eps} d_E={d_e}: beta = 1 gives {q} vs {single}"))?;
    }
    Ok("4 certificates".into())
}

fn serialization(s: &Settings) -> Outcome {
    for k in 0..2000u64 {
        let x = ((k as f64 * 0.754_877_666).sin() + 1.1) * 10f64.powi((k % 24) as i32 - 16);
        let text = num(x);
        let back: f64 = text.parse().map_err(|_| format!("unparseable {text}"))?;
        ensure(back == round_sig(x) && num(back) == text, || format!("{x} → {text} → {back}"))?;
    }
    let ch = random_channel(2, 3, 2, s.seed).map_err(e)?;
    let json = serde_json::to_string(&ch.to_json()).map_err(|x| x.to_string())?;
    let parsed: capbound::channel::ChoiJson = serde_json::from_str(&json).map_err(|x| x.to_string())?;
    let back = ChoiChannel::from_json(&parsed).map_err(e)?;
    ensure(back == ch, || "Choi JSON round trip changed the matrix".into())?;
    Ok("CSV numbers, Choi JSON".into())
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { name: "classical tightness", run: classical_tightness },
        Check { name: "classical dominance", run: classical_dominance },
        Check { name: "sharper than Sason", run: sharper_than_sason },
        Check { name: "quantum dominance", run: quantum_dominance },
        Check { name: "d >= 2 ceil(T/nu)", run: universality },
        Check { name: "random states", run: states_are_states },
        Check { name: "depolarizing norm oracles", run: depolarizing_oracles },
        Check { name: "degradable zeros", run: degradable_zeros },
        Check { name: "norm ordering chain", run: ordering_chain },
        Check { name: "depolarizing sweep ordering", run: sweep_ordering },
        Check { name: "coherent information", run: coherent_info },
        Check { name: "correction identities", run: correction_identities },
        Check { name: "serialization round trip", run: serialization },
    ]
}

/// Runs `checks` and prints one table row each; `true` iff all pass.
pub fn run_checks<W: Write>(checks: &[Check], settings: &Settings, out: &mut W) -> std::io::Result<bool> {
    let mut passed = 0;
    writeln!(out, "{:<30} {:<6} {:>8}  detail", "check", "result", "seconds")?;
    for c in checks {
        let t = Instant::now();
        let r = (c.run)(settings);
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if r.is_ok() {
            passed += 1;
        }
        writeln!(out, "{:<30} {tag:<6} {secs:>8.2}  {detail}", c.name)?;
    }
    writeln!(out, "{passed}/{} passed", checks.len())?;
    Ok(passed == checks.len())
}

pub fn selftest<W: Write>(settings: &Settings, out: &mut W) -> std::io::Result<bool> {
    run_checks(&checks(), settings, out)
}
