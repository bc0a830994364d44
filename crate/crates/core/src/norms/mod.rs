//! Semidefinite programs for channel-difference norms: the diamond norm, the
//! optimal degrading distances `ε_Φ` and `ν_Φ`, and the PPT relaxations
//! `M_∞^±`, `M_1^±` of the unstabilized norms.

mod sampling;

pub use sampling::{
    unstabilized_norm_sampling, unstabilized_norm_sampling_seeded, UnstabilizedNorm, DEFAULT_SAMPLES, SAMPLING_SEED,
};

use serde::{Deserialize, Serialize};

use crate::channel::{kraus_and_complementary, link_product, ChoiChannel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, kron, max_abs_entry, partial_trace, partial_transpose, BipartiteLabel, CMat, Subsystem, C64};
use crate::sdp::{solve, Coeff, LinearTerm, Sense, SdpProblem, SdpSolution, SolveStatus};

/// Tolerance on `Tr_B J = 0` for channel differences.
pub const TRACELESS_TOL: f64 = 1e-9;
/// Program values below this (with the data at unit scale) are reported as
/// exactly zero.
pub const ZERO_CLAMP: f64 = 1e-9;
/// Choi matrices with no entry above this are treated as round-off.
pub(crate) const NEGLIGIBLE_ENTRY: f64 = 1e-12;
/// Largest primal residual at which a stalled `ε_Φ` iterate still supplies `Λ`.
pub const CANDIDATE_RESIDUAL: f64 = 1e-6;

/// A Hermiticity-preserving map, typically a difference of two channels.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMapDiff {
    map: ChoiChannel,
}

impl HermitianMapDiff {
    pub fn new(map: ChoiChannel) -> Self {
        Self { map }
    }

    /// `Φ₁ − Φ₂`.
    pub fn between(a: &ChoiChannel, b: &ChoiChannel) -> Result<Self> {
        Ok(Self { map: a.difference(b)? })
    }

    pub fn map(&self) -> &ChoiChannel {
        &self.map
    }

    pub fn choi(&self) -> &CMat {
        self.map.choi().matrix()
    }

    pub fn dim_in(&self) -> usize {
        self.map.dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.map.dim_out()
    }

    pub fn label(&self) -> BipartiteLabel {
        self.map.label()
    }

    pub fn negated(&self) -> Self {
        Self { map: self.map.scaled(-1.0) }
    }

    /// Largest entry of `Tr_B J`.
    pub fn trace_defect(&self) -> f64 {
        max_abs_entry(&partial_trace(self.choi(), self.label(), Subsystem::B).expect("labels agree"))
    }

    /// Whether the map annihilates traces, as differences of channels do.
    pub fn is_traceless(&self) -> bool {
        self.trace_defect() <= TRACELESS_TOL * max_abs_entry(self.choi()).max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// All norm quantities for one channel difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBundle {
    pub diamond: f64,
    pub m1_minus: f64,
    pub m1_plus: f64,
    pub minf_minus: f64,
    pub minf_plus: f64,
    pub eps1: f64,
    pub nu: f64,
    /// Worst relative duality gap over the five programs.
    pub max_relative_gap: f64,
}

impl NormBundle {
    pub fn compute(delta: &HermitianMapDiff) -> Result<Self> {
        let diamond = diamond_norm_detailed(delta)?;
        let m1m = m_one_detailed(delta, Sign::Minus)?;
        let m1p = m_one_detailed(delta, Sign::Plus)?;
        let mim = m_infinity_detailed(delta, Sign::Minus)?;
        let mip = m_infinity_detailed(delta, Sign::Plus)?;
        let gap = [&diamond, &m1m, &m1p, &mim, &mip].iter().map(|o| o.relative_gap).fold(0.0, f64::max);
        Ok(Self {
            diamond: diamond.value,
            m1_minus: m1m.value,
            m1_plus: m1p.value,
            minf_minus: mim.value,
            minf_plus: mip.value,
            eps1: m1m.value.max(m1p.value),
            nu: mim.value.max(mip.value),
            max_relative_gap: gap,
        })
    }
}

/// Value of one program together with its solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramOutcome {
    pub value: f64,
    pub relative_gap: f64,
    /// Solution of the program with the data rescaled to unit entries.
    pub solution: SdpSolution,
}

fn clamp(v: f64) -> f64 {
    if v < ZERO_CLAMP {
        0.0
    } else {
        v
    }
}

fn outcome(sol: SdpSolution, scale: f64) -> Result<ProgramOutcome> {
    let sol = sol.optimal()?;
    Ok(ProgramOutcome { value: scale * clamp(sol.primal_value), relative_gap: sol.relative_gap(), solution: sol })
}

/// `J / max|J_ij|` and the factor; the programs are homogeneous in `J`, so
/// solving at unit scale keeps the solver's absolute tolerances relative.
/// Round-off-sized maps are left alone and fall under the absolute clamp.
fn normalized(j: &CMat) -> (CMat, f64) {
    let s = max_abs_entry(j);
    if s > NEGLIGIBLE_ENTRY {
        (j / C64::new(s, 0.0), s)
    } else {
        (j.clone(), 1.0)
    }
}

fn id_map(x: &CMat) -> CMat {
    x.clone()
}

fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `max 2⟨J, W⟩  s.t.  0 ⪯ W ⪯ 1_B ⊗ ρ,  ρ a state`; the diamond norm of a
/// trace-annihilating map. With `ppt`, additionally `W^{T_A} ⪰ 0`.
fn watrous_traceless(j: &CMat, label: BipartiteLabel, ppt: bool) -> Result<SdpSolution> {
    let (db, da) = (label.dim_b, label.dim_a);
    let n = label.total();
    let mut p = SdpProblem::new(Sense::Maximize);
    let w = p.add_hermitian(n);
    let s = p.add_hermitian(n);
    let rho = p.add_hermitian(da);
    p.add_objective(w, Coeff::Hermitian(j.clone()));
    let lift = move |r: &CMat| -kron(&identity(db), r);
    p.add_matrix_equality(
        n,
        &[
            LinearTerm::Map { block: w, dim: n, map: &id_map },
            LinearTerm::Map { block: s, dim: n, map: &id_map },
            LinearTerm::Map { block: rho, dim: da, map: &lift },
        ],
        &CMat::zeros(n, n),
    );
    p.add_constraint(vec![crate::sdp::Term { block: rho, coeff: Coeff::Hermitian(identity(da)) }], 1.0);
    if ppt {
        let t = p.add_hermitian(n);
        let pt = move |x: &CMat| -partial_transpose(x, label, Subsystem::A).expect("labels agree");
        p.add_matrix_equality(
            n,
            &[LinearTerm::Map { block: t, dim: n, map: &id_map }, LinearTerm::Map { block: w, dim: n, map: &pt }],
            &CMat::zeros(n, n),
        );
    }
    solve(&p)
}

/// Inner part of the general diamond-norm program: an extra Hermitian block
/// `K` entering the Choi matrix linearly as `J = J₀ − L(K)`, with `K` subject
/// to `Tr_{slot} K = 1`.
struct LinearChoi<'a> {
    dim: usize,
    map: &'a dyn Fn(&CMat) -> CMat,
    marginal: &'a dyn Fn(&CMat) -> CMat,
    marginal_dim: usize,
}

/// `min ½‖Tr_B Y₀‖_∞ + ½‖Tr_B Y₁‖_∞  s.t.  [[Y₀, −J], [−J, Y₁]] ⪰ 0`, the
/// diamond norm of any Hermiticity-preserving map. The last two blocks hold
/// the off-diagonal-free slacks; block 0 is the full `2n × 2n` matrix.
fn watrous_general(j0: &CMat, label: BipartiteLabel, inner: Option<LinearChoi<'_>>) -> Result<SdpSolution> {
    let (db, da) = (label.dim_b, label.dim_a);
    let n = label.total();
    let mut p = SdpProblem::new(Sense::Minimize);
    let big = p.add_hermitian(2 * n);
    let s0 = p.add_hermitian(da);
    let s1 = p.add_hermitian(da);
    let t = p.add_nonnegative(2);
    p.add_objective(t, Coeff::Diagonal(vec![0.5, 0.5]));
    let off_re = move |x: &CMat| {
        let x12 = x.view((0, n), (n, n)).into_owned();
        hermitian_part(&x12)
    };
    let off_im = move |x: &CMat| {
        let x12 = x.view((0, n), (n, n)).into_owned();
        (&x12 - x12.adjoint()) * C64::new(0.0, -0.5)
    };
    let k = inner.as_ref().map(|inner| (p.add_hermitian(inner.dim), inner));
    let neg_l;
    let mut terms = vec![LinearTerm::Map { block: big, dim: 2 * n, map: &off_re }];
    if let Some((kb, inner)) = &k {
        neg_l = move |x: &CMat| -(inner.map)(x);
        terms.push(LinearTerm::Map { block: *kb, dim: inner.dim, map: &neg_l });
    }
    p.add_matrix_equality(n, &terms, &-j0);
    p.add_matrix_equality(n, &[LinearTerm::Map { block: big, dim: 2 * n, map: &off_im }], &CMat::zeros(n, n));
    for (corner, slack, idx) in [(0, s0, 0), (n, s1, 1)] {
        let tr = move |x: &CMat| {
            let y = x.view((corner, corner), (n, n)).into_owned();
            partial_trace(&y, BipartiteLabel::new(db, da), Subsystem::B).expect("labels agree")
        };
        p.add_matrix_equality(
            da,
            &[
                LinearTerm::Map { block: slack, dim: da, map: &id_map },
                LinearTerm::Map { block: big, dim: 2 * n, map: &tr },
                LinearTerm::Scalar { block: t, index: idx, matrix: -identity(da) },
            ],
            &CMat::zeros(da, da),
        );
    }
    if let Some((kb, inner)) = &k {
        p.add_matrix_equality(
            inner.marginal_dim,
            &[LinearTerm::Map { block: *kb, dim: inner.dim, map: inner.marginal }],
            &identity(inner.marginal_dim),
        );
    }
    solve(&p)
}

pub fn diamond_norm_detailed(delta: &HermitianMapDiff) -> Result<ProgramOutcome> {
    let (j, s) = normalized(delta.choi());
    if delta.is_traceless() {
        outcome(watrous_traceless(&j, delta.label(), false)?, 2.0 * s)
    } else {
        outcome(watrous_general(&j, delta.label(), None)?, s)
    }
}

/// `‖Δ‖_⋄`, through the two-block program `2 max ⟨J, W⟩` when `Δ` annihilates
/// traces and through the general `[[Y₀, −J], [−J, Y₁]]` program otherwise.
pub fn diamond_norm(delta: &HermitianMapDiff) -> Result<f64> {
    Ok(diamond_norm_detailed(delta)?.value)
}

pub fn m_infinity_detailed(delta: &HermitianMapDiff, sign: Sign) -> Result<ProgramOutcome> {
    let label = delta.label();
    let n = label.total();
    let mut p = SdpProblem::new(Sense::Maximize);
    let sigma = p.add_hermitian(n);
    let tau = p.add_hermitian(n);
    let u = p.add_nonnegative(1);
    let (j, s) = normalized(delta.choi());
    p.add_objective(sigma, Coeff::Hermitian(j * C64::new(sign.factor(), 0.0)));
    let pt = move |x: &CMat| -partial_transpose(x, label, Subsystem::A).expect("labels agree");
    p.add_matrix_equality(
        n,
        &[LinearTerm::Map { block: tau, dim: n, map: &id_map }, LinearTerm::Map { block: sigma, dim: n, map: &pt }],
        &CMat::zeros(n, n),
    );
    p.add_constraint(
        vec![
            crate::sdp::Term { block: sigma, coeff: Coeff::Hermitian(identity(n)) },
            crate::sdp::Term { block: u, coeff: Coeff::Diagonal(vec![1.0]) },
        ],
        1.0,
    );
    outcome(solve(&p)?, s)
}

/// `M_∞^±(Δ) = max {±Tr(J σ) : σ ⪰ 0, σ^{T_A} ⪰ 0, Tr σ ≤ 1}`.
pub fn m_infinity(delta: &HermitianMapDiff, sign: Sign) -> Result<f64> {
    Ok(m_infinity_detailed(delta, sign)?.value)
}

pub fn m_one_detailed(delta: &HermitianMapDiff, sign: Sign) -> Result<ProgramOutcome> {
    if !delta.is_traceless() {
        return Err(Error::Domain(format!(
            "M_1 needs a trace-annihilating map; Tr_B J deviates by {:.3e}",
            delta.trace_defect()
        )));
    }
    let (j, s) = normalized(delta.choi());
    outcome(watrous_traceless(&(j * C64::new(sign.factor(), 0.0)), delta.label(), true)?, 2.0 * s)
}

/// `M_1^±(Δ) = 2 max {±Tr(J W) : W ⪰ 0, W^{T_A} ⪰ 0, W ⪯ 1_B ⊗ ρ}`.
pub fn m_one(delta: &HermitianMapDiff, sign: Sign) -> Result<f64> {
    Ok(m_one_detailed(delta, sign)?.value)
}

/// Nearest CPTP map along the segment towards the completely depolarizing
/// map, after projecting onto trace preservation.
fn repair_channel(dim_in: usize, dim_out: usize, choi: &CMat) -> Result<ChoiChannel> {
    let raw = ChoiChannel::new(dim_in, dim_out, hermitian_part(choi))?.project_tp();
    let lmin = raw.choi().min_eigenvalue();
    if lmin >= 0.0 {
        return ChoiChannel::cptp(dim_in, dim_out, raw.choi().matrix().clone());
    }
    let floor = 1.0 / dim_out as f64;
    let s = -lmin / (floor - lmin);
    let mixed = raw.choi().matrix() * C64::new(1.0 - s, 0.0) + identity(dim_in * dim_out) * C64::new(s * floor, 0.0);
    ChoiChannel::cptp(dim_in, dim_out, mixed)
}

/// Optimal degrading channel and the SDP value of
/// `ε_Φ = min_Λ ‖Φᶜ − Λ∘Φ‖_⋄` over channels `Λ: B → E`:
/// `min 2t  s.t.  Z ⪰ J(Φᶜ) − J(Λ∘Φ),  Z ⪰ 0,  t·1 ⪰ Tr_E Z,  Tr_E J(Λ) = 1_B`.
pub fn eps_phi(phi: &ChoiChannel) -> Result<(f64, ChoiChannel)> {
    let (_, comp) = kraus_and_complementary(phi)?;
    eps_phi_with(phi, &comp)
}

/// [`eps_phi`] against a given complementary channel.
pub fn eps_phi_with(phi: &ChoiChannel, comp: &ChoiChannel) -> Result<(f64, ChoiChannel)> {
    let fit = fit_degrading(phi, comp)?;
    match fit.value {
        Some(v) => Ok((v, fit.lambda)),
        None => Err(Error::Solver { status: fit.status }),
    }
}

/// A degrading channel from the `ε_Φ` program.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradingFit {
    /// Certified program value; `None` when the solver stalled short of its
    /// tolerances and only the final iterate is available.
    pub value: Option<f64>,
    pub lambda: ChoiChannel,
    pub status: SolveStatus,
}

/// Runs the `ε_Φ` program and rounds its `Λ` block to a channel. A stalled
/// solve still yields `Λ` when the iterate is within [`CANDIDATE_RESIDUAL`]
/// of feasibility: the rounded map is CPTP regardless, so every norm measured
/// against it remains a valid certificate.
pub fn fit_degrading(phi: &ChoiChannel, comp: &ChoiChannel) -> Result<DegradingFit> {
    let (da, db, de) = (phi.dim_in(), phi.dim_out(), comp.dim_out());
    if comp.dim_in() != da {
        return Err(Error::DimensionMismatch { expected: da, got: comp.dim_in() });
    }
    let n = de * da;
    let jphi = phi.choi().matrix().clone();
    let mut p = SdpProblem::new(Sense::Minimize);
    let z = p.add_hermitian(n);
    let lam = p.add_hermitian(de * db);
    let s1 = p.add_hermitian(n);
    let s2 = p.add_hermitian(da);
    let t = p.add_nonnegative(1);
    p.add_objective(t, Coeff::Diagonal(vec![2.0]));
    let neg = |x: &CMat| -x;
    let link = move |x: &CMat| -link_product(x, de, &jphi, db, da);
    p.add_matrix_equality(
        n,
        &[
            LinearTerm::Map { block: s1, dim: n, map: &id_map },
            LinearTerm::Map { block: z, dim: n, map: &neg },
            LinearTerm::Map { block: lam, dim: de * db, map: &link },
        ],
        &-comp.choi().matrix(),
    );
    let tr_e = move |x: &CMat| partial_trace(x, BipartiteLabel::new(de, da), Subsystem::B).expect("labels agree");
    p.add_matrix_equality(
        da,
        &[
            LinearTerm::Map { block: s2, dim: da, map: &id_map },
            LinearTerm::Map { block: z, dim: n, map: &tr_e },
            LinearTerm::Scalar { block: t, index: 0, matrix: -identity(da) },
        ],
        &CMat::zeros(da, da),
    );
    let tp = move |x: &CMat| partial_trace(x, BipartiteLabel::new(de, db), Subsystem::B).expect("labels agree");
    p.add_matrix_equality(db, &[LinearTerm::Map { block: lam, dim: de * db, map: &tp }], &identity(db));
    let sol = solve(&p)?;
    let value = (sol.status == SolveStatus::Optimal).then(|| clamp(sol.primal_value));
    if value.is_none() && !(sol.primal_residual <= CANDIDATE_RESIDUAL) {
        return Err(Error::Solver { status: sol.status });
    }
    let lambda = repair_channel(db, de, sol.primal[lam].hermitian())?;
    Ok(DegradingFit { value, lambda, status: sol.status })
}

/// `ν_Φ = min_Θ ‖(Φᶜ)* − Φ*∘Θ‖_⋄` over unital CP maps `Θ: E → B`, through
/// the general diamond-norm program with `Θ` as a joint variable. Returns the
/// value and `Θ` (whose adjoint `Θ*` is the corresponding degrading channel).
pub fn nu_phi(phi: &ChoiChannel) -> Result<(f64, ChoiChannel)> {
    let (_, comp) = kraus_and_complementary(phi)?;
    let (da, db, de) = (phi.dim_in(), phi.dim_out(), comp.dim_out());
    let phi_adj = phi.adjoint().choi().matrix().clone();
    let comp_adj = comp.adjoint();
    let map = move |x: &CMat| link_product(&phi_adj, da, x, db, de);
    let marginal = move |x: &CMat| partial_trace(x, BipartiteLabel::new(db, de), Subsystem::A).expect("labels agree");
    let inner = LinearChoi { dim: db * de, map: &map, marginal: &marginal, marginal_dim: db };
    let out = outcome(watrous_general(comp_adj.choi().matrix(), comp_adj.label(), Some(inner))?, 1.0)?;
    let theta = ChoiChannel::new(de, db, hermitian_part(out.solution.primal[4].hermitian()))?;
    Ok((out.value, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, completely_depolarizing, depolarizing, identity, random_channel};
    use crate::linalg::HermitianMatrix;

    fn depol_diff(p: f64, q: f64) -> HermitianMapDiff {
        HermitianMapDiff::between(&depolarizing(p).unwrap(), &depolarizing(q).unwrap()).unwrap()
    }

    #[test]
    fn zero_difference() {
        let d = depol_diff(0.2, 0.2);
        let b = NormBundle::compute(&d).unwrap();
        for v in [b.diamond, b.m1_minus, b.m1_plus, b.minf_minus, b.minf_plus] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn diamond_of_depolarizing_pairs() {
        for (p, q) in [(0.1, 0.3), (0.0, 0.75), (0.5, 0.05)] {
            let v = diamond_norm(&depol_diff(p, q)).unwrap();
            assert!((v - 2.0 * f64::abs(p - q)).abs() < 1e-6, "{p} {q}: {v}");
        }
    }

    #[test]
    fn diamond_of_identity_minus_replacer() {
        // the maximally entangled input gives ‖|Ω⟩⟨Ω|/2 − 1/4‖₁ = 3/2
        let d = HermitianMapDiff::between(&identity(2), &completely_depolarizing(2)).unwrap();
        let v = diamond_norm(&d).unwrap();
        assert!((v - 1.5).abs() < 1e-6);
        let general = outcome(watrous_general(d.choi(), d.label(), None).unwrap(), 1.0).unwrap();
        assert!((general.value - 1.5).abs() < 1e-6);
        let j = d.choi() * C64::new(0.5, 0.0);
        assert!((HermitianMatrix::new(j).unwrap().schatten_norm(crate::linalg::Schatten::One) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn general_program_agrees_on_channel_differences() {
        for seed in 0..3 {
            let a = random_channel(2, 2, 2, seed).unwrap();
            let b = random_channel(2, 2, 3, seed + 50).unwrap();
            let d = HermitianMapDiff::between(&a, &b).unwrap();
            let t = diamond_norm(&d).unwrap();
            let g = outcome(watrous_general(d.choi(), d.label(), None).unwrap(), 1.0).unwrap().value;
            assert!((t - g).abs() < 1e-6, "{t} vs {g}");
        }
    }

    #[test]
    fn general_diamond_of_scaled_identity() {
        // ‖c·id‖_⋄ = |c|, a map that does not annihilate traces
        let d = HermitianMapDiff::new(identity(2).scaled(-0.7));
        assert!(!d.is_traceless());
        assert!((diamond_norm(&d).unwrap() - 0.7).abs() < 1e-6);
        assert!(m_one(&d, Sign::Plus).is_err());
    }

    #[test]
    fn m_bounds_on_depolarizing_pairs() {
        let (p, q) = (0.05, 0.2);
        let b = NormBundle::compute(&depol_diff(p, q)).unwrap();
        let gap = f64::abs(p - q);
        assert!(b.nu >= 2.0 / 3.0 * gap - 1e-7);
        assert!(b.eps1 >= 4.0 / 3.0 * gap - 1e-7 && b.eps1 <= 2.0 * gap + 1e-6);
        assert!(2.0 * b.nu <= b.eps1 + 1e-6 && b.eps1 <= b.diamond + 1e-6);
        assert!(b.max_relative_gap <= 1e-7);
    }

    #[test]
    fn sign_symmetry() {
        let a = random_channel(2, 2, 2, 4).unwrap();
        let b = random_channel(2, 2, 2, 5).unwrap();
        let d = HermitianMapDiff::between(&a, &b).unwrap();
        let plus = m_infinity(&d, Sign::Plus).unwrap();
        let minus = m_infinity(&d.negated(), Sign::Minus).unwrap();
        assert!((plus - minus).abs() <= 1e-9 * (1.0 + plus));
    }

    #[test]
    fn degradable_channels_have_zero_distances() {
        for phi in [identity(2), amplitude_damping(0.3).unwrap()] {
            let (e, lam) = eps_phi(&phi).unwrap();
            assert!(e <= 1e-6, "eps {e}");
            assert!(lam.is_cp() && lam.is_tp());
            let (v, theta) = nu_phi(&phi).unwrap();
            assert!(v <= 1e-6, "nu {v}");
            assert!(theta.is_cp());
        }
    }

    #[test]
    fn eps_phi_is_self_consistent() {
        let phi = depolarizing(0.01).unwrap();
        let (_, comp) = kraus_and_complementary(&phi).unwrap();
        let (e, lam) = eps_phi_with(&phi, &comp).unwrap();
        let d = HermitianMapDiff::between(&comp, &lam.compose(&phi).unwrap()).unwrap();
        assert!((diamond_norm(&d).unwrap() - e).abs() < 1e-6);
        assert!(e > 0.0 && e < 2.0);
    }

    #[test]
    fn nu_phi_within_cb_bound() {
        let phi = depolarizing(0.05).unwrap();
        let (v, theta) = nu_phi(&phi).unwrap();
        assert!(v >= 0.0 && v <= 2.0 * 2.0 * 4.0);
        let unit = theta.apply_matrix(&CMat::identity(4, 4)).unwrap();
        assert!(max_abs_entry(&(unit - CMat::identity(2, 2))) < 1e-7);
    }
}
