//! Dense block-structured semidefinite programs over complex Hermitian and
//! nonnegative cones.
//!
//! A problem reads
//!
//! ```text
//! opt  Σ_k ⟨C_k, X_k⟩   s.t.   Σ_k ⟨A_ik, X_k⟩ = b_i,   X_k ∈ K_k
//! ```
//!
//! with `⟨A, X⟩ = Re Tr(A X)`. Hermitian blocks are solved through the real
//! embedding of [`embed_complex`]; the dual reported for a maximization is
//! `min bᵀy  s.t.  Σ y_i A_i − C ⪰ 0`.

mod ipm;

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_basis, hermiticity_defect, matrix_scale, real_inner, CMat, C64, HERM_TOL};
use ipm::{Blk, Kind, RealSdp, Sparse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    /// `n × n` complex Hermitian PSD matrices.
    Hermitian(usize),
    /// `n` nonnegative scalars.
    Nonnegative(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Coeff {
    Hermitian(#[serde(with = "crate::json::cmat")] CMat),
    Diagonal(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub block: usize,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<Term>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub sense: Sense,
    pub blocks: Vec<Cone>,
    pub objective: Vec<Term>,
    pub constraints: Vec<Constraint>,
}

/// A linear contribution to a matrix equality constraint.
pub enum LinearTerm<'a> {
    /// `f(X_block)` for a Hermiticity-preserving map `f` on a `dim × dim` block.
    Map { block: usize, dim: usize, map: &'a dyn Fn(&CMat) -> CMat },
    /// `x_block[index] · M` for an entry of a nonnegative block.
    Scalar { block: usize, index: usize, matrix: CMat },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
}

impl SolverOptions {
    pub const STANDARD: Self = Self { gap_tol: 1e-7, feas_tol: 1e-8, max_iterations: 200, step_fraction: 0.98 };

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(self.gap_tol) && ok(self.feas_tol) && self.max_iterations > 0) {
            return Err(Error::Malformed("solver tolerances must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::Malformed("step fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// The process-wide options used by [`solve`]; [`SolverOptions::STANDARD`]
/// unless replaced through [`set_default_options`].
impl Default for SolverOptions {
    fn default() -> Self {
        *DEFAULTS.read().unwrap_or_else(|e| e.into_inner())
    }
}

static DEFAULTS: RwLock<SolverOptions> = RwLock::new(SolverOptions::STANDARD);

/// Replaces the options every [`solve`] call (and so every norm program) uses.
pub fn set_default_options(opts: SolverOptions) -> Result<()> {
    opts.validate()?;
    *DEFAULTS.write().unwrap_or_else(|e| e.into_inner()) = opts;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BlockValue {
    Hermitian(#[serde(with = "crate::json::cmat")] CMat),
    Nonnegative(Vec<f64>),
}

impl BlockValue {
    pub fn hermitian(&self) -> &CMat {
        match self {
            BlockValue::Hermitian(m) => m,
            BlockValue::Nonnegative(_) => panic!("block is not Hermitian"),
        }
    }

    pub fn scalars(&self) -> &[f64] {
        match self {
            BlockValue::Nonnegative(v) => v,
            BlockValue::Hermitian(_) => panic!("block is not a nonnegative orthant"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub primal: Vec<BlockValue>,
    pub dual: Vec<f64>,
    pub dual_slack: Vec<BlockValue>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SdpSolution {
    /// Passes the solution through when optimal, otherwise a solver error.
    pub fn optimal(self) -> Result<Self> {
        if self.status == SolveStatus::Optimal {
            Ok(self)
        } else {
            Err(Error::Solver { status: self.status })
        }
    }

    /// `|primal − dual| / (1 + |primal|)`.
    pub fn relative_gap(&self) -> f64 {
        self.gap / (1.0 + self.primal_value.abs())
    }
}

/// `[[Re H, −Im H], [Im H, Re H]]`. PSD iff `H` is, with
/// `⟨embed(X), embed(Y)⟩ = 2 Re Tr(X Y)`.
pub fn embed_complex(h: &CMat) -> nalgebra::DMatrix<f64> {
    let n = h.nrows();
    nalgebra::DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of the embedding on its range; the orthogonal projection otherwise.
fn deembed(m: &nalgebra::DMatrix<f64>) -> CMat {
    let n = m.nrows() / 2;
    CMat::from_fn(n, n, |i, j| {
        let re = 0.5 * (m[(i, j)] + m[(n + i, n + j)]);
        let im = 0.5 * (m[(n + i, j)] - m[(i, n + j)]);
        C64::new(re, im)
    })
}

const PRUNE: f64 = 1e-15;

/// Entries of `embed(H)/2`, so that the real pairing reproduces `Re Tr(H X)`.
fn sparse_embedded(h: &CMat) -> Sparse {
    let n = h.nrows();
    let mut out = Vec::new();
    let cut = PRUNE * h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)] * 0.5;
            if z.re.abs() > cut {
                out.push((i, j, z.re));
                out.push((n + i, n + j, z.re));
            }
            if z.im.abs() > cut {
                out.push((i, n + j, -z.im));
                out.push((n + i, j, z.im));
            }
        }
    }
    out
}

fn sparse_diag(d: &[f64]) -> Sparse {
    d.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, &v)| (i, i, v)).collect()
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self { sense, blocks: Vec::new(), objective: Vec::new(), constraints: Vec::new() }
    }

    pub fn add_hermitian(&mut self, n: usize) -> usize {
        self.blocks.push(Cone::Hermitian(n));
        self.blocks.len() - 1
    }

    pub fn add_nonnegative(&mut self, n: usize) -> usize {
        self.blocks.push(Cone::Nonnegative(n));
        self.blocks.len() - 1
    }

    pub fn add_objective(&mut self, block: usize, coeff: Coeff) {
        self.objective.push(Term { block, coeff });
    }

    pub fn add_constraint(&mut self, terms: Vec<Term>, rhs: f64) {
        self.constraints.push(Constraint { terms, rhs });
    }

    /// Adds `Σ terms = rhs` for a Hermitian `out_dim × out_dim` right side, one
    /// scalar constraint per element of the orthonormal Hermitian basis. Map
    /// adjoints are formed numerically: `f*(E) = Σ_j ⟨E, f(F_j)⟩ F_j`.
    pub fn add_matrix_equality(&mut self, out_dim: usize, terms: &[LinearTerm<'_>], rhs: &CMat) {
        let out_basis = hermitian_basis(out_dim);
        struct Prepared {
            block: usize,
            images: Vec<CMat>,
            domain: Vec<CMat>,
            scalar: Option<(usize, usize)>,
        }
        let prepared: Vec<Prepared> = terms
            .iter()
            .map(|t| match t {
                LinearTerm::Map { block, dim, map } => {
                    let domain = hermitian_basis(*dim);
                    let images = domain.iter().map(|f| map(f)).collect();
                    Prepared { block: *block, images, domain, scalar: None }
                }
                LinearTerm::Scalar { block, index, matrix } => {
                    let len = match self.blocks[*block] {
                        Cone::Nonnegative(n) => n,
                        Cone::Hermitian(_) => 0,
                    };
                    Prepared { block: *block, images: vec![matrix.clone()], domain: Vec::new(), scalar: Some((*index, len)) }
                }
            })
            .collect();
        for e in &out_basis {
            let mut row = Vec::with_capacity(prepared.len());
            for p in &prepared {
                match p.scalar {
                    Some((index, len)) => {
                        let mut d = vec![0.0; len.max(index + 1)];
                        d[index] = real_inner(e, &p.images[0]);
                        row.push(Term { block: p.block, coeff: Coeff::Diagonal(d) });
                    }
                    None => {
                        let n = p.domain[0].nrows();
                        let mut adj = CMat::zeros(n, n);
                        for (f, img) in p.domain.iter().zip(&p.images) {
                            let w = real_inner(e, img);
                            if w != 0.0 {
                                adj += f * C64::new(w, 0.0);
                            }
                        }
                        row.push(Term { block: p.block, coeff: Coeff::Hermitian(adj) });
                    }
                }
            }
            self.add_constraint(row, real_inner(e, rhs));
        }
    }

    /// Checks block indices, shapes, and Hermiticity of all coefficients.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Malformed("no blocks".into()));
        }
        let check = |t: &Term| -> Result<()> {
            let cone = self
                .blocks
                .get(t.block)
                .ok_or_else(|| Error::Malformed(format!("block index {} out of range", t.block)))?;
            match (cone, &t.coeff) {
                (Cone::Hermitian(n), Coeff::Hermitian(m)) => {
                    if m.nrows() != *n || m.ncols() != *n {
                        return Err(Error::Malformed(format!(
                            "block {} expects {n}x{n}, got {}x{}",
                            t.block,
                            m.nrows(),
                            m.ncols()
                        )));
                    }
                    if hermiticity_defect(m) > HERM_TOL * matrix_scale(m) {
                        return Err(Error::Malformed(format!("coefficient on block {} is not Hermitian", t.block)));
                    }
                    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                        return Err(Error::Malformed("non-finite coefficient".into()));
                    }
                }
                (Cone::Nonnegative(n), Coeff::Diagonal(d)) => {
                    if d.len() != *n {
                        return Err(Error::Malformed(format!("block {} expects {n} scalars, got {}", t.block, d.len())));
                    }
                    if d.iter().any(|x| !x.is_finite()) {
                        return Err(Error::Malformed("non-finite coefficient".into()));
                    }
                }
                _ => return Err(Error::Malformed(format!("coefficient kind does not match block {}", t.block))),
            }
            Ok(())
        };
        for t in &self.objective {
            check(t)?;
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(Error::Malformed("non-finite right-hand side".into()));
            }
            for t in &c.terms {
                check(t)?;
            }
        }
        Ok(())
    }

    fn to_real(&self) -> RealSdp {
        let kinds: Vec<Kind> = self
            .blocks
            .iter()
            .map(|b| match *b {
                Cone::Hermitian(n) => Kind::Psd(2 * n),
                Cone::Nonnegative(n) => Kind::Lp(n),
            })
            .collect();
        let sign = match self.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let to_sparse = |c: &Coeff| match c {
            Coeff::Hermitian(m) => sparse_embedded(m),
            Coeff::Diagonal(d) => sparse_diag(d),
        };
        let mut c: Vec<Sparse> = vec![Vec::new(); kinds.len()];
        for t in &self.objective {
            c[t.block].extend(to_sparse(&t.coeff).into_iter().map(|(i, j, v)| (i, j, sign * v)));
        }
        let a = self
            .constraints
            .iter()
            .map(|con| {
                let mut per_block: Vec<(usize, Sparse)> = Vec::new();
                for t in &con.terms {
                    let sp = to_sparse(&t.coeff);
                    match per_block.iter_mut().find(|(b, _)| *b == t.block) {
                        Some((_, existing)) => existing.extend(sp),
                        None => per_block.push((t.block, sp)),
                    }
                }
                per_block.retain(|(_, s)| !s.is_empty());
                per_block
            })
            .collect();
        let b = self.constraints.iter().map(|c| c.rhs).collect();
        RealSdp { kinds, c, a, b }
    }
}

pub fn solve(problem: &SdpProblem) -> Result<SdpSolution> {
    solve_with(problem, &SolverOptions::default())
}

pub fn solve_with(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    opts.validate()?;
    let real = problem.to_real();
    let sol = ipm::solve_real(&real, opts);
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let unpack = |blocks: &[Blk], factor: f64| -> Vec<BlockValue> {
        blocks
            .iter()
            .map(|b| match b {
                Blk::Psd(m) => BlockValue::Hermitian(deembed(m) * C64::new(factor, 0.0)),
                Blk::Lp(v) => BlockValue::Nonnegative(v.iter().map(|x| x * factor).collect()),
            })
            .collect()
    };
    let primal = unpack(&sol.x, 1.0);
    // Ŝ = embed(S)/2 on Hermitian blocks
    let mut dual_slack = unpack(&sol.s, 2.0);
    for (v, b) in dual_slack.iter_mut().zip(&sol.s) {
        if let (BlockValue::Nonnegative(d), Blk::Lp(orig)) = (v, b) {
            *d = orig.iter().copied().collect();
        }
    }
    let primal_value = sign * sol.pobj;
    let dual_value = sign * sol.dobj;
    Ok(SdpSolution {
        status: sol.status,
        primal_value,
        dual_value,
        gap: (primal_value - dual_value).abs(),
        primal,
        dual: sol.y.iter().map(|y| sign * y).collect(),
        dual_slack,
        iterations: sol.iterations,
        primal_residual: sol.primal_residual,
        dual_residual: sol.dual_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{paulis, random_density, random_hermitian, HermitianMatrix};

    fn herm(m: CMat) -> Coeff {
        Coeff::Hermitian(m)
    }

    fn real_diag(d: &[f64]) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(d.len(), d.iter().map(|&x| C64::new(x, 0.0))))
    }

    #[test]
    fn largest_eigenvalue_epigraph() {
        // min λ  s.t.  S = λ1 − diag(1,2,3) ⪰ 0
        let mut p = SdpProblem::new(Sense::Minimize);
        let lam = p.add_nonnegative(1);
        let s = p.add_hermitian(3);
        p.add_objective(lam, Coeff::Diagonal(vec![1.0]));
        let id = |x: &CMat| x.clone();
        p.add_matrix_equality(
            3,
            &[
                LinearTerm::Map { block: s, dim: 3, map: &id },
                LinearTerm::Scalar { block: lam, index: 0, matrix: -CMat::identity(3, 3) },
            ],
            &-real_diag(&[1.0, 2.0, 3.0]),
        );
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert!((sol.primal_value - 3.0).abs() < 1e-7, "{}", sol.primal_value);
        assert!(sol.relative_gap() <= 1e-7);
        assert!(sol.primal_residual <= 1e-8);
    }

    #[test]
    fn bounded_trace() {
        // max Tr σ  s.t.  σ + T = 1₂
        let mut p = SdpProblem::new(Sense::Maximize);
        let sigma = p.add_hermitian(2);
        let t = p.add_hermitian(2);
        p.add_objective(sigma, herm(CMat::identity(2, 2)));
        let id = |x: &CMat| x.clone();
        p.add_matrix_equality(
            2,
            &[LinearTerm::Map { block: sigma, dim: 2, map: &id }, LinearTerm::Map { block: t, dim: 2, map: &id }],
            &CMat::identity(2, 2),
        );
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert!((sol.primal_value - 2.0).abs() < 1e-7);
        assert!(sol.primal_value <= sol.dual_value + 1e-9);
    }

    fn max_overlap(h: &CMat) -> SdpSolution {
        let n = h.nrows();
        let mut p = SdpProblem::new(Sense::Maximize);
        let rho = p.add_hermitian(n);
        p.add_objective(rho, herm(h.clone()));
        p.add_constraint(vec![Term { block: rho, coeff: herm(CMat::identity(n, n)) }], 1.0);
        solve(&p).unwrap().optimal().unwrap()
    }

    #[test]
    fn complex_data_matches_spectrum() {
        let y = paulis()[2].clone();
        let sol = max_overlap(&y);
        assert!((sol.primal_value - 1.0).abs() < 1e-7);
        // the optimizer is the +1 eigenprojector of Y
        let rho = sol.primal[0].hermitian();
        assert!((rho[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-4);
        for seed in 0..5 {
            let h = random_hermitian(4, seed);
            let want = HermitianMatrix::new(h.clone()).unwrap().eigenvalues()[0];
            let sol = max_overlap(&h);
            assert!((sol.primal_value - want).abs() < 1e-6 * (1.0 + want.abs()), "{} vs {want}", sol.primal_value);
        }
    }

    #[test]
    fn dual_slack_is_psd_and_consistent() {
        let h = random_hermitian(3, 7);
        let sol = max_overlap(&h);
        // S = y·1 − H
        let s = sol.dual_slack[0].hermitian();
        let want = CMat::identity(3, 3) * C64::new(sol.dual[0], 0.0) - &h;
        assert!(crate::linalg::max_abs_entry(&(s - &want)) < 1e-7);
        assert!(HermitianMatrix::new(s.clone()).unwrap().min_eigenvalue() > -1e-8);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.add_hermitian(2);
        p.add_objective(x, herm(CMat::identity(2, 2)));
        p.add_constraint(vec![Term { block: x, coeff: herm(CMat::identity(2, 2)) }], -1.0);
        assert_eq!(solve(&p).unwrap().status, SolveStatus::Infeasible);

        let mut q = SdpProblem::new(Sense::Minimize);
        let v = q.add_nonnegative(2);
        q.add_objective(v, Coeff::Diagonal(vec![-1.0, 0.0]));
        q.add_constraint(vec![Term { block: v, coeff: Coeff::Diagonal(vec![1.0, -1.0]) }], 0.0);
        assert_eq!(solve(&q).unwrap().status, SolveStatus::Unbounded);
        assert!(matches!(solve(&q).unwrap().optimal(), Err(Error::Solver { status: SolveStatus::Unbounded })));
    }

    #[test]
    fn objective_scaling_is_linear() {
        let h = random_hermitian(4, 11);
        let base = max_overlap(&h).primal_value;
        for &c in &[0.5, 3.0, 40.0] {
            let v = max_overlap(&(h.clone() * C64::new(c, 0.0))).primal_value;
            assert!((v - c * base).abs() <= 1e-9 * (c * base).abs().max(1.0) * 100.0, "{v} vs {}", c * base);
        }
    }

    #[test]
    fn rejects_malformed() {
        let mut p = SdpProblem::new(Sense::Minimize);
        let x = p.add_hermitian(2);
        p.add_objective(x, herm(CMat::identity(3, 3)));
        assert!(matches!(solve(&p), Err(Error::Malformed(_))));
        let mut q = SdpProblem::new(Sense::Minimize);
        let x = q.add_hermitian(2);
        let mut nh = CMat::zeros(2, 2);
        nh[(0, 1)] = C64::new(1.0, 0.0);
        q.add_objective(x, herm(nh));
        assert!(solve(&q).is_err());
        let mut r = SdpProblem::new(Sense::Minimize);
        r.add_nonnegative(1);
        r.add_objective(5, Coeff::Diagonal(vec![1.0]));
        assert!(solve(&r).is_err());
    }

    #[test]
    fn embedding_examples() {
        let d = real_diag(&[1.0, -2.0]);
        let e = embed_complex(&d);
        assert_eq!(e.nrows(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { [1.0, -2.0][i % 2] } else { 0.0 };
                assert_eq!(e[(i, j)], want);
            }
        }
        let ey = embed_complex(&paulis()[2]);
        assert_eq!(ey, ey.transpose());
        let mut ev: Vec<f64> = ey.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        for (v, w) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - w).abs() < 1e-12);
        }
        for seed in 0..10 {
            let rho = random_density(5, seed);
            let e = embed_complex(rho.matrix());
            assert!(e.symmetric_eigenvalues().min() > -1e-12);
            assert!(crate::linalg::max_abs_entry(&(deembed(&e) - rho.matrix())) < 1e-15);
            // pairing doubles
            let h = random_hermitian(5, seed + 100);
            let lhs = embed_complex(&h).dot(&e);
            let rhs = 2.0 * real_inner(&h, rho.matrix());
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn problem_round_trips_through_json() {
        let mut p = SdpProblem::new(Sense::Maximize);
        let r = p.add_hermitian(2);
        p.add_objective(r, herm(paulis()[2].clone()));
        p.add_constraint(vec![Term { block: r, coeff: herm(CMat::identity(2, 2)) }], 1.0);
        let s = serde_json::to_string(&p).unwrap();
        let back: SdpProblem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
