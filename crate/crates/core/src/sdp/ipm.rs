//! Real primal-dual interior-point method with Nesterov–Todd scaling and
//! Mehrotra's predictor-corrector, for
//!
//! ```text
//! min ⟨C, X⟩  s.t.  ⟨A_k, X⟩ = b_k,  X ∈ K        max bᵀy  s.t.  C − Σ y_k A_k = S ∈ K
//! ```
//!
//! with `K` a product of real PSD cones and nonnegative orthants.

use nalgebra::{DMatrix, DVector};

use super::{SolveStatus, SolverOptions};

/// Symmetric sparse coefficient: entries `(i, j, v)`, both triangles listed.
/// Orthant blocks only use diagonal entries.
pub(crate) type Sparse = Vec<(usize, usize, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Psd(usize),
    Lp(usize),
}

impl Kind {
    fn size(self) -> usize {
        match self {
            Kind::Psd(n) | Kind::Lp(n) => n,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RealSdp {
    pub kinds: Vec<Kind>,
    pub c: Vec<Sparse>,
    /// Per constraint, per touched block.
    pub a: Vec<Vec<(usize, Sparse)>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) enum Blk {
    Psd(DMatrix<f64>),
    Lp(DVector<f64>),
}

impl Blk {
    fn zeros(k: Kind) -> Self {
        match k {
            Kind::Psd(n) => Blk::Psd(DMatrix::zeros(n, n)),
            Kind::Lp(n) => Blk::Lp(DVector::zeros(n)),
        }
    }

    fn identity(k: Kind, s: f64) -> Self {
        match k {
            Kind::Psd(n) => Blk::Psd(DMatrix::identity(n, n) * s),
            Kind::Lp(n) => Blk::Lp(DVector::from_element(n, s)),
        }
    }

    fn dot(&self, o: &Blk) -> f64 {
        match (self, o) {
            (Blk::Psd(a), Blk::Psd(b)) => a.dot(b),
            (Blk::Lp(a), Blk::Lp(b)) => a.dot(b),
            _ => unreachable!("block kinds always agree"),
        }
    }

    fn axpy(&mut self, alpha: f64, o: &Blk) {
        match (self, o) {
            (Blk::Psd(a), Blk::Psd(b)) => *a += b * alpha,
            (Blk::Lp(a), Blk::Lp(b)) => *a += b * alpha,
            _ => unreachable!("block kinds always agree"),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Blk::Psd(a) => a.amax(),
            Blk::Lp(a) => a.amax(),
        }
    }

    fn norm(&self) -> f64 {
        match self {
            Blk::Psd(a) => a.norm(),
            Blk::Lp(a) => a.norm(),
        }
    }

    fn symmetrize(&mut self) {
        if let Blk::Psd(a) = self {
            let t = a.transpose();
            *a += t;
            *a *= 0.5;
        }
    }
}

fn sp_dot(s: &Sparse, x: &Blk) -> f64 {
    match x {
        Blk::Psd(m) => s.iter().map(|&(i, j, v)| v * m[(i, j)]).sum(),
        Blk::Lp(d) => s.iter().filter(|e| e.0 == e.1).map(|&(i, _, v)| v * d[i]).sum(),
    }
}

fn sp_add(s: &Sparse, alpha: f64, out: &mut Blk) {
    match out {
        Blk::Psd(m) => {
            for &(i, j, v) in s {
                m[(i, j)] += alpha * v;
            }
        }
        Blk::Lp(d) => {
            for &(i, j, v) in s {
                if i == j {
                    d[i] += alpha * v;
                }
            }
        }
    }
}

fn sp_norm(s: &Sparse) -> f64 {
    s.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt()
}

/// NT scaling point for one block.
enum Scaling {
    /// `W = G Gᵀ`, `Gᵀ S G = G⁻¹ X G⁻ᵀ = diag(λ)`.
    Psd { g: DMatrix<f64>, ginv: DMatrix<f64>, w: DMatrix<f64>, lambda: DVector<f64> },
    /// `w = x/s`, `g = √w` so scaled quantities are `Δx/g`, `Δs·g`.
    Lp { w: DVector<f64>, g: DVector<f64>, lambda: DVector<f64> },
}

/// Factor `M ≈ L Lᵀ` returning `(L, L⁻¹)`, with an eigenvalue fallback when
/// Cholesky fails near the boundary.
fn factor(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if let Some(ch) = m.clone().cholesky() {
        let l = ch.l();
        if let Some(li) = l.solve_lower_triangular(&DMatrix::identity(n, n)) {
            if li.iter().all(|x| x.is_finite()) {
                return (l, li);
            }
        }
    }
    let e = m.clone().symmetric_eigen();
    let floor = 1e-300f64.max(e.eigenvalues.amax() * 1e-18);
    let sq: DVector<f64> = e.eigenvalues.map(|x| x.max(floor).sqrt());
    let l = &e.eigenvectors * DMatrix::from_diagonal(&sq);
    let li = DMatrix::from_diagonal(&sq.map(|x| 1.0 / x)) * e.eigenvectors.transpose();
    (l, li)
}

fn nt_scaling(x: &Blk, s: &Blk) -> (Scaling, Option<DMatrix<f64>>, Option<DMatrix<f64>>) {
    match (x, s) {
        (Blk::Psd(x), Blk::Psd(s)) => {
            let (lx, lxi) = factor(x);
            let (ls, lsi) = factor(s);
            let k = ls.transpose() * &lx;
            let svd = k.svd(true, true);
            let v = svd.v_t.expect("requested").transpose();
            let d = svd.singular_values;
            let dm = d.map(|x| x.max(1e-300));
            let g = &lx * &v * DMatrix::from_diagonal(&dm.map(|x| 1.0 / x.sqrt()));
            let ginv = DMatrix::from_diagonal(&dm.map(|x| x.sqrt())) * v.transpose() * &lxi;
            let mut w = &g * g.transpose();
            let t = w.transpose();
            w = (w + t) * 0.5;
            (Scaling::Psd { g, ginv, w, lambda: dm }, Some(lxi), Some(lsi))
        }
        (Blk::Lp(x), Blk::Lp(s)) => {
            let w = x.component_div(s);
            let g = w.map(f64::sqrt);
            let lambda = x.component_mul(s).map(f64::sqrt);
            (Scaling::Lp { w, g, lambda }, None, None)
        }
        _ => unreachable!("block kinds always agree"),
    }
}

impl Scaling {
    /// `W U W`.
    fn apply_w(&self, u: &Blk) -> Blk {
        match (self, u) {
            (Scaling::Psd { w, .. }, Blk::Psd(u)) => {
                let mut r = w * u * w;
                let t = r.transpose();
                r = (r + t) * 0.5;
                Blk::Psd(r)
            }
            (Scaling::Lp { w, .. }, Blk::Lp(u)) => Blk::Lp(w.component_mul(u)),
            _ => unreachable!("block kinds always agree"),
        }
    }

    /// `W A W` for a sparse symmetric `A`.
    fn apply_w_sparse(&self, a: &Sparse, kind: Kind) -> Blk {
        match self {
            Scaling::Psd { w, .. } => {
                let n = kind.size();
                if a.len() > n {
                    let mut d = Blk::zeros(kind);
                    sp_add(a, 1.0, &mut d);
                    return self.apply_w(&d);
                }
                let mut r = DMatrix::zeros(n, n);
                for &(i, j, v) in a {
                    // v · W e_i e_jᵀ W
                    r.ger(v, &w.column(i), &w.column(j), 1.0);
                }
                let t = r.transpose();
                Blk::Psd((r + t) * 0.5)
            }
            Scaling::Lp { w, .. } => {
                let mut d = DVector::zeros(kind.size());
                for &(i, j, v) in a {
                    if i == j {
                        d[i] += v * w[i];
                    }
                }
                Blk::Lp(d)
            }
        }
    }

    /// Scaled pair `(G⁻¹ ΔX G⁻ᵀ, Gᵀ ΔS G)`.
    fn scale_pair(&self, dx: &Blk, ds: &Blk) -> (Blk, Blk) {
        match (self, dx, ds) {
            (Scaling::Psd { g, ginv, .. }, Blk::Psd(dx), Blk::Psd(ds)) => {
                (Blk::Psd(ginv * dx * ginv.transpose()), Blk::Psd(g.transpose() * ds * g))
            }
            (Scaling::Lp { g, .. }, Blk::Lp(dx), Blk::Lp(ds)) => {
                (Blk::Lp(dx.component_div(g)), Blk::Lp(ds.component_mul(g)))
            }
            _ => unreachable!("block kinds always agree"),
        }
    }

    /// Solve `λ ∘ V = r` (Jordan product) for `V`, then return `G V Gᵀ`.
    fn unscale_complementarity(&self, r: &Blk) -> Blk {
        match (self, r) {
            (Scaling::Psd { g, lambda, .. }, Blk::Psd(r)) => {
                let v = DMatrix::from_fn(r.nrows(), r.ncols(), |i, j| 2.0 * r[(i, j)] / (lambda[i] + lambda[j]));
                let mut out = g * v * g.transpose();
                let t = out.transpose();
                out = (out + t) * 0.5;
                Blk::Psd(out)
            }
            (Scaling::Lp { g, lambda, .. }, Blk::Lp(r)) => {
                Blk::Lp(r.component_div(lambda).component_mul(g))
            }
            _ => unreachable!("block kinds always agree"),
        }
    }

    /// `σμ I − λ² − corr` with `corr = (ΔX̃ΔS̃ + ΔS̃ΔX̃)/2`.
    fn complementarity_rhs(&self, target: f64, corr: Option<(&Blk, &Blk)>) -> Blk {
        match self {
            Scaling::Psd { lambda, .. } => {
                let n = lambda.len();
                let mut r = DMatrix::from_diagonal(&lambda.map(|l| target - l * l));
                if let Some((Blk::Psd(a), Blk::Psd(b))) = corr {
                    let ab = a * b;
                    r -= (&ab + ab.transpose()) * 0.5;
                }
                debug_assert_eq!(r.nrows(), n);
                Blk::Psd(r)
            }
            Scaling::Lp { lambda, .. } => {
                let mut r = lambda.map(|l| target - l * l);
                if let Some((Blk::Lp(a), Blk::Lp(b))) = corr {
                    r -= a.component_mul(b);
                }
                Blk::Lp(r)
            }
        }
    }
}

/// Largest `α ≤ 1/…` keeping `X + αΔX` in the cone, given `L⁻¹` with `X = LLᵀ`.
fn max_step(x: &Blk, dx: &Blk, linv: Option<&DMatrix<f64>>) -> f64 {
    match (x, dx) {
        (Blk::Psd(_), Blk::Psd(d)) => {
            let li = linv.expect("psd blocks carry a factor");
            let m = li * d * li.transpose();
            let m = (&m + m.transpose()) * 0.5;
            let lmin = m.symmetric_eigenvalues().min();
            if lmin < 0.0 {
                -1.0 / lmin
            } else {
                f64::INFINITY
            }
        }
        (Blk::Lp(x), Blk::Lp(d)) => {
            let mut a = f64::INFINITY;
            for i in 0..x.len() {
                if d[i] < 0.0 {
                    a = a.min(-x[i] / d[i]);
                }
            }
            a
        }
        _ => unreachable!("block kinds always agree"),
    }
}

pub(crate) struct RealSolution {
    pub x: Vec<Blk>,
    pub y: DVector<f64>,
    pub s: Vec<Blk>,
    pub pobj: f64,
    pub dobj: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

struct Residuals {
    rp: DVector<f64>,
    rd: Vec<Blk>,
    pobj: f64,
    dobj: f64,
    mu: f64,
}

impl RealSdp {
    fn nblocks(&self) -> usize {
        self.kinds.len()
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    fn a_op(&self, x: &[Blk]) -> DVector<f64> {
        DVector::from_iterator(self.m(), self.a.iter().map(|row| row.iter().map(|(k, s)| sp_dot(s, &x[*k])).sum()))
    }

    fn at_op(&self, y: &DVector<f64>) -> Vec<Blk> {
        let mut out: Vec<Blk> = self.kinds.iter().map(|&k| Blk::zeros(k)).collect();
        for (row, &yk) in self.a.iter().zip(y.iter()) {
            for (k, s) in row {
                sp_add(s, yk, &mut out[*k]);
            }
        }
        out
    }

    fn c_dense(&self) -> Vec<Blk> {
        let mut out: Vec<Blk> = self.kinds.iter().map(|&k| Blk::zeros(k)).collect();
        for (k, s) in self.c.iter().enumerate() {
            sp_add(s, 1.0, &mut out[k]);
        }
        out
    }

    fn cone_dim(&self) -> f64 {
        self.kinds.iter().map(|k| k.size()).sum::<usize>() as f64
    }

    fn residuals(&self, c: &[Blk], x: &[Blk], y: &DVector<f64>, s: &[Blk]) -> Residuals {
        let rp = DVector::from_vec(self.b.clone()) - self.a_op(x);
        let aty = self.at_op(y);
        let rd: Vec<Blk> = (0..self.nblocks())
            .map(|k| {
                let mut r = c[k].clone();
                r.axpy(-1.0, &s[k]);
                r.axpy(-1.0, &aty[k]);
                r
            })
            .collect();
        let pobj: f64 = c.iter().zip(x).map(|(c, x)| c.dot(x)).sum();
        let dobj = DVector::from_vec(self.b.clone()).dot(y);
        let mu = x.iter().zip(s).map(|(x, s)| x.dot(s)).sum::<f64>() / self.cone_dim();
        Residuals { rp, rd, pobj, dobj, mu }
    }

    fn start(&self) -> (Vec<Blk>, DVector<f64>, Vec<Blk>) {
        let mut x = Vec::new();
        let mut s = Vec::new();
        for (k, &kind) in self.kinds.iter().enumerate() {
            let n = kind.size() as f64;
            let mut ratio = 0.0f64;
            let mut anorm = 0.0f64;
            for (row, &bk) in self.a.iter().zip(&self.b) {
                for (blk, sp) in row {
                    if *blk == k {
                        let nf = sp_norm(sp);
                        ratio = ratio.max((1.0 + bk.abs()) / (1.0 + nf));
                        anorm = anorm.max(nf);
                    }
                }
            }
            let cnorm = sp_norm(&self.c[k]);
            let xi = (10.0f64).max(n.sqrt()).max(1.1 * n * ratio);
            let eta = (10.0f64).max(n.sqrt()).max(1.1 * anorm.max(cnorm));
            x.push(Blk::identity(kind, xi));
            s.push(Blk::identity(kind, eta));
        }
        (x, DVector::zeros(self.m()), s)
    }

    /// Schur complement `M_ij = ⟨A_i, W A_j W⟩`.
    fn schur(&self, scal: &[Scaling]) -> DMatrix<f64> {
        let m = self.m();
        let mut by_block: Vec<Vec<(usize, &Sparse)>> = vec![Vec::new(); self.nblocks()];
        for (i, row) in self.a.iter().enumerate() {
            for (k, sp) in row {
                by_block[*k].push((i, sp));
            }
        }
        let mut mm = DMatrix::zeros(m, m);
        for (k, list) in by_block.iter().enumerate() {
            for &(j, aj) in list {
                let waw = scal[k].apply_w_sparse(aj, self.kinds[k]);
                for &(i, ai) in list {
                    if i <= j {
                        mm[(i, j)] += sp_dot(ai, &waw);
                    }
                }
            }
        }
        for j in 0..m {
            for i in 0..j {
                mm[(j, i)] = mm[(i, j)];
            }
        }
        mm
    }
}

enum Normal {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Normal {
    fn new(mut m: DMatrix<f64>) -> Self {
        if let Some(c) = m.clone().cholesky() {
            return Normal::Chol(c);
        }
        let ridge = 1e-14 * m.diagonal().amax().max(1e-300);
        for i in 0..m.nrows() {
            m[(i, i)] += ridge;
        }
        match m.clone().cholesky() {
            Some(c) => Normal::Chol(c),
            None => Normal::Lu(m.lu()),
        }
    }

    fn solve(&self, r: &DVector<f64>) -> DVector<f64> {
        match self {
            Normal::Chol(c) => c.solve(r),
            Normal::Lu(l) => l.solve(r).unwrap_or_else(|| DVector::zeros(r.len())),
        }
    }
}

struct Direction {
    dx: Vec<Blk>,
    dy: DVector<f64>,
    ds: Vec<Blk>,
}

pub(crate) fn solve_real(p: &RealSdp, opts: &SolverOptions) -> RealSolution {
    let c = p.c_dense();
    let (mut x, mut y, mut s) = p.start();
    let nb = p.nblocks();
    let cnorm = c.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let bnorm = p.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    for it in 0..=opts.max_iterations {
        iterations = it;
        let r = p.residuals(&c, &x, &y, &s);
        let pinf = r.rp.amax();
        let dinf = r.rd.iter().map(|b| b.max_abs()).fold(0.0, f64::max);
        let gap = (r.pobj - r.dobj).abs();
        if pinf <= opts.feas_tol && dinf <= opts.feas_tol && gap <= opts.gap_tol * (1.0 + r.pobj.abs()) {
            status = SolveStatus::Optimal;
            break;
        }
        // certificates: bᵀy → +∞ with Aᵀy ⪯ 0 (primal infeasible);
        // ⟨C,X⟩ → −∞ with A(X) → 0 (unbounded)
        if r.dobj > 0.0 {
            let tail = (cnorm + dinf * (p.cone_dim()).sqrt()) / r.dobj;
            if r.dobj > 1e8 && tail < 1e-8 {
                status = SolveStatus::Infeasible;
                break;
            }
        }
        if r.pobj < 0.0 {
            let tail = (bnorm + pinf) / (-r.pobj);
            if -r.pobj > 1e8 && tail < 1e-8 {
                status = SolveStatus::Unbounded;
                break;
            }
        }
        if !r.mu.is_finite() || it == opts.max_iterations {
            break;
        }

        let mut scal = Vec::with_capacity(nb);
        let mut lx = Vec::with_capacity(nb);
        let mut ls = Vec::with_capacity(nb);
        for k in 0..nb {
            let (sc, a, b) = nt_scaling(&x[k], &s[k]);
            scal.push(sc);
            lx.push(a);
            ls.push(b);
        }
        let normal = Normal::new(p.schur(&scal));
        let wrdw: Vec<Blk> = (0..nb).map(|k| scal[k].apply_w(&r.rd[k])).collect();

        let solve_dir = |rc: Vec<Blk>| -> Direction {
            let mut t = rc.clone();
            for k in 0..nb {
                t[k].axpy(-1.0, &wrdw[k]);
            }
            let rhs = &r.rp - p.a_op(&t);
            let dy = normal.solve(&rhs);
            let atdy = p.at_op(&dy);
            let mut ds = r.rd.clone();
            let mut dx = rc;
            for k in 0..nb {
                ds[k].axpy(-1.0, &atdy[k]);
                ds[k].symmetrize();
                let wdsw = scal[k].apply_w(&ds[k]);
                dx[k].axpy(-1.0, &wdsw);
                dx[k].symmetrize();
            }
            Direction { dx, dy, ds }
        };
        let steps = |d: &Direction| -> (f64, f64) {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for k in 0..nb {
                ap = ap.min(max_step(&x[k], &d.dx[k], lx[k].as_ref()));
                ad = ad.min(max_step(&s[k], &d.ds[k], ls[k].as_ref()));
            }
            (ap, ad)
        };

        // predictor
        let rc_aff: Vec<Blk> = (0..nb).map(|k| scal[k].unscale_complementarity(&scal[k].complementarity_rhs(0.0, None))).collect();
        let aff = solve_dir(rc_aff);
        let (ap, ad) = steps(&aff);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut mu_aff = 0.0;
        for k in 0..nb {
            let mut xa = x[k].clone();
            xa.axpy(ap, &aff.dx[k]);
            let mut sa = s[k].clone();
            sa.axpy(ad, &aff.ds[k]);
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= p.cone_dim();
        let sigma = (mu_aff.max(0.0) / r.mu).powi(3).clamp(0.0, 1.0);

        // corrector
        let rc: Vec<Blk> = (0..nb)
            .map(|k| {
                let (xs, ss) = scal[k].scale_pair(&aff.dx[k], &aff.ds[k]);
                let rhs = scal[k].complementarity_rhs(sigma * r.mu, Some((&xs, &ss)));
                scal[k].unscale_complementarity(&rhs)
            })
            .collect();
        let dir = solve_dir(rc);
        let (ap, ad) = steps(&dir);
        let ap = (opts.step_fraction * ap).min(1.0);
        let ad = (opts.step_fraction * ad).min(1.0);
        for k in 0..nb {
            x[k].axpy(ap, &dir.dx[k]);
            s[k].axpy(ad, &dir.ds[k]);
            x[k].symmetrize();
            s[k].symmetrize();
        }
        y.axpy(ad, &dir.dy, 1.0);
    }

    let r = p.residuals(&c, &x, &y, &s);
    RealSolution {
        primal_residual: r.rp.amax(),
        dual_residual: r.rd.iter().map(|b| b.max_abs()).fold(0.0, f64::max),
        pobj: r.pobj,
        dobj: r.dobj,
        x,
        y,
        s,
        status,
        iterations,
    }
}
