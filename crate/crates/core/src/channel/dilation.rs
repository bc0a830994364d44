use super::ChoiChannel;
use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, CMat, DensityMatrix, HermitianMatrix, C64};

/// Choi eigenvalues at or below this fraction of `Tr J` are discarded when
/// forming Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Minimal Stinespring dilation `V: A → B ⊗ E`, `V|a⟩ = Σ_k K_k|a⟩ ⊗ |k⟩`
/// (composite index `b·d_E + k`).
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringTriple {
    pub isometry: CMat,
    pub dim_env: usize,
    pub kraus: Vec<CMat>,
}

impl StinespringTriple {
    pub fn dim_in(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.isometry.nrows() / self.dim_env
    }

    /// `V X V†` on `B ⊗ E`.
    pub fn dilate(&self, x: &CMat) -> CMat {
        &self.isometry * x * self.isometry.adjoint()
    }

    /// `Tr_E(V X V†)`.
    pub fn output(&self, x: &CMat) -> CMat {
        reduce(&self.dilate(x), &[self.dim_out(), self.dim_env], &[0])
    }

    /// `Tr_B(V X V†)`.
    pub fn environment(&self, x: &CMat) -> CMat {
        reduce(&self.dilate(x), &[self.dim_out(), self.dim_env], &[1])
    }
}

/// Partial trace of an operator on `⊗_k C^{dims[k]}` keeping the listed
/// factors (in increasing order).
pub(crate) fn reduce(m: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let n: usize = dims.iter().product();
    debug_assert_eq!(m.nrows(), n);
    let kdim: usize = keep.iter().map(|&k| dims[k]).product();
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let split = |idx: usize| -> (usize, usize) {
        let d = digits(idx);
        let (mut kept, mut rest) = (0, 0);
        for k in 0..dims.len() {
            if keep.contains(&k) {
                kept = kept * dims[k] + d[k];
            } else {
                rest = rest * dims[k] + d[k];
            }
        }
        (kept, rest)
    };
    let parts: Vec<(usize, usize)> = (0..n).map(split).collect();
    let mut out = CMat::zeros(kdim, kdim);
    for r in 0..n {
        for col in 0..n {
            if parts[r].1 == parts[col].1 {
                out[(parts[r].0, parts[col].0)] += m[(r, col)];
            }
        }
    }
    out
}

fn fix_phase(v: &mut nalgebra::DVector<C64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12 * max).copied() {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Kraus operators from the Choi spectrum (descending eigenvalues, first
/// significant eigenvector component made real positive), the minimal
/// dilation, and the complementary channel `Φᶜ(ρ)[i][j] = Tr(K_i ρ K_j†)`.
pub fn kraus_and_complementary(phi: &ChoiChannel) -> Result<(StinespringTriple, ChoiChannel)> {
    phi.require_cptp()?;
    let (da, db) = (phi.dim_in(), phi.dim_out());
    let eig = phi.choi().eig();
    let cutoff = KRAUS_CUTOFF * phi.choi().trace();
    let mut kraus = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= cutoff {
            break;
        }
        let mut v = eig.vectors.column(k).into_owned();
        fix_phase(&mut v);
        let s = lam.sqrt();
        kraus.push(CMat::from_fn(db, da, |b, a| v[b * da + a] * s));
    }
    if kraus.is_empty() {
        return Err(Error::NotChannel("zero Choi matrix".into()));
    }
    let de = kraus.len();
    let isometry = CMat::from_fn(db * de, da, |r, a| kraus[r % de][(r / de, a)]);
    let jc = CMat::from_fn(de * da, de * da, |r, col| {
        let (i, a1) = (r / da, r % da);
        let (j, a2) = (col / da, col % da);
        (0..db).map(|b| kraus[i][(b, a1)] * kraus[j][(b, a2)].conj()).sum()
    });
    let comp = ChoiChannel::new(da, de, hermitian_part(&jc))?;
    Ok((StinespringTriple { isometry, dim_env: de, kraus }, comp))
}

/// `ω_{EẼF} = (W ⊗ 1_E) V ρ V† (W† ⊗ 1_E)` for dilations `V` of `Φ: A → B`
/// (environment `E`) and `W` of `Λ: B → Ẽ` (environment `F`), stored in the
/// order `E ⊗ Ẽ ⊗ F`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    omega: DensityMatrix,
    dims: [usize; 3],
}

impl TripartiteState {
    pub fn new(phi: &StinespringTriple, lambda: &StinespringTriple, rho: &DensityMatrix) -> Result<Self> {
        if lambda.dim_in() != phi.dim_out() {
            return Err(Error::DimensionMismatch { expected: phi.dim_out(), got: lambda.dim_in() });
        }
        if rho.dim() != phi.dim_in() {
            return Err(Error::DimensionMismatch { expected: phi.dim_in(), got: rho.dim() });
        }
        let (de, db) = (phi.dim_env, phi.dim_out());
        let (dt, df) = (lambda.dim_out(), lambda.dim_env);
        let da = phi.dim_in();
        let v = &phi.isometry;
        let w = &lambda.isometry;
        let u = CMat::from_fn(de * dt * df, da, |r, a| {
            let (e, tf) = (r / (dt * df), r % (dt * df));
            (0..db).map(|b| w[(tf, b)] * v[(b * de + e, a)]).sum()
        });
        let omega = hermitian_part(&(&u * rho.matrix() * u.adjoint()));
        Ok(Self { omega: DensityMatrix::new(HermitianMatrix::new(omega)?)?, dims: [de, dt, df] })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.omega
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Reduced state on the listed factors (0 = E, 1 = Ẽ, 2 = F).
    pub fn marginal(&self, keep: &[usize]) -> HermitianMatrix {
        HermitianMatrix::new(hermitian_part(&reduce(self.omega.matrix(), &self.dims, keep)))
            .expect("partial trace keeps Hermiticity")
    }

    /// `S(F|Ẽ) = S(ẼF) − S(Ẽ)`.
    pub fn conditional_entropy(&self) -> f64 {
        von_neumann_entropy(&self.marginal(&[1, 2])) - von_neumann_entropy(&self.marginal(&[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, dephasing, depolarizing, identity, trace_map};
    use crate::linalg::{max_abs_entry, random_density, random_unitary};

    #[test]
    fn identity_has_trivial_environment() {
        let (t, comp) = kraus_and_complementary(&identity(2)).unwrap();
        assert_eq!(t.dim_env, 1);
        assert!(comp.distance(&trace_map(2)) < 1e-12);
    }

    #[test]
    fn environment_dimensions() {
        for &p in &[0.01, 0.3, 0.9] {
            let (t, comp) = kraus_and_complementary(&depolarizing(p).unwrap()).unwrap();
            assert_eq!(t.dim_env, 4);
            assert_eq!(comp.dim_out(), 4);
            assert!(comp.is_cp() && comp.is_tp());
        }
        assert_eq!(kraus_and_complementary(&dephasing(3)).unwrap().0.dim_env, 3);
        assert_eq!(kraus_and_complementary(&amplitude_damping(0.3).unwrap()).unwrap().0.dim_env, 2);
        assert!(kraus_and_complementary(&depolarizing(0.1).unwrap().scaled(0.5)).is_err());
    }

    #[test]
    fn dilation_reproduces_both_outputs() {
        for seed in 0..6 {
            let u = random_unitary(6, seed);
            let kraus: Vec<CMat> = (0..3).map(|k| CMat::from_fn(2, 2, |b, a| u[(b * 3 + k, a)])).collect();
            let phi = ChoiChannel::from_kraus(&kraus).unwrap();
            let (t, comp) = kraus_and_complementary(&phi).unwrap();
            let v = &t.isometry;
            assert!(max_abs_entry(&(v.adjoint() * v - CMat::identity(2, 2))) < 1e-9);
            let rho = random_density(2, seed + 9);
            let out = phi.apply_matrix(rho.matrix()).unwrap();
            assert!(max_abs_entry(&(t.output(rho.matrix()) - out)) < 1e-9);
            let env = comp.apply_matrix(rho.matrix()).unwrap();
            assert!(max_abs_entry(&(t.environment(rho.matrix()) - env)) < 1e-9);
        }
    }

    #[test]
    fn kraus_order_is_reproducible() {
        let a = kraus_and_complementary(&amplitude_damping(0.2).unwrap()).unwrap();
        let b = kraus_and_complementary(&amplitude_damping(0.2).unwrap()).unwrap();
        assert_eq!(a, b);
        let norms: Vec<f64> = a.0.kraus.iter().map(|k| k.norm()).collect();
        assert!(norms.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn tripartite_conditional_entropy_matches_difference() {
        let phi = depolarizing(0.05).unwrap();
        let (tp, _) = kraus_and_complementary(&phi).unwrap();
        let lam = amplitude_damping(0.4).unwrap();
        let (tl, _) = kraus_and_complementary(&lam).unwrap();
        for seed in 0..4 {
            let rho = random_density(2, seed);
            let omega = TripartiteState::new(&tp, &tl, &rho).unwrap();
            let out = phi.apply(&rho).unwrap();
            let deg = lam.compose(&phi).unwrap().apply(&rho).unwrap();
            let want = von_neumann_entropy(&out) - von_neumann_entropy(&deg);
            assert!((omega.conditional_entropy() - want).abs() < 1e-8);
            let e = omega.marginal(&[0]);
            assert!((e.trace() - 1.0).abs() < 1e-12);
        }
    }
}
