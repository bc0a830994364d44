//! Dense complex linear algebra for Hermitian operators.
//!
//! Bipartite operators are stored in the product basis of `B ⊗ A` with the
//! composite index `b * dim_a + a`, matching the Choi convention
//! `J(Φ) = d (Φ ⊗ id)(|Ω⟩⟨Ω|)` with `|Ω⟩ = d^{-1/2} Σ_j |jj⟩`. All transposes
//! are taken in the computational basis.

mod eig;
mod random;

pub use eig::{jacobi_eigen, Eigen};
pub use random::{random_density, random_hermitian, random_pure_state, random_unitary};
pub(crate) use random::{sample_density, sample_pure, sample_unitary};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Absolute tolerance for Hermiticity and PSD checks, applied after normalizing
/// by the matrix scale.
pub const HERM_TOL: f64 = 1e-10;

pub(crate) const fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Scale used to normalize tolerance checks: the Frobenius norm, floored at 1.
pub fn matrix_scale(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0)
}

/// Largest entry-wise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs_entry(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Which Schatten norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schatten {
    One,
    Two,
    Infinity,
}

/// Which factor of a bipartite `B ⊗ A` operator an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dimensions of a bipartite space ordered `B ⊗ A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteLabel {
    pub dim_b: usize,
    pub dim_a: usize,
}

impl BipartiteLabel {
    pub fn new(dim_b: usize, dim_a: usize) -> Self {
        assert!(dim_b >= 1 && dim_a >= 1);
        Self { dim_b, dim_a }
    }

    pub fn total(&self) -> usize {
        self.dim_b * self.dim_a
    }

    fn check(&self, m: &CMat) -> Result<()> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() != self.total() {
            return Err(Error::DimensionMismatch { expected: self.total(), got: m.nrows() });
        }
        Ok(())
    }
}

/// Partial trace of a `B ⊗ A` operator over `traced`.
pub fn partial_trace(m: &CMat, label: BipartiteLabel, traced: Subsystem) -> Result<CMat> {
    label.check(m)?;
    let (db, da) = (label.dim_b, label.dim_a);
    Ok(match traced {
        Subsystem::A => DMatrix::from_fn(db, db, |b1, b2| {
            (0..da).map(|a| m[(b1 * da + a, b2 * da + a)]).sum()
        }),
        Subsystem::B => DMatrix::from_fn(da, da, |a1, a2| {
            (0..db).map(|b| m[(b * da + a1, b * da + a2)]).sum()
        }),
    })
}

/// Partial transpose of a `B ⊗ A` operator on the chosen factor.
pub fn partial_transpose(m: &CMat, label: BipartiteLabel, on: Subsystem) -> Result<CMat> {
    label.check(m)?;
    let (db, da) = (label.dim_b, label.dim_a);
    let n = label.total();
    let mut out = CMat::zeros(n, n);
    for b1 in 0..db {
        for a1 in 0..da {
            for b2 in 0..db {
                for a2 in 0..da {
                    let src = match on {
                        Subsystem::A => (b1 * da + a2, b2 * da + a1),
                        Subsystem::B => (b2 * da + a1, b1 * da + a2),
                    };
                    out[(b1 * da + a1, b2 * da + a2)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product `x ⊗ y`.
pub fn kron(x: &CMat, y: &CMat) -> CMat {
    x.kronecker(y)
}

/// Dense Hermitian matrix; Hermitian symmetry holds exactly after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMat,
}

impl HermitianMatrix {
    /// Validates Hermiticity (to `HERM_TOL` relative to scale) and symmetrizes.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let defect = hermiticity_defect(&m);
        if defect > HERM_TOL * matrix_scale(&m) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { m: hermitian_part(&m) })
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| c(x)));
        Self { m: CMat::from_diagonal(&v) }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: CMat::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: CMat::zeros(n, n) }
    }

    /// Projector onto a (not necessarily normalized) vector.
    pub fn projector(v: &DVector<C64>) -> Self {
        Self { m: v * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn eig(&self) -> Eigen {
        jacobi_eigen(&self.m)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eig().values
    }

    pub fn schatten_norm(&self, p: Schatten) -> f64 {
        let ev = self.eigenvalues();
        match p {
            Schatten::One => ev.iter().map(|x| x.abs()).sum(),
            Schatten::Two => ev.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Schatten::Infinity => ev.iter().fold(0.0, |acc, x| acc.max(x.abs())),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { m: &self.m - &other.m })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: kron(&self.m, &other.m) }
    }

    pub fn partial_trace(&self, label: BipartiteLabel, traced: Subsystem) -> Result<Self> {
        Ok(Self { m: partial_trace(&self.m, label, traced)? })
    }

    pub fn partial_transpose(&self, label: BipartiteLabel) -> Result<Self> {
        Ok(Self { m: partial_transpose(&self.m, label, Subsystem::A)? })
    }

    /// Smallest eigenvalue is at least `-HERM_TOL * scale`.
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -HERM_TOL * matrix_scale(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("dim >= 1")
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    base: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > HERM_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = base.min_eigenvalue();
        if min < -HERM_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { base })
    }

    pub fn from_matrix(m: CMat) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// `|ψ⟩⟨ψ|` for a vector normalized on the fly.
    pub fn pure(psi: &DVector<C64>) -> Self {
        let n = psi.norm();
        let v = psi.unscale(n);
        Self { base: HermitianMatrix::projector(&v) }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { base: HermitianMatrix::identity(n).scale(1.0 / n as f64) }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(p))
    }

    /// Qubit state `(I + r·σ)/2` from a Bloch vector with `|r| <= 1`.
    pub fn from_bloch(r: [f64; 3]) -> Self {
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                c(0.5 * (1.0 + r[2])),
                C64::new(0.5 * r[0], -0.5 * r[1]),
                C64::new(0.5 * r[0], 0.5 * r[1]),
                c(0.5 * (1.0 - r[2])),
            ],
        );
        Self { base: HermitianMatrix { m } }
    }

    pub(crate) fn from_hermitian_unchecked(base: HermitianMatrix) -> Self {
        Self { base }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &CMat {
        self.base.matrix()
    }
}

/// `T(ρ, σ) = ½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    // ρ − σ is traceless, so ½‖ρ − σ‖₁ is the mass of either eigenvalue sign;
    // taking the larger keeps ‖ρ − σ‖_∞ ≤ T exact in floating point
    let ev = rho.hermitian().sub(sigma.hermitian())?.eigenvalues();
    let pos: f64 = ev.iter().filter(|&&x| x > 0.0).sum();
    let neg: f64 = -ev.iter().filter(|&&x| x < 0.0).sum::<f64>();
    Ok(pos.max(neg))
}

/// `‖ρ − σ‖_∞`.
pub fn operator_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(rho.hermitian().sub(sigma.hermitian())?.schatten_norm(Schatten::Infinity))
}

/// Orthonormal basis of the real space of `n × n` Hermitian matrices under
/// `⟨X, Y⟩ = Re Tr(X† Y)`: diagonal units, then symmetric and antisymmetric
/// off-diagonal pairs, `n²` elements in total.
pub fn hermitian_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(i, i)] = c(1.0);
        out.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = CMat::zeros(n, n);
            s[(i, j)] = c(r);
            s[(j, i)] = c(r);
            out.push(s);
            let mut a = CMat::zeros(n, n);
            a[(i, j)] = C64::new(0.0, -r);
            a[(j, i)] = C64::new(0.0, r);
            out.push(a);
        }
    }
    out
}

/// `Re Tr(X† Y)`.
pub fn real_inner(x: &CMat, y: &CMat) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

/// Pauli matrices `(I, X, Y, Z)`.
pub fn paulis() -> [CMat; 4] {
    let (o, z, i) = (c(1.0), c(0.0), C64::new(0.0, 1.0));
    [
        CMat::from_row_slice(2, 2, &[o, z, z, o]),
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Unnormalized maximally entangled vector `Σ_j |jj⟩`.
pub fn omega_vector(d: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d * d);
    for j in 0..d {
        v[j * d + j] = c(1.0);
    }
    v
}
