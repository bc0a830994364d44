//! Linear maps stored as Choi matrices on `B ⊗ A` (output first), with
//! `J(Φ) = Σ_{ij} Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|` and `Φ(ρ) = Tr_A(J (1_B ⊗ ρᵀ))`.

mod coherent;
mod dilation;
mod families;

pub use coherent::{coherent_info_depolarizing, coherent_info_numeric, coherent_objective, s_phi_lambda};
pub use dilation::{kraus_and_complementary, StinespringTriple, TripartiteState};
pub use families::{
    amplitude_damping, completely_depolarizing, dephasing, depolarizing, identity, random_channel, replacer, trace_map,
    unitary,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::MatrixJson;
use crate::linalg::{
    hermitian_part, max_abs_entry, partial_trace, BipartiteLabel, CMat, DensityMatrix, HermitianMatrix, Subsystem,
    C64,
};

/// Tolerance on the CP and TP flags.
pub const CHANNEL_TOL: f64 = 1e-9;

/// A Hermiticity-preserving linear map `A → B` in Choi form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ChoiJson", try_from = "ChoiJson")]
pub struct ChoiChannel {
    dim_in: usize,
    dim_out: usize,
    choi: HermitianMatrix,
    is_cp: bool,
    is_tp: bool,
}

impl ChoiChannel {
    /// Any Hermiticity-preserving map; CP/TP flags are computed.
    pub fn new(dim_in: usize, dim_out: usize, choi: CMat) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if choi.nrows() != dim_in * dim_out || choi.ncols() != dim_in * dim_out {
            return Err(Error::DimensionMismatch { expected: dim_in * dim_out, got: choi.nrows() });
        }
        let choi = HermitianMatrix::new(choi)?;
        let scale = choi.matrix().amax_scale();
        let is_cp = choi.min_eigenvalue() >= -CHANNEL_TOL * scale;
        let marg = partial_trace(choi.matrix(), BipartiteLabel::new(dim_out, dim_in), Subsystem::B)?;
        let is_tp = max_abs_entry(&(marg - CMat::identity(dim_in, dim_in))) <= CHANNEL_TOL * scale;
        Ok(Self { dim_in, dim_out, choi, is_cp, is_tp })
    }

    /// A map that must be completely positive and trace preserving.
    pub fn cptp(dim_in: usize, dim_out: usize, choi: CMat) -> Result<Self> {
        let ch = Self::new(dim_in, dim_out, choi)?;
        ch.require_cptp()?;
        Ok(ch)
    }

    /// `J = Σ_k vec(K_k) vec(K_k)†` with `vec(K)[b·d_A + a] = K[b, a]`.
    pub fn from_kraus(kraus: &[CMat]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::NotChannel("no Kraus operators".into()))?;
        let (db, da) = (first.nrows(), first.ncols());
        let mut j = CMat::zeros(db * da, db * da);
        for k in kraus {
            if k.nrows() != db || k.ncols() != da {
                return Err(Error::DimensionMismatch { expected: db * da, got: k.nrows() * k.ncols() });
            }
            let v = nalgebra::DVector::from_iterator(db * da, (0..db).flat_map(|b| (0..da).map(move |a| k[(b, a)])));
            j += &v * v.adjoint();
        }
        Self::new(da, db, j)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &HermitianMatrix {
        &self.choi
    }

    pub fn label(&self) -> BipartiteLabel {
        BipartiteLabel::new(self.dim_out, self.dim_in)
    }

    pub fn is_cp(&self) -> bool {
        self.is_cp
    }

    pub fn is_tp(&self) -> bool {
        self.is_tp
    }

    pub fn require_cptp(&self) -> Result<()> {
        if !self.is_cp {
            return Err(Error::NotChannel(format!("Choi min eigenvalue {:.3e}", self.choi.min_eigenvalue())));
        }
        if !self.is_tp {
            return Err(Error::NotChannel("Tr_B J differs from 1_A".into()));
        }
        Ok(())
    }

    /// `Φ(X)[b, b'] = Σ_{ij} J[(b,i), (b',j)] X[i, j]` for any operator `X`.
    pub fn apply_matrix(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.dim_in || x.ncols() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: x.nrows() });
        }
        let (da, db) = (self.dim_in, self.dim_out);
        let j = self.choi.matrix();
        Ok(CMat::from_fn(db, db, |b1, b2| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..da {
                for k in 0..da {
                    acc += j[(b1 * da + i, b2 * da + k)] * x[(i, k)];
                }
            }
            acc
        }))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<HermitianMatrix> {
        HermitianMatrix::new(hermitian_part(&self.apply_matrix(rho.matrix())?))
    }

    /// `Λ ∘ Φ` with `self = Λ: B → E`, `inner = Φ: A → B`, via the link product
    /// `J(Λ∘Φ)[(e,i),(e',j)] = Σ_{bb'} J(Λ)[(e,b),(e',b')] J(Φ)[(b,i),(b',j)]`.
    pub fn compose(&self, inner: &ChoiChannel) -> Result<ChoiChannel> {
        if self.dim_in != inner.dim_out {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: inner.dim_out });
        }
        let (da, de) = (inner.dim_in, self.dim_out);
        let out = link_product(self.choi.matrix(), de, inner.choi.matrix(), inner.dim_out, da);
        ChoiChannel::new(da, de, hermitian_part(&out))
    }

    /// `Φ*: B → A` with `Tr(Y Φ(X)) = Tr(Φ*(Y) X)`;
    /// `J(Φ*)[(a,b),(a',b')] = J(Φ)[(b',a'),(b,a)]`.
    pub fn adjoint(&self) -> ChoiChannel {
        let (da, db) = (self.dim_in, self.dim_out);
        let j = self.choi.matrix();
        let m = CMat::from_fn(da * db, da * db, |r, c| {
            let (a1, b1) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            j[(b2 * da + a2, b1 * da + a1)]
        });
        ChoiChannel::new(db, da, m).expect("adjoint of a Hermiticity-preserving map is Hermiticity-preserving")
    }

    /// `Φ − Ψ` as a bare Hermiticity-preserving map.
    pub fn difference(&self, other: &ChoiChannel) -> Result<ChoiChannel> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::DimensionMismatch { expected: self.choi.dim(), got: other.choi.dim() });
        }
        ChoiChannel::new(self.dim_in, self.dim_out, self.choi.matrix() - other.choi.matrix())
    }

    pub fn scaled(&self, s: f64) -> ChoiChannel {
        ChoiChannel::new(self.dim_in, self.dim_out, self.choi.matrix() * C64::new(s, 0.0))
            .expect("scaling keeps Hermiticity")
    }

    /// Largest entrywise Choi difference.
    pub fn distance(&self, other: &ChoiChannel) -> f64 {
        if self.choi.dim() != other.choi.dim() {
            return f64::INFINITY;
        }
        max_abs_entry(&(self.choi.matrix() - other.choi.matrix()))
    }

    /// Minimal change of Choi matrix making the map trace preserving:
    /// `J + (1_B/d_B) ⊗ (1_A − Tr_B J)`.
    pub fn project_tp(&self) -> ChoiChannel {
        let (da, db) = (self.dim_in, self.dim_out);
        let marg = partial_trace(self.choi.matrix(), self.label(), Subsystem::B).expect("labels agree");
        let defect = CMat::identity(da, da) - marg;
        let fix = CMat::identity(db, db).kronecker(&defect) * C64::new(1.0 / db as f64, 0.0);
        ChoiChannel::new(da, db, hermitian_part(&(self.choi.matrix() + fix))).expect("projection keeps Hermiticity")
    }

    pub fn to_json(&self) -> ChoiJson {
        ChoiJson { dim_in: self.dim_in, dim_out: self.dim_out, choi: MatrixJson::from_matrix(self.choi.matrix()) }
    }

    pub fn from_json(j: &ChoiJson) -> Result<Self> {
        Self::new(j.dim_in, j.dim_out, j.choi.to_matrix()?)
    }
}

/// Raw link product of an outer Choi matrix on `E ⊗ B` with an inner one on
/// `B ⊗ A`; linear in each argument.
pub(crate) fn link_product(jl: &CMat, de: usize, jp: &CMat, db: usize, da: usize) -> CMat {
    let n = de * da;
    let mut out = CMat::zeros(n, n);
    for e1 in 0..de {
        for e2 in 0..de {
            for b1 in 0..db {
                for b2 in 0..db {
                    let w = jl[(e1 * db + b1, e2 * db + b2)];
                    if w == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..da {
                        for k in 0..da {
                            out[(e1 * da + i, e2 * da + k)] += w * jp[(b1 * da + i, b2 * da + k)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Serialized Choi channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub choi: MatrixJson,
}

impl From<ChoiChannel> for ChoiJson {
    fn from(ch: ChoiChannel) -> Self {
        ch.to_json()
    }
}

impl TryFrom<ChoiJson> for ChoiChannel {
    type Error = Error;

    fn try_from(j: ChoiJson) -> Result<Self> {
        ChoiChannel::from_json(&j)
    }
}

trait AmaxScale {
    fn amax_scale(&self) -> f64;
}

impl AmaxScale for CMat {
    fn amax_scale(&self) -> f64 {
        max_abs_entry(self).max(1.0)
    }
}
