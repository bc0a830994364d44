use super::ChoiChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, paulis, CMat, DensityMatrix};

fn unit_param(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} must lie in [0,1], got {x}")));
    }
    Ok(())
}

pub fn identity(d: usize) -> ChoiChannel {
    ChoiChannel::from_kraus(&[CMat::identity(d, d)]).expect("identity is CPTP")
}

/// `X ↦ Tr X` onto a one-dimensional output.
pub fn trace_map(d: usize) -> ChoiChannel {
    ChoiChannel::new(d, 1, CMat::identity(d, d)).expect("trace map is CPTP")
}

pub fn unitary(u: &CMat) -> Result<ChoiChannel> {
    let n = u.nrows();
    if u.ncols() != n || crate::linalg::max_abs_entry(&(u.adjoint() * u - CMat::identity(n, n))) > 1e-10 {
        return Err(Error::NotChannel("matrix is not unitary".into()));
    }
    ChoiChannel::from_kraus(&[u.clone()])
}

/// `E_p(ρ) = (1−p)ρ + (p/3)(XρX + YρY + ZρZ)`.
pub fn depolarizing(p: f64) -> Result<ChoiChannel> {
    unit_param("p", p)?;
    let [i, x, y, z] = paulis();
    let a = c((1.0 - p).sqrt());
    let b = c((p / 3.0).sqrt());
    ChoiChannel::from_kraus(&[i * a, x * b, y * b, z * b])
}

/// Qubit amplitude damping with decay probability `γ`.
pub fn amplitude_damping(gamma: f64) -> Result<ChoiChannel> {
    unit_param("gamma", gamma)?;
    let z = c(0.0);
    let k0 = CMat::from_row_slice(2, 2, &[c(1.0), z, z, c((1.0 - gamma).sqrt())]);
    let k1 = CMat::from_row_slice(2, 2, &[z, c(gamma.sqrt()), z, z]);
    ChoiChannel::from_kraus(&[k0, k1])
}

/// Complete dephasing `ω ↦ Σ_x |x⟩⟨x| ω |x⟩⟨x|` in the computational basis.
pub fn dephasing(d: usize) -> ChoiChannel {
    let kraus: Vec<CMat> = (0..d)
        .map(|x| {
            let mut k = CMat::zeros(d, d);
            k[(x, x)] = c(1.0);
            k
        })
        .collect();
    ChoiChannel::from_kraus(&kraus).expect("dephasing is CPTP")
}

/// `X ↦ Tr(X) σ`, Choi matrix `σ ⊗ 1_A`.
pub fn replacer(sigma: &DensityMatrix, dim_in: usize) -> ChoiChannel {
    let j = sigma.matrix().kronecker(&CMat::identity(dim_in, dim_in));
    ChoiChannel::new(dim_in, sigma.dim(), j).expect("replacer is CPTP")
}

/// `X ↦ Tr(X) 1/d`.
pub fn completely_depolarizing(d: usize) -> ChoiChannel {
    replacer(&DensityMatrix::maximally_mixed(d), d)
}

/// Random channel from the first `dim_in` columns of a Haar unitary on
/// `B ⊗ K` with `kraus` operators; deterministic per seed.
pub fn random_channel(dim_in: usize, dim_out: usize, kraus: usize, seed: u64) -> Result<ChoiChannel> {
    if dim_out * kraus < dim_in {
        return Err(Error::Domain(format!("need dim_out·kraus ≥ dim_in, got {dim_out}·{kraus} < {dim_in}")));
    }
    let u = crate::linalg::random_unitary(dim_out * kraus, seed);
    let ks: Vec<CMat> = (0..kraus).map(|k| CMat::from_fn(dim_out, dim_in, |b, a| u[(b * kraus + k, a)])).collect();
    ChoiChannel::from_kraus(&ks)
}
