use super::{kraus_and_complementary, ChoiChannel};
use crate::entropy::{entropy_of, xlogx};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, jacobi_eigen, DensityMatrix};
use crate::optim::{maximize_over_qubit_states, BlochSearch};

/// `Q¹(E_p) = 1 + (1−p) log(1−p) + p log(p/3)`.
pub fn coherent_info_depolarizing(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0,1], got {p}")));
    }
    Ok(1.0 + xlogx(1.0 - p) + xlogx(p) - p * 3f64.log2())
}

fn output_entropy(ch: &ChoiChannel, rho: &DensityMatrix) -> f64 {
    let out = ch.apply_matrix(rho.matrix()).expect("dimensions checked by caller");
    entropy_of(&jacobi_eigen(&hermitian_part(&out)).values)
}

/// `S(Φ(ρ)) − S(Ψ(ρ))`.
pub fn coherent_objective(phi: &ChoiChannel, psi: &ChoiChannel, rho: &DensityMatrix) -> f64 {
    output_entropy(phi, rho) - output_entropy(psi, rho)
}

fn qubit_input(phi: &ChoiChannel) -> Result<()> {
    phi.require_cptp()?;
    if phi.dim_in() != 2 {
        return Err(Error::UnsupportedDimension(phi.dim_in()));
    }
    Ok(())
}

/// `max_ρ S(Φ(ρ)) − S(Φᶜ(ρ))` over qubit inputs.
pub fn coherent_info_numeric(phi: &ChoiChannel) -> Result<f64> {
    qubit_input(phi)?;
    let (_, comp) = kraus_and_complementary(phi)?;
    let (v, _) = maximize_over_qubit_states(|rho| coherent_objective(phi, &comp, rho), &BlochSearch::default());
    Ok(v)
}

/// `S(Φ, Λ) = max_ρ S(Φ(ρ)) − S(Λ∘Φ(ρ))` over qubit inputs.
pub fn s_phi_lambda(phi: &ChoiChannel, lambda: &ChoiChannel) -> Result<f64> {
    qubit_input(phi)?;
    lambda.require_cptp()?;
    let degraded = lambda.compose(phi)?;
    let (v, _) = maximize_over_qubit_states(|rho| coherent_objective(phi, &degraded, rho), &BlochSearch::default());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, completely_depolarizing, depolarizing, identity, trace_map};
    use crate::optim::fibonacci_sphere;

    #[test]
    fn closed_form_values() {
        assert_eq!(coherent_info_depolarizing(0.0).unwrap(), 1.0);
        assert!((coherent_info_depolarizing(0.1).unwrap() - 0.37251).abs() < 5e-6);
        let p: f64 = 0.025;
        let direct = 1.0 + (1.0 - p) * (1.0 - p).log2() + p * (p / 3.0).log2();
        assert!((coherent_info_depolarizing(p).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 0.791715).abs() < 5e-7);
        assert!(coherent_info_depolarizing(1.5).is_err());
    }

    #[test]
    fn numeric_identity_and_depolarizing() {
        assert!((coherent_info_numeric(&identity(2)).unwrap() - 1.0).abs() < 1e-9);
        let want = coherent_info_depolarizing(0.1).unwrap();
        assert!((coherent_info_numeric(&depolarizing(0.1).unwrap()).unwrap() - want).abs() < 1e-4);
        assert!(coherent_info_numeric(&completely_depolarizing(2)).unwrap() <= 1e-9);
        assert!(matches!(coherent_info_numeric(&identity(3)), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn s_phi_lambda_examples() {
        assert!((s_phi_lambda(&identity(2), &trace_map(2)).unwrap() - 1.0).abs() < 1e-9);
        // AD_{γ'} ∘ AD_γ = AD_{1−γ} ≅ AD_γᶜ for γ' = (1−2γ)/(1−γ)
        let g = 0.3;
        let phi = amplitude_damping(g).unwrap();
        let lam = amplitude_damping((1.0 - 2.0 * g) / (1.0 - g)).unwrap();
        let s = s_phi_lambda(&phi, &lam).unwrap();
        assert!((s - coherent_info_numeric(&phi).unwrap()).abs() < 1e-8);
        assert!(s_phi_lambda(&phi, &identity(3)).is_err());
    }

    #[test]
    fn depolarizing_objective_peaks_at_maximally_mixed() {
        let phi = depolarizing(0.07).unwrap();
        let (_, comp) = kraus_and_complementary(&phi).unwrap();
        let center = coherent_objective(&phi, &comp, &DensityMatrix::maximally_mixed(2));
        for (k, d) in fibonacci_sphere(200).iter().enumerate() {
            let r = (k % 10) as f64 / 9.0;
            let rho = DensityMatrix::from_bloch([r * d[0], r * d[1], r * d[2]]);
            assert!(coherent_objective(&phi, &comp, &rho) <= center + 1e-12);
        }
    }
}
