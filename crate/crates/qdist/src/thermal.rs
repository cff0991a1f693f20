//! Gibbs states `exp(-beta H)/Z`, their thermodynamic functions, and the
//! relative-entropy shortcuts available when one or both arguments are
//! thermal: `S_rel(rho || sigma_t) = beta Tr(rho H) - S[rho] - beta F(beta)`
//! and, for two thermal states of the same Hamiltonian,
//! `S_rel = S(beta) - S(b) + beta E(b) - beta E(beta)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::constants::Constants;
use crate::entropy::{
    relative_entropy, spectrum_entropy, von_neumann_entropy, DensityMatrix, EntropyError,
};

/// Boltzmann weights below `1e-18` of the partition sum are dropped.
const WEIGHT_FLOOR: f64 = 1e-18;

/// Energy operator in one of three representations.
#[derive(Debug, Clone)]
pub enum Hamiltonian {
    /// Explicit Hermitian matrix.
    Matrix(DMatrix<Complex64>),
    /// Explicit eigenvalues (diagonal model).
    Spectrum(Vec<f64>),
    /// Free massless scalar field in a box of the given volume; closed-form
    /// thermodynamics, no finite matrix representation.
    FreeScalarField { volume: f64 },
}

/// A Hamiltonian together with an inverse temperature.
#[derive(Debug, Clone)]
pub struct ThermalModel {
    pub hamiltonian: Hamiltonian,
    pub beta: f64,
    pub constants: Constants,
}

/// Gibbs state in the representation matching its Hamiltonian.
#[derive(Debug, Clone)]
pub enum GibbsState {
    Matrix(DensityMatrix),
    /// `(energy, probability)` pairs.
    Spectral(Vec<(f64, f64)>),
    /// Analytic thermal field: only aggregate functions exist.
    Analytic { volume: f64, beta: f64 },
}

/// Energies `hbar omega (n + 1/2)` for `n = 0..count`.
pub fn oscillator_energies(hbar_omega: f64, count: usize) -> Vec<f64> {
    (0..count).map(|n| hbar_omega * (n as f64 + 0.5)).collect()
}

impl ThermalModel {
    pub fn new(hamiltonian: Hamiltonian, beta: f64, constants: Constants) -> Result<Self, EntropyError> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(EntropyError::InvalidState(format!(
                "inverse temperature must be positive and finite, got {beta}"
            )));
        }
        if let Hamiltonian::Matrix(m) = &hamiltonian {
            if m.nrows() != m.ncols() || m.is_empty() {
                return Err(EntropyError::InvalidState("Hamiltonian must be square".into()));
            }
            let defect = (m - m.adjoint()).norm();
            if defect > 1e-10 {
                return Err(EntropyError::InvalidState(format!(
                    "Hamiltonian not Hermitian (defect {defect:.3e})"
                )));
            }
        }
        if let Hamiltonian::FreeScalarField { volume } = &hamiltonian {
            if volume.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(EntropyError::InvalidState("volume must be positive".into()));
            }
        }
        Ok(ThermalModel {
            hamiltonian,
            beta,
            constants,
        })
    }

    fn eigens(&self) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>), EntropyError> {
        match &self.hamiltonian {
            Hamiltonian::Matrix(m) => {
                let eig = m.clone().symmetric_eigen();
                Ok((eig.eigenvalues.iter().copied().collect(), Some(eig.eigenvectors)))
            }
            Hamiltonian::Spectrum(e) => {
                if e.is_empty() {
                    return Err(EntropyError::InvalidState("empty spectrum".into()));
                }
                Ok((e.clone(), None))
            }
            Hamiltonian::FreeScalarField { .. } => Err(EntropyError::InvalidState(
                "the analytic field model has no discrete spectrum".into(),
            )),
        }
    }

    /// Boltzmann probabilities over the spectrum, shifted by the ground energy
    /// for stability; negligible weights are truncated.
    fn boltzmann(&self) -> Result<Vec<(f64, f64)>, EntropyError> {
        let (energies, _) = self.eigens()?;
        let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let mut weights: Vec<(f64, f64)> = energies
            .iter()
            .map(|&e| (e, (-self.beta * (e - e0)).exp()))
            .collect();
        let z: f64 = weights.iter().map(|(_, w)| w).sum();
        if !(z.is_finite() && z > 0.0) {
            return Err(EntropyError::NonFiniteZ);
        }
        for (_, w) in &mut weights {
            *w /= z;
        }
        weights.retain(|(_, w)| *w > WEIGHT_FLOOR);
        Ok(weights)
    }

    pub fn gibbs_state(&self) -> Result<GibbsState, EntropyError> {
        match &self.hamiltonian {
            Hamiltonian::FreeScalarField { volume } => Ok(GibbsState::Analytic {
                volume: *volume,
                beta: self.beta,
            }),
            Hamiltonian::Spectrum(_) => Ok(GibbsState::Spectral(self.boltzmann()?)),
            Hamiltonian::Matrix(m) => {
                let eig = m.clone().symmetric_eigen();
                let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
                let weights: Vec<f64> = eig
                    .eigenvalues
                    .iter()
                    .map(|&e| (-self.beta * (e - e0)).exp())
                    .collect();
                let z: f64 = weights.iter().sum();
                if !(z.is_finite() && z > 0.0) {
                    return Err(EntropyError::NonFiniteZ);
                }
                let d = m.nrows();
                let mut rho = DMatrix::<Complex64>::zeros(d, d);
                for (j, &w) in weights.iter().enumerate() {
                    let v = eig.eigenvectors.column(j);
                    let p = w / z;
                    for a in 0..d {
                        for b in 0..d {
                            rho[(a, b)] += Complex64::new(p, 0.0) * v[a] * v[b].conj();
                        }
                    }
                }
                // symmetrize away accumulation noise before validation
                let rho = (rho.clone() + rho.adjoint()) * Complex64::new(0.5, 0.0);
                DensityMatrix::new(rho).map(GibbsState::Matrix)
            }
        }
    }

    /// Mean energy `Tr(sigma_t H)`.
    pub fn energy(&self) -> Result<f64, EntropyError> {
        match &self.hamiltonian {
            Hamiltonian::FreeScalarField { volume } => Ok(crate::scalar_field::energy(
                *volume,
                self.beta,
                &self.constants,
            )),
            _ => Ok(self
                .boltzmann()?
                .iter()
                .map(|(e, p)| e * p)
                .sum()),
        }
    }

    /// Thermal entropy in units of `k_B`.
    pub fn entropy(&self) -> Result<f64, EntropyError> {
        match &self.hamiltonian {
            Hamiltonian::FreeScalarField { volume } => Ok(crate::scalar_field::entropy(
                *volume,
                self.beta,
                &self.constants,
            )),
            _ => {
                let probs: Vec<f64> = self.boltzmann()?.iter().map(|(_, p)| *p).collect();
                Ok(self.constants.k_b * spectrum_entropy(&probs))
            }
        }
    }

    /// Free energy `E - S/(k_B beta)` (so that `beta F = beta E - S/k_B`).
    pub fn free_energy(&self) -> Result<f64, EntropyError> {
        let e = self.energy()?;
        let s = self.entropy()?;
        Ok(e - s / (self.constants.k_b * self.beta))
    }
}

/// Relative entropy of `rho` against the Gibbs state of `model`, in nats, via
/// the thermal shortcut `beta Tr(rho H) - S[rho] - beta F(beta)`.
///
/// This is an independent code path from the spectral evaluation of the
/// definition; the two agree to 1e-9 on full-rank inputs.
pub fn thermal_relative_entropy(
    rho: &DensityMatrix,
    model: &ThermalModel,
) -> Result<f64, EntropyError> {
    let h = match &model.hamiltonian {
        Hamiltonian::Matrix(m) => m,
        _ => {
            return Err(EntropyError::InvalidState(
                "thermal shortcut needs a matrix Hamiltonian".into(),
            ))
        }
    };
    if h.nrows() != rho.dim() {
        return Err(EntropyError::DimensionMismatch(rho.dim(), h.nrows()));
    }
    let mean_energy = (rho.matrix() * h).trace().re;
    let s_rho = von_neumann_entropy(rho, &model.constants) / model.constants.k_b;
    Ok(model.beta * mean_energy - s_rho - model.beta * model.free_energy()?)
}

/// Relative entropy between two thermal states of the same Hamiltonian at
/// inverse temperatures `b` (rho) and `beta` (sigma):
/// `S(beta) - S(b) + beta E(b) - beta E(beta)`, in nats.
pub fn two_thermal_relative_entropy(
    hamiltonian: &Hamiltonian,
    b: f64,
    beta: f64,
    constants: &Constants,
) -> Result<f64, EntropyError> {
    let model_rho = ThermalModel::new(hamiltonian.clone(), b, *constants)?;
    let model_sigma = ThermalModel::new(hamiltonian.clone(), beta, *constants)?;
    let kb = constants.k_b;
    Ok(model_sigma.entropy()? / kb - model_rho.entropy()? / kb
        + beta * model_rho.energy()?
        - beta * model_sigma.energy()?)
}

/// Relative entropy between Gibbs states of two different Hamiltonians,
/// evaluated through the spectral definition (the ground truth the shortcut
/// forms are checked against).
pub fn gibbs_relative_entropy(
    model_rho: &ThermalModel,
    model_sigma: &ThermalModel,
) -> Result<f64, EntropyError> {
    let GibbsState::Matrix(rho) = model_rho.gibbs_state()? else {
        return Err(EntropyError::InvalidState(
            "matrix Hamiltonians required".into(),
        ));
    };
    let GibbsState::Matrix(sigma) = model_sigma.gibbs_state()? else {
        return Err(EntropyError::InvalidState(
            "matrix Hamiltonians required".into(),
        ));
    };
    relative_entropy(&rho, &sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn diag_h(values: &[f64]) -> Hamiltonian {
        let d = values.len();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Hamiltonian::Matrix(m)
    }

    #[test]
    fn infinite_temperature_limit() {
        let model = ThermalModel::new(diag_h(&[0.0, 1e-8]), 1e-6, Constants::default()).unwrap();
        let GibbsState::Matrix(rho) = model.gibbs_state().unwrap() else {
            panic!()
        };
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-9);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_level_gibbs_hand_value() {
        let model = ThermalModel::new(diag_h(&[0.0, 1.0]), 3.0f64.ln(), Constants::default())
            .unwrap();
        let GibbsState::Matrix(rho) = model.gibbs_state().unwrap() else {
            panic!()
        };
        assert!((rho.matrix()[(0, 0)].re - 0.75).abs() < 1e-14);
        assert!((rho.matrix()[(1, 1)].re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn truncated_oscillator_matches_geometric_series() {
        let model = ThermalModel::new(
            Hamiltonian::Spectrum(oscillator_energies(1.0, 51)),
            1.0,
            Constants::default(),
        )
        .unwrap();
        let e = model.energy().unwrap();
        let expect = 0.5 + 1.0 / (1.0f64.exp() - 1.0);
        assert!((e - expect).abs() < 1e-12, "got {e} expect {expect}");
    }

    #[test]
    fn gibbs_maximizes_entropy_at_fixed_energy() {
        // perturbations of the Gibbs spectrum along the one direction that
        // preserves both trace and mean energy for H = diag(0, 1, 2)
        let beta = 1.0;
        let model = ThermalModel::new(diag_h(&[0.0, 1.0, 2.0]), beta, Constants::default())
            .unwrap();
        let GibbsState::Matrix(rho) = model.gibbs_state().unwrap() else {
            panic!()
        };
        let p: Vec<f64> = (0..3).map(|i| rho.matrix()[(i, i)].re).collect();
        let s_gibbs = spectrum_entropy(&p);
        let mut rng = rand::rngs::StdRng::seed_from_u64(41);
        let mut tried = 0;
        while tried < 20 {
            let t = rng.gen_range(-1.0..1.0) * 0.1;
            let q = [p[0] + t, p[1] - 2.0 * t, p[2] + t];
            if q.iter().any(|&v| v < 0.0) {
                continue;
            }
            let s = spectrum_entropy(&q);
            assert!(s <= s_gibbs + 1e-9, "t={t}: {s} > {s_gibbs}");
            tried += 1;
        }
    }

    #[test]
    fn thermal_shortcut_matches_definition() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(71);
        for _ in 0..10 {
            let d = 3;
            let h = {
                let a = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                Hamiltonian::Matrix((&a + a.adjoint()) * Complex64::new(0.5, 0.0))
            };
            let beta = rng.gen_range(0.3..2.0);
            let model = ThermalModel::new(h, beta, Constants::default()).unwrap();
            let rho = crate::entropy::tests::random_density(&mut rng, d);
            let shortcut = thermal_relative_entropy(&rho, &model).unwrap();
            let GibbsState::Matrix(sigma) = model.gibbs_state().unwrap() else {
                panic!()
            };
            let direct = relative_entropy(&rho, &sigma).unwrap();
            assert!(
                (shortcut - direct).abs() < 1e-9,
                "shortcut {shortcut} direct {direct}"
            );
        }
    }

    #[test]
    fn thermal_shortcut_hand_value() {
        // H = diag(0, 1), beta = 1, rho = |0><0|:
        // S_rel = ln Z = ln(1 + e^{-1})
        let model = ThermalModel::new(diag_h(&[0.0, 1.0]), 1.0, Constants::default()).unwrap();
        let rho = DensityMatrix::pure_basis_state(0, 2).unwrap();
        let s = thermal_relative_entropy(&rho, &model).unwrap();
        let expect = (1.0 + (-1.0f64).exp()).ln();
        assert!((s - expect).abs() < 1e-12, "got {s} expect {expect}");
        assert!((s - 0.31326168751822286).abs() < 1e-12);
    }

    #[test]
    fn self_distance_is_zero() {
        let model = ThermalModel::new(diag_h(&[0.0, 0.7, 1.9]), 1.3, Constants::default())
            .unwrap();
        let GibbsState::Matrix(rho) = model.gibbs_state().unwrap() else {
            panic!()
        };
        let s = thermal_relative_entropy(&rho, &model).unwrap();
        assert!(s.abs() < 1e-10, "got {s}");
    }

    #[test]
    fn two_thermal_form_matches_definition() {
        let h = diag_h(&[0.0, 1.0, 2.0]);
        let consts = Constants::default();
        let (b, beta) = (1.3, 0.7);
        let closed = two_thermal_relative_entropy(&h, b, beta, &consts).unwrap();
        let model_rho = ThermalModel::new(h.clone(), b, consts).unwrap();
        let model_sigma = ThermalModel::new(h, beta, consts).unwrap();
        let direct = gibbs_relative_entropy(&model_rho, &model_sigma).unwrap();
        assert!((closed - direct).abs() < 1e-10, "{closed} vs {direct}");
    }

    #[test]
    fn non_finite_partition_is_reported() {
        let model = ThermalModel::new(
            Hamiltonian::Spectrum(vec![f64::NEG_INFINITY, 0.0]),
            1.0,
            Constants::default(),
        )
        .unwrap();
        assert!(matches!(model.energy(), Err(EntropyError::NonFiniteZ)));
    }

    #[test]
    fn beta_must_be_positive() {
        assert!(ThermalModel::new(diag_h(&[0.0, 1.0]), 0.0, Constants::default()).is_err());
        assert!(ThermalModel::new(diag_h(&[0.0, 1.0]), -1.0, Constants::default()).is_err());
    }
}
