//! Density matrices and entropy-based quasi-distances: von Neumann entropy
//! and the relative entropy `Tr[rho ln rho - rho ln sigma]`, which is
//! nonnegative, vanishes only at equal states, and blows up to `+inf` whenever
//! the support of `rho` leaks outside the support of `sigma` (in particular
//! for any two distinct pure states).

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::constants::Constants;

/// Eigenvalues below this are treated as outside the support.
const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum EntropyError {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("support of rho is not contained in the support of sigma")]
    SupportViolation,
    #[error("partition function is not finite")]
    NonFiniteZ,
}

/// Hermitian, positive-semidefinite, unit-trace matrix with its
/// eigendecomposition computed once at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, EntropyError> {
        let d = mat.nrows();
        if d == 0 || mat.ncols() != d {
            return Err(EntropyError::InvalidState(format!(
                "matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_defect = (&mat - mat.adjoint()).norm();
        if herm_defect > 1e-12 {
            return Err(EntropyError::InvalidState(format!(
                "not Hermitian (defect {herm_defect:.3e})"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(EntropyError::InvalidState(format!(
                "trace is {trace}, not 1"
            )));
        }
        let eig = mat.clone().symmetric_eigen();
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        for v in &mut eigenvalues {
            if *v < -1e-12 {
                return Err(EntropyError::InvalidState(format!(
                    "negative eigenvalue {v:.3e}"
                )));
            }
            *v = v.max(0.0);
        }
        Ok(DensityMatrix {
            mat,
            eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self, EntropyError> {
        let d = probs.len();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::new(m)
    }

    /// `|e_k><e_k|` in a `dim`-dimensional space.
    pub fn pure_basis_state(k: usize, dim: usize) -> Result<Self, EntropyError> {
        if k >= dim {
            return Err(EntropyError::InvalidState(format!(
                "basis index {k} outside dimension {dim}"
            )));
        }
        let mut probs = vec![0.0; dim];
        probs[k] = 1.0;
        Self::from_diagonal(&probs)
    }

    /// Projector onto a (normalized) state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self, EntropyError> {
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(EntropyError::InvalidState("zero state vector".into()));
        }
        let d = psi.len();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = psi[i] * psi[j].conj() / norm2;
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Eigenvalues clamped to `[0, 1]`, in the eigensolver's order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// `<v_j| rho |v_j>` for every eigenvector `v_j` of `other`.
    fn populations_in_basis(&self, other: &DensityMatrix) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                let v = other.eigenvectors.column(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..d {
                    for b in 0..d {
                        acc += v[a].conj() * self.mat[(a, b)] * v[b];
                    }
                }
                acc.re.max(0.0)
            })
            .collect()
    }
}

/// `- k_B sum lambda_i ln lambda_i` with `0 ln 0 = 0`; natural logarithm, so
/// the value is in nats when `k_B = 1`.
pub fn von_neumann_entropy(rho: &DensityMatrix, constants: &Constants) -> f64 {
    constants.k_b * spectrum_entropy(rho.eigenvalues())
}

/// Entropy of a bare probability spectrum, in nats.
pub fn spectrum_entropy(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Relative entropy `Tr[rho ln rho - rho ln sigma]`, in nats.
///
/// Returns `+inf` when the support of `rho` is not contained in the support
/// of `sigma`; distinct pure states are the canonical infinite case.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, EntropyError> {
    if rho.dim() != sigma.dim() {
        return Err(EntropyError::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let populations = rho.populations_in_basis(sigma);
    let mut cross = 0.0;
    for (q, &mu) in populations.iter().zip(sigma.eigenvalues()) {
        if mu <= SUPPORT_TOL {
            if *q > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += q * mu.ln();
    }
    let neg_s_rho = rho
        .eigenvalues()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>();
    Ok(neg_s_rho - cross)
}

/// The split `(S[sigma], S[rho], Tr[(sigma - rho) ln sigma])`, whose
/// combination `S[sigma] - S[rho] + cross` equals the relative entropy.
pub fn relative_entropy_decomposed(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<(f64, f64, f64), EntropyError> {
    if rho.dim() != sigma.dim() {
        return Err(EntropyError::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let populations = rho.populations_in_basis(sigma);
    let mut cross = 0.0;
    for (q, &mu) in populations.iter().zip(sigma.eigenvalues()) {
        if mu <= SUPPORT_TOL {
            if *q > 1e-10 {
                return Err(EntropyError::SupportViolation);
            }
            continue;
        }
        // Tr[(sigma - rho) ln sigma] in sigma's eigenbasis
        cross += (mu - q) * mu.ln();
    }
    let s_sigma = spectrum_entropy(sigma.eigenvalues());
    let s_rho = spectrum_entropy(rho.eigenvalues());
    Ok((s_sigma, s_rho, cross))
}
