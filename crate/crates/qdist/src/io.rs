//! JSON ingestion for complex matrices, amplitude states, and constants.
//!
//! Matrices use `{"dim": D, "re": [[..]], "im": [[..]]}` with `im` optional
//! for real matrices; amplitude states use `{"re": [..], "im": [..],
//! "labels": [..]}` with `im` and `labels` optional.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::constants::Constants;
use crate::entropy::{DensityMatrix, EntropyError};
use crate::hilbert_sphere::{AmplitudeState, SphereError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("JSON parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    State(#[from] EntropyError),
    #[error(transparent)]
    Amplitude(#[from] SphereError),
}

#[derive(Debug, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

pub fn complex_matrix_from_json(text: &str) -> Result<DMatrix<Complex64>, IoError> {
    let parsed: MatrixJson = serde_json::from_str(text)?;
    let d = parsed.dim;
    let check = |rows: &Vec<Vec<f64>>, name: &str| -> Result<(), IoError> {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(IoError::Shape(format!(
                "{name} must be {d}x{d} to match \"dim\""
            )));
        }
        Ok(())
    };
    check(&parsed.re, "re")?;
    if let Some(im) = &parsed.im {
        check(im, "im")?;
    }
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let re = parsed.re[i][j];
        let im = parsed.im.as_ref().map(|m| m[i][j]).unwrap_or(0.0);
        Complex64::new(re, im)
    }))
}

/// Parse and validate a density matrix (Hermitian, PSD, unit trace).
pub fn density_matrix_from_json(text: &str) -> Result<DensityMatrix, IoError> {
    Ok(DensityMatrix::new(complex_matrix_from_json(text)?)?)
}

#[derive(Debug, Deserialize)]
struct StateJson {
    re: Vec<f64>,
    #[serde(default)]
    im: Option<Vec<f64>>,
    #[serde(default)]
    labels: Option<Vec<i64>>,
}

/// Parse an amplitude state, renormalizing onto the sphere.
pub fn amplitude_state_from_json(text: &str) -> Result<AmplitudeState, IoError> {
    let parsed: StateJson = serde_json::from_str(text)?;
    let n = parsed.re.len();
    if let Some(im) = &parsed.im {
        if im.len() != n {
            return Err(IoError::Shape("re and im lengths differ".into()));
        }
    }
    if let Some(labels) = &parsed.labels {
        if labels.len() != n {
            return Err(IoError::Shape("labels length differs from re".into()));
        }
    }
    let coeffs: Vec<Complex64> = (0..n)
        .map(|i| {
            Complex64::new(
                parsed.re[i],
                parsed.im.as_ref().map(|v| v[i]).unwrap_or(0.0),
            )
        })
        .collect();
    let state = match parsed.labels {
        Some(labels) => AmplitudeState::normalized_with_labels(coeffs, labels)?,
        None => AmplitudeState::normalized(coeffs)?,
    };
    Ok(state)
}

/// Parse a constants override; absent fields keep natural-unit defaults.
pub fn constants_from_json(text: &str) -> Result<Constants, IoError> {
    #[derive(Deserialize)]
    struct Partial {
        hbar: Option<f64>,
        c: Option<f64>,
        k_b: Option<f64>,
        g: Option<f64>,
    }
    let p: Partial = serde_json::from_str(text)?;
    let base = Constants::natural();
    Ok(Constants {
        hbar: p.hbar.unwrap_or(base.hbar),
        c: p.c.unwrap_or(base.c),
        k_b: p.k_b.unwrap_or(base.k_b),
        g: p.g.unwrap_or(base.g),
    })
}
