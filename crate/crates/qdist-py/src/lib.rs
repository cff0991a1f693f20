//! Python bindings for the main qdist types and operations.
//!
//! Matrices cross the boundary as nested lists of floats (separate real and
//! imaginary parts); amplitude states as coefficient lists. Build with
//! `cargo build --release -p qdist-py` and rename the produced
//! `libqdist_py.so` to `qdist.so` on the Python path.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qdist::constants::Constants;
use qdist::entropy::{self, DensityMatrix};
use qdist::families::{gaussian_family, ho_eigenstate_family};
use qdist::fisher_rao::{self, Form};
use qdist::geodesy::{self, MetricField};
use qdist::hilbert_sphere::{self, AmplitudeState, EvolvedBasis};
use qdist::oscillator_manifold as oscillator;
use qdist::quad::QuadratureSpec;
use qdist::scalar_field;
use qdist::thermal::{self, Hamiltonian, ThermalModel};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn matrix_to_lists(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn complex_matrix_from_lists(
    re: Vec<Vec<f64>>,
    im: Option<Vec<Vec<f64>>>,
) -> PyResult<DMatrix<Complex64>> {
    let d = re.len();
    if re.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    if let Some(im) = &im {
        if im.len() != d || im.iter().any(|r| r.len() != d) {
            return Err(PyValueError::new_err("im must match re in shape"));
        }
    }
    Ok(DMatrix::from_fn(d, d, |i, j| {
        Complex64::new(re[i][j], im.as_ref().map(|m| m[i][j]).unwrap_or(0.0))
    }))
}

fn state_from_lists(re: Vec<f64>, im: Option<Vec<f64>>) -> PyResult<AmplitudeState> {
    let coeffs: Vec<Complex64> = match &im {
        Some(im) if im.len() != re.len() => {
            return Err(PyValueError::new_err("im must match re in length"))
        }
        Some(im) => re
            .iter()
            .zip(im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect(),
        None => re.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
    };
    AmplitudeState::normalized(coeffs).map_err(value_err)
}

fn basis_from(
    system: &str,
    mass: f64,
    omega: f64,
    t: f64,
    truncation: usize,
) -> PyResult<EvolvedBasis> {
    match system {
        "ho" => Ok(EvolvedBasis::oscillator(
            mass,
            omega,
            t,
            truncation,
            Constants::natural(),
        )),
        "free" => Ok(EvolvedBasis::free_particle(
            mass,
            t,
            truncation,
            Constants::natural(),
        )),
        other => Err(PyValueError::new_err(format!(
            "unknown system {other:?}; expected \"ho\" or \"free\""
        ))),
    }
}

/// Closed-form Fisher-Rao metric of the Gaussian family at (scale, location).
#[pyfunction]
fn gauss_metric(scale: f64, location: f64) -> PyResult<Vec<Vec<f64>>> {
    if scale <= 0.0 {
        return Err(PyValueError::new_err("scale must be positive"));
    }
    Ok(matrix_to_lists(&fisher_rao::gaussian_metric_closed(&[
        scale, location,
    ])))
}

/// Fisher-Rao metric by quadrature; family is "gauss" or "ho:N".
#[pyfunction]
#[pyo3(signature = (family, theta, form = "gradient"))]
fn fr_metric(family: &str, theta: (f64, f64), form: &str) -> PyResult<Vec<Vec<f64>>> {
    let consts = Constants::natural();
    let fam = if family == "gauss" {
        gaussian_family()
    } else if let Some(n) = family.strip_prefix("ho:") {
        let n: usize = n.parse().map_err(|_| value_err("bad eigenstate index"))?;
        ho_eigenstate_family(n, &consts).map_err(value_err)?
    } else {
        return Err(PyValueError::new_err("family must be \"gauss\" or \"ho:N\""));
    };
    let (form, spec) = match form {
        "gradient" => (Form::Gradient, QuadratureSpec::gauss_hermite(200)),
        "hessian" => (
            Form::Hessian,
            QuadratureSpec {
                abs_tol: 1e-6,
                rel_tol: 1e-6,
                ..QuadratureSpec::gauss_hermite(200)
            },
        ),
        _ => return Err(PyValueError::new_err("form must be gradient or hessian")),
    };
    let tensor = fisher_rao::fr_metric(&fam, &[theta.0, theta.1], form, 1.0, &spec)
        .map_err(runtime_err)?;
    Ok(matrix_to_lists(&tensor.components))
}

/// Closed-form Gaussian distance, the geodesic-shooting value under the
/// actual metric, and their ratio.
#[pyfunction]
fn gauss_distance(theta1: (f64, f64), theta2: (f64, f64)) -> PyResult<(f64, f64, f64)> {
    let t1 = [theta1.0, theta1.1];
    let t2 = [theta2.0, theta2.1];
    let formula = fisher_rao::gauss_geodesic_distance_paper(&t1, &t2).map_err(value_err)?;
    let field = MetricField::gaussian_fisher_rao();
    let (shot, _) = geodesy::shoot_distance(&field, &t1, &t2).map_err(runtime_err)?;
    let ratio = if shot != 0.0 { formula / shot } else { 1.0 };
    Ok((formula, shot, ratio))
}

/// Distance on the unit-weight hyperbolic half-plane (closed form).
#[pyfunction]
fn hyperbolic_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    geodesy::hyperbolic_half_plane_distance(&[p.0, p.1], &[q.0, q.1])
}

/// Closed-form oscillator parameter metric at (mass, frequency).
#[pyfunction]
fn oscillator_metric(n: u32, mass: f64, omega: f64) -> PyResult<Vec<Vec<f64>>> {
    let g = oscillator::ho_metric_closed(n, mass, omega).map_err(value_err)?;
    Ok(matrix_to_lists(&g.components))
}

/// Second diagonal coefficient of the log-coordinate form.
#[pyfunction]
fn oscillator_eta(n: u32) -> f64 {
    oscillator::eta(n)
}

/// Log coordinates (U, V) of an oscillator relative to reference scales.
#[pyfunction]
#[pyo3(signature = (n, mass, omega, m0 = 1.0, omega0 = 1.0))]
fn oscillator_uv(n: u32, mass: f64, omega: f64, m0: f64, omega0: f64) -> PyResult<(f64, f64)> {
    oscillator::uv_transform(n, mass, omega, (m0, omega0)).map_err(value_err)
}

/// Rows (n, a, eta, class) of the signature table.
#[pyfunction]
fn oscillator_signature_table(n_max: u32) -> Vec<(u32, f64, f64, String)> {
    oscillator::signature_report(n_max)
        .into_iter()
        .map(|r| (r.n, r.a, r.eta, r.class.label().to_string()))
        .collect()
}

/// Closed-form distance between two oscillators in the same eigenstate,
/// with its causal class.
#[pyfunction]
#[pyo3(signature = (n, p1, p2, m0 = 1.0, omega0 = 1.0))]
fn oscillator_state_distance(
    n: u32,
    p1: (f64, f64),
    p2: (f64, f64),
    m0: f64,
    omega0: f64,
) -> PyResult<(f64, String)> {
    let (d, class) = oscillator::closed_distance(n, p1, p2, (m0, omega0)).map_err(value_err)?;
    Ok((d, class.label().to_string()))
}

/// Von Neumann entropy in nats of a density matrix given as nested lists.
#[pyfunction]
#[pyo3(signature = (re, im = None))]
fn von_neumann_entropy(re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>>) -> PyResult<f64> {
    let rho = DensityMatrix::new(complex_matrix_from_lists(re, im)?).map_err(value_err)?;
    Ok(entropy::von_neumann_entropy(&rho, &Constants::natural()))
}

/// Relative entropy in nats; returns +inf on support violation.
#[pyfunction]
#[pyo3(signature = (rho_re, sigma_re, rho_im = None, sigma_im = None))]
fn relative_entropy(
    rho_re: Vec<Vec<f64>>,
    sigma_re: Vec<Vec<f64>>,
    rho_im: Option<Vec<Vec<f64>>>,
    sigma_im: Option<Vec<Vec<f64>>>,
) -> PyResult<f64> {
    let rho = DensityMatrix::new(complex_matrix_from_lists(rho_re, rho_im)?).map_err(value_err)?;
    let sigma =
        DensityMatrix::new(complex_matrix_from_lists(sigma_re, sigma_im)?).map_err(value_err)?;
    entropy::relative_entropy(&rho, &sigma).map_err(value_err)
}

/// Boltzmann probabilities of an explicit spectrum at inverse temperature
/// beta.
#[pyfunction]
fn gibbs_probabilities(energies: Vec<f64>, beta: f64) -> PyResult<Vec<f64>> {
    let model = ThermalModel::new(Hamiltonian::Spectrum(energies), beta, Constants::natural())
        .map_err(value_err)?;
    match model.gibbs_state().map_err(value_err)? {
        thermal::GibbsState::Spectral(pairs) => Ok(pairs.into_iter().map(|(_, p)| p).collect()),
        _ => Err(runtime_err("unexpected representation")),
    }
}

/// Relative entropy between two thermal states of the same spectrum at
/// inverse temperatures b (rho) and beta (sigma).
#[pyfunction]
fn two_thermal_relative_entropy(energies: Vec<f64>, b: f64, beta: f64) -> PyResult<f64> {
    thermal::two_thermal_relative_entropy(
        &Hamiltonian::Spectrum(energies),
        b,
        beta,
        &Constants::natural(),
    )
    .map_err(value_err)
}

/// Thermal-field relative entropy between inverse temperatures b and beta.
#[pyfunction]
fn scalar_field_rel_entropy(volume: f64, b: f64, beta: f64) -> PyResult<f64> {
    scalar_field::rel_entropy(volume, b, beta, &Constants::natural()).map_err(value_err)
}

/// Closed-form distance between fixed-energy thermal field states.
#[pyfunction]
#[pyo3(signature = (e1, e2, volume = 1.0))]
fn scalar_field_distance(e1: f64, e2: f64, volume: f64) -> PyResult<f64> {
    scalar_field::distance(e1, e2, volume, &Constants::natural()).map_err(value_err)
}

/// Position density of an evolved amplitude state at x.
#[pyfunction]
#[pyo3(signature = (system, mass, omega, t, re, x, im = None, truncation = 8))]
#[allow(clippy::too_many_arguments)]
fn sphere_probability(
    system: &str,
    mass: f64,
    omega: f64,
    t: f64,
    re: Vec<f64>,
    x: f64,
    im: Option<Vec<f64>>,
    truncation: usize,
) -> PyResult<f64> {
    let basis = basis_from(system, mass, omega, t, truncation)?;
    let state = state_from_lists(re, im)?;
    hilbert_sphere::probability(&basis, &state, x).map_err(value_err)
}

/// Metric blocks on the truncated amplitude sphere, returned as
/// (holomorphic_re, holomorphic_im, mixed_re, mixed_im).
#[pyfunction]
#[pyo3(signature = (system, mass, omega, t, re, im = None, truncation = 8))]
#[allow(clippy::type_complexity)]
fn sphere_metric(
    system: &str,
    mass: f64,
    omega: f64,
    t: f64,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
    truncation: usize,
) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let basis = basis_from(system, mass, omega, t, truncation)?;
    let state = state_from_lists(re, im)?;
    let spec = hilbert_sphere::default_spec(&basis);
    let metric = hilbert_sphere::sphere_metric(&basis, &state, &spec).map_err(|e| match e {
        hilbert_sphere::SphereError::Quadrature(_) => runtime_err(e),
        _ => value_err(e),
    })?;
    let split = |m: &DMatrix<Complex64>| {
        let re = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
        let im = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].im);
        (matrix_to_lists(&re), matrix_to_lists(&im))
    };
    let (h_re, h_im) = split(&metric.holomorphic);
    let (m_re, m_im) = split(&metric.mixed);
    Ok((h_re, h_im, m_re, m_im))
}

/// Gauss-Hermite norm of the oscillator mode overlap together with its
/// closed form (2 pi / lambda^2) sin(omega t).
#[pyfunction]
fn mode_overlap_norm(mass: f64, omega: f64, t: f64, n: usize) -> PyResult<(f64, f64)> {
    let basis = EvolvedBasis::oscillator(mass, omega, t, n + 2, Constants::natural());
    let est = hilbert_sphere::mode_overlap_norm(&basis, n, &QuadratureSpec::gauss_hermite(200))
        .map_err(value_err)?;
    let closed = hilbert_sphere::mode_overlap_norm_closed(&basis).map_err(value_err)?;
    Ok((est.value, closed))
}

#[pymodule]
#[pyo3(name = "qdist")]
fn qdist_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gauss_metric, m)?)?;
    m.add_function(wrap_pyfunction!(fr_metric, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_distance, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_metric, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_eta, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_uv, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_signature_table, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_state_distance, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(gibbs_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(two_thermal_relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_field_rel_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_field_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_probability, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_metric, m)?)?;
    m.add_function(wrap_pyfunction!(mode_overlap_norm, m)?)?;
    Ok(())
}
