//! The metric on the truncated sphere of quantum amplitudes.
//!
//! A state is a normalized complex coefficient vector over energy eigenmodes.
//! Evolution enters through overlap densities `I_mn(x, t)`; the position
//! density is the double sum `P = sum c*_m c_n I_mn`, and the metric blocks
//! are assembled from the quadruple-indexed integrals
//! `A^{kp}_{mn} = int I_km I_pn / P dx`.
//!
//! Two systems are built in: a free particle on a circle of circumference
//! `2 pi` with integer wave numbers (plane waves on the full line are not
//! normalizable, and one period reproduces the closed-form overlaps with
//! Kronecker orthonormality), and the 1-D harmonic oscillator in its Hermite
//! eigenbasis.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::constants::Constants;
use crate::families::{hermite, MAX_EIGENSTATE_INDEX};
use crate::quad::{self, Envelope, QuadError, QuadratureSpec, Scheme};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Floor on the interference ratio `P / P_diagonal` under which the position
/// density is treated as vanishing, making the `1/P` integrals ill-defined.
/// The diagonal density is the natural local scale: the ratio tends to 1 in
/// the tails and dips to 0 exactly at destructive-interference zeros.
const DEGENERACY_FLOOR: f64 = 1e-10;

const CAUSTIC_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Error)]
pub enum SphereError {
    #[error("mode index {0} outside the supported range")]
    IndexTooLarge(i64),
    #[error("invalid amplitude state: {0}")]
    InvalidState(String),
    #[error("position density vanishes (within tolerance) somewhere on the domain")]
    DegenerateState,
    #[error("propagator caustic: |sin(omega t)| < 1e-6")]
    PropagatorCaustic,
    #[error("operation is only defined for the harmonic oscillator basis")]
    UnsupportedSystem,
    #[error("quadrature failure: {0}")]
    Quadrature(#[from] QuadError),
}

/// Normalized coefficient vector on the truncated amplitude sphere.
#[derive(Debug, Clone)]
pub struct AmplitudeState {
    coeffs: Vec<Complex64>,
    labels: Vec<i64>,
}

impl AmplitudeState {
    /// Accepts coefficients already normalized to `1e-12`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SphereError> {
        let labels = (0..coeffs.len() as i64).collect();
        Self::with_labels(coeffs, labels)
    }

    pub fn with_labels(coeffs: Vec<Complex64>, labels: Vec<i64>) -> Result<Self, SphereError> {
        if coeffs.is_empty() {
            return Err(SphereError::InvalidState("empty coefficient vector".into()));
        }
        if coeffs.len() != labels.len() {
            return Err(SphereError::InvalidState(
                "coefficient and label lengths differ".into(),
            ));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(SphereError::InvalidState("duplicate mode labels".into()));
        }
        let norm2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(SphereError::InvalidState(format!(
                "squared norm {norm2} is not 1"
            )));
        }
        Ok(AmplitudeState { coeffs, labels })
    }

    /// Rescales arbitrary nonzero coefficients onto the sphere.
    pub fn normalized(coeffs: Vec<Complex64>) -> Result<Self, SphereError> {
        let labels = (0..coeffs.len() as i64).collect();
        Self::normalized_with_labels(coeffs, labels)
    }

    pub fn normalized_with_labels(
        mut coeffs: Vec<Complex64>,
        labels: Vec<i64>,
    ) -> Result<Self, SphereError> {
        let norm2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(SphereError::InvalidState("zero coefficient vector".into()));
        }
        let inv = 1.0 / norm2.sqrt();
        for c in &mut coeffs {
            *c *= inv;
        }
        Self::with_labels(coeffs, labels)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Global phase rotation `c -> exp(i alpha) c`.
    pub fn phase_rotated(&self, alpha: f64) -> Self {
        let rot = Complex64::from_polar(1.0, alpha);
        AmplitudeState {
            coeffs: self.coeffs.iter().map(|c| c * rot).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Appends `extra` zero-amplitude modes with consecutive labels past the
    /// current maximum; used for truncation-convergence probes.
    pub fn padded(&self, extra: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut labels = self.labels.clone();
        let first_free = labels.iter().copied().max().unwrap_or(-1) + 1;
        for offset in 0..extra as i64 {
            coeffs.push(Complex64::new(0.0, 0.0));
            labels.push(first_free + offset);
        }
        AmplitudeState { coeffs, labels }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum System {
    /// Free particle on a circle of circumference `2 pi`, integer wave numbers.
    FreeParticleCircle { mass: f64 },
    /// 1-D harmonic oscillator, Hermite eigenbasis.
    HarmonicOscillator { mass: f64, omega: f64 },
}

/// An eigenbasis evolved to a fixed time; the propagator sandwich collapses by
/// orthonormality to `I_mn(x) = conj(u_m(x)) u_n(x)` for the per-mode evolved
/// functions `u_n`.
#[derive(Debug, Clone)]
pub struct EvolvedBasis {
    pub system: System,
    pub time: f64,
    pub constants: Constants,
    /// Mode cutoff: oscillator labels live in `0..truncation`, circle wave
    /// numbers in `-truncation..=truncation`.
    pub truncation: usize,
}

impl EvolvedBasis {
    pub fn free_particle(mass: f64, time: f64, truncation: usize, constants: Constants) -> Self {
        EvolvedBasis {
            system: System::FreeParticleCircle { mass },
            time,
            constants,
            truncation,
        }
    }

    pub fn oscillator(
        mass: f64,
        omega: f64,
        time: f64,
        truncation: usize,
        constants: Constants,
    ) -> Self {
        EvolvedBasis {
            system: System::HarmonicOscillator { mass, omega },
            time,
            constants,
            truncation,
        }
    }

    /// `sqrt(mass * omega / hbar)` for the oscillator.
    pub fn lambda(&self) -> Option<f64> {
        match self.system {
            System::HarmonicOscillator { mass, omega } => {
                Some((mass * omega / self.constants.hbar).sqrt())
            }
            System::FreeParticleCircle { .. } => None,
        }
    }

    pub fn domain(&self) -> quad::Domain {
        match self.system {
            System::FreeParticleCircle { .. } => quad::Domain::Periodic { length: TWO_PI },
            System::HarmonicOscillator { .. } => quad::Domain::RealLine,
        }
    }

    pub fn envelope(&self) -> Option<Envelope> {
        self.lambda().map(|l| Envelope {
            center: 0.0,
            width: 1.0 / l,
        })
    }

    fn check_mode(&self, n: i64) -> Result<(), SphereError> {
        match self.system {
            System::HarmonicOscillator { .. } => {
                if n < 0 || n as usize > MAX_EIGENSTATE_INDEX || n as usize >= self.truncation.max(1)
                {
                    return Err(SphereError::IndexTooLarge(n));
                }
            }
            System::FreeParticleCircle { .. } => {
                if n.unsigned_abs() as usize > self.truncation {
                    return Err(SphereError::IndexTooLarge(n));
                }
            }
        }
        Ok(())
    }

    pub fn validate_state(&self, state: &AmplitudeState) -> Result<(), SphereError> {
        for &l in state.labels() {
            self.check_mode(l)?;
        }
        Ok(())
    }

    /// Oscillator eigenfunction (real) for mode `n` at `x`.
    fn ho_eigenfunction(&self, n: usize, x: f64) -> f64 {
        let lambda = self.lambda().expect("oscillator only");
        let u = lambda * x;
        let mut norm = (lambda * lambda / std::f64::consts::PI).powf(0.25);
        for k in 1..=n {
            norm /= (2.0 * k as f64).sqrt();
        }
        norm * (-0.5 * u * u).exp() * hermite(n, u)
    }

    /// Per-mode evolved function `u_n(x)` with `I_mn = conj(u_m) u_n`.
    fn mode_function(&self, n: i64, x: f64) -> Complex64 {
        match self.system {
            System::HarmonicOscillator { omega, .. } => {
                let phase = -omega * self.time * n as f64;
                Complex64::from_polar(1.0, phase) * self.ho_eigenfunction(n as usize, x)
            }
            System::FreeParticleCircle { mass } => {
                let k = n as f64;
                let phase = -k * x + self.constants.hbar * self.time * k * k / (2.0 * mass);
                Complex64::from_polar(1.0, phase) / TWO_PI.sqrt()
            }
        }
    }

    /// Overlap density `I_mn(x)`: for the circle,
    /// `(1/2pi) exp(i x (m - n) - i hbar t (m^2 - n^2)/(2 mass))`; for the
    /// oscillator, `exp(i omega t (m - n)) psi_m(x) psi_n(x)`.
    pub fn overlap_density(&self, m: i64, n: i64, x: f64) -> Result<Complex64, SphereError> {
        self.check_mode(m)?;
        self.check_mode(n)?;
        Ok(self.mode_function(m, x).conj() * self.mode_function(n, x))
    }
}

/// Position density `P(x) = sum_{m,n} c*_m c_n I_mn(x) = |sum_n c_n u_n(x)|^2`,
/// real and nonnegative by construction.
pub fn probability(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    x: f64,
) -> Result<f64, SphereError> {
    basis.validate_state(state)?;
    Ok(probability_unchecked(basis, state, x))
}

fn probability_unchecked(basis: &EvolvedBasis, state: &AmplitudeState, x: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, &l) in state.coeffs().iter().zip(state.labels()) {
        acc += c * basis.mode_function(l, x);
    }
    acc.norm_sqr()
}

/// Diagonal-only compatibility density `sum_n |c_n|^2 I_nn(x)`, which drops
/// the `m != n` cross terms of the full double sum.
pub fn probability_diagonal(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    x: f64,
) -> Result<f64, SphereError> {
    basis.validate_state(state)?;
    let mut acc = 0.0;
    for (c, &l) in state.coeffs().iter().zip(state.labels()) {
        acc += c.norm_sqr() * basis.mode_function(l, x).norm_sqr();
    }
    Ok(acc)
}

fn scan_points(basis: &EvolvedBasis) -> Vec<f64> {
    const SCAN: usize = 2001;
    match basis.system {
        System::FreeParticleCircle { .. } => (0..SCAN)
            .map(|i| TWO_PI * i as f64 / SCAN as f64)
            .collect(),
        System::HarmonicOscillator { .. } => {
            let w = basis.envelope().unwrap().width;
            (0..SCAN)
                .map(|i| -10.0 * w + 20.0 * w * i as f64 / (SCAN - 1) as f64)
                .collect()
        }
    }
}

/// Fails with `DegenerateState` when the interference ratio `P / P_diag`
/// vanishes (within tolerance) anywhere: the scan-grid minimum is refined by
/// golden-section search so genuine zeros are separated from deep positive
/// minima that merely fall between grid points.
pub fn check_degenerate(basis: &EvolvedBasis, state: &AmplitudeState) -> Result<(), SphereError> {
    basis.validate_state(state)?;
    let ratio = |x: f64| -> f64 {
        let mut full = Complex64::new(0.0, 0.0);
        let mut diag = 0.0;
        for (c, &l) in state.coeffs().iter().zip(state.labels()) {
            let u = basis.mode_function(l, x);
            full += c * u;
            diag += c.norm_sqr() * u.norm_sqr();
        }
        if diag > 0.0 {
            full.norm_sqr() / diag
        } else {
            1.0
        }
    };
    let grid = scan_points(basis);
    let (mut best_i, mut best) = (0usize, f64::INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let r = ratio(x);
        if r.is_finite() && r < best {
            best = r;
            best_i = i;
        }
    }
    // golden-section refinement around the grid minimum
    let mut lo = grid[best_i.saturating_sub(1)];
    let mut hi = grid[(best_i + 1).min(grid.len() - 1)];
    const PHI: f64 = 0.618_033_988_749_894_9;
    for _ in 0..80 {
        let m1 = hi - PHI * (hi - lo);
        let m2 = lo + PHI * (hi - lo);
        if ratio(m1) < ratio(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let refined = best.min(ratio(0.5 * (lo + hi)));
    if refined < DEGENERACY_FLOOR {
        return Err(SphereError::DegenerateState);
    }
    Ok(())
}

fn integrate_overlap(
    basis: &EvolvedBasis,
    f: impl Fn(f64) -> Complex64,
    spec: &QuadratureSpec,
) -> Result<quad::Estimate<Complex64>, SphereError> {
    let est = match (spec.scheme, basis.system) {
        (Scheme::GaussHermite, System::HarmonicOscillator { .. }) => {
            quad::gauss_hermite(f, basis.envelope().unwrap(), spec)?
        }
        (Scheme::PeriodicTrapezoid, System::FreeParticleCircle { .. }) => {
            quad::periodic_trapezoid(f, TWO_PI, spec)?
        }
        (Scheme::AdaptiveInterval, _) => {
            quad::integrate(f, &basis.domain(), basis.envelope(), spec)?
        }
        _ => return Err(SphereError::Quadrature(QuadError::DomainMismatch)),
    };
    Ok(est)
}

/// Default quadrature for a basis: adaptive subdivision on the line (the
/// `1/P` integrands are rational in the mode functions, so fixed spectral
/// rules lose their advantage), trapezoid on the circle.
pub fn default_spec(basis: &EvolvedBasis) -> QuadratureSpec {
    match basis.system {
        System::HarmonicOscillator { .. } => QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            ..QuadratureSpec::adaptive()
        },
        System::FreeParticleCircle { .. } => QuadratureSpec::periodic(),
    }
}

/// The quadruple-indexed metric integral
/// `A^{kp}_{mn} = int I_km(x) I_pn(x) / P(x) dx` over the basis domain.
pub fn a_integral(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    indices: (i64, i64, i64, i64),
    spec: &QuadratureSpec,
) -> Result<quad::Estimate<Complex64>, SphereError> {
    check_degenerate(basis, state)?;
    a_integral_unchecked(basis, state, indices, spec)
}

fn a_integral_unchecked(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    indices: (i64, i64, i64, i64),
    spec: &QuadratureSpec,
) -> Result<quad::Estimate<Complex64>, SphereError> {
    let (k, p, m, n) = indices;
    for idx in [k, p, m, n] {
        basis.check_mode(idx)?;
    }
    let f = |x: f64| {
        let pr = probability_unchecked(basis, state, x).max(1e-300);
        let ikm = basis.mode_function(k, x).conj() * basis.mode_function(m, x);
        let ipn = basis.mode_function(p, x).conj() * basis.mode_function(n, x);
        ikm * ipn / pr
    };
    integrate_overlap(basis, f, spec)
}

/// Complex metric blocks on the amplitude sphere: the holomorphic block
/// `g_mn` (symmetric) and the mixed block `g_{m-bar n}` (Hermitian).
#[derive(Debug, Clone)]
pub struct SphereMetric {
    pub holomorphic: DMatrix<Complex64>,
    pub mixed: DMatrix<Complex64>,
}

impl SphereMetric {
    /// Real line element on a tangent `dc`:
    /// `ds^2 = sum g_mn dc_m dc_n + c.c. + sum g_{m-bar n} dc*_m dc_n`.
    pub fn line_element(&self, dc: &[Complex64]) -> Complex64 {
        let n = dc.len();
        let mut holo = Complex64::new(0.0, 0.0);
        let mut mixed = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                holo += self.holomorphic[(i, j)] * dc[i] * dc[j];
                mixed += self.mixed[(i, j)] * dc[i].conj() * dc[j];
            }
        }
        holo + holo.conj() + mixed
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mixed - self.mixed.adjoint()).norm()
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.holomorphic - self.holomorphic.transpose()).norm()
    }
}

/// Assemble the sphere metric blocks from the `A` integrals:
/// `g_mn = sum_{k,p} c*_k c*_p A^{kp}_{mn}` and
/// `g_{m-bar n} = -delta_mn + sum_{k,p} c_k c*_p A^{mp}_{kn}`.
pub fn sphere_metric(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    spec: &QuadratureSpec,
) -> Result<SphereMetric, SphereError> {
    check_degenerate(basis, state)?;
    let nn = state.dim();
    let labels = state.labels();
    let c = state.coeffs();

    // cache A^{kp}_{mn} by label tuple, using A^{kp}_{mn} = A^{pk}_{nm}
    let mut cache: std::collections::HashMap<(i64, i64, i64, i64), Complex64> =
        std::collections::HashMap::new();
    let mut a_of = |k: i64, p: i64, m: i64, n: i64| -> Result<Complex64, SphereError> {
        let key = (k, p, m, n).min((p, k, n, m));
        if let Some(v) = cache.get(&key) {
            return Ok(*v);
        }
        let est = a_integral_unchecked(basis, state, key, spec)?;
        cache.insert(key, est.value);
        Ok(est.value)
    };

    let mut holomorphic = DMatrix::<Complex64>::zeros(nn, nn);
    let mut mixed = DMatrix::<Complex64>::zeros(nn, nn);
    for mi in 0..nn {
        for ni in 0..nn {
            let (lm, ln) = (labels[mi], labels[ni]);
            let mut g_h = Complex64::new(0.0, 0.0);
            let mut g_m = if lm == ln {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for ki in 0..nn {
                for pi in 0..nn {
                    let (lk, lp) = (labels[ki], labels[pi]);
                    g_h += c[ki].conj() * c[pi].conj() * a_of(lk, lp, lm, ln)?;
                    g_m += c[ki] * c[pi].conj() * a_of(lm, lp, lk, ln)?;
                }
            }
            holomorphic[(mi, ni)] = g_h;
            mixed[(mi, ni)] = g_m;
        }
    }
    Ok(SphereMetric { holomorphic, mixed })
}

/// Definitional oracle: the same blocks computed as
/// `-int P d^2(ln P)/dc dc dx` with the Wirtinger second derivatives taken by
/// central finite differences in the real and imaginary parts of `c`.
pub fn sphere_metric_fd(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    spec: &QuadratureSpec,
    step: f64,
) -> Result<SphereMetric, SphereError> {
    check_degenerate(basis, state)?;
    let nn = state.dim();
    let labels = state.labels().to_vec();
    let base = state.coeffs().to_vec();

    // ln P for arbitrary (unnormalized) coefficient vectors
    let ln_p = |coeffs: &[Complex64], x: f64| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, &l) in coeffs.iter().zip(&labels) {
            acc += c * basis.mode_function(l, x);
        }
        acc.norm_sqr().max(1e-300).ln()
    };

    // real Hessian of ln P at fixed x: coordinates are (re c_0, im c_0, ...)
    let real_hessian = |x: f64, i: usize, j: usize| -> f64 {
        let perturb = |di: f64, dj: f64| -> f64 {
            let mut c = base.clone();
            let (qi, ri) = (i / 2, i % 2);
            let (qj, rj) = (j / 2, j % 2);
            let bump = |c: &mut Vec<Complex64>, q: usize, r: usize, d: f64| {
                if r == 0 {
                    c[q] += Complex64::new(d, 0.0);
                } else {
                    c[q] += Complex64::new(0.0, d);
                }
            };
            bump(&mut c, qi, ri, di);
            bump(&mut c, qj, rj, dj);
            ln_p(&c, x)
        };
        if i == j {
            (perturb(step, 0.0) - 2.0 * perturb(0.0, 0.0) + perturb(-step, 0.0)) / (step * step)
        } else {
            (perturb(step, step) - perturb(step, -step) - perturb(-step, step)
                + perturb(-step, -step))
                / (4.0 * step * step)
        }
    };

    let mut holomorphic = DMatrix::<Complex64>::zeros(nn, nn);
    let mut mixed = DMatrix::<Complex64>::zeros(nn, nn);
    for mi in 0..nn {
        for ni in 0..nn {
            let (am, bm) = (2 * mi, 2 * mi + 1);
            let (an, bn) = (2 * ni, 2 * ni + 1);
            // holomorphic: d2/dc_m dc_n = (L_aa - i L_ab - i L_ba - L_bb)/4
            let f_h = |x: f64| {
                let p = probability_unchecked(basis, state, x);
                let l_aa = real_hessian(x, am, an);
                let l_ab = real_hessian(x, am, bn);
                let l_ba = real_hessian(x, bm, an);
                let l_bb = real_hessian(x, bm, bn);
                let d2 = Complex64::new(l_aa - l_bb, -(l_ab + l_ba)) * 0.25;
                -p * d2
            };
            holomorphic[(mi, ni)] = integrate_overlap(basis, f_h, spec)?.value;
            // mixed: d2/dc*_m dc_n = (L_aa + L_bb - i L_ab + i L_ba)/4
            let f_m = |x: f64| {
                let p = probability_unchecked(basis, state, x);
                let l_aa = real_hessian(x, am, an);
                let l_ab = real_hessian(x, am, bn);
                let l_ba = real_hessian(x, bm, an);
                let l_bb = real_hessian(x, bm, bn);
                let d2 = Complex64::new(l_aa + l_bb, l_ba - l_ab) * 0.25;
                -p * d2
            };
            mixed[(mi, ni)] = integrate_overlap(basis, f_m, spec)?.value;
        }
    }
    Ok(SphereMetric { holomorphic, mixed })
}

// ---------------------------------------------------------------------------
// Oscillator propagator machinery (diagonal compatibility mode)
// ---------------------------------------------------------------------------

/// Harmonic-oscillator propagator `K(x, t; y, 0)`.
pub fn oscillator_propagator(
    basis: &EvolvedBasis,
    x: f64,
    y: f64,
) -> Result<Complex64, SphereError> {
    let System::HarmonicOscillator { omega, .. } = basis.system else {
        return Err(SphereError::UnsupportedSystem);
    };
    let lambda = basis.lambda().unwrap();
    let s = (omega * basis.time).sin();
    if s.abs() < CAUSTIC_FLOOR {
        return Err(SphereError::PropagatorCaustic);
    }
    let cot = (omega * basis.time).cos() / s;
    let l2 = lambda * lambda;
    // lambda / sqrt(2 pi i s): principal branch
    let denom = (Complex64::new(0.0, TWO_PI * s)).sqrt();
    let phase = Complex64::new(0.0, 0.5 * l2 * (x * x + y * y) * cot - l2 * x * y / s);
    Ok(lambda / denom * phase.exp())
}

/// Inner node count for the shifted-Gaussian Hermite integral: the phase rate
/// grows like `sqrt(2) lambda |x| / sin(w t)`, so the rule is widened with the
/// evaluation point. Rounded up to multiples of 128 to bound the rule cache.
fn overlap_node_count(base: usize, lambda_x: f64, s: f64) -> usize {
    let rate = std::f64::consts::SQRT_2 * lambda_x.abs() / s.abs();
    let need = (2.2 * rate * rate) as usize + base.max(64);
    need.min(3200).div_ceil(128) * 128
}

/// The per-mode overlap `I_n(x)` of the diagonal compatibility mode, computed
/// by Gauss-Hermite quadrature of the shifted-Gaussian Hermite integral after
/// factoring the `exp(-lambda^2 y^2 / 2)` envelope. All exponents combine so
/// that every summand has modulus `mod_w_i |H_n| exp(-u_i^2)`; no large real
/// exponentials appear at any `x`.
pub fn mode_overlap(
    basis: &EvolvedBasis,
    n: usize,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, SphereError> {
    let System::HarmonicOscillator { omega, .. } = basis.system else {
        return Err(SphereError::UnsupportedSystem);
    };
    if n > MAX_EIGENSTATE_INDEX {
        return Err(SphereError::IndexTooLarge(n as i64));
    }
    let wt = omega * basis.time;
    let s = wt.sin();
    if s.abs() < CAUSTIC_FLOOR {
        return Err(SphereError::PropagatorCaustic);
    }
    let lambda = basis.lambda().unwrap();
    let l2 = lambda * lambda;
    let eiwt = Complex64::from_polar(1.0, wt);
    let emiwt = Complex64::from_polar(1.0, -wt);
    let i_unit = Complex64::new(0.0, 1.0);

    let mut norm = (l2 / std::f64::consts::PI).powf(0.25);
    for k in 1..=n {
        norm /= (2.0 * k as f64).sqrt();
    }

    // prefactor exponent: -i lambda^2 x^2 e^{-i w t} / (2 s)
    let e_pre = -i_unit * l2 * x * x * emiwt / (2.0 * s);
    let count = overlap_node_count(spec.node_count, lambda * x, s);
    let rule = quad::gauss_hermite_rule(count);
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, mw) in rule.nodes.iter().zip(rule.mod_weights.iter()) {
        let y = sqrt2 * u / lambda;
        let shift = Complex64::new(y, 0.0) - x * emiwt;
        // the combined exponent has real part exactly -u^2
        let e_y = i_unit * l2 * eiwt * shift * shift / (2.0 * s);
        acc += mw * hermite(n, sqrt2 * u) * (e_pre + e_y).exp();
    }
    Ok(norm * sqrt2 / lambda * acc)
}

/// Where to stop trusting (and needing) the overlap integrand: the density
/// carries `exp(-lambda^2 x^2) H_n^2`, negligible past the classical turning
/// point plus a few widths.
fn overlap_cut(n: usize) -> f64 {
    ((2 * n + 1) as f64).sqrt() + 4.5
}

fn gh_trimmed(f: &impl Fn(f64) -> f64, env: Envelope, count: usize, u_cut: f64) -> f64 {
    let rule = quad::gauss_hermite_rule(count);
    let mut acc = 0.0;
    for (u, mw) in rule.nodes.iter().zip(rule.mod_weights.iter()) {
        if u.abs() > u_cut {
            continue;
        }
        let v = f(env.center + env.width * u);
        if v.is_finite() {
            acc += mw * v;
        }
    }
    acc * env.width
}

/// `int |I_n(x)|^2 dx` by Gauss-Hermite quadrature; the closed form is
/// `(2 pi / lambda^2) sin(omega t)`. Outer nodes beyond the turning-point cut
/// are dropped: the true integrand is below `1e-9` of its peak there and the
/// oscillatory inner integral would otherwise demand ever larger rules.
pub fn mode_overlap_norm(
    basis: &EvolvedBasis,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<quad::Estimate<f64>, SphereError> {
    let env = basis.envelope().ok_or(SphereError::UnsupportedSystem)?;
    // probe for caustics and bad indices before integrating
    mode_overlap(basis, n, 0.0, spec)?;
    let f = |x: f64| {
        mode_overlap(basis, n, x, spec)
            .map(|v| v.norm_sqr())
            .unwrap_or(f64::NAN)
    };
    let cut = overlap_cut(n);
    let full = gh_trimmed(&f, env, spec.node_count.max(64), cut);
    let half = gh_trimmed(&f, env, (spec.node_count / 2).max(32), cut);
    Ok(quad::Estimate {
        value: full,
        abs_error: (full - half).abs(),
    })
}

/// Closed form `(2 pi / lambda^2) sin(omega t)` for the mode overlap norm.
pub fn mode_overlap_norm_closed(basis: &EvolvedBasis) -> Result<f64, SphereError> {
    let System::HarmonicOscillator { omega, .. } = basis.system else {
        return Err(SphereError::UnsupportedSystem);
    };
    let lambda = basis.lambda().unwrap();
    Ok(TWO_PI / (lambda * lambda) * (omega * basis.time).sin())
}

/// Diagonal-mode metric in the propagator normalization:
/// `g_mn = -delta_mn (4 pi / lambda^2) sin(w t)
///         + 4 c_m c_n int |I_m|^2 |I_n|^2 / P dx`,
/// with `P = (lambda^2 / (2 pi sin wt)) sum |c_j|^2 |I_j|^2`. The coefficient
/// product is unconjugated, exactly as the compatibility mode prescribes.
pub fn paper_diagonal_metric(
    basis: &EvolvedBasis,
    state: &AmplitudeState,
    spec: &QuadratureSpec,
) -> Result<DMatrix<Complex64>, SphereError> {
    let System::HarmonicOscillator { omega, .. } = basis.system else {
        return Err(SphereError::UnsupportedSystem);
    };
    basis.validate_state(state)?;
    let wt = omega * basis.time;
    let s = wt.sin();
    if s.abs() < CAUSTIC_FLOOR {
        return Err(SphereError::PropagatorCaustic);
    }
    let lambda = basis.lambda().unwrap();
    let l2 = lambda * lambda;
    let nn = state.dim();
    let labels = state.labels();
    let c = state.coeffs();

    // |I_j|^2 cached on the outer Gauss-Hermite nodes, trimmed past the
    // largest occupied mode's turning-point cut
    let env = basis.envelope().unwrap();
    let max_label = labels.iter().copied().max().unwrap_or(0).max(0) as usize;
    let cut = overlap_cut(max_label);
    let rule = quad::gauss_hermite_rule(spec.node_count.max(64));
    let mut xs = Vec::new();
    let mut wts = Vec::new();
    for (u, mw) in rule.nodes.iter().zip(rule.mod_weights.iter()) {
        if u.abs() <= cut {
            xs.push(env.center + env.width * u);
            wts.push(mw * env.width);
        }
    }
    let mut overlap_sq = vec![vec![0.0f64; xs.len()]; nn];
    for (ji, &l) in labels.iter().enumerate() {
        for (xi, &x) in xs.iter().enumerate() {
            overlap_sq[ji][xi] = mode_overlap(basis, l as usize, x, spec)?.norm_sqr();
        }
    }
    let p_conv: Vec<f64> = (0..xs.len())
        .map(|xi| {
            let sum: f64 = (0..nn).map(|ji| c[ji].norm_sqr() * overlap_sq[ji][xi]).sum();
            (l2 / (TWO_PI * s) * sum).max(1e-300)
        })
        .collect();

    let mut g = DMatrix::<Complex64>::zeros(nn, nn);
    for mi in 0..nn {
        for ni in mi..nn {
            let mut integral = 0.0;
            for xi in 0..xs.len() {
                integral += wts[xi] * overlap_sq[mi][xi] * overlap_sq[ni][xi] / p_conv[xi];
            }
            let mut val = 4.0 * c[mi] * c[ni] * integral;
            if labels[mi] == labels[ni] {
                val -= 2.0 * TWO_PI / l2 * s;
            }
            g[(mi, ni)] = val;
            g[(ni, mi)] = val;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn consts() -> Constants {
        Constants::natural()
    }

    fn rand_state(rng: &mut impl Rng, n: usize) -> AmplitudeState {
        let coeffs: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        AmplitudeState::normalized(coeffs).unwrap()
    }

    #[test]
    fn state_normalization_enforced() {
        let bad = AmplitudeState::new(vec![Complex64::new(0.5, 0.0); 2]);
        assert!(matches!(bad, Err(SphereError::InvalidState(_))));
        let ok = AmplitudeState::normalized(vec![Complex64::new(0.5, 0.0); 2]).unwrap();
        let norm2: f64 = ok.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((norm2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn free_particle_diagonal_overlap() {
        let basis = EvolvedBasis::free_particle(1.0, 0.8, 4, consts());
        for k in [-2i64, 0, 3] {
            for x in [0.0, 1.3, 5.0] {
                let v = basis.overlap_density(k, k, x).unwrap();
                assert!((v - Complex64::new(1.0 / TWO_PI, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn free_particle_off_diagonal_at_t0() {
        let basis = EvolvedBasis::free_particle(1.0, 0.0, 4, consts());
        let v = basis.overlap_density(1, 0, PI / 2.0).unwrap();
        let expect = Complex64::new(0.0, 1.0) / TWO_PI;
        assert!((v - expect).norm() < 1e-15, "got {v}");
    }

    #[test]
    fn oscillator_diagonal_overlap_is_stationary_density() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.55, 4, consts());
        let v = basis.overlap_density(0, 0, 0.0).unwrap();
        assert!((v.re - 1.0 / PI.sqrt()).abs() < 1e-13);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn oscillator_overlap_matches_propagator_double_quadrature() {
        // I_00(0) recomputed from the raw propagator sandwich at t = 0.7:
        // it factorizes into |int K(0, t; y, 0) psi_0(y) dy|^2
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.7, 4, consts());
        let rule = quad::gauss_hermite_rule(200);
        let lambda = basis.lambda().unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        // psi_0(y) = (l^2/pi)^{1/4} exp(-l^2 y^2/2); fold the Gaussian decay
        // into the GH weight via y = sqrt(2) u / lambda
        let norm = (lambda * lambda / PI).powf(0.25);
        for (u, w) in rule.nodes.iter().zip(rule.mod_weights.iter()) {
            let y = std::f64::consts::SQRT_2 * u / lambda;
            let k = oscillator_propagator(&basis, 0.0, y).unwrap();
            acc += w * k * norm * (-0.5 * lambda * lambda * y * y).exp();
        }
        acc *= std::f64::consts::SQRT_2 / lambda;
        let direct = basis.overlap_density(0, 0, 0.0).unwrap();
        assert!(
            (acc.norm_sqr() - direct.re).abs() < 1e-6,
            "sandwich {} vs direct {}",
            acc.norm_sqr(),
            direct.re
        );
    }

    #[test]
    fn overlap_hermiticity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        let bases = [
            EvolvedBasis::oscillator(1.2, 0.8, 0.6, 6, consts()),
            EvolvedBasis::free_particle(0.7, 1.1, 5, consts()),
        ];
        for basis in &bases {
            for _ in 0..20 {
                let m = rng.gen_range(0..5) as i64;
                let n = rng.gen_range(0..5) as i64;
                let x = rng.gen_range(-2.0..2.0);
                let a = basis.overlap_density(m, n, x).unwrap();
                let b = basis.overlap_density(n, m, x).unwrap();
                assert!((a - b.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn overlap_orthonormality() {
        let spec_ho = QuadratureSpec::gauss_hermite(200);
        let basis = EvolvedBasis::oscillator(1.0, 1.3, 0.45, 9, consts());
        for m in 0..=8i64 {
            for n in 0..=8i64 {
                let est = quad::gauss_hermite(
                    |x| basis.overlap_density(m, n, x).unwrap(),
                    basis.envelope().unwrap(),
                    &spec_ho,
                )
                .unwrap();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (est.value - Complex64::new(expect, 0.0)).norm() < 1e-8,
                    "m={m} n={n} got {}",
                    est.value
                );
            }
        }
        let basis = EvolvedBasis::free_particle(1.0, 0.9, 3, consts());
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                let est = quad::periodic_trapezoid(
                    |x| basis.overlap_density(m, n, x).unwrap(),
                    TWO_PI,
                    &QuadratureSpec::periodic(),
                )
                .unwrap();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((est.value - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_probability_is_stationary() {
        let state = AmplitudeState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        for t in [0.3, 0.9] {
            let basis = EvolvedBasis::oscillator(1.0, 1.0, t, 4, consts());
            let p = probability(&basis, &state, 0.7).unwrap();
            let psi2 = basis.overlap_density(0, 0, 0.7).unwrap().re;
            assert!((p - psi2).abs() < 1e-14);
        }
        let p03 = {
            let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.3, 4, consts());
            probability(&basis, &state, 0.7).unwrap()
        };
        let p09 = {
            let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.9, 4, consts());
            probability(&basis, &state, 0.7).unwrap()
        };
        assert!((p03 - p09).abs() < 1e-9);
    }

    #[test]
    fn free_two_mode_probability_closed_form() {
        let basis = EvolvedBasis::free_particle(1.0, 0.0, 2, consts());
        let state = AmplitudeState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        for x in [0.0, 0.7, 2.5, 4.4] {
            let p = probability(&basis, &state, x).unwrap();
            let expect = (1.0 + x.cos()) / TWO_PI;
            assert!((p - expect).abs() < 1e-14, "x={x} got {p}");
        }
    }

    #[test]
    fn probability_normalizes_for_random_states() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(77);
        for _ in 0..10 {
            let basis = EvolvedBasis::oscillator(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.1..1.2),
                6,
                consts(),
            );
            let state = rand_state(&mut rng, 4);
            let est = quad::gauss_hermite(
                |x| probability_unchecked(&basis, &state, x),
                basis.envelope().unwrap(),
                &QuadratureSpec::gauss_hermite(200),
            )
            .unwrap();
            assert!((est.value - 1.0).abs() < 1e-8, "got {}", est.value);
        }
        for _ in 0..10 {
            let basis = EvolvedBasis::free_particle(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..2.0),
                3,
                consts(),
            );
            let state = rand_state(&mut rng, 3);
            let est = quad::periodic_trapezoid(
                |x| probability_unchecked(&basis, &state, x),
                TWO_PI,
                &QuadratureSpec::periodic(),
            )
            .unwrap();
            assert!((est.value - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn single_mode_a_integral_collapses_to_normalization() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.4, 2, consts());
        let state = AmplitudeState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let est = a_integral(&basis, &state, (0, 0, 0, 0), &default_spec(&basis)).unwrap();
        assert!((est.value - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn degenerate_free_state_is_flagged() {
        // equal-weight two-mode state at t = 0 has P ~ (1 + cos x), which
        // vanishes at x = pi; the 1/P integral diverges there
        let basis = EvolvedBasis::free_particle(1.0, 0.0, 2, consts());
        let state = AmplitudeState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let res = a_integral(&basis, &state, (0, 0, 0, 0), &default_spec(&basis));
        assert!(matches!(res, Err(SphereError::DegenerateState)));
    }

    #[test]
    fn a_integral_scheme_consistency() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.5, 2, consts());
        let state = AmplitudeState::new(vec![
            Complex64::new(0.9f64.sqrt(), 0.0),
            Complex64::new(0.1f64.sqrt(), 0.0),
        ])
        .unwrap();
        let gh = a_integral(&basis, &state, (0, 0, 0, 0), &QuadratureSpec::gauss_hermite(200))
            .unwrap();
        let adaptive = a_integral(
            &basis,
            &state,
            (0, 0, 0, 0),
            &QuadratureSpec {
                abs_tol: 1e-9,
                rel_tol: 1e-9,
                ..QuadratureSpec::adaptive()
            },
        )
        .unwrap();
        assert!(
            (gh.value - adaptive.value).norm() < 1e-7,
            "gh {} adaptive {}",
            gh.value,
            adaptive.value
        );
    }

    #[test]
    fn single_mode_sphere_metric_vanishes() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.4, 2, consts());
        let state = AmplitudeState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let g = sphere_metric(&basis, &state, &default_spec(&basis)).unwrap();
        assert!(g.mixed[(0, 0)].norm() < 1e-10, "got {}", g.mixed[(0, 0)]);
    }

    #[test]
    fn metric_blocks_have_the_right_symmetries() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.35, 4, consts());
        let state = rand_state(&mut rng, 3);
        let g = sphere_metric(&basis, &state, &default_spec(&basis)).unwrap();
        assert!(g.hermiticity_defect() < 1e-8, "{}", g.hermiticity_defect());
        assert!(g.symmetry_defect() < 1e-8, "{}", g.symmetry_defect());
    }

    #[test]
    fn line_element_is_real_on_random_tangents() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.35, 4, consts());
        let state = rand_state(&mut rng, 3);
        let g = sphere_metric(&basis, &state, &default_spec(&basis)).unwrap();
        for _ in 0..20 {
            let mut dc: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            // project onto the sphere tangent: sum Re(c*_n dc_n) = 0
            let overlap: f64 = state
                .coeffs()
                .iter()
                .zip(&dc)
                .map(|(c, d)| (c.conj() * d).re)
                .sum();
            for (d, c) in dc.iter_mut().zip(state.coeffs()) {
                *d -= c * overlap;
            }
            let ds2 = g.line_element(&dc);
            assert!(ds2.im.abs() < 1e-10, "imaginary part {}", ds2.im);
        }
    }

    #[test]
    fn assembly_matches_definition_by_finite_differences() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.4, 3, consts());
        let state = AmplitudeState::new(vec![
            Complex64::new(0.7f64.sqrt(), 0.0),
            Complex64::new(0.3f64.sqrt(), 0.0),
        ])
        .unwrap();
        let spec = default_spec(&basis);
        let g = sphere_metric(&basis, &state, &spec).unwrap();
        let fd = sphere_metric_fd(&basis, &state, &fd_spec(), 1e-4).unwrap();
        assert!(
            (&g.holomorphic - &fd.holomorphic).norm() < 1e-5,
            "holo {} vs fd {}",
            g.holomorphic,
            fd.holomorphic
        );
        assert!(
            (&g.mixed - &fd.mixed).norm() < 1e-5,
            "mixed {} vs fd {}",
            g.mixed,
            fd.mixed
        );
    }

    fn fd_spec() -> QuadratureSpec {
        // finite-difference integrands carry ~1e-8 pointwise noise
        QuadratureSpec {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            ..QuadratureSpec::adaptive()
        }
    }

    #[test]
    fn global_phase_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.5, 4, consts());
        let state = rand_state(&mut rng, 3);
        let alpha = 1.234;
        let rotated = state.phase_rotated(alpha);
        for x in [-1.0, 0.2, 1.7] {
            let p1 = probability(&basis, &state, x).unwrap();
            let p2 = probability(&basis, &rotated, x).unwrap();
            assert!((p1 - p2).abs() < 1e-14);
        }
        let spec = default_spec(&basis);
        let g1 = sphere_metric(&basis, &state, &spec).unwrap();
        let g2 = sphere_metric(&basis, &rotated, &spec).unwrap();
        let rot = Complex64::from_polar(1.0, alpha);
        for _ in 0..5 {
            let dc: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let dc_rot: Vec<Complex64> = dc.iter().map(|d| d * rot).collect();
            let a = g1.line_element(&dc).re;
            let b = g2.line_element(&dc_rot).re;
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn mode_overlap_norm_matches_closed_form() {
        for t in [0.3, 0.9] {
            let basis = EvolvedBasis::oscillator(1.0, 1.0, t, 4, consts());
            let closed = mode_overlap_norm_closed(&basis).unwrap();
            for n in 0..=2 {
                let est = mode_overlap_norm(&basis, n, &QuadratureSpec::gauss_hermite(200))
                    .unwrap();
                assert!(
                    ((est.value - closed) / closed).abs() < 1e-6,
                    "n={n} t={t}: {} vs {closed}",
                    est.value
                );
            }
        }
    }

    #[test]
    fn mode_overlap_reduces_to_eigenfunction_density() {
        // (lambda^2 / (2 pi sin wt)) |I_n(x)|^2 equals |psi_n(x)|^2
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.6, 4, consts());
        let spec = QuadratureSpec::gauss_hermite(200);
        let l2 = basis.lambda().unwrap().powi(2);
        let s = (0.6f64).sin();
        for n in 0..=3usize {
            for x in [0.0, 0.5, -1.2] {
                let i_n = mode_overlap(&basis, n, x, &spec).unwrap();
                let reduced = l2 / (TWO_PI * s) * i_n.norm_sqr();
                let psi2 = basis.overlap_density(n as i64, n as i64, x).unwrap().re;
                assert!(
                    (reduced - psi2).abs() < 1e-9,
                    "n={n} x={x}: {reduced} vs {psi2}"
                );
            }
        }
    }

    #[test]
    fn caustic_times_are_rejected() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.0, 4, consts());
        assert!(matches!(
            mode_overlap(&basis, 0, 0.0, &QuadratureSpec::gauss_hermite(64)),
            Err(SphereError::PropagatorCaustic)
        ));
        let state = AmplitudeState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            paper_diagonal_metric(&basis, &state, &QuadratureSpec::gauss_hermite(64)),
            Err(SphereError::PropagatorCaustic)
        ));
    }

    #[test]
    fn paper_diagonal_metric_diagonal_entry() {
        // single mode: P_conv = |psi_0|^2 and the integral collapses to
        // (2 pi s / l^2)^2 * int |psi_0|^2 = (2 pi s / l^2)^2, so
        // g_00 = -(4 pi/l^2) s + 4 (2 pi s/l^2)^2
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.5, 2, consts());
        let state = AmplitudeState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let g = paper_diagonal_metric(&basis, &state, &QuadratureSpec::gauss_hermite(200))
            .unwrap();
        let s = 0.5f64.sin();
        let l2 = 1.0;
        let expect = -2.0 * TWO_PI / l2 * s + 4.0 * (TWO_PI * s / l2).powi(2);
        assert!(
            (g[(0, 0)].re - expect).abs() < 1e-6,
            "got {} expect {expect}",
            g[(0, 0)]
        );
    }

    #[test]
    fn mode_bounds_are_enforced() {
        let basis = EvolvedBasis::oscillator(1.0, 1.0, 0.4, 4, consts());
        assert!(matches!(
            basis.overlap_density(-1, 0, 0.0),
            Err(SphereError::IndexTooLarge(-1))
        ));
        assert!(matches!(
            basis.overlap_density(4, 0, 0.0),
            Err(SphereError::IndexTooLarge(4))
        ));
    }
}
