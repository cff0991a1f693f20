//! Closed-form information geometry of the oscillator parameter manifold
//! `(mass, frequency)`: per-eigenstate metric coefficients, log-coordinate
//! diagonalization, the exact eta(n) diagonal entry, and the signature table
//! across eigenstate index n.
//!
//! Coefficients are evaluated in exact rational arithmetic for integer n so
//! signature classification never hinges on float noise near zero.

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::constants::Constants;
use crate::fisher_rao::MetricTensor;
use crate::geodesy::CausalClass;

#[derive(Debug, Clone, Error)]
pub enum ManifoldError {
    #[error("mass and frequency must be positive")]
    OutOfDomain,
    #[error("division by zero in a diagonalization coefficient")]
    DivisionByZero,
}

/// Exact fraction with i128 backing; coefficients here stay tiny.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i128,
    den: i128,
}

#[allow(clippy::should_implement_trait)]
impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let sign = if den < 0 { -1 } else { 1 };
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn mul(self, o: Rational) -> Rational {
        Rational::new(self.num * o.num, self.den * o.den)
    }

    pub fn div(self, o: Rational) -> Rational {
        assert!(o.num != 0, "division by zero rational");
        Rational::new(self.num * o.den, self.den * o.num)
    }

    pub fn sub(self, o: Rational) -> Rational {
        Rational::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b.max(1);
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// `a(n) = (1 - n^2 - n)/2`, the common diagonal coefficient.
pub fn coeff_a(n: u32) -> Rational {
    let n = n as i128;
    Rational::new(1 - n * n - n, 2)
}

/// `b(n) = (1 - n^2 + 3n)/2`, the cross-term coefficient.
pub fn coeff_b(n: u32) -> Rational {
    let n = n as i128;
    Rational::new(1 - n * n + 3 * n, 2)
}

/// `eta(n) = (1 - n^2 - 5n)(3 - 3n^2 + n) / (8 (1 - n^2 - n))`, the second
/// diagonal entry after the log-coordinate diagonalization.
pub fn eta_rational(n: u32) -> Rational {
    let ni = n as i128;
    let p1 = 1 - ni * ni - 5 * ni;
    let p2 = 3 - 3 * ni * ni + ni;
    let den = 1 - ni * ni - ni;
    assert!(den != 0, "degenerate diagonalization at n = {n}");
    Rational::new(p1 * p2, 8 * den)
}

/// Completed-square route to the same coefficient: `a - b^2/(4a)`.
pub fn eta_completed_square(n: u32) -> Rational {
    let a = coeff_a(n);
    let b = coeff_b(n);
    a.sub(b.mul(b).div(Rational::new(4, 1).mul(a)))
}

/// `eta(n)` as a float; the two exact routes are asserted equal.
pub fn eta(n: u32) -> f64 {
    let direct = eta_rational(n);
    let square = eta_completed_square(n);
    assert_eq!(direct, square, "eta routes disagree at n = {n}");
    direct.to_f64()
}

/// Reference scales `(m0, omega0)` with `m0 * omega0 = c^3 / G`; the split
/// puts the whole product on the frequency.
pub fn default_scales(constants: &Constants) -> (f64, f64) {
    (1.0, constants.c.powi(3) / constants.g)
}

/// Per-eigenstate closed-form metric data.
#[derive(Debug, Clone, Serialize)]
pub struct OscillatorMetric {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub eta: f64,
    pub reference_scales: (f64, f64),
}

impl OscillatorMetric {
    pub fn new(n: u32, reference_scales: (f64, f64)) -> Self {
        OscillatorMetric {
            n,
            a: coeff_a(n).to_f64(),
            b: coeff_b(n).to_f64(),
            eta: eta(n),
            reference_scales,
        }
    }
}

/// Closed-form metric components at `(mass, freq)`:
/// `[[a/m^2, b/(2 m w)], [b/(2 m w), a/w^2]]`.
pub fn ho_metric_closed(n: u32, mass: f64, freq: f64) -> Result<MetricTensor, ManifoldError> {
    if !(mass > 0.0 && freq > 0.0 && mass.is_finite() && freq.is_finite()) {
        return Err(ManifoldError::OutOfDomain);
    }
    let a = coeff_a(n).to_f64();
    let cross = coeff_b(n).to_f64() / (2.0 * mass * freq);
    let comps = DMatrix::from_row_slice(
        2,
        2,
        &[a / (mass * mass), cross, cross, a / (freq * freq)],
    );
    Ok(MetricTensor::from_components(vec![mass, freq], comps, 1.0))
}

/// Log coordinates `(U, V)` in which the eigenstate metric is the constant
/// `diag(a, eta)`:
/// `U = ln[(w/w0)(m/m0)^{b/(2a)}]`, `V = ln(m/m0)`.
pub fn uv_transform(
    n: u32,
    mass: f64,
    freq: f64,
    scales: (f64, f64),
) -> Result<(f64, f64), ManifoldError> {
    if !(mass > 0.0 && freq > 0.0 && scales.0 > 0.0 && scales.1 > 0.0) {
        return Err(ManifoldError::OutOfDomain);
    }
    let a = coeff_a(n);
    if a.is_zero() {
        return Err(ManifoldError::DivisionByZero);
    }
    let exponent = coeff_b(n).div(Rational::new(2, 1).mul(a)).to_f64();
    let u = (freq / scales.1).ln() + exponent * (mass / scales.0).ln();
    let v = (mass / scales.0).ln();
    Ok((u, v))
}

/// Jacobian `d(mass, freq)/d(U, V)` of the inverse transform at `(mass, freq)`.
pub fn uv_jacobian(n: u32, mass: f64, freq: f64) -> Result<DMatrix<f64>, ManifoldError> {
    let a = coeff_a(n);
    if a.is_zero() {
        return Err(ManifoldError::DivisionByZero);
    }
    let exponent = coeff_b(n).div(Rational::new(2, 1).mul(a)).to_f64();
    Ok(DMatrix::from_row_slice(
        2,
        2,
        &[0.0, mass, freq, -exponent * freq],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ManifoldClass {
    Riemannian,
    Lorentzian,
    NegativeDefinite,
}

impl ManifoldClass {
    pub fn label(self) -> &'static str {
        match self {
            ManifoldClass::Riemannian => "riemannian",
            ManifoldClass::Lorentzian => "lorentzian",
            ManifoldClass::NegativeDefinite => "negative-definite",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureRow {
    pub n: u32,
    pub a: f64,
    pub eta: f64,
    pub class: ManifoldClass,
}

/// Classify the diagonalized line element `a dU^2 + eta dV^2` for each
/// eigenstate index up to `n_max`, using the exact coefficients.
pub fn signature_report(n_max: u32) -> Vec<SignatureRow> {
    (0..=n_max)
        .map(|n| {
            let a = coeff_a(n);
            let e = eta_rational(n);
            let class = match (a.is_negative(), e.is_negative()) {
                (false, false) => ManifoldClass::Riemannian,
                (true, true) => ManifoldClass::NegativeDefinite,
                _ => ManifoldClass::Lorentzian,
            };
            SignatureRow {
                n,
                a: a.to_f64(),
                eta: e.to_f64(),
                class,
            }
        })
        .collect()
}

/// Distance between two oscillators in the same eigenstate: the `(U, V)`
/// metric is constant, so the geodesic is a straight segment and
/// `d^2 = a dU^2 + eta dV^2` evaluates in closed form. The magnitude
/// `sqrt(|d^2|)` is returned along with the causal class of the segment.
pub fn closed_distance(
    n: u32,
    from: (f64, f64),
    to: (f64, f64),
    scales: (f64, f64),
) -> Result<(f64, CausalClass), ManifoldError> {
    let (u1, v1) = uv_transform(n, from.0, from.1, scales)?;
    let (u2, v2) = uv_transform(n, to.0, to.1, scales)?;
    let du = u2 - u1;
    let dv = v2 - v1;
    let d2 = coeff_a(n).to_f64() * du * du + eta(n) * dv * dv;
    let scale = (du * du + dv * dv).max(1e-300);
    let class = if d2.abs() < 1e-12 * scale {
        CausalClass::Null
    } else if d2 > 0.0 {
        match signature_report(n).last().unwrap().class {
            ManifoldClass::Riemannian => CausalClass::Riemannian,
            _ => CausalClass::LorentzianSpacelike,
        }
    } else {
        CausalClass::LorentzianTimelike
    };
    Ok((d2.abs().sqrt(), class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::MetricField;
    use rand::{Rng, SeedableRng};

    #[test]
    fn closed_metric_at_ground_state() {
        let g = ho_metric_closed(0, 1.0, 1.0).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.5, 0.25, 0.25, 0.5]);
        assert!((g.components - expect).norm() < 1e-15);
    }

    #[test]
    fn closed_metric_first_excited() {
        let g = ho_metric_closed(1, 2.0, 1.0).unwrap();
        assert!((g.components[(0, 0)] + 0.125).abs() < 1e-15);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(ho_metric_closed(0, -1.0, 1.0).is_err());
        assert!(uv_transform(0, 1.0, 0.0, (1.0, 1.0)).is_err());
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta_rational(0), Rational::new(3, 8));
        assert_eq!(eta_rational(1), Rational::new(5, 8));
        assert_eq!(eta_rational(2), Rational::new(-91, 40));
        assert!((eta(2) + 2.275).abs() < 1e-15);
    }

    #[test]
    fn eta_identity_holds_exactly() {
        for n in 0..=20 {
            assert_eq!(eta_rational(n), eta_completed_square(n), "n={n}");
        }
    }

    #[test]
    fn uv_reference_point_is_origin() {
        let (u, v) = uv_transform(3, 1.0, 1.0, (1.0, 1.0)).unwrap();
        assert_eq!((u, v), (0.0, 0.0));
    }

    #[test]
    fn uv_ground_state_example() {
        // b/(2a) = 1/2 at n = 0, so mass = e^2 m0 at reference frequency
        // lands at U = 1, V = 2
        let e2 = std::f64::consts::E.powi(2);
        let (u, v) = uv_transform(0, e2, 1.0, (1.0, 1.0)).unwrap();
        assert!((u - 1.0).abs() < 1e-12 && (v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_congruence_diagonalizes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for n in 0..=6u32 {
            let expect = DMatrix::from_row_slice(
                2,
                2,
                &[coeff_a(n).to_f64(), 0.0, 0.0, eta(n)],
            );
            for _ in 0..10 {
                let mass = rng.gen_range(0.2..5.0);
                let freq = rng.gen_range(0.2..5.0);
                let g = ho_metric_closed(n, mass, freq).unwrap();
                let jac = uv_jacobian(n, mass, freq).unwrap();
                let pushed = jac.transpose() * &g.components * &jac;
                assert!(
                    (&pushed - &expect).norm() < 1e-10,
                    "n={n} mass={mass} freq={freq}: {pushed}"
                );
            }
        }
    }

    #[test]
    fn scale_invariance_in_uv() {
        // simultaneous rescaling (m, w) -> (s m, s w) shifts (U, V) but the
        // constant-diagonal metric makes segment lengths invariant
        let n = 1;
        let scales = (1.0, 1.0);
        let (d1, c1) = closed_distance(n, (1.0, 2.0), (3.0, 0.7), scales).unwrap();
        let s = 4.2;
        let (d2, c2) =
            closed_distance(n, (s * 1.0, s * 2.0), (s * 3.0, s * 0.7), scales).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
        assert_eq!(c1, c2);
    }

    #[test]
    fn signature_table() {
        let rows = signature_report(5);
        assert_eq!(rows[0].class, ManifoldClass::Riemannian);
        assert_eq!(rows[1].class, ManifoldClass::Lorentzian);
        for row in &rows[2..] {
            assert_eq!(row.class, ManifoldClass::NegativeDefinite, "n={}", row.n);
        }
        assert!((rows[5].a + 14.5).abs() < 1e-15);
        assert!(rows[5].eta < 0.0);
    }

    #[test]
    fn ground_state_distance_matches_shooting() {
        // n = 0 is Riemannian, so the closed segment distance must agree with
        // the shooting solver run on the closed-form metric field
        let n = 0u32;
        let scales = (1.0, 1.0);
        let field = MetricField::new(2, move |p| {
            ho_metric_closed(n, p[0], p[1]).unwrap().components
        });
        let from = (1.0, 1.0);
        let to = (1.6, 0.8);
        let (closed, class) = closed_distance(n, from, to, scales).unwrap();
        assert_eq!(class, CausalClass::Riemannian);
        let (shot, _) = crate::geodesy::shoot_distance(&field, &[from.0, from.1], &[to.0, to.1])
            .unwrap();
        assert!(
            ((closed - shot) / closed).abs() < 1e-6,
            "closed {closed} vs shooting {shot}"
        );
    }

    #[test]
    fn excited_segment_is_timelike() {
        // both diagonal coefficients negative for n >= 2
        let (d, class) = closed_distance(2, (1.0, 1.0), (2.0, 1.5), (1.0, 1.0)).unwrap();
        assert!(d > 0.0);
        assert_eq!(class, CausalClass::LorentzianTimelike);
    }

    #[test]
    fn planck_scale_default() {
        let (m0, w0) = default_scales(&Constants::natural());
        assert_eq!((m0, w0), (1.0, 1.0));
        let si = default_scales(&Constants::si());
        assert!((si.0 * si.1 - Constants::si().c.powi(3) / Constants::si().g).abs() < 1.0);
    }
}
