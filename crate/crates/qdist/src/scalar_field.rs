//! Thermal free scalar field in a box: closed-form entropy, energy, the
//! relative entropy between two temperatures, and the one-parameter geometry
//! it induces, with the closed-form distance between fixed-energy states
//! cross-checked by quadrature of the line element.
//!
//! Conventions follow the implemented entropy normalization, under which
//! `S(beta) = (4/3) k_B beta E(beta)` holds identically (ground-state energy
//! dropped); that identity is what every derived expression below relies on,
//! and it is asserted in the tests.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::Constants;
use crate::quad::{self, QuadratureSpec};

#[derive(Debug, Clone, Error)]
pub enum FieldError {
    #[error("volume and inverse temperatures must be positive")]
    OutOfDomain,
    #[error("quadrature failure: {0}")]
    Quadrature(#[from] quad::QuadError),
}

fn check_positive(values: &[f64]) -> Result<(), FieldError> {
    if values.iter().all(|v| *v > 0.0 && v.is_finite()) {
        Ok(())
    } else {
        Err(FieldError::OutOfDomain)
    }
}

/// Thermal entropy `S(beta) = 16 pi^5 k_B V / (45 (hbar c)^3 beta^3)`.
pub fn entropy(volume: f64, beta: f64, constants: &Constants) -> f64 {
    let hc = constants.hbar * constants.c;
    16.0 * PI.powi(5) * constants.k_b * volume / (45.0 * hc.powi(3) * beta * beta * beta)
}

/// Mean energy `E(beta) = 4 pi^5 V / (15 (hbar c)^3 beta^4)`, with the
/// (infinite) ground-state energy dropped: it cancels from every difference.
pub fn energy(volume: f64, beta: f64, constants: &Constants) -> f64 {
    let hc = constants.hbar * constants.c;
    4.0 * PI.powi(5) * volume / (15.0 * hc.powi(3) * beta.powi(4))
}

/// The dimensionless bracket `1 - 4 r^3 + 3 r^4` in its factored form
/// `(1 - r)^2 (3 r^2 + 2 r + 1)`, manifestly nonnegative and stable near
/// `r = 1`.
pub fn bracket(r: f64) -> f64 {
    let d = 1.0 - r;
    d * d * (3.0 * r * r + 2.0 * r + 1.0)
}

/// Relative entropy between thermal field states at inverse temperatures `b`
/// (the reference) and `beta`:
/// `S_rel = (4 pi^5 V k_B / (45 (hbar c)^3 beta^3)) [1 - 4(beta/b)^3 + 3(beta/b)^4]`.
pub fn rel_entropy(volume: f64, b: f64, beta: f64, constants: &Constants) -> Result<f64, FieldError> {
    check_positive(&[volume, b, beta])?;
    let hc = constants.hbar * constants.c;
    let prefactor =
        4.0 * PI.powi(5) * volume * constants.k_b / (45.0 * hc.powi(3) * beta.powi(3));
    Ok(prefactor * bracket(beta / b))
}

/// Leading small-gap coefficient: `S_rel(b, b + delta) ~ coeff * delta^2` with
/// `coeff = 6 * 4 pi^5 V k_B / (45 (hbar c)^3 b^5)`.
pub fn small_gap_coefficient(volume: f64, b: f64, constants: &Constants) -> f64 {
    let hc = constants.hbar * constants.c;
    6.0 * 4.0 * PI.powi(5) * volume * constants.k_b / (45.0 * hc.powi(3) * b.powi(5))
}

/// Coefficient `A = 8 pi^5 V k_B / (15 (hbar c)^3)` of the one-parameter
/// metric `dl^2 = A db^2 / b^5`.
pub fn metric_coefficient(volume: f64, constants: &Constants) -> f64 {
    let hc = constants.hbar * constants.c;
    8.0 * PI.powi(5) * volume * constants.k_b / (15.0 * hc.powi(3))
}

/// The same line element in energy form:
/// `dl^2 = (k_B / 8) [4 pi^5 V / (15 (hbar c)^3)]^{1/4} E^{-5/4} dE^2`;
/// returns the constant in front of `E^{-5/4} dE^2`.
pub fn energy_metric_coefficient(volume: f64, constants: &Constants) -> f64 {
    let hc = constants.hbar * constants.c;
    constants.k_b / 8.0 * (4.0 * PI.powi(5) * volume / (15.0 * hc.powi(3))).powf(0.25)
}

/// Closed-form distance between fixed-energy thermal field states:
/// `d = (1/3) sqrt(8 k_B) [4 pi^5 V / (15 (hbar c)^3)]^{1/8} (E2^{3/8} - E1^{3/8})`.
pub fn distance(e1: f64, e2: f64, volume: f64, constants: &Constants) -> Result<f64, FieldError> {
    check_positive(&[e1, e2, volume])?;
    if e2 < e1 {
        return Err(FieldError::OutOfDomain);
    }
    let hc = constants.hbar * constants.c;
    let factor = (8.0 * constants.k_b).sqrt() / 3.0
        * (4.0 * PI.powi(5) * volume / (15.0 * hc.powi(3))).powf(0.125);
    Ok(factor * (e2.powf(0.375) - e1.powf(0.375)))
}

/// The same distance by numerical quadrature of `sqrt(dl^2)` in the energy
/// coordinate; agrees with the closed form to the quadrature tolerance.
pub fn distance_by_quadrature(
    e1: f64,
    e2: f64,
    volume: f64,
    constants: &Constants,
    spec: &QuadratureSpec,
) -> Result<f64, FieldError> {
    check_positive(&[e1, e2, volume])?;
    if e2 < e1 {
        return Err(FieldError::OutOfDomain);
    }
    if e2 == e1 {
        return Ok(0.0);
    }
    let coeff = energy_metric_coefficient(volume, constants).sqrt();
    let est = quad::adaptive(|e: f64| coeff * e.powf(-0.625), e1, e2, spec)?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: Constants = Constants::natural();

    #[test]
    fn entropy_energy_ratio_identity() {
        // S = (4/3) k_B beta E for every (V, beta)
        for (v, beta) in [(1.0, 1.0), (2.5, 0.3), (0.2, 7.0)] {
            let s = entropy(v, beta, &NAT);
            let e = energy(v, beta, &NAT);
            assert!((s - 4.0 / 3.0 * beta * e).abs() < 1e-12 * s.abs());
        }
    }

    #[test]
    fn rel_entropy_vanishes_at_equal_temperatures() {
        assert_eq!(rel_entropy(1.0, 0.8, 0.8, &NAT).unwrap(), 0.0);
    }

    #[test]
    fn rel_entropy_is_nonnegative() {
        for b in [0.3, 1.0, 2.0] {
            for beta in [0.2, 0.5, 1.0, 3.0, 10.0] {
                let s = rel_entropy(1.0, b, beta, &NAT).unwrap();
                assert!(s >= 0.0, "b={b} beta={beta}: {s}");
            }
        }
    }

    #[test]
    fn rel_entropy_direct_arithmetic() {
        // V=1, b=1, beta=2: prefactor 4 pi^5/(45*8), bracket 1-32+48 = 17
        let s = rel_entropy(1.0, 1.0, 2.0, &NAT).unwrap();
        let expect = 4.0 * PI.powi(5) * 17.0 / 360.0;
        assert!((s - expect).abs() < 1e-12 * expect, "got {s} expect {expect}");
    }

    #[test]
    fn rel_entropy_from_thermal_identity() {
        // the closed form must equal S(beta) - S(b) + beta E(b) - beta E(beta)
        // (entropies in nats, i.e. divided by k_B)
        for (v, b, beta) in [(1.0, 1.0, 2.0), (0.7, 0.9, 0.4), (3.0, 2.0, 2.5)] {
            let direct = rel_entropy(v, b, beta, &NAT).unwrap();
            let assembled = entropy(v, beta, &NAT) - entropy(v, b, &NAT)
                + beta * (energy(v, b, &NAT) - energy(v, beta, &NAT));
            assert!(
                (direct - assembled).abs() < 1e-10 * direct.abs().max(1.0),
                "direct {direct} assembled {assembled}"
            );
        }
    }

    #[test]
    fn bracket_expansion_coefficients() {
        // bracket(1 + eps) = 6 eps^2 + 8 eps^3 + 3 eps^4 exactly
        for eps in [1e-2, -3e-2, 0.1] {
            let b = bracket(1.0 + eps);
            let series = 6.0 * eps * eps + 8.0 * eps.powi(3) + 3.0 * eps.powi(4);
            assert!((b - series).abs() < 1e-14, "eps={eps}: {b} vs {series}");
        }
        // next-order check: (bracket - 6 eps^2)/eps^2 -> 8 eps within 10%
        let eps = 1e-2;
        let r = (bracket(1.0 + eps) - 6.0 * eps * eps) / (eps * eps);
        assert!(((r - 8.0 * eps) / (8.0 * eps)).abs() < 0.1, "got {r}");
    }

    #[test]
    fn small_gap_limit() {
        let (v, b) = (1.0, 1.3);
        let delta = 1e-3 * b;
        let s = rel_entropy(v, b, b + delta, &NAT).unwrap();
        let lead = small_gap_coefficient(v, b, &NAT) * delta * delta;
        assert!(
            ((s - lead) / lead).abs() < 0.01,
            "s {s} vs leading {lead}"
        );
    }

    #[test]
    fn metric_coefficient_is_twice_the_gap_curvature() {
        // dl^2 = A db^2/b^5 must reproduce S_rel ~ (A/2)... the quadratic
        // coefficient 6C/b^5 equals A/b^5 with A = 8 pi^5 V k_B/(15 (hc)^3)
        let v = 2.0;
        let a = metric_coefficient(v, &NAT);
        let c6 = small_gap_coefficient(v, 1.0, &NAT);
        assert!((a - c6).abs() < 1e-12 * a);
    }

    #[test]
    fn distance_closed_form_vs_quadrature() {
        let spec = QuadratureSpec::default();
        for (e1, e2, v) in [(1.0, 2.0, 1.0), (0.3, 5.0, 0.5), (2.0, 2.0, 3.0)] {
            let closed = distance(e1, e2, v, &NAT).unwrap();
            let numeric = distance_by_quadrature(e1, e2, v, &NAT, &spec).unwrap();
            let scale = closed.abs().max(1e-30);
            assert!(
                (closed - numeric).abs() / scale < 1e-8 || closed == 0.0,
                "closed {closed} numeric {numeric}"
            );
        }
    }

    #[test]
    fn distance_is_additive() {
        let (e1, e2, e3, v) = (0.8, 1.7, 4.2, 1.0);
        let d13 = distance(e1, e3, v, &NAT).unwrap();
        let d12 = distance(e1, e2, v, &NAT).unwrap();
        let d23 = distance(e2, e3, v, &NAT).unwrap();
        assert!((d13 - (d12 + d23)).abs() < 1e-12);
    }

    #[test]
    fn domain_checks() {
        assert!(rel_entropy(-1.0, 1.0, 1.0, &NAT).is_err());
        assert!(distance(2.0, 1.0, 1.0, &NAT).is_err());
        assert!(distance(0.0, 1.0, 1.0, &NAT).is_err());
    }
}
