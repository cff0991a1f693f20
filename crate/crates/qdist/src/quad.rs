//! Numerical quadrature: adaptive Gauss rules on finite intervals and the real
//! line, Gauss-Hermite rules for Gaussian-envelope integrands, and the
//! spectrally accurate trapezoid rule on periodic domains.
//!
//! Nodes and weights are generated by the Golub-Welsch algorithm (eigenvalues
//! of the Jacobi matrix of the orthogonal-polynomial recurrence) and cached per
//! node count, so no tabulated abscissae are embedded in the source.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Support of the integration variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// The whole real line.
    RealLine,
    /// A finite interval `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// A periodic interval `[0, length)`.
    Periodic { length: f64 },
}

/// Gaussian decay hint for real-line integrands: the integrand is assumed to
/// fall off like `exp(-((x - center)/width)^2)` away from `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    AdaptiveInterval,
    GaussHermite,
    PeriodicTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub node_count: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::AdaptiveInterval,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
            node_count: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn adaptive() -> Self {
        Self::default()
    }

    pub fn gauss_hermite(node_count: usize) -> Self {
        QuadratureSpec {
            scheme: Scheme::GaussHermite,
            node_count,
            ..Self::default()
        }
    }

    pub fn periodic() -> Self {
        QuadratureSpec {
            scheme: Scheme::PeriodicTrapezoid,
            node_count: 64,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.node_count >= 2) {
            return Err(QuadError::InvalidSpec);
        }
        Ok(())
    }

    fn tolerance(&self, value_norm: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value_norm)
    }
}

#[derive(Debug, Clone, Error)]
pub enum QuadError {
    #[error("quadrature did not converge: value {value}, estimated error {abs_error}")]
    NonConvergent { value: f64, abs_error: f64 },
    #[error("scheme is incompatible with the integration domain")]
    DomainMismatch,
    #[error("invalid quadrature specification")]
    InvalidSpec,
}

/// Integral value with an estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: f64,
}

/// Scalar types the quadrature kernels can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

// ---------------------------------------------------------------------------
// Golub-Welsch rule generation
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `weights[i] * exp(nodes[i]^2)`, computed in log space; only meaningful
    /// for Gauss-Hermite rules, where it lets integrands carry their own
    /// Gaussian decay without underflow in the weights.
    pub mod_weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RuleKind {
    Legendre,
    Hermite,
}

fn golub_welsch_legendre(n: usize) -> Rule {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let off = kf / (4.0 * kf * kf - 1.0).sqrt();
        jac[(k - 1, k)] = off;
        jac[(k, k - 1)] = off;
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], 2.0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        mod_weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Orthonormal Hermite polynomial pair `(p_n(u), p_{n-1}(u))` up to a common
/// positive scale, via the recurrence
/// `p_{k+1} = u sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}` with periodic
/// renormalization so large arguments never overflow. Signs and the Newton
/// ratio are scale-invariant, which is all root finding needs.
fn hermite_fn_pair(n: usize, u: f64) -> (f64, f64) {
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = u * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e130 {
            cur *= 1e-130;
            prev *= 1e-130;
        }
    }
    (cur, prev)
}

/// Christoffel-Darboux modified weight `w exp(u^2) = 1 / sum_{k<n} phi_k(u)^2`
/// over orthonormal Hermite functions, accumulated in a renormalized frame so
/// neither the Gaussian prefactor nor the polynomial growth can under- or
/// overflow.
fn hermite_mod_weight(n: usize, u: f64) -> f64 {
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    let mut ln_scale = 0.0f64;
    let mut sum = cur * cur;
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = u * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > 1e130 {
            cur *= 1e-130;
            prev *= 1e-130;
            sum *= 1e-260;
            ln_scale += 130.0 * std::f64::consts::LN_10;
        }
    }
    // sum of phi_k^2 = sum * exp(2 ln_scale - u^2)
    (u * u - 2.0 * ln_scale - sum.ln()).exp()
}

/// Gauss-Hermite rule: positive zeros of the Hermite function are bracketed
/// by a sign-change scan (step finer than the minimal zero spacing
/// `pi / sqrt(2n+1)`) and polished by safeguarded Newton. The modified
/// weights come from the Christoffel-Darboux identity
/// `w_i exp(u_i^2) = 1 / sum_{k<n} phi_k(u_i)^2`, which stays accurate at the
/// extreme nodes where the plain weights underflow.
fn hermite_rule(n: usize) -> Rule {
    assert!(n >= 2);
    let m = n / 2;
    let nf = n as f64;
    let turning = (2.0 * nf + 1.0).sqrt();
    let step = 1.0 / turning;
    let phi = |u: f64| hermite_fn_pair(n, u).0;

    let mut roots = Vec::with_capacity(m);
    let mut lo = if n % 2 == 1 { 0.5 * step } else { 1e-12 };
    let mut f_lo = phi(lo);
    let mut u = lo;
    while roots.len() < m && u < turning + 3.0 {
        u += step;
        let f_u = phi(u);
        if f_lo * f_u < 0.0 {
            // Newton from the midpoint, falling back to bisection
            let (mut a, mut b, mut fa) = (lo, u, f_lo);
            let mut z = 0.5 * (a + b);
            for _ in 0..100 {
                let (p, p_prev) = hermite_fn_pair(n, z);
                if p == 0.0 {
                    break;
                }
                if fa * p < 0.0 {
                    b = z;
                } else {
                    a = z;
                    fa = p;
                }
                let dp = -z * p + (2.0 * nf).sqrt() * p_prev;
                let newton = z - p / dp;
                let next = if newton > a && newton < b {
                    newton
                } else {
                    0.5 * (a + b)
                };
                let converged = (next - z).abs() <= 1e-15 * z.abs().max(1.0);
                z = next;
                if converged {
                    break;
                }
            }
            roots.push(z);
        }
        lo = u;
        f_lo = f_u;
    }
    assert_eq!(
        roots.len(),
        m,
        "found {} of {m} positive Hermite zeros at n = {n}",
        roots.len()
    );

    let mut nodes = Vec::with_capacity(n);
    for &r in roots.iter().rev() {
        nodes.push(-r);
    }
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    for &r in roots.iter() {
        nodes.push(r);
    }
    assert!(
        nodes.windows(2).all(|w| w[0] < w[1]),
        "Hermite nodes not separated at n = {n}"
    );

    let mut weights = Vec::with_capacity(n);
    let mut mod_weights = Vec::with_capacity(n);
    for &u in &nodes {
        let mod_w = hermite_mod_weight(n, u);
        mod_weights.push(mod_w);
        weights.push(mod_w * (-u * u).exp());
    }
    Rule {
        nodes,
        weights,
        mod_weights,
    }
}

fn golub_welsch(kind: RuleKind, n: usize) -> Rule {
    match kind {
        RuleKind::Legendre => golub_welsch_legendre(n),
        RuleKind::Hermite => hermite_rule(n),
    }
}

type RuleCache = Mutex<HashMap<(RuleKind, usize), Arc<Rule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_rule(kind: RuleKind, n: usize) -> Arc<Rule> {
    let mut cache = rule_cache().lock().unwrap();
    cache
        .entry((kind, n))
        .or_insert_with(|| Arc::new(golub_welsch(kind, n)))
        .clone()
}

/// Gauss-Hermite nodes and weights for `weight(x) = exp(-x^2)` on the line.
pub fn gauss_hermite_rule(n: usize) -> Arc<Rule> {
    cached_rule(RuleKind::Hermite, n)
}

fn legendre_rule(n: usize) -> Arc<Rule> {
    cached_rule(RuleKind::Legendre, n)
}

// ---------------------------------------------------------------------------
// Adaptive Gauss quadrature on finite intervals
// ---------------------------------------------------------------------------

const GAUSS_LO: usize = 15;
const GAUSS_HI: usize = 31;

fn gauss_segment<T: QuadValue>(f: &impl Fn(f64) -> T, lo: f64, hi: f64, n: usize) -> T {
    let rule = legendre_rule(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = T::zero();
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x);
        acc = acc.add(v.scale(*w));
    }
    acc.scale(half)
}

struct Segment<T> {
    lo: f64,
    hi: f64,
    value: T,
    error: f64,
}

fn eval_segment<T: QuadValue>(f: &impl Fn(f64) -> T, lo: f64, hi: f64) -> Segment<T> {
    let coarse = gauss_segment(f, lo, hi, GAUSS_LO);
    let fine = gauss_segment(f, lo, hi, GAUSS_HI);
    let mut error = fine.sub(coarse).norm();
    let mut value = fine;
    if !value.norm().is_finite() {
        value = T::zero();
        error = f64::INFINITY;
    }
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

/// Adaptive bisection with an embedded 15/31-node Gauss pair per segment.
pub fn adaptive<T: QuadValue>(
    f: impl Fn(f64) -> T,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>, QuadError> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::DomainMismatch);
    }
    let mut segments = vec![eval_segment(&f, lo, hi)];
    let mut splits = 0usize;
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        for s in &segments {
            total = total.add(s.value);
            err += s.error;
        }
        if err <= spec.tolerance(total.norm()) {
            return Ok(Estimate {
                value: total,
                abs_error: err,
            });
        }
        if splits >= spec.max_subdivisions {
            return Err(QuadError::NonConvergent {
                value: total.norm(),
                abs_error: err,
            });
        }
        // split the worst segment
        let (idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap())
            .unwrap();
        let seg = segments.swap_remove(idx);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // interval narrower than f64 resolution; keep as-is
            let mut kept = seg;
            kept.error = 0.0;
            segments.push(kept);
            continue;
        }
        segments.push(eval_segment(&f, seg.lo, mid));
        segments.push(eval_segment(&f, mid, seg.hi));
        splits += 1;
    }
}

/// Adaptive quadrature over the whole real line through the rational map
/// `x = center + width * t / (1 - t^2)` with `t` in `(-1, 1)`.
pub fn adaptive_real_line<T: QuadValue>(
    f: impl Fn(f64) -> T,
    envelope: Envelope,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>, QuadError> {
    let Envelope { center, width } = envelope;
    let w = if width > 0.0 && width.is_finite() {
        width
    } else {
        1.0
    };
    let g = move |t: f64| {
        let one_minus = 1.0 - t * t;
        let x = center + w * t / one_minus;
        let jac = w * (1.0 + t * t) / (one_minus * one_minus);
        let v = f(x);
        if v.norm().is_finite() && jac.is_finite() {
            v.scale(jac)
        } else {
            T::zero()
        }
    };
    adaptive(g, -1.0, 1.0, spec)
}

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature for Gaussian-envelope integrands
// ---------------------------------------------------------------------------

fn gh_sum<T: QuadValue>(f: &impl Fn(f64) -> T, envelope: Envelope, n: usize) -> T {
    let rule = gauss_hermite_rule(n);
    let mut acc = T::zero();
    for (u, mw) in rule.nodes.iter().zip(rule.mod_weights.iter()) {
        let v = f(envelope.center + envelope.width * u);
        if v.norm().is_finite() {
            acc = acc.add(v.scale(*mw));
        }
    }
    acc.scale(envelope.width)
}

/// Integrate `f` over the real line assuming it decays like
/// `exp(-((x - center)/width)^2)`; the error estimate compares the full rule
/// against the half-size rule.
pub fn gauss_hermite<T: QuadValue>(
    f: impl Fn(f64) -> T,
    envelope: Envelope,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>, QuadError> {
    spec.validate()?;
    if !(envelope.width > 0.0 && envelope.width.is_finite() && envelope.center.is_finite()) {
        return Err(QuadError::DomainMismatch);
    }
    let full = gh_sum(&f, envelope, spec.node_count);
    let half = gh_sum(&f, envelope, (spec.node_count / 2).max(2));
    let err = full.sub(half).norm();
    if err > spec.tolerance(full.norm()) {
        return Err(QuadError::NonConvergent {
            value: full.norm(),
            abs_error: err,
        });
    }
    Ok(Estimate {
        value: full,
        abs_error: err,
    })
}

// ---------------------------------------------------------------------------
// Periodic trapezoid rule
// ---------------------------------------------------------------------------

fn trapezoid_sum<T: QuadValue>(f: &impl Fn(f64) -> T, length: f64, n: usize) -> T {
    let h = length / n as f64;
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc.add(f(i as f64 * h));
    }
    acc.scale(h)
}

/// Trapezoid rule on `[0, length)` with node doubling until the change falls
/// below tolerance; spectrally accurate for smooth periodic integrands.
pub fn periodic_trapezoid<T: QuadValue>(
    f: impl Fn(f64) -> T,
    length: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>, QuadError> {
    spec.validate()?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(QuadError::DomainMismatch);
    }
    let mut n = spec.node_count.max(8);
    let mut prev = trapezoid_sum(&f, length, n);
    for _ in 0..24 {
        n *= 2;
        let cur = trapezoid_sum(&f, length, n);
        let err = cur.sub(prev).norm();
        if err <= spec.tolerance(cur.norm()) {
            return Ok(Estimate {
                value: cur,
                abs_error: err,
            });
        }
        prev = cur;
    }
    Err(QuadError::NonConvergent {
        value: prev.norm(),
        abs_error: f64::INFINITY,
    })
}

// ---------------------------------------------------------------------------
// Scheme dispatch
// ---------------------------------------------------------------------------

/// Integrate `f` over `domain` with the scheme requested by `spec`.
///
/// `envelope` supplies the Gaussian decay hint needed on the real line; when
/// absent, a unit envelope at the origin is assumed.
pub fn integrate<T: QuadValue>(
    f: impl Fn(f64) -> T,
    domain: &Domain,
    envelope: Option<Envelope>,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>, QuadError> {
    let env = envelope.unwrap_or(Envelope {
        center: 0.0,
        width: 1.0,
    });
    match (spec.scheme, domain) {
        (Scheme::AdaptiveInterval, Domain::Interval { lo, hi }) => adaptive(f, *lo, *hi, spec),
        (Scheme::AdaptiveInterval, Domain::RealLine) => adaptive_real_line(f, env, spec),
        (Scheme::AdaptiveInterval, Domain::Periodic { length }) => adaptive(f, 0.0, *length, spec),
        (Scheme::GaussHermite, Domain::RealLine) => gauss_hermite(f, env, spec),
        (Scheme::PeriodicTrapezoid, Domain::Periodic { length }) => {
            periodic_trapezoid(f, *length, spec)
        }
        _ => Err(QuadError::DomainMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_gaussian_normalizes() {
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let spec = QuadratureSpec::default();
        let est = adaptive_real_line(
            f,
            Envelope {
                center: 0.0,
                width: std::f64::consts::SQRT_2,
            },
            &spec,
        )
        .unwrap();
        assert!((est.value - 1.0).abs() < 1e-10, "got {}", est.value);

        let gh = gauss_hermite(
            f,
            Envelope {
                center: 0.0,
                width: std::f64::consts::SQRT_2,
            },
            &QuadratureSpec::gauss_hermite(200),
        )
        .unwrap();
        assert!((gh.value - 1.0).abs() < 1e-12, "got {}", gh.value);
    }

    #[test]
    fn circle_mode_orthogonality() {
        // (1/2pi) * int_0^{2pi} exp(i x (k - l)) dx = delta_kl for integer k, l
        let spec = QuadratureSpec::periodic();
        for (k, l, expect) in [(2i64, 2i64, 1.0), (3, 0, 0.0), (1, -2, 0.0)] {
            let f = move |x: f64| {
                Complex64::from_polar(1.0, x * (k - l) as f64) / (2.0 * PI)
            };
            let est = periodic_trapezoid(f, 2.0 * PI, &spec).unwrap();
            assert!(
                (est.value - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "k={k} l={l} got {}",
                est.value
            );
        }
    }

    #[test]
    fn oscillator_ground_state_second_moment() {
        // int p_0(x) x^2 dx for p_0 = (lambda/sqrt(pi)) exp(-lambda^2 x^2)
        // equals 1/(2 lambda^2); with m = omega = hbar = 1 this is 0.5.
        let lambda = 1.0f64;
        let f = move |x: f64| lambda / PI.sqrt() * (-lambda * lambda * x * x).exp() * x * x;
        let est = gauss_hermite(
            f,
            Envelope {
                center: 0.0,
                width: 1.0 / lambda,
            },
            &QuadratureSpec::gauss_hermite(200),
        )
        .unwrap();
        assert!((est.value - 0.5).abs() < 1e-12, "got {}", est.value);
    }

    #[test]
    fn finite_interval_polynomial_is_exact() {
        let est = adaptive(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, &QuadratureSpec::default())
            .unwrap();
        // antiderivative x^4/4 - x^2 + x
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((est.value - exact).abs() < 1e-12);
    }

    #[test]
    fn nonconvergent_singularity_is_flagged() {
        // 1/(1 + cos x) is non-integrable at x = pi
        let res = adaptive(|x: f64| 1.0 / (1.0 + x.cos()), 0.0, 2.0 * PI, &QuadratureSpec {
            max_subdivisions: 200,
            ..QuadratureSpec::default()
        });
        assert!(matches!(res, Err(QuadError::NonConvergent { .. })));
    }

    #[test]
    fn scheme_domain_mismatch() {
        let res = integrate(
            |x: f64| x,
            &Domain::Periodic { length: 1.0 },
            None,
            &QuadratureSpec::gauss_hermite(32),
        );
        assert!(matches!(res, Err(QuadError::DomainMismatch)));
    }

    #[test]
    fn hermite_rule_matches_moments() {
        // int exp(-x^2) x^{2k} dx = sqrt(pi) (2k-1)!! / 2^k
        let rule = gauss_hermite_rule(40);
        for (k, expect) in [
            (0usize, PI.sqrt()),
            (1, PI.sqrt() / 2.0),
            (2, 3.0 * PI.sqrt() / 4.0),
            (3, 15.0 * PI.sqrt() / 8.0),
        ] {
            let s: f64 = rule
                .nodes
                .iter()
                .zip(rule.weights.iter())
                .map(|(x, w)| w * x.powi(2 * k as i32))
                .sum();
            assert!((s - expect).abs() < 1e-12 * expect.max(1.0));
        }
    }
}
