//! Geodesics on black-box metric fields: Christoffel symbols by central
//! differences, RK4 integration of the geodesic equation, two-point boundary
//! solves by damped Newton shooting, and path lengths with the causal
//! classification needed for indefinite metrics.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::fisher_rao::signature_of;

#[derive(Debug, Clone, Error)]
pub enum GeodesyError {
    #[error("metric is singular (non-invertible) at the requested point")]
    SingularMetric,
    #[error("geodesic left the regular domain near s = {s}")]
    BlowUp { s: f64 },
    #[error("shooting did not converge; best endpoint miss {miss}")]
    NoConvergence { miss: f64 },
}

type FieldEval = Box<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// A metric tensor field evaluated pointwise; derivatives are never required,
/// so quadrature-defined metrics plug in on the same footing as closed forms.
pub struct MetricField {
    pub dim: usize,
    eval: FieldEval,
    /// Floor used when deciding whether the metric is effectively singular.
    pub regularity_hint: f64,
}

impl MetricField {
    pub fn new(dim: usize, eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        MetricField {
            dim,
            eval: Box::new(eval),
            regularity_hint: 1e-12,
        }
    }

    pub fn eval(&self, point: &[f64]) -> DMatrix<f64> {
        (self.eval)(point)
    }

    pub fn euclidean(dim: usize) -> Self {
        MetricField::new(dim, move |_| DMatrix::identity(dim, dim))
    }

    /// Constant (position-independent) metric.
    pub fn constant(g: DMatrix<f64>) -> Self {
        let dim = g.nrows();
        MetricField::new(dim, move |_| g.clone())
    }

    /// `diag(1, 1) / x0^2` on the half-plane `x0 > 0`.
    pub fn poincare_half_plane() -> Self {
        MetricField::new(2, |p| {
            let s2 = p[0] * p[0];
            DMatrix::from_row_slice(2, 2, &[1.0 / s2, 0.0, 0.0, 1.0 / s2])
        })
    }

    /// Closed-form Gaussian Fisher-Rao metric `diag(2, 1) / scale^2` in
    /// `(scale, location)` coordinates.
    pub fn gaussian_fisher_rao() -> Self {
        MetricField::new(2, crate::fisher_rao::gaussian_metric_closed)
    }

    /// Metric field backed by quadrature over a parametric family.
    pub fn from_family(
        family: std::sync::Arc<crate::families::ParametricFamily>,
        k: f64,
        spec: crate::quad::QuadratureSpec,
    ) -> Self {
        let dim = family.dim_params;
        MetricField::new(dim, move |p| {
            crate::fisher_rao::fr_metric(&family, p, crate::fisher_rao::Form::Gradient, k, &spec)
                .map(|t| t.components)
                .unwrap_or_else(|_| DMatrix::from_element(dim, dim, f64::NAN))
        })
    }

    fn is_positive_definite(&self, point: &[f64]) -> bool {
        let sig = signature_of(&self.eval(point), 1e-10);
        sig.minus == 0 && sig.zero == 0
    }
}

/// Sign taxonomy of squared lengths along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausalClass {
    Riemannian,
    LorentzianTimelike,
    LorentzianSpacelike,
    Null,
    Mixed,
}

impl CausalClass {
    pub fn label(self) -> &'static str {
        match self {
            CausalClass::Riemannian => "riemannian",
            CausalClass::LorentzianTimelike => "lorentzian-timelike",
            CausalClass::LorentzianSpacelike => "lorentzian-spacelike",
            CausalClass::Null => "null",
            CausalClass::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathNode {
    pub s: f64,
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub nodes: Vec<PathNode>,
    /// Integrated `sqrt(|g(v, v)|)`; the causal class records the sign of the
    /// squared length, so indefinite results stay real.
    pub length: f64,
    pub signature_class: CausalClass,
}

impl GeodesicPath {
    pub fn endpoint(&self) -> &[f64] {
        &self.nodes.last().unwrap().point
    }
}

/// Christoffel symbols `Gamma[a][(b, c)]` at `point` by central differences of
/// the metric with per-coordinate step `h * max(|point_a|, 1)`.
pub fn christoffel(
    field: &MetricField,
    point: &[f64],
    step: Option<f64>,
) -> Result<Vec<DMatrix<f64>>, GeodesyError> {
    let d = field.dim;
    let h0 = step.unwrap_or(1e-5);
    let g = field.eval(point);
    let ginv = g
        .clone()
        .try_inverse()
        .filter(|m| m.iter().all(|v| v.is_finite()))
        .ok_or(GeodesyError::SingularMetric)?;

    // dg[c] = d g / d x_c
    let mut dg = Vec::with_capacity(d);
    for c in 0..d {
        let h = h0 * point[c].abs().max(1.0);
        let mut plus = point.to_vec();
        plus[c] += h;
        let mut minus = point.to_vec();
        minus[c] -= h;
        dg.push((field.eval(&plus) - field.eval(&minus)) / (2.0 * h));
    }

    let mut gamma = vec![DMatrix::<f64>::zeros(d, d); d];
    for a in 0..d {
        for b in 0..d {
            for c in b..d {
                let mut sum = 0.0;
                for e in 0..d {
                    sum += ginv[(a, e)] * (dg[b][(e, c)] + dg[c][(e, b)] - dg[e][(b, c)]);
                }
                let val = 0.5 * sum;
                gamma[a][(b, c)] = val;
                gamma[a][(c, b)] = val;
            }
        }
    }
    Ok(gamma)
}

fn acceleration(field: &MetricField, x: &[f64], v: &[f64]) -> Result<Vec<f64>, GeodesyError> {
    let gamma = christoffel(field, x, None)?;
    let d = field.dim;
    let mut acc = vec![0.0; d];
    for a in 0..d {
        let mut s = 0.0;
        for b in 0..d {
            for c in 0..d {
                s += gamma[a][(b, c)] * v[b] * v[c];
            }
        }
        acc[a] = -s;
    }
    Ok(acc)
}

fn classify(field: &MetricField, start: &[f64], speeds_sq: &[f64]) -> CausalClass {
    let scale = speeds_sq
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-300);
    let tol = 1e-10 * scale.max(1.0);
    let all_null = speeds_sq.iter().all(|&q| q.abs() < tol);
    if all_null {
        return CausalClass::Null;
    }
    let all_pos = speeds_sq.iter().all(|&q| q > -tol);
    let all_neg = speeds_sq.iter().all(|&q| q < tol);
    if all_pos {
        if field.is_positive_definite(start) {
            CausalClass::Riemannian
        } else {
            CausalClass::LorentzianSpacelike
        }
    } else if all_neg {
        CausalClass::LorentzianTimelike
    } else {
        CausalClass::Mixed
    }
}

fn quadratic_form(g: &DMatrix<f64>, v: &[f64]) -> f64 {
    let vd = DVector::from_column_slice(v);
    (vd.transpose() * g * &vd)[(0, 0)]
}

/// Composite Simpson over evenly spaced samples (odd count preferred; falls
/// back to a trapezoid step at the tail).
fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        total += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        total += 0.5 * h * (values[i] + values[i + 1]);
    }
    total
}

/// Integrate the geodesic equation from `(theta0, v0)` over `[0, s_max]` by
/// classical RK4 with `steps` uniform steps.
pub fn integrate_geodesic(
    field: &MetricField,
    theta0: &[f64],
    v0: &[f64],
    s_max: f64,
    steps: usize,
) -> Result<GeodesicPath, GeodesyError> {
    let d = field.dim;
    assert_eq!(theta0.len(), d);
    assert_eq!(v0.len(), d);
    let steps = steps.max(2);
    let h = s_max / steps as f64;

    let mut x = theta0.to_vec();
    let mut v = v0.to_vec();
    let mut nodes = Vec::with_capacity(steps + 1);
    nodes.push(PathNode {
        s: 0.0,
        point: x.clone(),
        velocity: v.clone(),
    });

    let deriv = |x: &[f64], v: &[f64]| -> Result<(Vec<f64>, Vec<f64>), GeodesyError> {
        Ok((v.to_vec(), acceleration(field, x, v)?))
    };

    for i in 0..steps {
        let (k1x, k1v) = deriv(&x, &v)?;
        let xt: Vec<f64> = x.iter().zip(&k1x).map(|(a, b)| a + 0.5 * h * b).collect();
        let vt: Vec<f64> = v.iter().zip(&k1v).map(|(a, b)| a + 0.5 * h * b).collect();
        let (k2x, k2v) = deriv(&xt, &vt)?;
        let xt: Vec<f64> = x.iter().zip(&k2x).map(|(a, b)| a + 0.5 * h * b).collect();
        let vt: Vec<f64> = v.iter().zip(&k2v).map(|(a, b)| a + 0.5 * h * b).collect();
        let (k3x, k3v) = deriv(&xt, &vt)?;
        let xt: Vec<f64> = x.iter().zip(&k3x).map(|(a, b)| a + h * b).collect();
        let vt: Vec<f64> = v.iter().zip(&k3v).map(|(a, b)| a + h * b).collect();
        let (k4x, k4v) = deriv(&xt, &vt)?;

        for a in 0..d {
            x[a] += h / 6.0 * (k1x[a] + 2.0 * k2x[a] + 2.0 * k3x[a] + k4x[a]);
            v[a] += h / 6.0 * (k1v[a] + 2.0 * k2v[a] + 2.0 * k3v[a] + k4v[a]);
        }
        let s = (i + 1) as f64 * h;
        if x.iter().chain(v.iter()).any(|t| !t.is_finite()) {
            return Err(GeodesyError::BlowUp { s });
        }
        nodes.push(PathNode {
            s,
            point: x.clone(),
            velocity: v.clone(),
        });
    }

    let speeds_sq: Vec<f64> = nodes
        .iter()
        .map(|n| quadratic_form(&field.eval(&n.point), &n.velocity))
        .collect();
    let speeds: Vec<f64> = speeds_sq.iter().map(|q| q.abs().sqrt()).collect();
    let length = simpson(&speeds, h);
    let signature_class = classify(field, theta0, &speeds_sq);
    Ok(GeodesicPath {
        nodes,
        length,
        signature_class,
    })
}

/// `sqrt(|g(v, v)|)` integrated along a given path, with its causal class.
pub fn indefinite_length(field: &MetricField, path: &GeodesicPath) -> (f64, CausalClass) {
    let speeds_sq: Vec<f64> = path
        .nodes
        .iter()
        .map(|n| quadratic_form(&field.eval(&n.point), &n.velocity))
        .collect();
    let speeds: Vec<f64> = speeds_sq.iter().map(|q| q.abs().sqrt()).collect();
    let h = if path.nodes.len() > 1 {
        path.nodes[1].s - path.nodes[0].s
    } else {
        0.0
    };
    let start = &path.nodes[0].point;
    (simpson(&speeds, h), classify(field, start, &speeds_sq))
}

/// Sup-norm residual of the geodesic equation over the interior nodes of a
/// path, using second differences of the stored points.
pub fn geodesic_residual(field: &MetricField, path: &GeodesicPath) -> Result<f64, GeodesyError> {
    let n = path.nodes.len();
    if n < 3 {
        return Ok(0.0);
    }
    let h = path.nodes[1].s - path.nodes[0].s;
    let mut worst = 0.0f64;
    for i in (1..n - 1).step_by((n / 64).max(1)) {
        let prev = &path.nodes[i - 1].point;
        let cur = &path.nodes[i];
        let next = &path.nodes[i + 1].point;
        let gamma = christoffel(field, &cur.point, None)?;
        for a in 0..field.dim {
            let second = (next[a] - 2.0 * cur.point[a] + prev[a]) / (h * h);
            let mut quad = 0.0;
            for b in 0..field.dim {
                for c in 0..field.dim {
                    quad += gamma[a][(b, c)] * cur.velocity[b] * cur.velocity[c];
                }
            }
            worst = worst.max((second + quad).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy)]
pub struct ShootOptions {
    pub steps: usize,
    pub max_iterations: usize,
    pub endpoint_tol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            steps: 400,
            max_iterations: 60,
            endpoint_tol: 1e-10,
        }
    }
}

/// Two-point geodesic distance by shooting: solve for the initial velocity
/// whose unit-affine-time geodesic lands on `target`, then integrate the
/// length along the converged path.
///
/// Convergence failure signals possible conjugate points and is reported with
/// the best endpoint miss achieved.
pub fn shoot_distance(
    field: &MetricField,
    from: &[f64],
    target: &[f64],
) -> Result<(f64, GeodesicPath), GeodesyError> {
    shoot_distance_with(field, from, target, ShootOptions::default())
}

pub fn shoot_distance_with(
    field: &MetricField,
    from: &[f64],
    target: &[f64],
    opts: ShootOptions,
) -> Result<(f64, GeodesicPath), GeodesyError> {
    let d = field.dim;
    let miss_of = |v: &[f64]| -> Result<(Vec<f64>, GeodesicPath), GeodesyError> {
        let path = integrate_geodesic(field, from, v, 1.0, opts.steps)?;
        let end = path.endpoint();
        let miss: Vec<f64> = end.iter().zip(target.iter()).map(|(e, t)| e - t).collect();
        Ok((miss, path))
    };

    let mut v: Vec<f64> = target.iter().zip(from.iter()).map(|(t, f)| t - f).collect();
    if v.iter().all(|&c| c == 0.0) {
        let path = integrate_geodesic(field, from, &v, 1.0, opts.steps)?;
        return Ok((0.0, path));
    }

    let (mut miss, mut path) = miss_of(&v)?;
    let mut miss_norm = miss.iter().map(|m| m * m).sum::<f64>().sqrt();

    for _ in 0..opts.max_iterations {
        if miss_norm <= opts.endpoint_tol {
            break;
        }
        // finite-difference Jacobian of the endpoint in the initial velocity
        let mut jac = DMatrix::<f64>::zeros(d, d);
        let vscale = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(1.0);
        let h = 1e-7 * vscale;
        for j in 0..d {
            let mut vp = v.clone();
            vp[j] += h;
            let (mp, _) = miss_of(&vp)?;
            for i in 0..d {
                jac[(i, j)] = (mp[i] - miss[i]) / h;
            }
        }
        let rhs = DVector::from_iterator(d, miss.iter().map(|m| -m));
        let delta = jac
            .lu()
            .solve(&rhs)
            .ok_or(GeodesyError::NoConvergence { miss: miss_norm })?;

        let mut improved = false;
        let mut alpha = 1.0;
        for _ in 0..8 {
            let trial: Vec<f64> = v
                .iter()
                .enumerate()
                .map(|(i, c)| c + alpha * delta[i])
                .collect();
            if let Ok((m, p)) = miss_of(&trial) {
                let n = m.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n < miss_norm {
                    v = trial;
                    miss = m;
                    path = p;
                    miss_norm = n;
                    improved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !improved {
            return Err(GeodesyError::NoConvergence { miss: miss_norm });
        }
    }

    if miss_norm > opts.endpoint_tol.max(1e-8) {
        return Err(GeodesyError::NoConvergence { miss: miss_norm });
    }
    Ok((path.length, path))
}

/// Closed-form distance on the half-plane with metric `diag(1,1)/x0^2`:
/// `arccosh(1 + |delta|^2 / (2 x0 y0))`. Used as the shooting oracle.
pub fn hyperbolic_half_plane_distance(p: &[f64], q: &[f64]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p[0] * q[0]);
    arg.acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn flat_space_has_zero_christoffels() {
        let field = MetricField::euclidean(2);
        let gamma = christoffel(&field, &[0.3, -1.2], None).unwrap();
        for g in &gamma {
            assert!(g.norm() < 1e-9, "{g}");
        }
    }

    #[test]
    fn poincare_christoffels() {
        let field = MetricField::poincare_half_plane();
        let gamma = christoffel(&field, &[2.0, 0.7], None).unwrap();
        // hand values at x0 = 2: G^0_00 = -1/2, G^0_11 = 1/2, G^1_01 = -1/2
        assert!((gamma[0][(0, 0)] + 0.5).abs() < 1e-8);
        assert!((gamma[0][(1, 1)] - 0.5).abs() < 1e-8);
        assert!((gamma[1][(0, 1)] + 0.5).abs() < 1e-8);
        assert!(gamma[1][(0, 0)].abs() < 1e-8);
    }

    #[test]
    fn gaussian_metric_christoffel() {
        let field = MetricField::gaussian_fisher_rao();
        let gamma = christoffel(&field, &[1.0, 0.4], None).unwrap();
        // from g = diag(2, 1)/s^2: G^0_00 = -1/s
        assert!((gamma[0][(0, 0)] + 1.0).abs() < 1e-8, "{}", gamma[0][(0, 0)]);
    }

    #[test]
    fn singular_metric_is_reported() {
        let field = MetricField::constant(DMatrix::zeros(2, 2));
        assert!(matches!(
            christoffel(&field, &[0.0, 0.0], None),
            Err(GeodesyError::SingularMetric)
        ));
    }

    #[test]
    fn flat_geodesic_is_straight() {
        let field = MetricField::euclidean(2);
        let path = integrate_geodesic(&field, &[0.0, 0.0], &[1.0, 0.0], 1.0, 64).unwrap();
        let end = path.endpoint();
        assert!((end[0] - 1.0).abs() < 1e-10 && end[1].abs() < 1e-12);
        assert_eq!(path.signature_class, CausalClass::Riemannian);
    }

    #[test]
    fn poincare_vertical_line_is_geodesic() {
        let field = MetricField::poincare_half_plane();
        let path = integrate_geodesic(&field, &[1.0, 0.0], &[1.0, 0.0], 1.0, 400).unwrap();
        for node in &path.nodes {
            assert!(node.point[1].abs() < 1e-8, "left the vertical line");
        }
    }

    #[test]
    fn affine_speed_is_conserved() {
        let field = MetricField::gaussian_fisher_rao();
        let path = integrate_geodesic(&field, &[1.0, 0.0], &[0.3, 0.6], 3.0, 1200).unwrap();
        let speeds: Vec<f64> = path
            .nodes
            .iter()
            .map(|n| {
                let g = field.eval(&n.point);
                quadratic_form(&g, &n.velocity)
            })
            .collect();
        let first = speeds[0];
        for q in &speeds {
            assert!(
                ((q - first) / first).abs() < 1e-6,
                "speed drifted: {q} vs {first}"
            );
        }
    }

    #[test]
    fn geodesic_residual_is_small() {
        let field = MetricField::poincare_half_plane();
        let path = integrate_geodesic(&field, &[1.0, 0.0], &[0.4, 0.8], 1.0, 1000).unwrap();
        let v2 = quadratic_form(&field.eval(&[1.0, 0.0]), &[0.4f64, 0.8]);
        let res = geodesic_residual(&field, &path).unwrap();
        assert!(res < 1e-6 * v2.max(1.0), "residual {res}");
    }

    #[test]
    fn flat_distance() {
        let field = MetricField::euclidean(2);
        let (len, _) = shoot_distance(&field, &[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((len - 5.0).abs() < 1e-9, "got {len}");
    }

    #[test]
    fn poincare_distance_matches_closed_form() {
        let field = MetricField::poincare_half_plane();
        let (len, path) = shoot_distance(&field, &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        let expect = hyperbolic_half_plane_distance(&[1.0, 0.0], &[1.0, 1.0]);
        assert!((expect - ((3.0 + 5.0f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        assert!(((len - expect) / expect).abs() < 1e-7, "len {len} vs {expect}");
        let endpoint = path.endpoint();
        assert!((endpoint[0] - 1.0).abs() < 1e-8 && (endpoint[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn poincare_random_pairs_oracle() {
        let field = MetricField::poincare_half_plane();
        let mut rng = rand::rngs::StdRng::seed_from_u64(19);
        let mut tested = 0;
        while tested < 25 {
            let p = [rng.gen_range(0.5..2.0), rng.gen_range(-1.5..1.5)];
            let q = [rng.gen_range(0.5..2.0), rng.gen_range(-1.5..1.5)];
            let expect = hyperbolic_half_plane_distance(&p, &q);
            if !(1e-3..3.0).contains(&expect) {
                continue;
            }
            let (len, _) = shoot_distance(&field, &p, &q).unwrap();
            assert!(
                ((len - expect) / expect).abs() < 1e-6,
                "p={p:?} q={q:?} len={len} expect={expect}"
            );
            tested += 1;
        }
    }

    #[test]
    fn shooting_is_symmetric() {
        let field = MetricField::gaussian_fisher_rao();
        let (ab, _) = shoot_distance(&field, &[1.0, 0.0], &[2.0, 1.0]).unwrap();
        let (ba, _) = shoot_distance(&field, &[2.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!(((ab - ba) / ab).abs() < 1e-7, "{ab} vs {ba}");
    }

    #[test]
    fn minkowski_segment_is_timelike() {
        let field = MetricField::constant(DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]));
        let path = integrate_geodesic(&field, &[0.0, 0.0], &[1.0, 0.0], 1.0, 64).unwrap();
        let (len, class) = indefinite_length(&field, &path);
        assert!((len - 1.0).abs() < 1e-9);
        assert_eq!(class, CausalClass::LorentzianTimelike);
    }

    #[test]
    fn null_direction_is_classified() {
        let field = MetricField::constant(DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]));
        let path = integrate_geodesic(&field, &[0.0, 0.0], &[1.0, 1.0], 1.0, 64).unwrap();
        let (len, class) = indefinite_length(&field, &path);
        assert!(len.abs() < 1e-9);
        assert_eq!(class, CausalClass::Null);
    }

    #[test]
    fn constant_indefinite_oscillator_metrics() {
        // the diagonalized eigenstate metrics are constant in the log
        // coordinates; paths under them classify by the coefficient signs
        let g1 = MetricField::constant(DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 0.625]));
        let path = integrate_geodesic(&g1, &[0.0, 0.0], &[1.0, 0.0], 1.0, 64).unwrap();
        let (len, class) = indefinite_length(&g1, &path);
        assert!((len - 0.5f64.sqrt()).abs() < 1e-9, "got {len}");
        assert_eq!(class, CausalClass::LorentzianTimelike);

        let g2 = MetricField::constant(DMatrix::from_row_slice(2, 2, &[-2.5, 0.0, 0.0, -2.275]));
        let path = integrate_geodesic(&g2, &[0.0, 0.0], &[0.3, 0.8], 1.0, 64).unwrap();
        let (len, class) = indefinite_length(&g2, &path);
        assert!(len > 0.0);
        assert_eq!(class, CausalClass::LorentzianTimelike);
    }

    #[test]
    fn quadrature_backed_field_matches_closed_form() {
        let fam =
            std::sync::Arc::new(crate::families::gaussian_family());
        let field = MetricField::from_family(
            fam,
            1.0,
            crate::quad::QuadratureSpec::gauss_hermite(80),
        );
        let g = field.eval(&[1.0, 0.0]);
        let expect = crate::fisher_rao::gaussian_metric_closed(&[1.0, 0.0]);
        assert!((g - expect).norm() < 1e-8);
    }
}
