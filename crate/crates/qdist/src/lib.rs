//! # qdist
//!
//! Distance measures on spaces of classical and quantum states:
//!
//! - Fisher-Rao metric tensors on parametric probability families, computed by
//!   quadrature in both the gradient and hessian forms, together with the
//!   generalized `F(p)`-metric and the Euler-Lagrange stationarity residual
//!   that singles out `F = ln p`.
//! - Generic geodesic machinery for black-box metric fields: finite-difference
//!   Christoffel symbols, RK4 geodesic integration, two-point distances by
//!   shooting, and lengths of paths under indefinite metrics.
//! - The metric on the truncated sphere of quantum amplitudes built from
//!   propagator overlap densities, for a free particle on a circle and the
//!   harmonic oscillator.
//! - The closed-form information geometry of the oscillator parameter manifold
//!   `(m, omega)`, its log-coordinate diagonalization and signature table.
//! - Density matrices, von Neumann and relative entropy, Gibbs states, and the
//!   thermal scalar-field one-parameter geometry with its closed-form distance.
//!
//! Every closed form carries an independent numerical cross-check (quadrature,
//! finite differences, or a shooting boundary-value solve); the `qdist` CLI
//! exposes these cross-checks as an audit table.

pub mod constants;
pub mod entropy;
pub mod families;
pub mod fisher_rao;
pub mod geodesy;
pub mod hilbert_sphere;
pub mod io;
pub mod oscillator_manifold;
pub mod quad;
pub mod scalar_field;
pub mod thermal;

pub use constants::Constants;
pub use entropy::DensityMatrix;
pub use families::ParametricFamily;
pub use fisher_rao::MetricTensor;
pub use geodesy::{GeodesicPath, MetricField};
pub use hilbert_sphere::{AmplitudeState, EvolvedBasis};
pub use quad::{Domain, Envelope, QuadratureSpec};
pub use thermal::ThermalModel;
