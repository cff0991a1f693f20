//! `qdist` command line: every computation in the library behind a
//! machine-readable subcommand, plus the audit table.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical non-convergence.
//! Reports go to stdout; structured diagnostics go to stderr as JSON.

pub mod audit;
pub mod json;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdist::constants::Constants;
use qdist::entropy::{relative_entropy, relative_entropy_decomposed, von_neumann_entropy};
use qdist::families::{gaussian_family, ho_eigenstate_family, ParametricFamily};
use qdist::fisher_rao::{fr_metric, gauss_geodesic_distance_paper, Form, MetricTensor};
use qdist::geodesy::{shoot_distance, MetricField};
use qdist::hilbert_sphere::{paper_diagonal_metric, sphere_metric, EvolvedBasis, SphereMetric};
use qdist::io as qio;
use qdist::oscillator_manifold::signature_report;
use qdist::quad::QuadratureSpec;
use qdist::scalar_field;
use qdist::thermal::{
    gibbs_relative_entropy, thermal_relative_entropy, two_thermal_relative_entropy, Hamiltonian,
    ThermalModel,
};

use json::Value;

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Debug, Parser)]
#[command(name = "qdist", version, about = "Distance measures for classical and quantum states", disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Reduced Planck constant override.
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Speed of light override.
    #[arg(long, global = true)]
    c_light: Option<f64>,
    /// Boltzmann constant override.
    #[arg(long, global = true)]
    k_b: Option<f64>,
    /// Newton constant override.
    #[arg(long, global = true)]
    g_newton: Option<f64>,
    /// Absolute quadrature tolerance override.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance override.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Gauss-Hermite node count override.
    #[arg(long, global = true)]
    gh_nodes: Option<usize>,
    /// Seed for the randomized property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form distance between two Gaussians plus the geodesic-shooting
    /// cross-check under the scale-location metric.
    GaussDistance {
        /// First point as "scale,location".
        #[arg(long)]
        theta1: String,
        /// Second point as "scale,location".
        #[arg(long)]
        theta2: String,
        /// Include shooting diagnostics (endpoint error, path size).
        #[arg(long)]
        audit: bool,
    },
    /// Fisher-Rao metric tensor of a built-in family at a parameter point.
    FrMetric {
        /// Family: "gauss" or "ho:N" for the N-th oscillator eigenstate.
        #[arg(long)]
        family: String,
        /// Parameter point as "a,b".
        #[arg(long)]
        at: String,
        /// Integrand form.
        #[arg(long, default_value = "gradient")]
        form: String,
        /// Scale constant k (the metric carries k^2).
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
    /// Signature table of the oscillator parameter manifold across
    /// eigenstate index.
    HoManifold {
        #[arg(long)]
        n_max: u32,
    },
    /// Metric blocks on the truncated amplitude sphere.
    SphereMetric {
        /// System: "free" (circle) or "ho" (oscillator).
        #[arg(long)]
        system: String,
        /// Path to the amplitude-state JSON file.
        #[arg(long)]
        state: String,
        /// Evolution time.
        #[arg(long)]
        t: f64,
        /// "eq4" (full double-sum density) or "paper-diagonal".
        #[arg(long, default_value = "eq4")]
        mode: String,
        /// System parameters: "mass" (free) or "mass,omega" (oscillator).
        #[arg(long, default_value = "1,1")]
        params: String,
        /// Mode-truncation bound.
        #[arg(long, default_value_t = 8)]
        truncation: usize,
    },
    /// Relative entropy between two density matrices from JSON files.
    RelEntropy {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
    },
    /// Thermal relative entropies for a Hamiltonian from a JSON file.
    Thermal {
        /// Hamiltonian JSON file.
        #[arg(long = "H")]
        hamiltonian: String,
        /// Inverse temperature of the reference (sigma) state.
        #[arg(long)]
        beta: f64,
        /// Inverse temperature of the compared (rho) thermal state.
        #[arg(long)]
        b: Option<f64>,
        /// Density-matrix JSON for a non-thermal rho.
        #[arg(long)]
        rho: Option<String>,
    },
    /// Thermal-field relative entropy between two inverse temperatures.
    ScalarField {
        #[arg(long = "V")]
        volume: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Closed-form distance between fixed-energy thermal field states, with
    /// the quadrature cross-check.
    ScalarFieldDistance {
        #[arg(long)]
        e1: f64,
        #[arg(long)]
        e2: f64,
        #[arg(long = "V", default_value_t = 1.0)]
        volume: f64,
    },
    /// Run every closed-form-vs-oracle comparison and print the table.
    Audit,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub module: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    fn validation(module: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: "validation",
            module,
            message: message.into(),
            exit_code: 2,
        }
    }

    fn numerical(module: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: "non-convergence",
            module,
            message: message.into(),
            exit_code: 3,
        }
    }
}

fn parse_pair(text: &str, what: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::validation(
            "cli",
            format!("{what} must be two comma-separated numbers, got {text:?}"),
        ));
    }
    let mut out = [0.0; 2];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.trim().parse::<f64>().map_err(|_| {
            CliError::validation("cli", format!("cannot parse {what} component {p:?}"))
        })?;
    }
    Ok(out)
}

fn constants_from(opts: &GlobalOpts) -> Result<Constants, CliError> {
    let mut base = Constants::natural();
    if let Ok(path) = std::env::var("QDIST_CONSTANTS") {
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::validation("cli", format!("cannot read QDIST_CONSTANTS file {path}: {e}"))
        })?;
        base = qio::constants_from_json(&text)
            .map_err(|e| CliError::validation("cli", format!("QDIST_CONSTANTS: {e}")))?;
    }
    if let Some(h) = opts.hbar {
        base.hbar = h;
    }
    if let Some(c) = opts.c_light {
        base.c = c;
    }
    if let Some(k) = opts.k_b {
        base.k_b = k;
    }
    if let Some(g) = opts.g_newton {
        base.g = g;
    }
    base.validate()
        .map_err(|e| CliError::validation("constants", e))?;
    Ok(base)
}

fn spec_from(opts: &GlobalOpts) -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec::default();
    if let Some(a) = opts.abs_tol {
        spec.abs_tol = a;
    }
    if let Some(r) = opts.rel_tol {
        spec.rel_tol = r;
    }
    if let Some(n) = opts.gh_nodes {
        spec.node_count = n;
    }
    spec.validate()
        .map_err(|e| CliError::validation("quadrature", e.to_string()))?;
    Ok(spec)
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::validation("cli", format!("cannot read {path}: {e}")))
}

/// Run the CLI on `argv` (excluding the program name handled by clap), writing
/// the report to `out` and diagnostics to `err`; returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with success status
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 2;
            }
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = write!(out, "{}", render(&report, cli.global.format));
            0
        }
        Err(e) => {
            let mut diag = Value::object();
            diag.push("schema", Value::Int(SCHEMA_VERSION));
            diag.push("error_kind", Value::Str(e.kind.into()));
            diag.push("module", Value::Str(e.module.into()));
            diag.push("message", Value::Str(e.message.clone()));
            let _ = write!(err, "{}", diag.render());
            e.exit_code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Value, CliError> {
    let constants = constants_from(&cli.global)?;
    let spec = spec_from(&cli.global)?;
    match &cli.command {
        Command::GaussDistance {
            theta1,
            theta2,
            audit,
        } => cmd_gauss_distance(theta1, theta2, *audit),
        Command::FrMetric { family, at, form, k } => {
            cmd_fr_metric(family, at, form, *k, &constants, &spec)
        }
        Command::HoManifold { n_max } => cmd_ho_manifold(*n_max),
        Command::SphereMetric {
            system,
            state,
            t,
            mode,
            params,
            truncation,
        } => cmd_sphere_metric(system, state, *t, mode, params, *truncation, &constants),
        Command::RelEntropy { rho, sigma } => cmd_rel_entropy(rho, sigma, &constants),
        Command::Thermal {
            hamiltonian,
            beta,
            b,
            rho,
        } => cmd_thermal(hamiltonian, *beta, *b, rho.as_deref(), &constants),
        Command::ScalarField { volume, b, beta } => {
            cmd_scalar_field(*volume, *b, *beta, &constants)
        }
        Command::ScalarFieldDistance { e1, e2, volume } => {
            cmd_scalar_field_distance(*e1, *e2, *volume, &constants, &spec)
        }
        Command::Audit => cmd_audit(cli.global.seed, &constants, &spec),
    }
}

fn report_header(command: &str) -> Value {
    let mut v = Value::object();
    v.push("schema", Value::Int(SCHEMA_VERSION));
    v.push("command", Value::Str(command.into()));
    v
}

fn cmd_gauss_distance(theta1: &str, theta2: &str, audit: bool) -> Result<Value, CliError> {
    let t1 = parse_pair(theta1, "--theta1")?;
    let t2 = parse_pair(theta2, "--theta2")?;
    let formula = gauss_geodesic_distance_paper(&t1, &t2)
        .map_err(|e| CliError::validation("fisher_rao", e.to_string()))?;
    let field = MetricField::gaussian_fisher_rao();
    let (shot, path) = shoot_distance(&field, &t1, &t2)
        .map_err(|e| CliError::numerical("geodesy", e.to_string()))?;
    let mut report = report_header("gauss-distance");
    report.push("theta1", json::floats(&t1));
    report.push("theta2", json::floats(&t2));
    report.push("paper_formula", Value::Float(formula));
    report.push("shooting", Value::Float(shot));
    report.push(
        "ratio",
        Value::Float(if shot != 0.0 { formula / shot } else { 1.0 }),
    );
    if audit {
        let endpoint = path.endpoint();
        let miss = ((endpoint[0] - t2[0]).powi(2) + (endpoint[1] - t2[1]).powi(2)).sqrt();
        report.push("endpoint_error", Value::Float(miss));
        report.push("path_nodes", Value::Int(path.nodes.len() as i64));
        report.push(
            "signature_class",
            Value::Str(path.signature_class.label().into()),
        );
    }
    Ok(report)
}

fn family_from_flag(
    name: &str,
    constants: &Constants,
) -> Result<(ParametricFamily, String), CliError> {
    if name == "gauss" {
        return Ok((gaussian_family(), "gauss".into()));
    }
    if let Some(nstr) = name.strip_prefix("ho:") {
        let n: usize = nstr
            .parse()
            .map_err(|_| CliError::validation("cli", format!("bad eigenstate index {nstr:?}")))?;
        let fam = ho_eigenstate_family(n, constants)
            .map_err(|e| CliError::validation("families", e.to_string()))?;
        return Ok((fam, format!("ho:{n}")));
    }
    Err(CliError::validation(
        "cli",
        format!("unknown family {name:?}; expected \"gauss\" or \"ho:N\""),
    ))
}

fn metric_to_json(report: &mut Value, tensor: &MetricTensor) {
    report.push("point", json::floats(&tensor.point));
    report.push("components", json::float_matrix(&tensor.components));
    let mut sig = Value::object();
    sig.push("plus", Value::Int(tensor.signature.plus as i64));
    sig.push("minus", Value::Int(tensor.signature.minus as i64));
    sig.push("zero", Value::Int(tensor.signature.zero as i64));
    report.push("signature", sig);
    report.push("scale_k", Value::Float(tensor.scale_k));
    report.push("quad_error", Value::Float(tensor.quad_error));
}

fn cmd_fr_metric(
    family: &str,
    at: &str,
    form: &str,
    k: f64,
    constants: &Constants,
    spec: &QuadratureSpec,
) -> Result<Value, CliError> {
    let (fam, family_name) = family_from_flag(family, constants)?;
    let theta = parse_pair(at, "--at")?;
    let form = match form {
        "gradient" => Form::Gradient,
        "hessian" => Form::Hessian,
        other => {
            return Err(CliError::validation(
                "cli",
                format!("unknown form {other:?}; expected gradient or hessian"),
            ))
        }
    };
    // hessian-form integrands differentiate the gradient by finite
    // differences; cap the tolerance demanded of the quadrature accordingly
    let spec = match form {
        Form::Gradient => QuadratureSpec {
            scheme: qdist::quad::Scheme::GaussHermite,
            ..*spec
        },
        Form::Hessian => QuadratureSpec {
            scheme: qdist::quad::Scheme::GaussHermite,
            abs_tol: spec.abs_tol.max(1e-6),
            rel_tol: spec.rel_tol.max(1e-6),
            ..*spec
        },
    };
    let tensor = fr_metric(&fam, &theta, form, k, &spec).map_err(|e| match e {
        qdist::fisher_rao::MetricError::OutOfDomain => {
            CliError::validation("fisher_rao", e.to_string())
        }
        qdist::fisher_rao::MetricError::QuadratureFailure(_) => {
            CliError::numerical("fisher_rao", e.to_string())
        }
    })?;
    let mut report = report_header("fr-metric");
    report.push("family", Value::Str(family_name));
    report.push(
        "form",
        Value::Str(
            match form {
                Form::Gradient => "gradient",
                Form::Hessian => "hessian",
            }
            .into(),
        ),
    );
    metric_to_json(&mut report, &tensor);
    Ok(report)
}

fn cmd_ho_manifold(n_max: u32) -> Result<Value, CliError> {
    let rows = signature_report(n_max);
    let mut report = report_header("ho-manifold");
    let mut arr = Vec::new();
    for row in rows {
        let mut r = Value::object();
        r.push("n", Value::Int(row.n as i64));
        r.push("a", Value::Float(row.a));
        r.push("eta", Value::Float(row.eta));
        r.push("class", Value::Str(row.class.label().into()));
        arr.push(r);
    }
    report.push("rows", Value::Array(arr));
    Ok(report)
}

fn sphere_metric_json(metric: &SphereMetric) -> Value {
    let mut v = Value::object();
    v.push("holomorphic", json::complex_matrix(&metric.holomorphic));
    v.push("mixed", json::complex_matrix(&metric.mixed));
    v.push(
        "hermiticity_defect",
        Value::Float(metric.hermiticity_defect()),
    );
    v.push("symmetry_defect", Value::Float(metric.symmetry_defect()));
    v
}

fn cmd_sphere_metric(
    system: &str,
    state_path: &str,
    t: f64,
    mode: &str,
    params: &str,
    truncation: usize,
    constants: &Constants,
) -> Result<Value, CliError> {
    let state_text = read_file(state_path)?;
    let state = qio::amplitude_state_from_json(&state_text)
        .map_err(|e| CliError::validation("hilbert_sphere", e.to_string()))?;
    let basis = match system {
        "free" => {
            let mass: f64 = params
                .split(',')
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| CliError::validation("cli", "bad --params for free system"))?;
            EvolvedBasis::free_particle(mass, t, truncation, *constants)
        }
        "ho" => {
            let p = parse_pair(params, "--params")?;
            EvolvedBasis::oscillator(p[0], p[1], t, truncation, *constants)
        }
        other => {
            return Err(CliError::validation(
                "cli",
                format!("unknown system {other:?}; expected free or ho"),
            ))
        }
    };
    let spec = qdist::hilbert_sphere::default_spec(&basis);
    let mut report = report_header("sphere-metric");
    report.push("system", Value::Str(system.into()));
    report.push("mode", Value::Str(mode.into()));
    report.push("time", Value::Float(t));
    report.push("dim", Value::Int(state.dim() as i64));

    let numerical = |e: qdist::hilbert_sphere::SphereError| match e {
        qdist::hilbert_sphere::SphereError::Quadrature(_) => {
            CliError::numerical("hilbert_sphere", e.to_string())
        }
        _ => CliError::validation("hilbert_sphere", e.to_string()),
    };

    match mode {
        "eq4" => {
            let metric = sphere_metric(&basis, &state, &spec).map_err(numerical)?;
            report.push("metric", sphere_metric_json(&metric));
            // truncation-convergence probe: two extra zero-amplitude modes
            // must leave the occupied block unchanged
            let padded = state.padded(2);
            if basis.validate_state(&padded).is_ok() {
                let bigger = sphere_metric(&basis, &padded, &spec).map_err(numerical)?;
                let nn = state.dim();
                let mut worst = 0.0f64;
                for i in 0..nn {
                    for j in 0..nn {
                        worst = worst.max(
                            (bigger.holomorphic[(i, j)] - metric.holomorphic[(i, j)]).norm(),
                        );
                        worst = worst
                            .max((bigger.mixed[(i, j)] - metric.mixed[(i, j)]).norm());
                    }
                }
                report.push("truncation_delta", Value::Float(worst));
            }
        }
        "paper-diagonal" => {
            let g = paper_diagonal_metric(&basis, &state, &spec).map_err(numerical)?;
            report.push("metric", json::complex_matrix(&g));
        }
        other => {
            return Err(CliError::validation(
                "cli",
                format!("unknown mode {other:?}; expected eq4 or paper-diagonal"),
            ))
        }
    }
    Ok(report)
}

fn cmd_rel_entropy(rho_path: &str, sigma_path: &str, constants: &Constants) -> Result<Value, CliError> {
    let rho = qio::density_matrix_from_json(&read_file(rho_path)?)
        .map_err(|e| CliError::validation("entropy", e.to_string()))?;
    let sigma = qio::density_matrix_from_json(&read_file(sigma_path)?)
        .map_err(|e| CliError::validation("entropy", e.to_string()))?;
    let s_rel = relative_entropy(&rho, &sigma)
        .map_err(|e| CliError::validation("entropy", e.to_string()))?;
    let mut report = report_header("rel-entropy");
    report.push("dim", Value::Int(rho.dim() as i64));
    report.push("s_rel", Value::Float(s_rel));
    report.push(
        "s_rho",
        Value::Float(von_neumann_entropy(&rho, constants)),
    );
    report.push(
        "s_sigma",
        Value::Float(von_neumann_entropy(&sigma, constants)),
    );
    if let Ok((s_s, s_r, cross)) = relative_entropy_decomposed(&rho, &sigma) {
        let mut decomp = Value::object();
        decomp.push("s_sigma", Value::Float(s_s));
        decomp.push("s_rho", Value::Float(s_r));
        decomp.push("cross_term", Value::Float(cross));
        decomp.push("recombined", Value::Float(s_s - s_r + cross));
        report.push("decomposition", decomp);
    }
    Ok(report)
}

fn cmd_thermal(
    hamiltonian_path: &str,
    beta: f64,
    b: Option<f64>,
    rho_path: Option<&str>,
    constants: &Constants,
) -> Result<Value, CliError> {
    let h_mat = qio::complex_matrix_from_json(&read_file(hamiltonian_path)?)
        .map_err(|e| CliError::validation("thermal", e.to_string()))?;
    let hamiltonian = Hamiltonian::Matrix(h_mat);
    let model_sigma = ThermalModel::new(hamiltonian.clone(), beta, *constants)
        .map_err(|e| CliError::validation("thermal", e.to_string()))?;
    let mut report = report_header("thermal");
    report.push("beta", Value::Float(beta));
    report.push(
        "energy",
        Value::Float(
            model_sigma
                .energy()
                .map_err(|e| CliError::validation("thermal", e.to_string()))?,
        ),
    );
    report.push(
        "entropy",
        Value::Float(
            model_sigma
                .entropy()
                .map_err(|e| CliError::validation("thermal", e.to_string()))?,
        ),
    );
    report.push(
        "free_energy",
        Value::Float(
            model_sigma
                .free_energy()
                .map_err(|e| CliError::validation("thermal", e.to_string()))?,
        ),
    );
    if let Some(b) = b {
        let closed = two_thermal_relative_entropy(&hamiltonian, b, beta, constants)
            .map_err(|e| CliError::validation("thermal", e.to_string()))?;
        let model_rho = ThermalModel::new(hamiltonian.clone(), b, *constants)
            .map_err(|e| CliError::validation("thermal", e.to_string()))?;
        let direct = gibbs_relative_entropy(&model_rho, &model_sigma)
            .map_err(|e| CliError::validation("thermal", e.to_string()))?;
        let mut two = Value::object();
        two.push("b", Value::Float(b));
        two.push("s_rel_two_thermal_form", Value::Float(closed));
        two.push("s_rel_definition", Value::Float(direct));
        two.push("difference", Value::Float((closed - direct).abs()));
        report.push("two_thermal", two);
    }
    if let Some(path) = rho_path {
        let rho = qio::density_matrix_from_json(&read_file(path)?)
            .map_err(|e| CliError::validation("entropy", e.to_string()))?;
        let shortcut = thermal_relative_entropy(&rho, &model_sigma)
            .map_err(|e| CliError::validation("thermal", e.to_string()))?;
        let mut section = Value::object();
        section.push("s_rel_free_energy_form", Value::Float(shortcut));
        if let qdist::thermal::GibbsState::Matrix(sigma) = model_sigma
            .gibbs_state()
            .map_err(|e| CliError::validation("thermal", e.to_string()))?
        {
            let direct = relative_entropy(&rho, &sigma)
                .map_err(|e| CliError::validation("entropy", e.to_string()))?;
            section.push("s_rel_definition", Value::Float(direct));
            section.push("difference", Value::Float((shortcut - direct).abs()));
        }
        report.push("state_vs_thermal", section);
    }
    Ok(report)
}

fn cmd_scalar_field(volume: f64, b: f64, beta: f64, constants: &Constants) -> Result<Value, CliError> {
    let s_rel = scalar_field::rel_entropy(volume, b, beta, constants)
        .map_err(|e| CliError::validation("scalar_field", e.to_string()))?;
    let mut report = report_header("scalar-field");
    report.push("volume", Value::Float(volume));
    report.push("b", Value::Float(b));
    report.push("beta", Value::Float(beta));
    report.push("s_rel", Value::Float(s_rel));
    report.push(
        "entropy_at_beta",
        Value::Float(scalar_field::entropy(volume, beta, constants)),
    );
    report.push(
        "energy_at_beta",
        Value::Float(scalar_field::energy(volume, beta, constants)),
    );
    report.push(
        "small_gap_coefficient",
        Value::Float(scalar_field::small_gap_coefficient(volume, b, constants)),
    );
    Ok(report)
}

fn cmd_scalar_field_distance(
    e1: f64,
    e2: f64,
    volume: f64,
    constants: &Constants,
    spec: &QuadratureSpec,
) -> Result<Value, CliError> {
    let closed = scalar_field::distance(e1, e2, volume, constants)
        .map_err(|e| CliError::validation("scalar_field", e.to_string()))?;
    let numeric = scalar_field::distance_by_quadrature(e1, e2, volume, constants, spec)
        .map_err(|e| match e {
            scalar_field::FieldError::Quadrature(_) => {
                CliError::numerical("scalar_field", e.to_string())
            }
            _ => CliError::validation("scalar_field", e.to_string()),
        })?;
    let mut report = report_header("scalar-field-distance");
    report.push("e1", Value::Float(e1));
    report.push("e2", Value::Float(e2));
    report.push("volume", Value::Float(volume));
    report.push("closed_form", Value::Float(closed));
    report.push("quadrature", Value::Float(numeric));
    report.push("difference", Value::Float((closed - numeric).abs()));
    Ok(report)
}

fn cmd_audit(seed: u64, constants: &Constants, spec: &QuadratureSpec) -> Result<Value, CliError> {
    let audit = audit::run_audit(seed, constants, spec);
    let mut report = report_header("audit");
    report.push("seed", Value::Int(seed as i64));
    let mut rows = Vec::new();
    for check in &audit.checks {
        let mut row = Value::object();
        row.push("id", Value::Str(check.id.into()));
        row.push("kind", Value::Str(check.kind.label().into()));
        row.push("status", Value::Str(check.status.label().into()));
        row.push("implementation", Value::Float(check.implementation));
        row.push("oracle", Value::Float(check.oracle));
        row.push("delta", Value::Float(check.delta));
        row.push("tolerance", Value::Float(check.tolerance));
        row.push("detail", Value::Str(check.detail.clone()));
        rows.push(row);
    }
    report.push("checks", Value::Array(rows));
    let mut summary = Value::object();
    summary.push(
        "pass",
        Value::Int(audit.count(audit::CheckStatus::Pass) as i64),
    );
    summary.push(
        "note",
        Value::Int(audit.count(audit::CheckStatus::Note) as i64),
    );
    summary.push(
        "discrepancy",
        Value::Int(audit.count(audit::CheckStatus::Discrepancy) as i64),
    );
    summary.push(
        "self_consistency_discrepancies",
        Value::Int(audit.self_consistency_discrepancies() as i64),
    );
    report.push("summary", summary);
    Ok(report)
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.render(),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Pretty => render_pretty(report),
    }
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Float(f) => {
            if f.is_finite() {
                format!("{f:.16e}")
            } else if f.is_nan() {
                "nan".into()
            } else if *f > 0.0 {
                "+inf".into()
            } else {
                "-inf".into()
            }
        }
        Value::Str(s) => s.clone(),
        _ => String::new(),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV: row-oriented for reports carrying a table ("rows" or "checks"),
/// key/value pairs otherwise.
fn render_csv(report: &Value) -> String {
    let Value::Object(entries) = report else {
        return String::new();
    };
    for (key, value) in entries {
        if let ("rows" | "checks", Value::Array(items)) = (key.as_str(), value) {
            let mut out = String::new();
            if let Some(Value::Object(first)) = items.first() {
                let header: Vec<String> = first.iter().map(|(k, _)| k.clone()).collect();
                out.push_str(&header.join(","));
                out.push('\n');
                for item in items {
                    if let Value::Object(fields) = item {
                        let row: Vec<String> = fields
                            .iter()
                            .map(|(_, v)| csv_quote(&scalar_to_string(v)))
                            .collect();
                        out.push_str(&row.join(","));
                        out.push('\n');
                    }
                }
            }
            return out;
        }
    }
    let mut out = String::from("key,value\n");
    for (key, value) in entries {
        match value {
            Value::Array(_) | Value::Object(_) => continue,
            v => {
                out.push_str(&format!("{},{}\n", csv_quote(key), csv_quote(&scalar_to_string(v))));
            }
        }
    }
    out
}

fn render_pretty(report: &Value) -> String {
    let mut out = String::new();
    pretty_into(report, 0, &mut out);
    out
}

fn pretty_into(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(entries) => {
            for (k, v) in entries {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty_into(v, indent + 1, out);
                    }
                    scalar => {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar_to_string(scalar)));
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty_into(item, indent + 1, out);
                    }
                    scalar => {
                        out.push_str(&format!("{pad}- {}\n", scalar_to_string(scalar)));
                    }
                }
            }
        }
        scalar => {
            out.push_str(&format!("{pad}{}\n", scalar_to_string(scalar)));
        }
    }
}
