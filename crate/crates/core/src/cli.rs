//! Batch commands behind the `bergerkit` binary. Every command produces a
//! [`RunReport`] plus a short human summary; exit codes are 0 (all checks
//! pass), 1 (a check failed) and 2 (bad input).

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::curvature::analyze;
use crate::lie::{catalog_entry, families, MatrixLieAlgebra};
use crate::metric::{einstein_check, holonomy_estimate, laplace_check, HolonomyConfig, MetricChart};
use crate::structure::{assemble, enumerate_index2, validate_einstein_candidate, StructuredAlgebraSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Named chart fixtures with their cosmological constant.
pub const CHART_FIXTURES: &[(&str, &str, f64)] = &[
    ("unit_sphere", include_str!("../fixtures/charts/unit_sphere.json"), 1.0),
    ("flat_r13", include_str!("../fixtures/charts/flat_r13.json"), 0.0),
    ("pp_wave_2d", include_str!("../fixtures/charts/pp_wave_2d.json"), 1.0),
    ("example1", include_str!("../fixtures/charts/example1.json"), 1.0),
    ("example1_control", include_str!("../fixtures/charts/example1_control.json"), 1.0),
    ("example1_nonharmonic", include_str!("../fixtures/charts/example1_nonharmonic.json"), 1.0),
    ("index2_family4", include_str!("../fixtures/charts/index2_family4.json"), 0.0),
    ("index2_family5", include_str!("../fixtures/charts/index2_family5.json"), 0.0),
];

/// Named algebra fixtures: a matrix algebra, a block spec or a list of specs.
pub const ALGEBRA_FIXTURES: &[(&str, &str)] = &[
    ("so3", include_str!("../fixtures/algebras/so3.json")),
    ("not_closed", include_str!("../fixtures/algebras/not_closed.json")),
    ("example1_n2", include_str!("../fixtures/algebras/example1_n2.json")),
    ("index2_n2_so2", include_str!("../fixtures/algebras/index2_n2_so2.json")),
];

#[derive(Debug, Parser)]
#[command(name = "bergerkit", version, about = "Berger algebra checks and holonomy experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON run report to this path.
    #[arg(long, global = true)]
    pub json: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvature report of a matrix algebra or block spec.
    Analyze(AlgebraSource),
    /// Index-2 families for a Riemannian holonomy, each validated.
    Enumerate {
        /// `2,n`: index 2 with an n-dimensional Riemannian part.
        #[arg(long)]
        signature: String,
        /// Catalog ids of the irreducible factors of h (repeatable).
        #[arg(long = "holonomy", num_args = 1..)]
        holonomy: Vec<String>,
    },
    /// Einstein verification or holonomy estimate of a chart.
    Metric {
        #[command(subcommand)]
        action: MetricAction,
    },
    /// Catalog of matrix algebra families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraSource {
    /// Catalog id, e.g. so:3 or gl:2:R@so(2,2) (see `catalog list`).
    #[arg(long, conflicts_with_all = ["file", "fixture"])]
    pub catalog: Option<String>,
    /// Matrix-algebra or structured-spec JSON file.
    #[arg(long, conflicts_with = "fixture")]
    pub file: Option<String>,
    /// Bundled algebra: so3, not_closed, example1_n2, index2_n2_so2.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Debug, Args)]
pub struct ChartSource {
    /// Chart JSON file.
    #[arg(long, conflicts_with = "fixture")]
    pub file: Option<String>,
    /// Bundled chart: unit_sphere, flat_r13, pp_wave_2d, example1,
    /// example1_control, example1_nonharmonic, index2_family4, index2_family5.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Cosmological constant (defaults to the fixture's, else 0).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum MetricAction {
    /// `Ric = Λg` at sample points, optionally `Δ H = 0` for a function.
    Verify {
        #[command(flatten)]
        source: ChartSource,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Also check that this expression is harmonic on the chart.
        #[arg(long, allow_hyphen_values = true)]
        harmonic: Option<String>,
    },
    /// Span of transported curvature endomorphisms at a base point.
    Holonomy {
        #[command(flatten)]
        source: ChartSource,
        /// Comma-separated base point (defaults to the domain centre).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Fail unless the estimated dimension equals this.
        #[arg(long)]
        expect_dim: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Describe { id: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the command line and every input text.
    pub input_digest: String,
    pub version: String,
    pub pass: bool,
    pub results: Value,
    pub wall_time_s: f64,
}

pub struct Outcome {
    pub report: RunReport,
    pub summary: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Payload {
    command: String,
    inputs: Vec<String>,
    pass: bool,
    results: Value,
    summary: String,
}

fn digest(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read_file(path: &str) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn chart_from(source: &ChartSource) -> Result<(MetricChart, f64, String), InputError> {
    let (text, default_lambda) = match (&source.file, &source.fixture) {
        (Some(path), _) => (read_file(path)?, 0.0),
        (None, Some(name)) => {
            let (_, text, l) = CHART_FIXTURES
                .iter()
                .find(|(n, _, _)| n == name)
                .ok_or_else(|| InputError(format!("unknown chart fixture `{name}`")))?;
            (text.to_string(), *l)
        }
        (None, None) => return Err(InputError("give --file or --fixture".into())),
    };
    let chart = MetricChart::from_json(&text)?;
    chart.validate(8, source.seed)?;
    Ok((chart, source.lambda.unwrap_or(default_lambda), text))
}

enum AlgebraInput {
    Matrix(MatrixLieAlgebra),
    Spec(StructuredAlgebraSpec),
}

fn algebra_from(src: &AlgebraSource) -> Result<(AlgebraInput, String), InputError> {
    if let Some(id) = &src.catalog {
        return Ok((AlgebraInput::Matrix(catalog_entry(id)?.algebra), id.clone()));
    }
    let text = match (&src.file, &src.fixture) {
        (Some(path), _) => read_file(path)?,
        (None, Some(name)) => ALGEBRA_FIXTURES
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| InputError(format!("unknown algebra fixture `{name}`")))?,
        (None, None) => return Err(InputError("give --catalog, --file or --fixture".into())),
    };
    let value: Value = serde_json::from_str(&text)?;
    let input = if value.get("basis").is_some() {
        AlgebraInput::Matrix(MatrixLieAlgebra::from_json(&text)?)
    } else if value.get("v_dims").is_some() {
        AlgebraInput::Spec(StructuredAlgebraSpec::from_json(&text)?)
    } else {
        return Err(InputError("expected a matrix algebra (`basis`) or a block spec (`v_dims`)".into()));
    };
    Ok((input, text))
}

fn cmd_analyze(src: &AlgebraSource) -> Result<Payload, InputError> {
    let (input, text) = algebra_from(src)?;
    let (alg, extra) = match input {
        AlgebraInput::Matrix(a) => (a, Value::Null),
        AlgebraInput::Spec(spec) => {
            let s = assemble(&spec)?;
            let cand = validate_einstein_candidate(&spec)?;
            (s.algebra, serde_json::to_value(&cand)?)
        }
    };
    let report = analyze(&alg)?;
    let summary = format!(
        "{}: dim={} dim_R={} R1_nonempty={} is_berger={} is_einstein_berger={} is_symmetric_berger={}",
        report.algebra,
        report.dim_g,
        report.dim_R,
        report.R1_nonempty,
        report.is_berger,
        report.is_einstein_berger,
        report.is_symmetric_berger
    );
    Ok(Payload {
        command: "analyze".into(),
        inputs: vec![text],
        pass: true,
        results: json!({ "curvature": report, "einstein_candidate": extra }),
        summary,
    })
}

fn parse_signature(s: &str) -> Result<usize, InputError> {
    let (p, n) = s
        .split_once(',')
        .ok_or_else(|| InputError(format!("signature `{s}` must look like 2,n")))?;
    if p.trim() != "2" {
        return Err(InputError("only index 2 is enumerated".into()));
    }
    n.trim()
        .parse::<usize>()
        .map_err(|_| InputError(format!("n in `{s}` must be a non-negative integer")))
}

fn cmd_enumerate(signature: &str, holonomy: &[String]) -> Result<Payload, InputError> {
    let n = parse_signature(signature)?;
    let specs = enumerate_index2(n, holonomy)?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for spec in &specs {
        let report = validate_einstein_candidate(spec)?;
        pass &= report.all_hold();
        lines.push(format!(
            "{:<44} family={} dim={:<3} weakly_irreducible={:<12} all_hold={}",
            spec.label,
            spec.family.map_or("-".into(), |f| f.to_string()),
            report.dim,
            report.weakly_irreducible.label(),
            report.all_hold()
        ));
        rows.push(json!({ "spec": spec, "report": report, "all_hold": report.all_hold() }));
    }
    let mut counts = std::collections::BTreeMap::<String, usize>::new();
    for s in &specs {
        *counts.entry(s.family.map_or("-".into(), |f| f.to_string())).or_default() += 1;
    }
    lines.push(format!("{} instances, counts by family {:?}", specs.len(), counts));
    Ok(Payload {
        command: "enumerate".into(),
        inputs: vec![signature.to_string(), holonomy.join(";")],
        pass,
        results: json!({ "n": n, "holonomy": holonomy, "counts": counts, "instances": rows }),
        summary: lines.join("\n"),
    })
}

fn parse_point(s: &str, dim: usize) -> Result<Vec<f64>, InputError> {
    let p: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| InputError(format!("bad point `{s}`")))?;
    if p.len() != dim {
        return Err(InputError(format!("point needs {dim} coordinates")));
    }
    Ok(p)
}

fn cmd_metric(action: &MetricAction) -> Result<Payload, InputError> {
    match action {
        MetricAction::Verify {
            source,
            tol,
            samples,
            harmonic,
        } => {
            let (chart, lambda, text) = chart_from(source)?;
            let pts = chart.sample_points(*samples, source.seed);
            let e = einstein_check(&chart, lambda, &pts, *tol)
                .map_err(|err| InputError(format!("{err} (chart `{}`)", chart.name())))?;
            let mut summary = format!(
                "{}: Ric = {}g residual {:.3e} over {} points (worst at {:?}) -> {}",
                chart.name(),
                lambda,
                e.max_residual,
                e.samples,
                e.worst_point,
                if e.pass { "pass" } else { "FAIL" }
            );
            let mut pass = e.pass;
            let mut lap = Value::Null;
            if let Some(src) = harmonic {
                let h = chart.parse(src)?;
                let r = laplace_check(&chart, &h, &pts, *tol)?;
                summary.push_str(&format!(
                    "\n{}: |Δ({src})| max {:.3e} -> {}",
                    chart.name(),
                    r.max_abs,
                    if r.pass { "pass" } else { "FAIL" }
                ));
                pass &= r.pass;
                lap = serde_json::to_value(&r)?;
            }
            Ok(Payload {
                command: "metric verify".into(),
                inputs: vec![text, format!("{lambda} {tol} {samples} {} {:?}", source.seed, harmonic)],
                pass,
                results: json!({ "einstein": e, "laplace": lap }),
                summary,
            })
        }
        MetricAction::Holonomy {
            source,
            base,
            samples,
            expect_dim,
        } => {
            let (chart, _, text) = chart_from(source)?;
            let base = match base {
                Some(b) => parse_point(b, chart.dim())?,
                None => chart.center(),
            };
            let config = HolonomyConfig {
                samples: *samples,
                seed: source.seed,
                ..HolonomyConfig::default()
            };
            let est = holonomy_estimate(&chart, &base, &config)?;
            let skew_ok = est.max_skew_residual <= 1e-9;
            let dim_ok = expect_dim.is_none_or(|d| d == est.dimension);
            let summary = format!(
                "{}: holonomy dimension {} (gap {:.2e}, skew residual {:.1e}, transport drift {:.1e}){}",
                chart.name(),
                est.dimension,
                est.span.gap,
                est.max_skew_residual,
                est.max_transport_drift,
                match expect_dim {
                    Some(d) if !dim_ok => format!(" -> FAIL, expected {d}"),
                    Some(_) => " -> pass".to_string(),
                    None => String::new(),
                }
            );
            Ok(Payload {
                command: "metric holonomy".into(),
                inputs: vec![text, format!("{base:?} {samples} {} {expect_dim:?}", source.seed)],
                pass: skew_ok && dim_ok,
                results: json!({
                    "dimension": est.dimension,
                    "span": est.span,
                    "max_skew_residual": est.max_skew_residual,
                    "max_transport_drift": est.max_transport_drift,
                    "base": est.base,
                    "elements": est.elements.len(),
                }),
                summary,
            })
        }
    }
}

fn cmd_catalog(action: &CatalogAction) -> Result<Payload, InputError> {
    match action {
        CatalogAction::List => {
            let fams = families();
            let lines: Vec<String> = fams
                .iter()
                .map(|f| {
                    format!(
                        "{:<20} {:<18} {:<12} dim {:<18} berger={} einstein={}{}",
                        f.id,
                        f.name,
                        f.params,
                        f.dim_formula,
                        f.in_berger_list,
                        f.in_einstein_list,
                        if f.experimental { " (experimental)" } else { "" }
                    )
                })
                .collect();
            Ok(Payload {
                command: "catalog list".into(),
                inputs: vec![],
                pass: true,
                results: serde_json::to_value(fams)?,
                summary: lines.join("\n"),
            })
        }
        CatalogAction::Describe { id } => {
            let e = catalog_entry(id)?;
            let summary = format!(
                "{id}: {} in {}, dim {} (formula {}), ambient dimension {}",
                e.family.name,
                e.family.ambient,
                e.algebra.dim(),
                e.family.dim_formula,
                e.algebra.ambient_dim()
            );
            Ok(Payload {
                command: "catalog describe".into(),
                inputs: vec![id.clone()],
                pass: true,
                results: json!({
                    "id": id,
                    "family": e.family,
                    "params": e.params,
                    "dim": e.algebra.dim(),
                    "ambient_dim": e.algebra.ambient_dim(),
                }),
                summary,
            })
        }
    }
}

/// Runs one command. Input errors come back as `Err`.
pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let start = Instant::now();
    let p = match &cli.command {
        Command::Analyze(src) => cmd_analyze(src)?,
        Command::Enumerate { signature, holonomy } => cmd_enumerate(signature, holonomy)?,
        Command::Metric { action } => cmd_metric(action)?,
        Command::Catalog { action } => cmd_catalog(action)?,
    };
    let mut parts = vec![p.command.clone()];
    parts.extend(p.inputs);
    let report = RunReport {
        command: p.command,
        input_digest: digest(&parts),
        version: env!("CARGO_PKG_VERSION").to_string(),
        pass: p.pass,
        results: p.results,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(Outcome {
        code: if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED },
        report,
        summary: p.summary,
    })
}

/// Caps rayon's global pool from `BERGERKIT_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("BERGERKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args`, runs, prints the summary and writes `--json`. Returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    init_threads();
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.summary);
            if let Some(path) = &cli.json {
                let text = serde_json::to_string_pretty(&out.report).expect("report serializes");
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: {path}: {e}");
                    return EXIT_INPUT;
                }
            }
            out.code
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}
