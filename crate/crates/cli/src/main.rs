//! `torus-nodal`: spectra, sign-flip translations and nodal-domain counts on
//! flat tori, with JSON reports and PPM/PGM images.
//!
//! Exit codes: 0 success, 1 a verification reported failure, 2 usage or
//! parse error, 3 unsupported torus regime, 4 unstable count, 5 I/O.

mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use torus_nodal::antisym::{
    antisymmetry_vector, verify_by_sampling, verify_on_basis, AntisymError, ParityRegime,
};
use torus_nodal::arith::{verify_generalized_lemma, ArithError, QuadraticForm};
use torus_nodal::construct::{default_epsilon, run_construction, CurveCheckConfig};
use torus_nodal::nodal::{
    count_nodal_domains, CountConfig, NodalDecomposition, NodalError, NodalSummary,
};
use torus_nodal::render::{labels_pgm, render_eigenfunction, Palette, RenderError, RenderSpec};
use torus_nodal::scan::{parity_scan, ParityScanConfig, ScanError};
use torus_nodal::spectra::{enumerate_eigenspaces, Eigenfunction, SpectraError, TorusShape};

use input::{build_construction, load_eigenfunction, parse_construction, parse_rational};

#[derive(Debug)]
pub enum CliError {
    Failed(String),
    Usage(String),
    Unsupported(String),
    Unstable(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Unstable(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Failed(m)
            | CliError::Usage(m)
            | CliError::Unsupported(m)
            | CliError::Unstable(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<NodalError> for CliError {
    fn from(e: NodalError) -> Self {
        match e {
            NodalError::UnstableCount(_) => CliError::Unstable(e.to_string()),
            NodalError::Spectra(s) => s.into(),
            NodalError::InvalidConfig(_)
            | NodalError::InvalidTau(_)
            | NodalError::ConstantFunction => CliError::Usage(e.to_string()),
            NodalError::VanishesOnGrid => CliError::Failed(e.to_string()),
        }
    }
}

impl From<AntisymError> for CliError {
    fn from(e: AntisymError) -> Self {
        match e {
            AntisymError::UnsupportedRegime(_) => CliError::Unsupported(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Nodal(n) => n.into(),
            RenderError::TooSmall(..) => CliError::Usage(e.to_string()),
            RenderError::TooManyLabels(_) => CliError::Failed(e.to_string()),
        }
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::InvalidForm { .. } | ArithError::NonPositiveForm => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "torus-nodal",
    version,
    about = "Nodal domains of Laplace eigenfunctions on flat tori",
    after_help = "Set NODAL_THREADS to cap the worker threads. Reports are JSON on stdout; \
                  errors are JSON on stderr.\nExit codes: 0 ok, 1 verification failed, 2 usage, \
                  3 unsupported regime, 4 unstable count, 5 I/O."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// List eigenspaces with multiplicities and bases.
    Spectrum(SpectrumArgs),
    /// Sign-flipping translation vector for each eigenspace.
    Antisym(AntisymArgs),
    /// Count the nodal domains of one eigenfunction.
    Count(CountArgs),
    /// Check even counts and domain pairing on random eigenfunctions.
    ParityScan(ScanArgs),
    /// Build and verify an odd-count construction.
    Construct(ConstructArgs),
    /// Write the nodal map of an eigenfunction as a PPM image.
    Render(RenderArgs),
    /// Exhaustively check the parity decomposition for a quadratic form.
    VerifyArith(ArithArgs),
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    /// ρ² as "a/b", or "irrational:<rho>".
    #[arg(long = "rho-sq", default_value = "1/1")]
    rho_sq: String,
    /// Largest eigenvalue, "a/b" or an integer.
    #[arg(long = "lambda-max", default_value = "10")]
    lambda_max: String,
}

#[derive(Args, Serialize)]
struct AntisymArgs {
    #[arg(long = "rho-sq", default_value = "1/1")]
    rho_sq: String,
    #[arg(long = "lambda-max", default_value = "10")]
    lambda_max: String,
    /// Random points for the pointwise check on one random eigenfunction per space.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize, Clone, Copy)]
struct GridArgs {
    /// First grid side; doubled until two successive counts agree.
    #[arg(long = "base-resolution", default_value_t = 256)]
    base_resolution: usize,
    #[arg(long = "max-resolution", default_value_t = 4096)]
    max_resolution: usize,
    /// Boundary threshold relative to the largest sample.
    #[arg(long, default_value_t = 1e-9)]
    tau: f64,
}

impl GridArgs {
    fn config(&self) -> CountConfig {
        CountConfig {
            base_resolution: self.base_resolution,
            max_resolution: self.max_resolution,
            tau_relative: self.tau,
            ..CountConfig::default()
        }
    }
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct Source {
    /// Eigenfunction JSON, inline or as a path:
    /// {"lambda":"a/b","coeffs":[{"family":"cc","m":1,"n":1,"c":1.0}]}
    #[arg(long)]
    eigenfunction: Option<String>,
    /// Named construction "m,n,k[,eps]"; it fixes its own torus.
    #[arg(long)]
    construction: Option<String>,
}

impl Source {
    fn resolve(&self, rho_sq: Option<&str>) -> Result<Eigenfunction, CliError> {
        match (&self.eigenfunction, &self.construction) {
            (Some(e), None) => load_eigenfunction(e, TorusShape::parse(rho_sq.unwrap_or("1/1"))?),
            (None, Some(c)) => Ok(parse_construction(c)?.u),
            _ => Err(CliError::Usage(
                "give exactly one of --eigenfunction or --construction".into(),
            )),
        }
    }
}

#[derive(Args, Serialize)]
struct CountArgs {
    #[command(flatten)]
    source: Source,
    /// ρ² for --eigenfunction (default 1/1).
    #[arg(long = "rho-sq", conflicts_with = "construction")]
    rho_sq: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Also write the label matrix at the stable resolution as PGM.
    #[arg(long = "labels-pgm")]
    labels_pgm: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long = "rho-sq", default_value = "1/1")]
    rho_sq: String,
    #[arg(long = "lambda-max", default_value = "100")]
    lambda_max: String,
    /// Random eigenfunctions per eigenspace.
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Points for the pointwise u(x+v) = −u(x) check.
    #[arg(long = "sampling-points", default_value_t = 1000)]
    sampling_points: usize,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[arg(short, default_value_t = 1)]
    m: u64,
    #[arg(short, default_value_t = 1)]
    n: u64,
    #[arg(short, default_value_t = 2)]
    k: u64,
    /// Perturbation size; defaults to min(0.1, 1/(4kmn)).
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Grid side for extracting nodal points in the ξ-plane.
    #[arg(long = "curve-resolution", default_value_t = 2048)]
    curve_resolution: usize,
    /// Seed for the reflection-symmetry sample points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    image: ImageArgs,
    /// Write the nodal map here.
    #[arg(long)]
    render: Option<PathBuf>,
    #[arg(long = "labels-pgm")]
    labels_pgm: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone, Copy)]
struct ImageArgs {
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
    /// "sign" or "domains".
    #[arg(long, default_value = "sign")]
    palette: Palette,
}

impl ImageArgs {
    fn spec(&self) -> Result<RenderSpec, CliError> {
        Ok(RenderSpec::new(self.width, self.height, self.palette)?)
    }
}

#[derive(Args, Serialize)]
struct RenderArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long = "rho-sq", conflicts_with = "construction")]
    rho_sq: Option<String>,
    #[command(flatten)]
    image: ImageArgs,
    /// Output PPM path.
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long = "labels-pgm")]
    labels_pgm: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ArithArgs {
    /// Form αm² + βn² with α, β odd and α + β ≡ 2 (mod 4).
    #[arg(long, default_value_t = 1)]
    alpha: u64,
    #[arg(long, default_value_t = 1)]
    beta: u64,
    #[arg(long = "lambda-max", default_value_t = 1_000_000)]
    lambda_max: u64,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_labels(path: &Option<PathBuf>, d: &NodalDecomposition) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, &labels_pgm(d)?),
        None => Ok(()),
    }
}

/// A finished report, and whether the verification it describes passed.
struct Outcome {
    result: Value,
    pass: bool,
}

fn ok(result: impl Serialize) -> Result<Outcome, CliError> {
    Ok(Outcome {
        result: serde_json::to_value(result).expect("reports serialize"),
        pass: true,
    })
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let torus = TorusShape::parse(&a.rho_sq)?;
    let spaces = enumerate_eigenspaces(&torus, parse_rational(&a.lambda_max, "lambda-max")?)?;
    ok(json!({ "rho_sq": torus.to_string(), "eigenspaces": spaces }))
}

fn antisym(a: &AntisymArgs) -> Result<Outcome, CliError> {
    use rand::SeedableRng;
    let torus = TorusShape::parse(&a.rho_sq)?;
    let regime = ParityRegime::of(&torus)?;
    let spaces = enumerate_eigenspaces(&torus, parse_rational(&a.lambda_max, "lambda-max")?)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    let mut pass = true;
    for s in spaces.iter().filter(|s| !s.eigenvalue.is_zero()) {
        let v = antisymmetry_vector(s, &torus)?;
        let negates_basis = verify_on_basis(s, &v).is_ok_and(|act| act.is_negative_identity());
        let u = Eigenfunction::random(torus, s.clone(), &mut rng);
        let residual = verify_by_sampling(&u, &v, a.samples, a.seed);
        pass &= negates_basis && residual <= 1e-12 * u.coefficient_scale().max(1.0);
        let (x1, x2) = v.to_real(&torus);
        rows.push(json!({
            "lambda": s.eigenvalue,
            "multiplicity": s.multiplicity(),
            "vector": v,
            "vector_real": [x1, x2],
            "negates_basis": negates_basis,
            "sampling_residual": residual,
        }));
    }
    Ok(Outcome {
        result: json!({ "rho_sq": torus.to_string(), "regime": regime, "eigenspaces": rows, "pass": pass }),
        pass,
    })
}

fn count(a: &CountArgs) -> Result<Outcome, CliError> {
    let u = a.source.resolve(a.rho_sq.as_deref())?;
    let r = count_nodal_domains(&u, &a.grid.config())?;
    write_labels(&a.labels_pgm, &r.decomposition)?;
    let summary = NodalSummary::new(&r.decomposition, &u.torus);
    ok(json!({
        "rho_sq": u.torus.to_string(),
        "lambda": u.eigenspace.eigenvalue,
        "count": summary.count,
        "signs": summary.signs,
        "areas": summary.areas,
        "resolution": r.resolution,
        "history": r.history,
    }))
}

fn scan(a: &ScanArgs) -> Result<Outcome, CliError> {
    let torus = TorusShape::parse(&a.rho_sq)?;
    let cfg = ParityScanConfig {
        samples_per_eigenspace: a.samples,
        seed: a.seed,
        sampling_points: a.sampling_points,
        count: a.grid.config(),
    };
    cfg.count.validate()?;
    let report = parity_scan(&torus, parse_rational(&a.lambda_max, "lambda-max")?, &cfg).map_err(
        |e| match e {
            ScanError::Regime(r) => CliError::from(r),
            ScanError::Spectra(s) => CliError::from(s),
        },
    )?;
    let pass = report.pass;
    Ok(Outcome {
        result: serde_json::to_value(report).expect("reports serialize"),
        pass,
    })
}

fn construct(a: &ConstructArgs) -> Result<Outcome, CliError> {
    let eps = a
        .eps
        .unwrap_or_else(|| default_epsilon(a.m.max(1), a.n.max(1), a.k.max(1)));
    let c = build_construction(a.m, a.n, a.k, eps)?;
    let curve = CurveCheckConfig {
        resolution: a.curve_resolution,
        seed: a.seed,
        ..CurveCheckConfig::default()
    };
    let report = run_construction(&c, &a.grid.config(), &curve)?;
    if let Some(path) = &a.render {
        write_file(path, &render_eigenfunction(&c.u, &a.image.spec()?)?)?;
    }
    if a.labels_pgm.is_some() {
        let r = count_nodal_domains(&c.u, &a.grid.config())?;
        write_labels(&a.labels_pgm, &r.decomposition)?;
    }
    // The report carries its own pass flag; a construction that runs to
    // completion is not a command failure.
    ok(report)
}

fn render(a: &RenderArgs) -> Result<Outcome, CliError> {
    let spec = a.image.spec()?;
    let u = a.source.resolve(a.rho_sq.as_deref())?;
    let bytes = render_eigenfunction(&u, &spec)?;
    write_file(&a.output, &bytes)?;
    if a.labels_pgm.is_some() {
        let g = torus_nodal::nodal::sign_grid_relative(&u, spec.width, spec.height, 1e-9)?;
        write_labels(&a.labels_pgm, &torus_nodal::label_components(&g))?;
    }
    ok(json!({
        "output": a.output,
        "rho_sq": u.torus.to_string(),
        "lambda": u.eigenspace.eigenvalue,
        "bytes": bytes.len(),
    }))
}

fn verify_arith(a: &ArithArgs) -> Result<Outcome, CliError> {
    let report = verify_generalized_lemma(QuadraticForm::new(a.alpha, a.beta)?, a.lambda_max)?;
    let pass = report.passed();
    Ok(Outcome {
        result: serde_json::to_value(report).expect("reports serialize"),
        pass,
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("NODAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "NODAL_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Antisym(a) => antisym(a),
        Command::Count(a) => count(a),
        Command::ParityScan(a) => scan(a),
        Command::Construct(a) => construct(a),
        Command::Render(a) => render(a),
        Command::VerifyArith(a) => verify_arith(a),
    }
}

/// Writes a report, tolerating a closed pipe on the reader's side.
fn emit(mut out: impl std::io::Write, report: &Value) {
    let text = serde_json::to_string_pretty(report).expect("json");
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = serde_json::to_value(&cli.command).expect("config serializes");
    match run(&cli) {
        Ok(out) => {
            let report = json!({ "config": config, "threads": rayon::current_num_threads(), "result": out.result });
            emit(std::io::stdout(), &report);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let report = json!({ "config": config, "error": e.message(), "exit_code": e.code() });
            emit(std::io::stderr(), &report);
            ExitCode::from(e.code())
        }
    }
}
