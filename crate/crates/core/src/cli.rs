//! Command-line front end.
//!
//! Exit codes: 0 when every verdict passes, 1 when any fails (or output
//! cannot be written), 2 when any is inconclusive, 64 on usage errors.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

use crate::cohomology::dims_table;
use crate::error::Error;
use crate::integrate::{sample_strata, DEFAULT_SUBSTREAMS};
use crate::manifold::{Chart, CrModel, Point};
use crate::modelspace::{
    density_bruteforce, extremal_checks, model_density, operator_residual, weight_gap, BruteforceSpec, ModelParams,
    TestForm,
};
use crate::morse::{build_report, MorseConfig, MorseReport};
use crate::report::{fmt_f64, to_csv, to_json};
use crate::szego::{szego_profile, SzegoConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const WORKERS_ENV: &str = "CRMORSE_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "crmorse",
    version,
    about = "Kohn-Rossi dimensions, Szego kernels and Morse inequalities on CR manifolds with circle action"
)]
pub struct Cli {
    /// Worker threads; defaults to CRMORSE_WORKERS, then to the number of CPUs.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in model families.
    Models(OutArgs),
    /// Exact dimensions of H^q_{b,m}.
    Dims(DimsArgs),
    /// Monte Carlo integrals of |det L| over the strata X(q).
    Integrate(IntegrateArgs),
    /// Scaled Szego kernel values m^{-(n-1)} Pi_m at probe points.
    Szego(SzegoArgs),
    /// Model operator density: closed form against brute force.
    ModelSpace(ModelSpaceArgs),
    /// Weight gap and operator residual of the scaled chart.
    Scaling(ScalingArgs),
    /// Full Morse-inequality report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: CrModel,
    /// Inclusive range `a..b`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "0..20")]
    pub m: (i64, i64),
    /// Inclusive degree range; defaults to `0..n-1`.
    #[arg(long, value_parser = parse_range)]
    pub q: Option<(i64, i64)>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: CrModel,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_SUBSTREAMS)]
    pub substreams: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SzegoArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: CrModel,
    /// Inclusive range `a..b` or comma-separated list.
    #[arg(long, value_parser = parse_m_list, default_value = "1..50")]
    pub m: MList,
    /// Orbit-space quadrature resolution.
    #[arg(long, default_value_t = 96)]
    pub n_s: usize,
    #[arg(long, default_value_t = 64)]
    pub n_gamma: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ModelSpaceArgs {
    /// Comma-separated nonzero eigenvalues, e.g. `-1,2`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long, default_value_t = 8)]
    pub max_degree: usize,
    /// Gauss-Hermite nodes per real axis.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, value_parser = parse_model, default_value = "bundle:d=1,c=0")]
    pub model: CrModel,
    /// Comma-separated scaling parameters.
    #[arg(long, value_delimiter = ',', default_value = "1e2,1e3,1e4,1e5,1e6")]
    pub m: Vec<f64>,
    /// Index into the model's chart anchors (bundle poles or axis points).
    #[arg(long, default_value_t = 0)]
    pub anchor: usize,
    /// Width of the Gaussian test function.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: CrModel,
    #[arg(long, default_value_t = 1)]
    pub m_min: i64,
    #[arg(long, default_value_t = 200)]
    pub m_max: i64,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_SUBSTREAMS)]
    pub substreams: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_model(s: &str) -> Result<CrModel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Accepts integers and integral floats such as `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a count"))?;
    if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(63) {
        Ok(x as u64)
    } else {
        Err(format!("'{s}' is not a nonnegative integer"))
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in '{s}'"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in '{s}'"))?;
    if a > b {
        return Err(format!("empty range '{s}'"));
    }
    Ok((a, b))
}

/// Fourier indices given as `a..b` or `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MList(pub Vec<i64>);

fn parse_m_list(s: &str) -> Result<MList, String> {
    if s.contains("..") {
        let (a, b) = parse_range(s)?;
        return Ok(MList((a..=b).collect()));
    }
    let v: Result<Vec<i64>, String> =
        s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad integer '{t}'"))).collect();
    v.map(MList)
}

/// Ordered key-value record of a run, embedded in every output.
#[derive(Debug, Clone, Default)]
pub struct RunConfig(pub Vec<(String, String)>);

impl RunConfig {
    fn new(command: &str, workers: usize) -> Self {
        Self(vec![
            ("tool".into(), format!("crmorse {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.into()),
            ("workers".into(), workers.to_string()),
        ])
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.into(), value.to_string()));
        self
    }
}

impl Serialize for RunConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, v)))
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidModel(_)
            | Error::NonEffectiveAction { .. }
            | Error::InvalidParams(_)
            | Error::UndesignatedAnchor(_)
            | Error::SignatureMismatch { .. }
            | Error::ChartRadiusExceeded { .. }
            | Error::TestFormSupport { .. }
            | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code. Results go to `--out` or `stdout`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let workers = match cli.workers {
        Some(0) => {
            let _ = writeln!(stderr, "error: --workers must be positive");
            return EXIT_USAGE;
        }
        Some(w) => w,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAIL;
        }
    };
    let result = pool.install(|| execute(&cli.command, workers)).and_then(|(code, text)| {
        emit(out_args(&cli.command), &text, stdout)?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INCONCLUSIVE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn emit(out: &OutArgs, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn out_args(cmd: &Command) -> &OutArgs {
    match cmd {
        Command::Models(a) => a,
        Command::Dims(a) => &a.out,
        Command::Integrate(a) => &a.out,
        Command::Szego(a) => &a.out,
        Command::ModelSpace(a) => &a.out,
        Command::Scaling(a) => &a.out,
        Command::Verify(a) => &a.out,
    }
}

/// Exit code and document text.
type Output = Result<(i32, String), Failure>;

fn execute(cmd: &Command, workers: usize) -> Output {
    match cmd {
        Command::Models(_) => models(workers),
        Command::Dims(a) => dims(a, workers),
        Command::Integrate(a) => integrate(a, workers),
        Command::Szego(a) => szego(a, workers),
        Command::ModelSpace(a) => model_space(a, workers),
        Command::Scaling(a) => scaling(a, workers),
        Command::Verify(a) => verify(a, workers),
    }
}

const BUILTIN: [&str; 5] = ["round", "round:w=1,2", "ellipsoid", "bundle:d=1,c=0", "bundle:d=1,c=3"];

fn models(workers: usize) -> Output {
    let cfg = RunConfig::new("models", workers);
    let mut rows = Vec::new();
    for s in BUILTIN {
        let m: CrModel = s.parse()?;
        let desc: Vec<String> = m.descriptor().iter().map(|(k, v)| format!("{k}={v}")).collect();
        rows.push(vec![m.to_string(), m.n().to_string(), desc.join(";")]);
    }
    let text = to_csv(&cfg.0, &["model", "n", "descriptor"], &rows)?;
    Ok((EXIT_PASS, text))
}

fn dims(a: &DimsArgs, workers: usize) -> Output {
    let (q0, q1) = a.q.unwrap_or((0, a.model.n() as i64 - 1));
    if q0 < 0 {
        return Err(Failure::Usage(format!("negative degree {q0}")));
    }
    let cfg = RunConfig::new("dims", workers)
        .with("model", &a.model)
        .with("m", format!("{}..{}", a.m.0, a.m.1))
        .with("q", format!("{q0}..{q1}"));
    let table = dims_table(&a.model, a.m.0..=a.m.1, q0 as usize..=q1 as usize);
    let rows: Vec<Vec<String>> = table
        .rows()
        .map(|r| {
            vec![
                r.q.to_string(),
                r.m.to_string(),
                r.dim.map(|d| d.to_string()).unwrap_or_default(),
                r.method.as_str().into(),
            ]
        })
        .collect();
    let text = to_csv(&cfg.0, &["q", "m", "dim", "method"], &rows)?;
    Ok((EXIT_PASS, text))
}

fn integrate(a: &IntegrateArgs, workers: usize) -> Output {
    let cfg = RunConfig::new("integrate", workers)
        .with("model", &a.model)
        .with("samples", a.samples)
        .with("seed", a.seed)
        .with("substreams", a.substreams);
    let samples = sample_strata(&a.model, a.samples, a.seed, a.substreams)?;
    let cfg = cfg.with("rejected", samples.rejected).with("degenerate", samples.degenerate);
    let rows: Vec<Vec<String>> = (0..a.model.n())
        .map(|q| {
            let e = samples.stratum(q);
            vec![
                a.model.to_string(),
                q.to_string(),
                a.samples.to_string(),
                a.seed.to_string(),
                fmt_f64(e.value),
                fmt_f64(e.stderr),
            ]
        })
        .collect();
    let text = to_csv(&cfg.0, &["model", "q", "N", "seed", "value", "stderr"], &rows)?;
    Ok((if samples.inconclusive() { EXIT_INCONCLUSIVE } else { EXIT_PASS }, text))
}

fn complex(c: &num_complex::Complex64) -> String {
    format!("({} {})", fmt_f64(c.re), fmt_f64(c.im))
}

fn describe(p: &Point) -> String {
    match p {
        Point::Ambient(z) => z.iter().map(complex).collect::<Vec<_>>().join(" "),
        Point::Bundle { chart, z, theta } => format!("{chart:?} {} theta={}", complex(z), fmt_f64(*theta)),
    }
}

fn szego(a: &SzegoArgs, workers: usize) -> Output {
    let probes = a.model.default_probes();
    let scfg = SzegoConfig { n_s: a.n_s, n_gamma: a.n_gamma, error_estimate: true };
    let mut cfg = RunConfig::new("szego", workers)
        .with("model", &a.model)
        .with("m", a.m.0.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
        .with("n_s", a.n_s)
        .with("n_gamma", a.n_gamma);
    let profile = szego_profile(&a.model, &a.m.0, &probes, &scfg)?;
    for (id, p) in profile.probes.iter().zip(&probes) {
        cfg = cfg.with(&format!("probe.{id}"), describe(p));
    }
    let mut rows = Vec::new();
    for (i, m) in profile.m_list.iter().enumerate() {
        for (j, id) in profile.probes.iter().enumerate() {
            rows.push(vec![m.to_string(), id.clone(), fmt_f64(profile.values[i][j]), fmt_f64(profile.errors[i][j])]);
        }
    }
    let text = to_csv(&cfg.0, &["m", "probe", "value", "error"], &rows)?;
    Ok((EXIT_PASS, text))
}

#[derive(Serialize)]
struct ModelSpaceDoc<'a> {
    run: &'a RunConfig,
    lambdas: &'a [f64],
    q: usize,
    signature: usize,
    model_density: f64,
    bruteforce_density: f64,
    status: &'static str,
    extremal: Option<crate::modelspace::ExtremalChecks>,
}

fn model_space(a: &ModelSpaceArgs, workers: usize) -> Output {
    let params = ModelParams::new(a.lambdas.clone(), a.q)?;
    let spec = BruteforceSpec { max_degree: a.max_degree, nodes: a.nodes, ..BruteforceSpec::default() };
    let cfg = RunConfig::new("model-space", workers)
        .with("lambdas", a.lambdas.iter().map(|l| fmt_f64(*l)).collect::<Vec<_>>().join(","))
        .with("q", a.q)
        .with("max_degree", a.max_degree)
        .with("nodes", a.nodes);
    let exact = model_density(&params);
    let brute = density_bruteforce(&params, &spec)?;
    let ok = if exact == 0.0 { brute.abs() <= 1e-3 } else { (brute - exact).abs() <= 0.01 * exact.abs() };
    let extremal = if params.signature() == a.q && params.lambdas.len() <= 2 {
        Some(extremal_checks(&params, a.nodes)?)
    } else {
        None
    };
    let doc = ModelSpaceDoc {
        run: &cfg,
        lambdas: &a.lambdas,
        q: a.q,
        signature: params.signature(),
        model_density: exact,
        bruteforce_density: brute,
        status: if ok { "pass" } else { "fail" },
        extremal,
    };
    let text = to_json(&doc)?;
    Ok((if ok { EXIT_PASS } else { EXIT_FAIL }, text))
}

fn chart_anchors(model: &CrModel) -> Vec<Point> {
    match model {
        CrModel::Bundle(_) => [Chart::North, Chart::South]
            .into_iter()
            .map(|chart| Point::Bundle { chart, z: num_complex::Complex64::new(0.0, 0.0), theta: 0.0 })
            .collect(),
        CrModel::Hypersurface(h) => h.axis_points().into_iter().map(Point::Ambient).collect(),
    }
}

fn scaling(a: &ScalingArgs, workers: usize) -> Output {
    let anchors = chart_anchors(&a.model);
    let anchor = anchors
        .get(a.anchor)
        .ok_or_else(|| Failure::Usage(format!("anchor index {} out of range 0..{}", a.anchor, anchors.len())))?;
    let chart = a.model.brt_chart(anchor)?;
    let test = TestForm { sigma: a.sigma, ..TestForm::default() };
    let cfg = RunConfig::new("scaling", workers)
        .with("model", &a.model)
        .with("anchor", describe(anchor))
        .with("lambdas", chart.lambdas.iter().map(|l| fmt_f64(*l)).collect::<Vec<_>>().join(","))
        .with("sigma", fmt_f64(a.sigma));
    let mut rows = Vec::new();
    let mut inconclusive = false;
    for &m in &a.m {
        let mut row = vec![fmt_f64(m), fmt_f64(weight_gap(&chart, m)?)];
        for q in 0..2 {
            if chart.dim() == 1 {
                let r = operator_residual(&chart, m, q, &test)?;
                inconclusive |= r.inconclusive;
                row.extend([fmt_f64(r.residual), fmt_f64(r.fd_error)]);
            } else {
                row.extend([fmt_f64(f64::NAN), fmt_f64(f64::NAN)]);
            }
        }
        rows.push(row);
    }
    let header = ["m", "weight_gap", "residual_q0", "fd_error_q0", "residual_q1", "fd_error_q1"];
    let text = to_csv(&cfg.0, &header, &rows)?;
    Ok((if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_PASS }, text))
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    run: &'a RunConfig,
    status: &'static str,
    #[serde(flatten)]
    report: &'a MorseReport,
}

fn verify(a: &VerifyArgs, workers: usize) -> Output {
    let mcfg =
        MorseConfig { m_min: a.m_min, m_max: a.m_max, samples: a.samples, seed: a.seed, substreams: a.substreams };
    let cfg = RunConfig::new("verify", workers)
        .with("model", &a.model)
        .with("m_min", a.m_min)
        .with("m_max", a.m_max)
        .with("samples", a.samples)
        .with("seed", a.seed)
        .with("substreams", a.substreams);
    let report = build_report(&a.model, &mcfg)?;
    let code = report.exit_code();
    let status = match code {
        EXIT_PASS => "pass",
        EXIT_FAIL => "fail",
        _ => "inconclusive",
    };
    let text = to_json(&VerifyDoc { run: &cfg, status, report: &report })?;
    Ok((code, text))
}
