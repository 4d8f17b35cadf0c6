//! Command-line front end. [`run`] parses arguments, dispatches the
//! subcommand and returns the text to print, so it can be driven from tests
//! without spawning a process.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use liftkit::codes::{
    css_to_complex, distance, gen_cycle, gen_fiber_bundle, gen_hypergraph_product, gen_toric,
    systolic_ratio, FiberBundleSpec, Side,
};
use liftkit::decongestion::{
    basis_weight, cycle_basis, intersection_stats, multiplicity_stats, random_cubic_graph,
    verify_spanning, verify_weakly_fundamental, CycleBasisOptions, Multigraph,
};
use liftkit::io::{self, Document};
use liftkit::lifting::{
    fiber_bundle_lift, general_lift, naive_lift, product_lift, sparse_lift, D1Lift, LiftResult,
};
use liftkit::skeleton::{
    attach_qubit_handles, attach_z_handles, build_x, congestion_audit, double, kill_pi1, mc_push,
    to_dot, verify_middle_complex, volume_report, HandleSkeleton, PairingPolicy, PushOptions,
    Stage,
};
use liftkit::zhomology::{homology_z, probe_minor_gcd, snf, try_sparse_lu};
use liftkit::{BinMatrix, ChainComplex2, ChainComplexZ, Error, IntMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

/// Version of the JSON report layout. Bumped in the minor position when
/// fields are added and in the major position when they change meaning.
pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input files; exit status 2.
    Usage(String),
    /// The input was understood but the operation failed; exit status 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::WrongShape(_)
            | Error::DimensionMismatch(_)
            | Error::IndexOutOfRange { .. }
            | Error::DuplicateEntry { .. }
            | Error::DegreeOutOfRange { .. }
            | Error::InvalidTwist { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "liftkit", version, about = "Integer lifts of binary chain complexes and related tools")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest weight examined by distance searches.
    #[arg(long = "budget-weight", global = true)]
    pub budget_weight: Option<usize>,
    /// Cycle-basis restarts after the first attempt.
    #[arg(long = "budget-retries", global = true, default_value_t = 32)]
    pub budget_retries: usize,
    /// Fill-in allowed in the sparse LU probe.
    #[arg(long = "budget-fill", global = true)]
    pub budget_fill: Option<usize>,
    /// Monte Carlo samples.
    #[arg(long = "budget-samples", global = true, default_value_t = 100_000)]
    pub budget_samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a complex, code or graph.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Check that consecutive boundaries compose to zero.
    Validate { input: Option<PathBuf> },
    /// Lift a binary complex to the integers.
    Lift(LiftArgs),
    /// Homology over the integers or over F2.
    Homology {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "z")]
        ring: Ring,
    },
    /// Smith normal form of a matrix.
    Snf { input: Option<PathBuf> },
    /// Sparse LU factorization over F2.
    LuProbe {
        input: Option<PathBuf>,
        /// Boundary to factor when the input is a complex.
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// gcd of sampled maximal minors.
    MinorGcd {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Minimum weight of a nontrivial logical.
    Distance {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "homology")]
        side: SideArg,
    },
    /// Code-level systolic ratio.
    Sr { input: Option<PathBuf> },
    /// Weakly fundamental cycle basis of a graph.
    CycleBasis {
        input: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long = "degree-cap", default_value_t = 16)]
        degree_cap: usize,
    },
    /// Build the handle skeleton of a lifted complex.
    Skeleton {
        input: Option<PathBuf>,
        #[arg(long, default_value = "double")]
        stage: String,
        #[arg(long, value_enum, default_value = "json")]
        report: Report,
        /// Pair half-edges at random (under the seed) instead of first-fit.
        #[arg(long)]
        random_pairing: bool,
    },
    /// Monte Carlo estimate of radial push area inflation.
    McPush {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        offset: f64,
        #[arg(long, default_value_t = 50.0)]
        ceiling: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Cycle graph as a 1-complex.
    Cycle {
        #[arg(long)]
        m: usize,
    },
    /// Toric code complex.
    Toric {
        #[arg(long = "L")]
        l: usize,
        /// Emit the code in `css` format.
        #[arg(long)]
        css: bool,
    },
    /// Hypergraph product of two 1-complexes.
    Hgp {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        css: bool,
    },
    /// Twisted product of a 1-complex with a circle of length m.
    Bundle {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        twists: Option<PathBuf>,
    },
    /// Uniform random simple cubic graph.
    Cubic {
        #[arg(long)]
        v: usize,
    },
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// Binary complex to lift; optional for `product` and `bundle`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Lifted first boundary for `sparse` (an `int` matrix); naive when absent.
    #[arg(long)]
    pub d1: Option<PathBuf>,
    /// Factors for `product`.
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Bundle description for `bundle`.
    #[arg(long)]
    pub base: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub twists: Option<PathBuf>,
    /// Where to write the JSON report when the complex goes to standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Naive,
    General,
    Sparse,
    Bundle,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ring {
    Z,
    F2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Homology,
    Cohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Json,
    Dot,
}

/// What a run produced: text for standard output, text for standard error,
/// and files to write.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    fn primary(global: &Global, text: String) -> Self {
        match &global.out {
            Some(p) => Output {
                files: vec![(p.clone(), text)],
                ..Default::default()
            },
            None => Output {
                stdout: text,
                ..Default::default()
            },
        }
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> CliResult<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_file(p: &Path) -> CliResult<String> {
    fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
}

fn with_context<T>(path: Option<&Path>, r: liftkit::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let err = CliError::from(e);
        let name = path.map_or("<stdin>".to_string(), |p| p.display().to_string());
        match err {
            CliError::Usage(m) => CliError::Usage(format!("{name}: {m}")),
            CliError::Domain(m) => CliError::Domain(m),
        }
    })
}

fn as_complex2(doc: Document) -> CliResult<ChainComplex2> {
    match doc {
        Document::Complex2(c) => Ok(c),
        Document::ComplexZ(c) => Ok(c.mod2()),
        Document::Css(code) => Ok(css_to_complex(&code)),
        Document::Bin(m) => ChainComplex2::from_boundaries(vec![m]).map_err(CliError::from),
        _ => Err(CliError::Usage("expected a complex2, complexz, css or f2 document".into())),
    }
}

fn as_int_matrix(doc: Document, degree: usize) -> CliResult<IntMatrix> {
    match doc {
        Document::Int(m) => Ok(m),
        Document::Bin(m) => Ok(m.naive_lift()),
        Document::ComplexZ(c) => boundary(c.boundaries(), degree).cloned(),
        Document::Complex2(c) => boundary(c.boundaries(), degree).map(BinMatrix::naive_lift),
        _ => Err(CliError::Usage("expected a matrix or complex document".into())),
    }
}

fn as_bin_matrix(doc: Document, degree: usize) -> CliResult<BinMatrix> {
    match doc {
        Document::Bin(m) => Ok(m),
        Document::Int(m) => Ok(m.mod2()),
        Document::Complex2(c) => boundary(c.boundaries(), degree).cloned(),
        Document::ComplexZ(c) => boundary(c.boundaries(), degree).map(IntMatrix::mod2),
        _ => Err(CliError::Usage("expected a matrix or complex document".into())),
    }
}

fn boundary<T>(bs: &[T], degree: usize) -> CliResult<&T> {
    bs.get(degree).ok_or_else(|| {
        CliError::Usage(format!("boundary {degree} does not exist ({} boundaries)", bs.len()))
    })
}

/// JSON report with the schema version, the command name and the seed.
fn envelope(command: &str, seed: u64, body: Value) -> String {
    let mut obj = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
    });
    if let (Value::Object(o), Value::Object(b)) = (&mut obj, body) {
        o.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&obj).expect("json values serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> CliResult<Output>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                return Ok(Output {
                    stdout: e.render().to_string(),
                    ..Default::default()
                })
            }
            _ => return Err(CliError::Usage(e.render().to_string())),
        },
    };
    execute(&cli, stdin)
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> CliResult<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen { what } => gen(g, what),
        Command::Validate { input } => {
            let text = read_input(input.as_deref(), stdin)?;
            let doc = with_context(input.as_deref(), io::parse_document(&text))?;
            let (kind, v) = match &doc {
                Document::Complex2(c) => ("complex2", c.validate()),
                Document::ComplexZ(c) => ("complexz", c.validate()),
                Document::Css(code) => ("css", css_to_complex(code).validate()),
                _ => return Err(CliError::Usage("validate expects a complex or code".into())),
            };
            let out = envelope("validate", g.seed, json!({ "kind": kind, "ok": v.ok, "violation": v.violation }));
            if v.ok {
                Ok(Output::primary(g, out))
            } else {
                Err(CliError::Domain(format!(
                    "boundaries do not compose to zero: first violation {:?}\n{out}",
                    v.violation.expect("not ok")
                )))
            }
        }
        Command::Lift(args) => lift(g, args, stdin),
        Command::Homology { input, ring } => {
            let text = read_input(input.as_deref(), stdin)?;
            let doc = with_context(input.as_deref(), io::parse_document(&text))?;
            let body = match ring {
                Ring::Z => {
                    let c = match doc {
                        Document::ComplexZ(c) => c,
                        other => naive_lift(&as_complex2(other)?),
                    };
                    let h = homology_z(&c)?;
                    json!({
                        "ring": "z",
                        "dims": c.dims(),
                        "free_ranks": h.free_ranks(),
                        "torsion_free": h.is_torsion_free(),
                        "degrees": to_value(&h.degrees),
                    })
                }
                Ring::F2 => {
                    let c = as_complex2(doc)?;
                    json!({ "ring": "f2", "dims": c.dims(), "betti": c.betti_numbers() })
                }
            };
            Ok(Output::primary(g, envelope("homology", g.seed, body)))
        }
        Command::Snf { input } => {
            let text = read_input(input.as_deref(), stdin)?;
            let m = as_int_matrix(with_context(input.as_deref(), io::parse_document(&text))?, 0)?;
            let s = snf(&m);
            let factors: Vec<String> = s.invariant_factors.iter().map(ToString::to_string).collect();
            let torsion: Vec<String> = s.torsion().iter().map(ToString::to_string).collect();
            let body = json!({ "rows": m.nrows(), "cols": m.ncols(), "rank": s.rank, "invariant_factors": factors, "torsion": torsion });
            Ok(Output::primary(g, envelope("snf", g.seed, body)))
        }
        Command::LuProbe { input, degree } => {
            let text = read_input(input.as_deref(), stdin)?;
            let m = as_bin_matrix(with_context(input.as_deref(), io::parse_document(&text))?, *degree)?;
            let f = try_sparse_lu(&m, g.budget_fill)?;
            let det = f.certificate_determinant().to_string();
            let body = json!({
                "rows": m.nrows(),
                "cols": m.ncols(),
                "nnz": m.nnz(),
                "summary": to_value(&f.summary()),
                "certificate_determinant": det,
            });
            Ok(Output::primary(g, envelope("lu-probe", g.seed, body)))
        }
        Command::MinorGcd { input, trials, degree } => {
            let text = read_input(input.as_deref(), stdin)?;
            let m = as_int_matrix(with_context(input.as_deref(), io::parse_document(&text))?, *degree)?;
            let r = probe_minor_gcd(&m, *trials, g.seed)?;
            Ok(Output::primary(g, envelope("minor-gcd", g.seed, to_value(&r))))
        }
        Command::Distance { input, side } => {
            let text = read_input(input.as_deref(), stdin)?;
            let c = as_complex2(with_context(input.as_deref(), io::parse_document(&text))?)?;
            let side = match side {
                SideArg::Homology => Side::Homology,
                SideArg::Cohomology => Side::Cohomology,
            };
            let d = distance(&c, side, g.budget_weight)?;
            let body = json!({ "side": side, "distance": d.distance, "witness": d.witness, "qubits": c.dims().get(1) });
            Ok(Output::primary(g, envelope("distance", g.seed, body)))
        }
        Command::Sr { input } => {
            let text = read_input(input.as_deref(), stdin)?;
            let c = as_complex2(with_context(input.as_deref(), io::parse_document(&text))?)?;
            let r = systolic_ratio(&c, g.budget_weight)?;
            Ok(Output::primary(g, envelope("sr", g.seed, to_value(&r))))
        }
        Command::CycleBasis { input, verify, stats, degree_cap } => {
            let text = read_input(input.as_deref(), stdin)?;
            let graph = with_context(input.as_deref(), io::parse_graph(&text))?;
            cycle_basis_cmd(g, &graph, *verify, *stats, *degree_cap)
        }
        Command::Skeleton { input, stage, report, random_pairing } => {
            let stage: Stage = stage.parse().map_err(CliError::from)?;
            let text = read_input(input.as_deref(), stdin)?;
            let c = match with_context(input.as_deref(), io::parse_document(&text))? {
                Document::ComplexZ(c) => c,
                _ => return Err(CliError::Usage("skeleton expects a lifted (complexz) three-term complex".into())),
            };
            let policy = if *random_pairing {
                PairingPolicy::Random(g.seed)
            } else {
                PairingPolicy::FirstFit
            };
            let sk = build_skeleton(&c, stage, policy, g.seed)?;
            let text = match report {
                Report::Dot => to_dot(&sk),
                Report::Json => envelope("skeleton", g.seed, skeleton_report(&sk, &c)?),
            };
            Ok(Output::primary(g, text))
        }
        Command::McPush { k, n, offset, ceiling } => {
            let opts = PushOptions {
                samples: g.budget_samples,
                seed: g.seed,
                offset: *offset,
                ceiling: *ceiling,
                ..PushOptions::new(*k, *n)
            };
            let r = mc_push(&opts)?;
            let out = envelope("mc-push", g.seed, to_value(&r));
            if r.finite && r.below_ceiling {
                Ok(Output::primary(g, out))
            } else {
                Err(CliError::Domain(format!("mean {} is not finite or above the ceiling {}\n{out}", r.mean, r.ceiling)))
            }
        }
    }
}

fn gen(g: &Global, what: &GenCommand) -> CliResult<Output> {
    let one_complex = |p: &Path| -> CliResult<ChainComplex2> {
        let text = read_file(p)?;
        as_complex2(with_context(Some(p), io::parse_document(&text))?)
    };
    let emit = |c: &ChainComplex2, css: bool| -> CliResult<String> {
        if css {
            Ok(io::write_css(&liftkit::codes::complex_to_css(c)?))
        } else {
            Ok(io::write_complex2(c))
        }
    };
    let text = match what {
        GenCommand::Cycle { m } => io::write_complex2(&gen_cycle(*m)),
        GenCommand::Toric { l, css } => emit(&gen_toric(*l), *css)?,
        GenCommand::Hgp { a, b, css } => emit(&gen_hypergraph_product(&one_complex(a)?, &one_complex(b)?)?, *css)?,
        GenCommand::Bundle { base, m, twists } => {
            let spec = bundle_spec(&one_complex(base)?, *m, twists.as_deref())?;
            io::write_complex2(&gen_fiber_bundle(&spec))
        }
        GenCommand::Cubic { v } => {
            let graph = random_cubic_graph(*v, &mut ChaCha8Rng::seed_from_u64(g.seed))?;
            io::write_graph(&graph)
        }
    };
    Ok(Output::primary(g, text))
}

fn bundle_spec(base: &ChainComplex2, m: usize, twists: Option<&Path>) -> CliResult<FiberBundleSpec> {
    let twists = match twists {
        Some(p) => with_context(Some(p), io::parse_twists(&read_file(p)?))?,
        None => Vec::new(),
    };
    Ok(FiberBundleSpec::new(base.clone(), m, twists)?)
}

fn lift(g: &Global, args: &LiftArgs, stdin: &mut dyn Read) -> CliResult<Output> {
    let needs_input = match args.method {
        Method::Product => args.a.is_none() && args.b.is_none(),
        Method::Bundle => false,
        _ => true,
    };
    let source = if needs_input || args.input.is_some() {
        let text = read_input(args.input.as_deref(), stdin)?;
        Some(as_complex2(with_context(args.input.as_deref(), io::parse_document(&text))?)?)
    } else {
        None
    };
    let require = |p: &Option<PathBuf>, flag: &str| {
        p.clone()
            .ok_or_else(|| CliError::Usage(format!("--method {:?} needs --{flag}", args.method).to_lowercase()))
    };
    let result: LiftResult = match args.method {
        Method::Naive => {
            let c = source.expect("input read");
            LiftResult::assess(&c, naive_lift(&c))
        }
        Method::General => general_lift(&source.expect("input read")),
        Method::Sparse => {
            let c = source.expect("input read");
            let d1 = match &args.d1 {
                Some(p) => match with_context(Some(p), io::parse_document(&read_file(p)?))? {
                    Document::Int(m) => D1Lift::Given(m),
                    _ => return Err(CliError::Usage("--d1 must be an int matrix".into())),
                },
                None => D1Lift::Naive,
            };
            sparse_lift(&c, d1)?
        }
        Method::Product => {
            let read = |p: PathBuf| -> CliResult<ChainComplex2> {
                let text = read_file(&p)?;
                as_complex2(with_context(Some(&p), io::parse_document(&text))?)
            };
            let (a, b) = match (&args.a, &args.b, &source) {
                (None, None, Some(c)) => toric_factors(c).ok_or_else(|| {
                    CliError::Usage("--method product needs --a and --b unless the input is a toric code".into())
                })?,
                _ => (read(require(&args.a, "a")?)?, read(require(&args.b, "b")?)?),
            };
            let lifted = product_lift(&a, &b)?;
            let binary = gen_hypergraph_product(&a, &b)?;
            if let Some(c) = &source {
                if *c != binary {
                    return Err(CliError::Usage("input is not the product of --a and --b".into()));
                }
            }
            LiftResult::assess(&binary, lifted)
        }
        Method::Bundle => {
            let base_path = require(&args.base, "base")?;
            let base = as_complex2(with_context(Some(&base_path), io::parse_document(&read_file(&base_path)?))?)?;
            let m = args
                .m
                .ok_or_else(|| CliError::Usage("--method bundle needs --m".into()))?;
            let spec = bundle_spec(&base, m, args.twists.as_deref())?;
            let binary = gen_fiber_bundle(&spec);
            if let Some(c) = &source {
                if *c != binary {
                    return Err(CliError::Usage("input is not the bundle described by --base, --m and --twists".into()));
                }
            }
            LiftResult::assess(&binary, fiber_bundle_lift(&spec))
        }
    };
    let method = format!("{:?}", args.method).to_lowercase();
    let mut body = to_value(&result);
    body["method"] = json!(method);
    let report = envelope("lift", g.seed, body);
    let complex = io::write_complexz(&result.lifted);
    let mut out = Output::default();
    match (&g.out, &args.report) {
        (Some(p), Some(r)) => {
            out.files.push((p.clone(), complex));
            out.files.push((r.clone(), report));
        }
        (Some(p), None) => {
            out.files.push((p.clone(), complex));
            out.stdout = report;
        }
        (None, Some(r)) => {
            out.stdout = complex;
            out.files.push((r.clone(), report));
        }
        (None, None) => {
            out.stdout = complex;
            out.stderr = report;
        }
    }
    Ok(out)
}

/// Cycle factors of a complex that is exactly `gen_toric(L)`.
fn toric_factors(c: &ChainComplex2) -> Option<(ChainComplex2, ChainComplex2)> {
    let dims = c.dims();
    if dims.len() != 3 {
        return None;
    }
    let l = (1..=dims[0]).find(|l| l * l >= dims[0])?;
    (l * l == dims[0] && *c == gen_toric(l)).then(|| (gen_cycle(l), gen_cycle(l)))
}

fn cycle_basis_cmd(g: &Global, graph: &Multigraph, verify: bool, stats: bool, degree_cap: usize) -> CliResult<Output> {
    let opts = CycleBasisOptions {
        max_retries: g.budget_retries,
        degree_cap,
        ..CycleBasisOptions::new(g.seed)
    };
    let run = cycle_basis(graph, opts)?;
    let basis = &run.basis;
    let mut summary = json!({
        "cycles": basis.len(),
        "max_multiplicity": run.max_multiplicity,
        "total_weight": basis_weight(basis, graph),
        "max_intersections": intersection_stats(basis, graph).max,
        "retries_used": run.retries_used,
    });
    let mut failure = None;
    if verify {
        let weak = verify_weakly_fundamental(graph, basis);
        let span = verify_spanning(graph, basis);
        summary["weakly_fundamental"] = json!(weak.ok);
        summary["spanning"] = json!(span.ok);
        if !weak.ok || !span.ok {
            failure = Some(format!("verification failed: weak {:?}, spanning {}", weak.failing, span.ok));
        }
    }
    if stats {
        summary["multiplicity_histogram"] = json!(multiplicity_stats(basis, graph).histogram);
    }
    let text = if g.format == Some(Format::Json) {
        let mut body = json!({ "basis": basis.cycles, "certificates": basis.certificates });
        if let (Value::Object(o), Value::Object(s)) = (&mut body, summary) {
            o.extend(s);
        }
        envelope("cycle-basis", g.seed, body)
    } else {
        let mut s = format!("basis {}\n", basis.len());
        for c in &basis.cycles {
            s.push_str(&join(c));
            s.push('\n');
        }
        s.push_str(&format!("certificates {}\n", join(&basis.certificates)).replace("certificates \n", "certificates\n"));
        if stats || verify {
            s.push_str(&envelope("cycle-basis", g.seed, summary));
        }
        s
    };
    match failure {
        Some(msg) => Err(CliError::Domain(format!("{msg}\n{text}"))),
        None => Ok(Output::primary(g, text)),
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn build_skeleton(c: &ChainComplexZ, stage: Stage, policy: PairingPolicy, seed: u64) -> CliResult<HandleSkeleton> {
    let mut sk = build_x(c)?;
    if stage >= Stage::QX {
        sk = attach_qubit_handles(sk, c)?;
    }
    if stage >= Stage::ZQX {
        sk = attach_z_handles(sk, c, policy)?;
    }
    if stage >= Stage::ZQXPlus {
        sk = kill_pi1(sk, seed)?;
    }
    if stage >= Stage::Double {
        sk = double(sk)?;
    }
    Ok(sk)
}

fn skeleton_report(sk: &HandleSkeleton, c: &ChainComplexZ) -> CliResult<Value> {
    let stats = sk.stats();
    let audit = congestion_audit(sk);
    let volume = volume_report(sk);
    let middle = if sk.stage() >= Stage::ZQX {
        Some(verify_middle_complex(sk, c)?)
    } else {
        None
    };
    let pi1 = sk.pi1();
    Ok(json!({
        "stage": sk.stage().to_string(),
        "counts": stats.counts,
        "max_contact": stats.max_contact,
        "basis_size": pi1.map(|p| p.basis.len()),
        "max_multiplicity": pi1.map(|p| p.max_multiplicity),
        "colors": pi1.map(|p| p.coloring.count),
        "volume_ratio": volume.ratio,
        "volume": to_value(&volume),
        "congestion": to_value(&audit),
        "middle_complex": middle.map(|m| to_value(&m)),
        "sphere_counts_max": sk.sphere_counts().into_iter().max(),
    }))
}
