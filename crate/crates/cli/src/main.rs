//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 parse error, 3 analysis error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hessplus::critical::{find_critical_points, mu_max, CriticalSet, DEFAULT_SEEDS_PER_AXIS};
use hessplus::grid::Box2;
use hessplus::levelset::{
    extract_level, level_report, search_with, to_csv, to_svg, FirstConvexLevelResult, LevelOracle, LevelProbe,
    LevelReport, DEFAULT_CELLS,
};
use hessplus::region::{
    audit_product_hypotheses, certify_complement_bounded, h_max_estimate, scan_complement, BoundednessCertificate,
    HMaxEstimate, HypothesisAuditReport,
};
use hessplus::spec_text::{caret_message, parse_field, ParsedField};
use hessplus::verify::{run_all, VerifyOptions};
use hessplus::{Error, FamilySpec, ScalarField};
use serde::Serialize;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const REGULARITY_DELTA: f64 = 1e-6;
const AUDIT_SAMPLES: usize = 4096;
const PROBED_LEVELS: usize = 8;

#[derive(Parser)]
#[command(
    name = "hessplus",
    version,
    about = "Positive-definite Hessian regions and convex level curves of planar fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical set, Hess+ complement, certificate and level verdicts.
    Analyze {
        spec: String,
        #[command(flatten)]
        common: Common,
        /// Bracket width for the first convex level search.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// Extracts one level curve.
    Level {
        spec: String,
        #[arg(short = 'c', long = "level", allow_hyphen_values = true)]
        level: f64,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Critical points and critical values.
    Critical {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Boundedness certificate for the Hess+ complement of a radial family.
    Certify {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest convex level in [lo, hi].
    FirstConvex {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the reproduction suite and prints a JSON pass/fail matrix.
    #[command(name = "verify-paper")]
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Instances per property suite.
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        /// Negates D(f) in the checks that read it (mutation smoke test).
        #[arg(long, hide = true)]
        flip_d_sign: bool,
    },
}

#[derive(Args)]
struct Common {
    /// xmin,xmax,ymin,ymax
    #[arg(long = "box", allow_hyphen_values = true)]
    bounds: Option<Box2>,
    /// Grid cells per axis.
    #[arg(long, default_value_t = DEFAULT_CELLS)]
    res: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

enum Failure {
    Parse { text: String, err: Error },
    Analysis { stage: &'static str, err: Error },
    Io(String),
    Verification(Vec<String>),
}

type Outcome<T> = Result<T, Failure>;

fn stage<T>(name: &'static str, r: hessplus::Result<T>) -> Outcome<T> {
    r.map_err(|err| Failure::Analysis { stage: name, err })
}

fn parse(text: &str) -> Outcome<ParsedField> {
    parse_field(text).map_err(|err| Failure::Parse { text: text.to_string(), err })
}

fn default_box(parsed: &ParsedField) -> Box2 {
    Box2::for_family(parsed.family_scale().unwrap_or(1.0))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Outcome<()> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Outcome<()> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct InputEcho {
    spec: String,
    #[serde(rename = "box")]
    bounds: Box2,
    resolution: usize,
    seed: u64,
}

#[derive(Serialize)]
struct FieldSummary {
    label: String,
    family: Option<String>,
    polynomial: Option<String>,
}

impl FieldSummary {
    fn of(p: &ParsedField) -> Self {
        FieldSummary {
            label: p.field.label(),
            family: p.family.as_ref().map(FamilySpec::label),
            polynomial: p.exact.as_ref().map(|e| e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct ComplementSummary {
    points: usize,
    spacing: f64,
    /// [xmin, xmax, ymin, ymax] of the scanned complement points.
    extent: Option<[f64; 4]>,
}

#[derive(Serialize)]
struct FirstConvexSummary {
    result: Option<FirstConvexLevelResult>,
    note: Option<String>,
}

#[derive(Serialize)]
struct AnalysisReport {
    tool: &'static str,
    version: &'static str,
    input: InputEcho,
    field: FieldSummary,
    critical_set: CriticalSet,
    critical_values: Vec<f64>,
    mu_max: Option<f64>,
    complement: ComplementSummary,
    h_max: Option<HMaxEstimate>,
    certificate: Option<BoundednessCertificate>,
    product_audit: Option<HypothesisAuditReport>,
    levels: Vec<LevelProbe>,
    first_convex_level: FirstConvexSummary,
}

/// Minimum of f on the grid and on the box boundary; levels between the two
/// have curves that stay inside the box.
fn value_range(f: &ScalarField, b: &Box2, n: usize) -> (f64, f64) {
    let (mut lo, mut edge) = (f64::INFINITY, f64::INFINITY);
    for j in 0..=n {
        for i in 0..=n {
            let v = f.value_xy(b.x_at(i, n), b.y_at(j, n));
            if !v.is_finite() {
                continue;
            }
            lo = lo.min(v);
            if i == 0 || j == 0 || i == n || j == n {
                edge = edge.min(v);
            }
        }
    }
    (lo, edge)
}

fn analyze(spec: &str, common: &Common, tol: f64) -> Outcome<String> {
    let parsed = parse(spec)?;
    let f = &parsed.field;
    let bounds = common.bounds.unwrap_or_else(|| default_box(&parsed));
    let cs = stage("critical", find_critical_points(f, &bounds, DEFAULT_SEEDS_PER_AXIS, None))?;
    let mu = mu_max(&cs).ok();
    let scan = stage("complement", scan_complement(f, &bounds, bounds.width() / common.res as f64))?;
    let extent = scan.points.iter().fold(None::<[f64; 4]>, |e, p| {
        let mut e = e.unwrap_or([p.x(), p.x(), p.y(), p.y()]);
        e[0] = e[0].min(p.x());
        e[1] = e[1].max(p.x());
        e[2] = e[2].min(p.y());
        e[3] = e[3].max(p.y());
        Some(e)
    });
    let h_max = match h_max_estimate(f, &scan, 3) {
        Ok(h) => Some(h),
        Err(Error::EmptyComplement) => None,
        Err(err) => return Err(Failure::Analysis { stage: "h_max", err }),
    };
    let certificate = match &parsed.family {
        Some(fam) => Some(stage("certify", certify_complement_bounded(fam))?),
        None => None,
    };
    let product_audit = match &parsed.family {
        Some(FamilySpec::Product(fs)) if fs.len() == 2 => {
            let g = |s: &FamilySpec| stage("audit", s.build()).map(ScalarField::polynomial);
            Some(stage(
                "audit",
                audit_product_hypotheses(&g(&fs[0])?, &g(&fs[1])?, &bounds, AUDIT_SAMPLES, common.seed),
            )?)
        }
        _ => None,
    };

    let oracle = LevelOracle::with_critical_set(f, &bounds, common.res, cs.clone());
    let (vmin, vedge) = value_range(f, &bounds, 200);
    // Just above the minimum the sublevel set is a union of small caps around the minima.
    let (lo, hi) = (vmin + 1e-6 * (1.0 + vmin.abs()), vedge - 1e-3 * (vedge - vmin));
    let levels = if lo < hi {
        (1..PROBED_LEVELS)
            .map(|k| stage("levels", oracle.probe(lo + (hi - lo) * k as f64 / PROBED_LEVELS as f64)))
            .collect::<Outcome<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let first_convex_level = if lo < hi {
        match search_with(&oracle, lo, hi, tol) {
            Ok(r) => FirstConvexSummary { result: Some(r), note: None },
            Err(Error::BracketInvalid(msg)) => FirstConvexSummary { result: None, note: Some(msg) },
            Err(err) => return Err(Failure::Analysis { stage: "first-convex", err }),
        }
    } else {
        FirstConvexSummary { result: None, note: Some("f has no level range inside the box".into()) }
    };

    let report = AnalysisReport {
        tool: "hessplus",
        version: VERSION,
        input: InputEcho { spec: spec.to_string(), bounds, resolution: common.res, seed: common.seed },
        field: FieldSummary::of(&parsed),
        critical_values: cs.values.clone(),
        critical_set: cs,
        mu_max: mu,
        complement: ComplementSummary { points: scan.len(), spacing: scan.spacing, extent },
        h_max,
        certificate,
        product_audit,
        levels,
        first_convex_level,
    };
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct LevelOutput {
    tool: &'static str,
    version: &'static str,
    input: InputEcho,
    report: LevelReport,
}

fn level(spec: &str, c: f64, common: &Common, format: Format) -> Outcome<String> {
    let parsed = parse(spec)?;
    let f = &parsed.field;
    let bounds = common.bounds.unwrap_or_else(|| default_box(&parsed));
    let curve = stage("level", extract_level(f, c, &bounds, common.res))?;
    let cs = stage("critical", find_critical_points(f, &bounds, DEFAULT_SEEDS_PER_AXIS, None))?;
    let report = stage("convexity", level_report(f, &curve, &cs, REGULARITY_DELTA))?;
    if report.component_count == 0 {
        eprintln!("warning: level {c} has no points inside the box {bounds}");
    }
    eprintln!(
        "level {c}: {} component(s), regular: {}, convex: {}",
        report.component_count, report.regular, report.convex
    );
    for (k, comp) in report.components.iter().enumerate() {
        eprintln!(
            "  component {k}: {} vertices, closed: {}, D sign: {:?}, geometric: {:?}",
            comp.vertices, comp.closed, comp.d_sign, comp.geometric
        );
    }
    Ok(match format {
        Format::Csv => to_csv(&curve),
        Format::Svg => to_svg(&curve),
        Format::Json => to_json(&LevelOutput {
            tool: "hessplus",
            version: VERSION,
            input: InputEcho { spec: spec.to_string(), bounds, resolution: common.res, seed: common.seed },
            report,
        }),
    })
}

#[derive(Serialize)]
struct CriticalOutput {
    tool: &'static str,
    version: &'static str,
    input: InputEcho,
    critical_set: CriticalSet,
    mu_max: Option<f64>,
}

fn critical(spec: &str, common: &Common) -> Outcome<String> {
    let parsed = parse(spec)?;
    let bounds = common.bounds.unwrap_or_else(|| default_box(&parsed));
    let cs = stage("critical", find_critical_points(&parsed.field, &bounds, DEFAULT_SEEDS_PER_AXIS, None))?;
    Ok(to_json(&CriticalOutput {
        tool: "hessplus",
        version: VERSION,
        input: InputEcho { spec: spec.to_string(), bounds, resolution: common.res, seed: common.seed },
        mu_max: mu_max(&cs).ok(),
        critical_set: cs,
    }))
}

fn certify(spec: &str) -> Outcome<String> {
    let parsed = parse(spec)?;
    let fam = parsed.family.as_ref().ok_or_else(|| Failure::Analysis {
        stage: "certify",
        err: Error::Precondition("certificates need a radial family: cassini, anti, radial or prod of these".into()),
    })?;
    Ok(to_json(&stage("certify", certify_complement_bounded(fam))?))
}

fn first_convex(spec: &str, lo: f64, hi: f64, tol: f64, common: &Common) -> Outcome<String> {
    let parsed = parse(spec)?;
    let bounds = common.bounds.unwrap_or_else(|| default_box(&parsed));
    let oracle = stage("critical", LevelOracle::new(&parsed.field, &bounds, common.res))?;
    let r = stage("first-convex", search_with(&oracle, lo, hi, tol))?;
    eprintln!("first convex level ≈ {:.6} in [{}, {}]", r.c_star, r.bracket.0, r.bracket.1);
    Ok(to_json(&r))
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::Analyze { spec, common, tol } => emit(common.out.as_deref(), &analyze(&spec, &common, tol)?),
        Command::Level { spec, level: c, common, format } => {
            emit(common.out.as_deref(), &level(&spec, c, &common, format)?)
        }
        Command::Critical { spec, common } => emit(common.out.as_deref(), &critical(&spec, &common)?),
        Command::Certify { spec, common } => emit(common.out.as_deref(), &certify(&spec)?),
        Command::FirstConvex { spec, lo, hi, tol, common } => {
            emit(common.out.as_deref(), &first_convex(&spec, lo, hi, tol, &common)?)
        }
        Command::Verify { seed, out, instances, flip_d_sign } => {
            let matrix = run_all(&VerifyOptions { seed, property_instances: instances, flip_d_sign });
            emit(out.as_deref(), &to_json(&matrix))?;
            let failed: Vec<String> =
                matrix.failures().map(|c| format!("[{}] {}: {}", c.id, c.name, c.detail)).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(failed))
            }
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("HESSPLUS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse { text, err }) => {
            match &err {
                Error::Parse { pos, msg } => eprintln!("parse error:\n{}", caret_message(&text, *pos, msg)),
                other => eprintln!("parse error: {other}"),
            }
            ExitCode::from(2)
        }
        Err(Failure::Analysis { stage, err }) => {
            eprintln!("analysis failed in stage `{stage}`: {err}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("write failed: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Verification(failed)) => {
            eprintln!("{} check(s) failed:", failed.len());
            for f in failed {
                eprintln!("  {f}");
            }
            ExitCode::from(1)
        }
    }
}
