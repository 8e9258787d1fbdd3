//! The `cheeger` command-line tool.
//!
//! Every subcommand prints its result as JSON on stdout (full double
//! precision) and a short human summary on stderr (six significant digits).
//! Exit status is 0 on success, 2 for unusable input and 3 when a solver
//! fails; in the last case stdout carries a diagnostic JSON object.

pub mod angle;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cheeger_core::certificates::{certify_lower_bound, GridField};
use cheeger_core::opening::grid::Raster;
use cheeger_core::opening::{grid_sweep, sweep, SweepConfig};
use cheeger_core::render::{render_svg, SvgOptions};
use cheeger_core::sectors::{sector_cheeger, sector_domain, six_significant, table1, write_table1_csv};
use cheeger_core::sectors::{SectorMethod, SectorOptions, SectorSpec};
use cheeger_core::{
    rectangle_h, solve_convex, strip_cheeger, stripize, ArcPolygon, CheegerResult, ConvexPolygon, Curve, Point, Strip,
    StripKind,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use angle::parse_angle;

/// Exit status for input that cannot be parsed or is rejected on load.
pub const EXIT_INPUT: i32 = 2;
/// Exit status when a solver fails on accepted input.
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cheeger", version, about = "Cheeger constants and Cheeger sets of planar domains")]
pub struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rectangle [-a, a] × [-b, b] in closed form.
    Rect {
        #[arg(long, value_parser = positive)]
        a: f64,
        #[arg(long, value_parser = positive)]
        b: f64,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Convex polygon from a JSON vertex list.
    Convex {
        #[arg(long, value_name = "PATH")]
        polygon: PathBuf,
        /// Bisection tolerance in r.
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Curved strip around a base curve.
    Strip {
        /// Strip JSON (curve, halfwidth and optional kind).
        #[arg(long, value_name = "PATH", conflicts_with_all = ["curve", "halfwidth", "kind", "truncation"])]
        strip: Option<PathBuf>,
        /// Curve JSON; requires --halfwidth.
        #[arg(long, value_name = "PATH", requires = "halfwidth")]
        curve: Option<PathBuf>,
        #[arg(long, value_parser = positive)]
        halfwidth: Option<f64>,
        /// Overrides the kind inferred from the curve.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Truncation length for unbounded strips.
        #[arg(long, value_parser = positive)]
        truncation: Option<f64>,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Circular sector of opening angle alpha and radius a.
    Sector {
        /// Radians or a multiple of pi such as pi/2 or 3*pi/4.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        a: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Sweep tolerance in r, relative to a.
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
        /// Skip the raster cross-check for reflex sectors.
        #[arg(long)]
        no_cross_check: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Sector constants at the standard angle set, compared with reference values.
    Table1 {
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
    /// Stripization of a polygon inside a strip.
    Stripize {
        /// Polygon JSON: a vertex list or {"vertices": [...]}.
        #[arg(long, value_name = "PATH")]
        polygon: PathBuf,
        #[arg(long, value_name = "PATH")]
        strip: PathBuf,
    },
    /// Check a divergence certificate for a lower bound on h.
    Certify {
        #[arg(long, value_name = "PATH")]
        strip: PathBuf,
        /// `builtin` or a path to a field JSON.
        #[arg(long, default_value = "builtin")]
        field: String,
        /// Claimed lower bound.
        #[arg(long, allow_hyphen_values = true)]
        claim: f64,
        /// Nodes along the curve for the builtin field.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Nodes across the strip for the builtin field (defaults to --grid).
        #[arg(long)]
        grid_t: Option<usize>,
        #[arg(long, value_parser = positive)]
        tol_v: Option<f64>,
        #[arg(long, value_parser = positive)]
        tol_div: Option<f64>,
    },
    /// Opening sweep over an arc polygon domain.
    Sweep {
        /// Arc polygon JSON.
        #[arg(long, value_name = "PATH")]
        domain: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, default_value_t = 256)]
        n_coarse: usize,
        #[arg(long, default_value_t = 1e-10, value_parser = positive)]
        tol: f64,
        #[arg(long, value_parser = positive)]
        r_max: Option<f64>,
        /// Raster resolution used when an exact opening fails (exact method).
        #[arg(long)]
        grid_fallback: Option<usize>,
        /// Coarsest raster resolution (grid method).
        #[arg(long, default_value_t = 512)]
        base: usize,
        /// (r, quotient) curve (exact method).
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Write the rasterized domain as a PGM mask.
        #[arg(long, value_name = "PATH")]
        mask: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        mask_resolution: usize,
    },
    /// Parameter scans: h(b), k(b) for rectangles or h(α), k(α) for sectors, at a = 1.
    Scan {
        #[arg(long, value_enum)]
        kind: ScanKind,
        /// Number of samples (at least 16).
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Sector sweep tolerance.
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Annulus,
    Finite,
    SemiInfinite,
    Infinite,
}

impl From<KindArg> for StripKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Annulus => StripKind::Annulus,
            KindArg::Finite => StripKind::Finite,
            KindArg::SemiInfinite => StripKind::SemiInfinite,
            KindArg::Infinite => StripKind::Infinite,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// Rectangles [-1, 1] × [-b, b], b log-spaced over [1e-3, 1e3].
    RectK,
    /// Sectors of radius 1, α = 2πi/n for i = 1..n.
    SectorHk,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Input that cannot be read, parsed or accepted.
    #[error("{0}")]
    Input(String),
    #[error("{command}: {source}")]
    Solver {
        command: &'static str,
        #[source]
        source: cheeger_core::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Solver { .. } | CliError::Output { .. } => EXIT_SOLVER,
        }
    }

    fn diagnostic(&self, command: &str) -> serde_json::Value {
        let kind = match self {
            CliError::Input(_) => "input",
            CliError::Solver { source: cheeger_core::Error::Domain(_), .. } => "domain",
            CliError::Solver { source: cheeger_core::Error::Validation(_), .. } => "validation",
            CliError::Solver { source: cheeger_core::Error::Internal(_), .. } => "internal",
            CliError::Output { .. } => "output",
        };
        serde_json::json!({ "error": { "command": command, "kind": kind, "message": self.to_string() } })
    }
}

type CliResult<T> = Result<T, CliError>;

fn input_err(e: cheeger_core::Error) -> CliError {
    CliError::Input(e.to_string())
}

fn solver(command: &'static str) -> impl Fn(cheeger_core::Error) -> CliError {
    move |source| CliError::Solver { command, source }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CliResult<()> {
    let out = |source| CliError::Output { path: path.to_path_buf(), source };
    let mut w = BufWriter::new(File::create(path).map_err(out)?);
    f(&mut w).and_then(|_| w.flush()).map_err(out)
}

fn write_svg(path: &Path, domain: &ArcPolygon, set: Option<&ArcPolygon>) -> CliResult<()> {
    let svg = render_svg(domain, set, SvgOptions::default());
    write_file(path, |w| w.write_all(svg.as_bytes()))
}

/// Polygon file accepted by `stripize`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PolygonFile {
    List(Vec<Point>),
    Object { vertices: Vec<Point> },
}

/// One row of a parameter scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub parameter: f64,
    pub h: f64,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub rows: Vec<ScanRow>,
}

/// `b` values of the rectangle scan: log-spaced with exact endpoints.
fn rect_parameters(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| match i {
            0 => 1e-3,
            i if i == n - 1 => 1e3,
            i => 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// Run a scan; rows are ordered by parameter.
pub fn scan(kind: ScanKind, n: usize, tol: f64) -> Result<ScanReport, cheeger_core::Error> {
    if n < 16 {
        return Err(cheeger_core::Error::Domain(format!("scan needs at least 16 samples, got {n}")));
    }
    let rows = match kind {
        ScanKind::RectK => rect_parameters(n)
            .into_iter()
            .map(|b| {
                let r = rectangle_h(1.0, b)?;
                Ok(ScanRow { parameter: b, h: r.h, k: r.k.unwrap_or(f64::NAN) })
            })
            .collect::<Result<Vec<_>, _>>()?,
        ScanKind::SectorHk => {
            let opts = SectorOptions { tol, cross_check: None, ..SectorOptions::default() };
            (1..=n)
                .into_par_iter()
                .map(|i| {
                    let alpha = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    let r = sector_cheeger(SectorSpec::new(alpha, 1.0)?, &opts)?;
                    Ok(ScanRow { parameter: alpha, h: r.h, k: r.k.unwrap_or(f64::NAN) })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(ScanReport { kind, rows })
}

/// CSV with header `b,h,k` or `alpha,h,k`, full precision.
pub fn write_scan_csv(report: &ScanReport, w: impl Write) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let name = match report.kind {
        ScanKind::RectK => "b",
        ScanKind::SectorHk => "alpha",
    };
    wtr.write_record([name, "h", "k"])?;
    for r in &report.rows {
        wtr.serialize((r.parameter, r.h, r.k))?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_to_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn summarize(r: &CheegerResult) -> String {
    let mut s = format!("h = {}", six_significant(r.h));
    if let Some(k) = r.k {
        s += &format!(", k = {}", six_significant(k));
    }
    if let Some(rs) = r.r_star {
        s += &format!(", r* = {}", six_significant(rs));
    }
    s += &format!(" [{}, {}]", six_significant(r.lower_bound), six_significant(r.upper_bound));
    for w in &r.warnings {
        s += &format!("\nwarning: {w}");
    }
    s
}

/// Output of one command: the JSON document and a human summary.
struct Outcome {
    json: serde_json::Value,
    summary: String,
}

fn outcome<T: Serialize>(value: &T, summary: String) -> CliResult<Outcome> {
    let json = serde_json::to_value(value).map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    Ok(Outcome { json, summary })
}

fn load_strip(
    strip: Option<&Path>,
    curve: Option<&Path>,
    halfwidth: Option<f64>,
    kind: Option<KindArg>,
    truncation: Option<f64>,
) -> CliResult<Strip> {
    match (strip, curve, halfwidth) {
        (Some(p), _, _) => read_json(p),
        (None, Some(c), Some(a)) => {
            let curve: Curve = read_json(c)?;
            match kind {
                None if truncation.is_none() => Strip::new(curve, a),
                None => {
                    let k = if curve.is_closed() { StripKind::Annulus } else { StripKind::Finite };
                    Strip::with_kind(curve, a, k, truncation)
                }
                Some(k) => Strip::with_kind(curve, a, k.into(), truncation),
            }
            .map_err(input_err)
        }
        _ => Err(CliError::Input("give either --strip or --curve with --halfwidth".into())),
    }
}

fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Rect { a, b, svg } => {
            let res = rectangle_h(*a, *b).map_err(solver("rect"))?;
            if let Some(path) = svg {
                let dom = ConvexPolygon::rectangle(*a, *b).map_err(input_err)?.to_arcpolygon();
                write_svg(path, &dom, res.cheeger_set.as_ref())?;
            }
            outcome(&res, summarize(&res))
        }
        Command::Convex { polygon, tol, svg } => {
            let poly: ConvexPolygon = read_json(polygon)?;
            let res = solve_convex(&poly, *tol).map_err(solver("convex"))?;
            if let Some(path) = svg {
                write_svg(path, &poly.to_arcpolygon(), res.cheeger_set.as_ref())?;
            }
            outcome(&res, summarize(&res))
        }
        Command::Strip { strip, curve, halfwidth, kind, truncation, svg } => {
            let strip = load_strip(strip.as_deref(), curve.as_deref(), *halfwidth, *kind, *truncation)?;
            let res = strip_cheeger(&strip).map_err(solver("strip"))?;
            let mut summary = summarize(&res);
            if let Some(path) = svg {
                match strip.to_arcpolygon() {
                    Ok(dom) => write_svg(path, &dom, res.cheeger_set.as_ref())?,
                    Err(e) => summary += &format!("\nwarning: no SVG written: {e}"),
                }
            }
            outcome(&res, summary)
        }
        Command::Sector { alpha, a, method, tol, no_cross_check, svg } => {
            let spec = SectorSpec::new(*alpha, *a).map_err(input_err)?;
            let mut opts = SectorOptions { tol: *tol, ..SectorOptions::default() };
            if *no_cross_check {
                opts.cross_check = None;
            }
            opts.method = match method {
                MethodArg::Exact => SectorMethod::Exact,
                MethodArg::Grid => SectorMethod::Grid,
            };
            let res = sector_cheeger(spec, &opts).map_err(solver("sector"))?;
            if let Some(path) = svg {
                write_svg(path, &sector_domain(spec), res.cheeger_set.as_ref())?;
            }
            outcome(&res, summarize(&res))
        }
        Command::Table1 { csv, tol } => {
            let rows = table1(*tol).map_err(solver("table1"))?;
            if let Some(path) = csv {
                let mut buf = Vec::new();
                write_table1_csv(&rows, &mut buf).map_err(solver("table1"))?;
                write_file(path, |w| w.write_all(&buf))?;
            }
            let summary = rows
                .iter()
                .map(|r| {
                    let flag = if r.deviates { "  DEVIATES" } else { "" };
                    format!("{:>11}  h = {}  k = {}{flag}", r.label, six_significant(r.h), six_significant(r.k))
                })
                .collect::<Vec<_>>()
                .join("\n");
            outcome(&rows, summary)
        }
        Command::Stripize { polygon, strip } => {
            let vertices = match read_json::<PolygonFile>(polygon)? {
                PolygonFile::List(v) | PolygonFile::Object { vertices: v } => v,
            };
            let strip: Strip = read_json(strip)?;
            let report = stripize(&vertices, &strip).map_err(solver("stripize"))?;
            let summary = format!(
                "P/A: input {} -> stripized {}",
                six_significant(report.input_perimeter / report.input_area),
                six_significant(report.star_perimeter / report.star_area)
            );
            outcome(&report, summary)
        }
        Command::Certify { strip, field, claim, grid, grid_t, tol_v, tol_div } => {
            let strip: Strip = read_json(strip)?;
            let field = if field == "builtin" {
                GridField::builtin(&strip, *grid, grid_t.unwrap_or(*grid)).map_err(input_err)?
            } else {
                let f: GridField = read_json(Path::new(field))?;
                let f = GridField::new(f.strip, f.n_q, f.n_t, f.v_q, f.v_t).map_err(input_err)?;
                f.check_matches(&strip).map_err(input_err)?;
                f
            };
            let report = certify_lower_bound(&field, *claim, *tol_v, *tol_div).map_err(solver("certify"))?;
            let summary = match (&report.certified_lower_bound, &report.failure) {
                (Some(h), _) => format!("certified: h >= {}", six_significant(*h)),
                (None, Some(why)) => format!("not certified: {why}"),
                (None, None) => "not certified".into(),
            };
            outcome(&report, summary)
        }
        Command::Sweep {
            domain,
            method,
            n_coarse,
            tol,
            r_max,
            grid_fallback,
            base,
            csv,
            svg,
            mask,
            mask_resolution,
        } => {
            let dom: ArcPolygon = read_json(domain)?;
            if let Some(path) = mask {
                let raster = Raster::from_arcpolygon(&dom, *mask_resolution).map_err(input_err)?;
                write_file(path, |w| raster.write_pgm(w))?;
            }
            match method {
                MethodArg::Exact => {
                    let config =
                        SweepConfig { n_coarse: *n_coarse, tol: *tol, r_max: *r_max, grid_fallback: *grid_fallback };
                    let res = sweep(&dom, &config).map_err(solver("sweep"))?;
                    if let Some(path) = csv {
                        write_file(path, |w| res.write_csv(w).map_err(io::Error::other))?;
                    }
                    if let Some(path) = svg {
                        write_svg(path, &dom, res.set.as_ref())?;
                    }
                    let mut summary = format!("h = {}, r = {}", six_significant(res.h), six_significant(res.r_hat));
                    for w in &res.warnings {
                        summary += &format!("\nwarning: {w}");
                    }
                    outcome(&res, summary)
                }
                MethodArg::Grid => {
                    let res = grid_sweep(&dom, *base, *n_coarse, *r_max).map_err(solver("sweep"))?;
                    if let Some(path) = svg {
                        write_svg(path, &dom, None)?;
                    }
                    let summary = format!("h = {} (extrapolated)", six_significant(res.extrapolation.value));
                    outcome(&res, summary)
                }
            }
        }
        Command::Scan { kind, grid, csv, tol } => {
            let report = scan(*kind, *grid, *tol).map_err(|e| match e {
                cheeger_core::Error::Domain(m) => CliError::Input(m),
                other => CliError::Solver { command: "scan", source: other },
            })?;
            if let Some(path) = csv {
                write_file(path, |w| write_scan_csv(&report, w).map_err(csv_to_io))?;
            }
            outcome(&report, format!("{} rows", report.rows.len()))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Rect { .. } => "rect",
        Command::Convex { .. } => "convex",
        Command::Strip { .. } => "strip",
        Command::Sector { .. } => "sector",
        Command::Table1 { .. } => "table1",
        Command::Stripize { .. } => "stripize",
        Command::Certify { .. } => "certify",
        Command::Sweep { .. } => "sweep",
        Command::Scan { .. } => "scan",
    }
}

/// Cap rayon's global pool from `CHEEGER_THREADS`.
fn configure_threads(value: Option<String>) -> CliResult<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("CHEEGER_THREADS must be a positive integer, got {v:?}")))?;
    // The pool can only be built once per process; later calls keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    if let Err(e) = configure_threads(std::env::var("CHEEGER_THREADS").ok()) {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    let name = command_name(&cli.command);
    let result = execute(&cli.command).and_then(|out| {
        let mut text = serde_json::to_string_pretty(&out.json).expect("JSON values always serialize");
        text.push('\n');
        if let Some(path) = &cli.json {
            write_file(path, |w| w.write_all(text.as_bytes()))?;
        }
        Ok((text, out.summary))
    });
    match result {
        Ok((text, summary)) => {
            let _ = stdout.write_all(text.as_bytes());
            let _ = writeln!(stderr, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.exit_code() == EXIT_SOLVER {
                let diag = serde_json::to_string_pretty(&e.diagnostic(name)).expect("diagnostic serializes");
                let _ = writeln!(stdout, "{diag}");
            }
            e.exit_code()
        }
    }
}
