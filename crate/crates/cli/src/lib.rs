//! The `landcore` command line. [`run`] holds everything so tests can drive
//! it in-process; the binary only forwards `argv` and the exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use landcore::ccm::{convergence_report, raster_path, rasterize, vector_path, CcmError, Connectivity, CostMap};
use landcore::geometry::{area, Box2, Point2};
use landcore::io::svg::{render_svg, Scene};
use landcore::io::tables;
use landcore::io::{load_document, resolve_seed, GeoDocument, IoError, RunConfig, SEED_ENV};
use landcore::query::{self, Dataset, QueryError};
use landcore::stratification::{
    allocate_samples, estimate_cultivable_area, import_requirement, stratify, yearly_loss, LandStats, SamplePlan,
    StratError, Stratum,
};
use landcore::topology::{build_topology, window_query_with, EdgeSelection, TopologyError, TopologyStore};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_RESULT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "landcore", version, about = "Spatial queries, topology, least-cost paths and field sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Attribute and spatial queries over towns and roads.
    Query(QueryArgs),
    /// Build a shared-boundary store or run a window query on it.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Least-cost paths over cost regions.
    Ccm(CcmArgs),
    /// Classify blocks into strata and draw a sample plan.
    Stratify(StratifyArgs),
    /// Estimate cultivable area, loss rate and import need from outcomes.
    Report(ReportArgs),
    /// Draw the document, an optional path and optional strata as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(subcommand)]
    kind: QueryKind,
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Scan every row instead of prefiltering with the box index.
    #[arg(long, global = true)]
    no_index: bool,
}

#[derive(Subcommand, Debug)]
enum QueryKind {
    /// Towns with area strictly greater than the threshold.
    AreaGt {
        #[arg(long)]
        threshold: f64,
    },
    /// Towns whose bounding box overlaps the window.
    Bbox {
        #[arg(long, value_parser = parse_box, allow_hyphen_values = true)]
        window: Box2,
    },
    /// Roads shorter than max-len built after a date.
    Roads {
        #[arg(long)]
        max_len: f64,
        #[arg(long)]
        after: NaiveDate,
    },
    /// Towns closer than dist to one road.
    NearRoad {
        #[arg(long)]
        dist: f64,
        #[arg(long)]
        road: String,
    },
    /// Every town-road pair closer than dist.
    NearAny {
        #[arg(long)]
        dist: f64,
    },
}

#[derive(Subcommand, Debug)]
enum TopologyCmd {
    /// Build the store from the document's regions and write it as JSON.
    Build {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Areas whose bbox overlaps the window, rebuilt from fetched edges.
    Window {
        #[arg(long, conflicts_with = "store", required_unless_present = "store")]
        data: Option<PathBuf>,
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, value_parser = parse_box, allow_hyphen_values = true)]
        window: Box2,
        #[arg(long, value_enum, default_value_t = Selection::Abox)]
        select: Selection,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Selection {
    Abox,
    Bbox,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Solver {
    Raster,
    Vector,
    Converge,
}

#[derive(Args, Debug)]
struct CcmArgs {
    #[arg(value_enum)]
    solver: Solver,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    from: Point2,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    to: Point2,
    #[arg(long)]
    connectivity: Option<u32>,
    #[arg(long)]
    cell_size: Option<f64>,
    #[arg(long)]
    steiner: Option<usize>,
    /// Write the path vertices as CSV.
    #[arg(long)]
    path_out: Option<PathBuf>,
    /// converge: cell sizes; defaults to the configured size and four halvings.
    #[arg(long, value_delimiter = ',')]
    cell_sizes: Vec<f64>,
    /// converge: connectivities to compare.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    connectivities: Vec<u32>,
    /// converge: Steiner counts to compare.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    steiner_counts: Vec<usize>,
    /// converge: record wall-clock runtimes instead of zeros.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct StratifyArgs {
    #[command(flatten)]
    common: SampleArgs,
    /// Write the sample plan as CSV.
    #[arg(long)]
    plan_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    common: SampleArgs,
    /// point_id,crop table for the plan drawn with the same seed.
    #[arg(long)]
    outcomes: PathBuf,
    /// year,cultivable_area table of earlier estimates.
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// x,y table to draw as the path overlay.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Shade blocks by stratum.
    #[arg(long)]
    strata: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(thiserror::Error, Debug)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Ccm(#[from] CcmError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error("no path from ({0}, {1}) to ({2}, {3})")]
    NoPath(f64, f64, f64, f64),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(e) if e.is_io() => EXIT_IO,
            CliError::Write(_) => EXIT_IO,
            CliError::NoPath(..) | CliError::Query(QueryError::RoadNotFound(_)) => EXIT_NO_RESULT,
            _ => EXIT_INVALID,
        }
    }
}

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> =
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("expected {n} comma-separated finite numbers"));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let v = parse_numbers(s, 2)?;
    Ok(Point2::new(v[0], v[1]))
}

fn parse_box(s: &str) -> Result<Box2, String> {
    let v = parse_numbers(s, 4)?;
    Box2::from_coords(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// Runs one command. Results go to `out`, diagnostics to `err`; the return
/// value is the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if matches!(e, CliError::NoPath(..)) {
                let _ = writeln!(err, "landcore: no path");
            }
            let _ = writeln!(err, "landcore: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Query(a) => cmd_query(a, out),
        Command::Topology(t) => cmd_topology(t, out),
        Command::Ccm(a) => cmd_ccm(a, out),
        Command::Stratify(a) => cmd_stratify(a, out),
        Command::Report(a) => cmd_report(a, out),
        Command::Render(a) => cmd_render(a),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| IoError::Io { path: path.to_path_buf(), source: e }.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Io { path: path.to_path_buf(), source: e }.into())
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    Ok(match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    })
}

fn cmd_query(a: QueryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let path = a.data.ok_or_else(|| CliError::Invalid("--data is required".into()))?;
    let mut ds: Dataset = load_document(&path)?.dataset()?;
    if !a.no_index {
        ds.build_index();
    }
    let text = match a.kind {
        QueryKind::AreaGt { threshold } => tables::towns_csv(&query::towns_area_gt(&ds, threshold)?),
        QueryKind::Bbox { window } => tables::towns_csv(&query::towns_bbox_overlapping(&ds, &window)),
        QueryKind::Roads { max_len, after } => tables::roads_csv(&query::roads_short_recent(&ds, max_len, after)?),
        QueryKind::NearRoad { dist, road } => tables::towns_csv(&query::towns_near_road(&ds, dist, &road)?),
        QueryKind::NearAny { dist } => tables::pairs_csv(&query::towns_near_any_road(&ds, dist)?),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_topology(t: TopologyCmd, out: &mut dyn Write) -> Result<(), CliError> {
    match t {
        TopologyCmd::Build { data, out: dest } => {
            let store = build_topology(&load_document(&data)?.regions()?)?;
            let json = serde_json::to_string_pretty(&store).expect("store serializes") + "\n";
            match dest {
                Some(p) => write_file(&p, &json),
                None => Ok(out.write_all(json.as_bytes())?),
            }
        }
        TopologyCmd::Window { data, store, window, select } => {
            let store: TopologyStore = match (data, store) {
                (Some(d), _) => build_topology(&load_document(&d)?.regions()?)?,
                (None, Some(s)) => serde_json::from_str(&read_file(&s)?).map_err(|e| IoError::Parse {
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                })?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let selection = match select {
                Selection::Abox => EdgeSelection::Abox,
                Selection::Bbox => EdgeSelection::Bbox,
            };
            let result = window_query_with(&store, &window, selection)?;
            let mut rows: Vec<(u32, String)> = result
                .complete
                .iter()
                .map(|(id, p)| (*id, format!("{id},complete,{},{}", tables::fixed(area(p)), p.vertex_count())))
                .collect();
            rows.extend(result.incomplete.iter().map(|id| (*id, format!("{id},incomplete,,"))));
            rows.sort_by_key(|r| r.0);
            writeln!(out, "area_id,status,area,n_vertices")?;
            for (_, row) in rows {
                writeln!(out, "{row}")?;
            }
            Ok(())
        }
    }
}

fn cost_map(doc: &GeoDocument, cfg: &RunConfig) -> Result<CostMap, CliError> {
    Ok(doc.cost_map(cfg.ccm.default_weight)?)
}

fn cmd_ccm(a: CcmArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let map = cost_map(&load_document(&a.data)?, &cfg)?;
    let connectivity = Connectivity::from_count(a.connectivity.unwrap_or(cfg.ccm.connectivity))?;
    let cell = a.cell_size.unwrap_or(cfg.ccm.cell_size);
    let m = a.steiner.unwrap_or(cfg.ccm.steiner);
    let result = match a.solver {
        Solver::Raster => raster_path(&rasterize(&map, cell)?, a.from, a.to, connectivity)?,
        Solver::Vector => vector_path(&map, a.from, a.to, m)?,
        Solver::Converge => {
            let cells = if a.cell_sizes.is_empty() {
                (0..5).map(|k| cell / f64::from(1u32 << k)).collect()
            } else {
                a.cell_sizes
            };
            let conns = a.connectivities.iter().map(|&c| Connectivity::from_count(c)).collect::<Result<Vec<_>, _>>()?;
            let report = convergence_report(&map, a.from, a.to, &cells, &conns, &a.steiner_counts)?;
            out.write_all(report.to_csv(a.timing).as_bytes())?;
            return Ok(());
        }
    };
    if !result.found() {
        return Err(CliError::NoPath(a.from.x, a.from.y, a.to.x, a.to.y));
    }
    if let Some(p) = &a.path_out {
        write_file(p, &tables::path_csv(&result.vertices))?;
    }
    out.write_all(tables::path_summary_csv(&result).as_bytes())?;
    Ok(())
}

struct Sampled {
    cfg: RunConfig,
    strata: Vec<Stratum>,
    plan: SamplePlan,
}

fn sample(a: &SampleArgs) -> Result<Sampled, CliError> {
    let cfg = load_config(a.config.as_deref())?;
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(a.seed, cfg.seed, env.as_deref())?;
    let fm = load_document(&a.data)?.field_map(cfg.strata.block_size)?;
    let strata = stratify(&fm, cfg.strata.thresholds(), cfg.strata.priors)?;
    let plan = allocate_samples(&strata, cfg.strata.total_samples, seed)?;
    Ok(Sampled { cfg, strata, plan })
}

fn cmd_stratify(a: StratifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let s = sample(&a.common)?;
    if let Some(p) = &a.plan_out {
        write_file(p, &tables::plan_csv(&s.strata, &s.plan))?;
    }
    out.write_all(tables::strata_csv(&s.strata, &s.plan).as_bytes())?;
    Ok(())
}

fn cmd_report(a: ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let s = sample(&a.common)?;
    let outcomes = tables::read_outcomes(&read_file(&a.outcomes)?)?;
    let estimate = estimate_cultivable_area(&s.strata, &s.plan, &outcomes)?;
    let d = &s.cfg.demand;
    let loss_rate = match &a.history {
        Some(p) => {
            let mut series = tables::read_history(&read_file(p)?)?;
            series.push((d.year, estimate.area));
            yearly_loss(&series)?.loss_rate()
        }
        None => 0.0,
    };
    let stats = LandStats {
        year: d.year,
        cultivable_area: estimate.area,
        stderr: estimate.stderr,
        loss_rate,
        import_requirement: import_requirement(d.population, d.per_capita_demand, estimate.area, d.yield_per_m2)?,
    };
    out.write_all(tables::stats_csv(&stats).as_bytes())?;
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<(), CliError> {
    let doc = load_document(&a.data)?;
    let mut scene = Scene {
        polygons: doc.polygons()?.into_iter().map(|(c, p)| (c.to_string(), p)).collect(),
        polylines: doc.roads()?.into_iter().map(|r| ("road".to_string(), r.shape)).collect(),
        extent: doc.extent(),
        ..Scene::default()
    };
    if a.strata {
        let cfg = load_config(a.config.as_deref())?;
        let fm = doc.field_map(cfg.strata.block_size)?;
        let strata = stratify(&fm, cfg.strata.thresholds(), cfg.strata.priors)?;
        scene.strata = strata.iter().flat_map(|s| s.blocks.iter().map(move |b| (s.level, *b))).collect();
    }
    if let Some(p) = &a.path {
        scene.path = Some(tables::read_path(&read_file(p)?)?);
    }
    let svg = render_svg(&scene)?;
    write_file(&a.out, &svg)
}
