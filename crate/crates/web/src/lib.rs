//! wasm-bindgen entry points for the static demo page in `www/`. Every
//! function takes plain numbers or a document string and returns JSON.

use landcore::ccm::{raster_path, rasterize, vector_path, Connectivity, PathResult};
use landcore::geometry::{Box2, Point2, Polygon2};
use landcore::io::{parse_document, GeoDocument};
use landcore::stratification::{allocate_samples, stratify, FieldMap, Priors, Thresholds};
use landcore::synth::grid_partition;
use landcore::topology::{build_topology, window_query_with, EdgeSelection};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Document shown when the page has not loaded one of its own.
pub const DEMO_DOCUMENT: &str = include_str!("../www/demo.json");

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Io(#[from] landcore::io::IoError),
    #[error(transparent)]
    Ccm(#[from] landcore::ccm::CcmError),
    #[error(transparent)]
    Topology(#[from] landcore::topology::TopologyError),
    #[error(transparent)]
    Strat(#[from] landcore::stratification::StratError),
    #[error(transparent)]
    Geometry(#[from] landcore::geometry::GeomError),
    #[error("document has no extent")]
    NoExtent,
}

type Xy = [f64; 2];

fn xy(p: Point2) -> Xy {
    [p.x, p.y]
}

fn rings(p: &Polygon2) -> Vec<Vec<Xy>> {
    p.rings().map(|r| r.vertices().iter().copied().map(xy).collect()).collect()
}

fn box_json(b: Box2) -> [f64; 4] {
    [b.min.x, b.min.y, b.max.x, b.max.y]
}

#[derive(Serialize)]
struct Region {
    rings: Vec<Vec<Xy>>,
    weight: f64,
}

#[derive(Serialize)]
struct Path {
    method: String,
    /// `null` when no path exists.
    cost: Option<f64>,
    vertices: Vec<Xy>,
}

impl From<PathResult> for Path {
    fn from(r: PathResult) -> Self {
        Path {
            method: r.method.to_string(),
            cost: r.found().then_some(r.total_cost),
            vertices: r.vertices.into_iter().map(xy).collect(),
        }
    }
}

#[derive(Serialize)]
struct CcmCompare {
    extent: [f64; 4],
    regions: Vec<Region>,
    raster: Path,
    vector: Path,
}

#[derive(Serialize)]
struct WindowArea {
    id: u64,
    rings: Vec<Vec<Xy>>,
    abox: &'static str,
    bbox: &'static str,
}

#[derive(Serialize)]
struct WindowDemo {
    extent: [f64; 4],
    stored_vertices: usize,
    input_vertices: usize,
    areas: Vec<WindowArea>,
}

#[derive(Serialize)]
struct StratumJson {
    level: &'static str,
    area: f64,
    samples: usize,
    blocks: Vec<[f64; 4]>,
}

#[derive(Serialize)]
struct StratifyDemo {
    extent: [f64; 4],
    fields: Vec<Vec<Vec<Xy>>>,
    strata: Vec<StratumJson>,
    points: Vec<Xy>,
}

fn document(text: &str) -> Result<GeoDocument, DemoError> {
    Ok(parse_document(if text.trim().is_empty() { DEMO_DOCUMENT } else { text })?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo output is plain data")
}

/// Raster and vector least-cost paths between two points of `doc` (the demo
/// document when empty).
pub fn ccm_compare_json(
    doc: &str,
    from: Point2,
    to: Point2,
    cell_size: f64,
    connectivity: u32,
    steiner: usize,
) -> Result<String, DemoError> {
    let doc = document(doc)?;
    let map = doc.cost_map(1.0)?;
    let grid = rasterize(&map, cell_size)?;
    let raster = raster_path(&grid, from, to, Connectivity::from_count(connectivity)?)?;
    let vector = vector_path(&map, from, to, steiner)?;
    let regions = map.regions().iter().map(|r| Region { rings: rings(&r.polygon), weight: r.weight }).collect();
    Ok(to_json(&CcmCompare { extent: box_json(map.extent()), regions, raster: raster.into(), vector: vector.into() }))
}

/// Window query over an `n × n` grid partition with `subdiv` segments per
/// cell side, reporting for every hit area whether abox and bbox edge
/// selection could rebuild it.
pub fn window_demo_json(n: usize, subdiv: usize, window: Box2) -> Result<String, DemoError> {
    let cells = grid_partition(n, 10.0, subdiv);
    let store = build_topology(&cells)?;
    let abox = window_query_with(&store, &window, EdgeSelection::Abox)?;
    let bbox = window_query_with(&store, &window, EdgeSelection::Bbox)?;
    let status = |complete: bool| if complete { "complete" } else { "incomplete" };
    let areas = cells
        .iter()
        .filter(|(id, _)| abox.complete.iter().any(|(a, _)| a == id) || abox.incomplete.contains(id))
        .map(|(id, p)| WindowArea {
            id: *id as u64,
            rings: rings(p),
            abox: status(abox.complete.iter().any(|(a, _)| a == id)),
            bbox: status(bbox.complete.iter().any(|(a, _)| a == id)),
        })
        .collect();
    let side = n as f64 * 10.0;
    Ok(to_json(&WindowDemo {
        extent: [0.0, 0.0, side, side],
        stored_vertices: store.stored_vertex_count(),
        input_vertices: cells.iter().map(|(_, p)| p.vertex_count()).sum(),
        areas,
    }))
}

/// Strata and a seeded sample plan for the fields of `doc`.
pub fn stratify_json(doc: &str, block_size: f64, total: usize, seed: u64) -> Result<String, DemoError> {
    let doc = document(doc)?;
    let extent = doc.extent().ok_or(DemoError::NoExtent)?;
    let fields = doc.fields()?;
    let outlines = fields.iter().map(|f| rings(&f.geometry)).collect();
    let fm = FieldMap::new(fields, extent, block_size)?;
    let strata = stratify(&fm, Thresholds::default(), Priors::default())?;
    let plan = allocate_samples(&strata, total, seed)?;
    Ok(to_json(&StratifyDemo {
        extent: box_json(extent),
        fields: outlines,
        strata: strata
            .iter()
            .zip(&plan.counts)
            .map(|(s, &samples)| StratumJson {
                level: s.level.as_str(),
                area: s.area,
                samples,
                blocks: s.blocks.iter().copied().map(box_json).collect(),
            })
            .collect(),
        points: plan.points.iter().map(|p| xy(p.point)).collect(),
    }))
}

fn js(r: Result<String, DemoError>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn ccm_compare(
    doc: &str,
    sx: f64,
    sy: f64,
    tx: f64,
    ty: f64,
    cell_size: f64,
    connectivity: u32,
    steiner: usize,
) -> Result<String, JsError> {
    js(ccm_compare_json(doc, Point2::new(sx, sy), Point2::new(tx, ty), cell_size, connectivity, steiner))
}

#[wasm_bindgen]
pub fn window_demo(n: usize, subdiv: usize, x0: f64, y0: f64, x1: f64, y1: f64) -> Result<String, JsError> {
    js(Box2::from_coords(x0, y0, x1, y1).map_err(DemoError::from).and_then(|w| window_demo_json(n, subdiv, w)))
}

#[wasm_bindgen]
pub fn stratify_demo(doc: &str, block_size: f64, total: usize, seed: u64) -> Result<String, JsError> {
    js(stratify_json(doc, block_size, total, seed))
}
