//! Topological storage of a planar partition.
//!
//! Every maximal boundary chain shared by the same pair of areas is stored
//! once as an [`Edge`]. Areas keep an ordered list of signed edge references:
//! `+b` walks edge `b` in its stored vertex order, `-b` walks it backwards,
//! and a `0` starts the next island ring. Edges also carry an `abox`, the
//! union of their own box with the boxes of both adjacent areas, so that a
//! window selection on `abox` always fetches every edge needed to rebuild the
//! areas hit by the window.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::geometry::{
    boxes_overlap, point_in_polygon, point_segment_distance, segments_cross, Bounded, Box2, GeomError, Point2,
    Polygon2, Polyline2, Ring, EPSILON,
};

pub type AreaId = u32;
pub type EdgeId = u32;

/// A vertex of one area lying this close to another area's boundary without
/// being one of its vertices means the shared chains were not traced
/// identically.
pub const MISMATCH_TOLERANCE: f64 = 1e-6;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum TopologyError {
    #[error("area id must be positive")]
    ZeroAreaId,

    #[error("duplicate area id {0}")]
    DuplicateAreaId(AreaId),

    #[error("areas {0} and {1} overlap: {2}")]
    Partition(AreaId, AreaId, String),

    #[error("area {0} does not share an identical chain with area {1}: vertex ({2}, {3}) lies on its boundary")]
    Snapping(AreaId, AreaId, f64, f64),

    #[error("area {0} collapses under vertex snapping")]
    Collapsed(AreaId),

    #[error("edge {0} references missing area {1}")]
    DanglingArea(EdgeId, AreaId),

    #[error("area {0} references missing edge {1}")]
    DanglingEdge(AreaId, EdgeId),

    #[error("edge refs of area {0} do not chain into closed rings")]
    BrokenChain(AreaId),

    #[error("no area with id {0}")]
    UnknownArea(AreaId),

    #[error("store integrity: {0}")]
    Integrity(String),

    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub b_id: EdgeId,
    pub line: Polyline2,
    pub bbox: Box2,
    pub abox: Box2,
    pub a_id_left: Option<AreaId>,
    pub a_id_right: Option<AreaId>,
}

impl Edge {
    pub fn is_closed(&self) -> bool {
        let v = self.line.vertices();
        v[0].coincides(v[v.len() - 1])
    }

    pub fn is_interior(&self) -> bool {
        self.a_id_left.is_some() && self.a_id_right.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaRecord {
    pub a_id: AreaId,
    pub edge_refs: Vec<i64>,
    pub bbox: Box2,
}

impl AreaRecord {
    /// Edge refs grouped per ring: outer first, then one group per island.
    pub fn ring_refs(&self) -> impl Iterator<Item = &[i64]> {
        self.edge_refs.split(|&r| r == 0)
    }
}

/// Describes the indirect relation from areas to their boundary edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyCatalog {
    pub ind_relname: String,
    pub ind_relattr: String,
    pub topoltype: String,
    /// Number of referenced objects per row; 0 means variable.
    pub ref_count: u32,
    pub ref_relname: String,
    pub ref_relid: String,
    pub ref_relvis: String,
    pub ref_relbbox: String,
}

impl Default for TopologyCatalog {
    fn default() -> Self {
        Self {
            ind_relname: "areas".into(),
            ind_relattr: "b_ids".into(),
            topoltype: "polygonal network".into(),
            ref_count: 0,
            ref_relname: "boundaries".into(),
            ref_relid: "b_id".into(),
            ref_relvis: "line".into(),
            ref_relbbox: "abox".into(),
        }
    }
}

pub const TOPOLOGY_TYPES: [&str; 3] = ["linear", "polygonal network", "hierarchy"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StoreFile", try_from = "StoreFile")]
pub struct TopologyStore {
    pub edges: BTreeMap<EdgeId, Edge>,
    pub areas: BTreeMap<AreaId, AreaRecord>,
    pub catalog: TopologyCatalog,
    pub extent: Box2,
}

/// On-disk layout: edges, areas and catalog rows as three arrays.
#[derive(Serialize, Deserialize)]
struct StoreFile {
    extent: Box2,
    catalog: Vec<TopologyCatalog>,
    edges: Vec<Edge>,
    areas: Vec<AreaRecord>,
}

impl From<TopologyStore> for StoreFile {
    fn from(s: TopologyStore) -> Self {
        StoreFile {
            extent: s.extent,
            catalog: vec![s.catalog],
            edges: s.edges.into_values().collect(),
            areas: s.areas.into_values().collect(),
        }
    }
}

impl TryFrom<StoreFile> for TopologyStore {
    type Error = TopologyError;

    fn try_from(f: StoreFile) -> Result<Self, Self::Error> {
        let catalog = match <[TopologyCatalog; 1]>::try_from(f.catalog) {
            Ok([c]) => c,
            Err(v) => return Err(TopologyError::Integrity(format!("expected one catalog row, found {}", v.len()))),
        };
        let store = TopologyStore {
            edges: f.edges.into_iter().map(|e| (e.b_id, e)).collect(),
            areas: f.areas.into_iter().map(|a| (a.a_id, a)).collect(),
            catalog,
            extent: f.extent,
        };
        store.validate()?;
        Ok(store)
    }
}

impl std::fmt::Display for EdgeSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeSelection::Abox => "abox",
            EdgeSelection::Bbox => "bbox",
        })
    }
}

/// Which box an edge is selected by in a window query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSelection {
    Abox,
    /// The edge's own tight box. Misses edges of areas that only reach into
    /// the window through their other edges.
    Bbox,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowResult {
    pub complete: Vec<(AreaId, Polygon2)>,
    /// Areas hit by the window whose edges were not all selected.
    pub incomplete: Vec<AreaId>,
}

/// Snapped vertex registry: vertices within [`EPSILON`] share an id.
#[derive(Default)]
struct VertexTable {
    ids: HashMap<(i64, i64), usize>,
    points: Vec<Point2>,
}

impl VertexTable {
    fn key(p: Point2) -> (i64, i64) {
        ((p.x / EPSILON).round() as i64, (p.y / EPSILON).round() as i64)
    }

    fn id(&mut self, p: Point2) -> usize {
        let next = self.points.len();
        let id = *self.ids.entry(Self::key(p)).or_insert(next);
        if id == next {
            self.points.push(p);
        }
        id
    }
}

/// Builds the store from polygons forming a planar partition.
pub fn build_topology(inputs: &[(AreaId, Polygon2)]) -> Result<TopologyStore, TopologyError> {
    let mut seen = std::collections::HashSet::new();
    for (id, _) in inputs {
        if *id == 0 {
            return Err(TopologyError::ZeroAreaId);
        }
        if !seen.insert(*id) {
            return Err(TopologyError::DuplicateAreaId(*id));
        }
    }

    let polygons: Vec<(AreaId, Polygon2)> = inputs.iter().map(|(id, p)| (*id, p.normalized())).collect();
    check_partition(&polygons)?;

    let mut table = VertexTable::default();
    // rings[area][ring] = snapped vertex ids
    let mut rings: Vec<Vec<Vec<usize>>> = Vec::with_capacity(polygons.len());
    let mut owner: HashMap<(usize, usize), AreaId> = HashMap::new();
    for (id, poly) in &polygons {
        let mut area_rings = Vec::new();
        for ring in poly.rings() {
            let ids: Vec<usize> = ring.vertices().iter().map(|&p| table.id(p)).collect();
            let n = ids.len();
            for i in 0..n {
                let seg = (ids[i], ids[(i + 1) % n]);
                if seg.0 == seg.1 {
                    return Err(TopologyError::Collapsed(*id));
                }
                if let Some(other) = owner.insert(seg, *id) {
                    return Err(TopologyError::Partition(
                        other,
                        *id,
                        "boundary traversed twice in the same direction".into(),
                    ));
                }
            }
            area_rings.push(ids);
        }
        rings.push(area_rings);
    }

    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); table.points.len()];
    for &(u, v) in owner.keys() {
        for (a, b) in [(u, v), (v, u)] {
            if !neighbours[a].contains(&b) {
                neighbours[a].push(b);
            }
        }
    }
    let is_node = |v: usize| -> bool {
        let nb = &neighbours[v];
        if nb.len() != 2 {
            return true;
        }
        let (a, b) = (nb[0], nb[1]);
        owner.get(&(a, v)) != owner.get(&(v, b)) || owner.get(&(v, a)) != owner.get(&(b, v))
    };

    let mut edges: BTreeMap<EdgeId, Edge> = BTreeMap::new();
    let mut stored_dir: HashMap<(usize, usize), EdgeId> = HashMap::new();
    let mut edge_len: HashMap<EdgeId, usize> = HashMap::new();
    let mut areas: BTreeMap<AreaId, AreaRecord> = BTreeMap::new();

    for ((a_id, poly), area_rings) in polygons.iter().zip(&rings) {
        let mut refs = Vec::new();
        for (k, ids) in area_rings.iter().enumerate() {
            if k > 0 {
                refs.push(0);
            }
            for chain in split_chains(ids, &is_node) {
                let (c0, c1) = (chain[0], chain[1]);
                let signed = if let Some(&b) = stored_dir.get(&(c0, c1)) {
                    b as i64
                } else if let Some(&b) = stored_dir.get(&(c1, c0)) {
                    -(b as i64)
                } else {
                    let b_id = edges.len() as EdgeId + 1;
                    for w in chain.windows(2) {
                        stored_dir.insert((w[0], w[1]), b_id);
                    }
                    let line = Polyline2::new(chain.iter().map(|&v| table.points[v]).collect())?;
                    let bbox = line.bbox();
                    edges.insert(
                        b_id,
                        Edge {
                            b_id,
                            line,
                            bbox,
                            abox: bbox,
                            a_id_left: Some(*a_id),
                            a_id_right: owner.get(&(c1, c0)).copied(),
                        },
                    );
                    edge_len.insert(b_id, chain.len());
                    b_id as i64
                };
                if edge_len[&(signed.unsigned_abs() as EdgeId)] != chain.len() {
                    return Err(TopologyError::Integrity(format!(
                        "area {a_id} traces edge {} with a different vertex chain",
                        signed.abs()
                    )));
                }
                refs.push(signed);
            }
        }
        areas.insert(*a_id, AreaRecord { a_id: *a_id, edge_refs: refs, bbox: poly.bbox() });
    }

    let extent = areas
        .values()
        .map(|a| a.bbox)
        .reduce(|acc, b| acc.union(&b))
        .unwrap_or(Box2 { min: Point2::new(0.0, 0.0), max: Point2::new(0.0, 0.0) });

    let mut store = TopologyStore { edges, areas, catalog: TopologyCatalog::default(), extent };
    let aboxes =
        store.edges.values().map(|e| compute_abox(e, &store).map(|b| (e.b_id, b))).collect::<Result<Vec<_>, _>>()?;
    for (b_id, abox) in aboxes {
        let edge = store.edges.get_mut(&b_id).expect("edge exists");
        assert!(abox.contains_box(&edge.bbox), "abox must contain bbox");
        edge.abox = abox;
    }
    Ok(store)
}

/// Splits a closed ring of vertex ids into maximal chains between nodes.
/// A ring without nodes becomes one closed chain starting at its smallest id.
fn split_chains(ids: &[usize], is_node: &impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let n = ids.len();
    let node_positions: Vec<usize> = (0..n).filter(|&i| is_node(ids[i])).collect();
    let start = match node_positions.first() {
        Some(&s) => s,
        None => (0..n).min_by_key(|&i| ids[i]).expect("ring is nonempty"),
    };
    let rotated: Vec<usize> = (0..n).map(|i| ids[(start + i) % n]).collect();
    if node_positions.is_empty() {
        let mut chain = rotated;
        chain.push(chain[0]);
        return vec![chain];
    }
    let mut chains = Vec::new();
    let mut current = vec![rotated[0]];
    for &v in rotated.iter().skip(1).chain(std::iter::once(&rotated[0])) {
        current.push(v);
        if is_node(v) {
            chains.push(std::mem::replace(&mut current, vec![v]));
        }
    }
    chains
}

fn check_partition(polygons: &[(AreaId, Polygon2)]) -> Result<(), TopologyError> {
    let boxes: Vec<Box2> = polygons.iter().map(|(_, p)| p.bbox()).collect();
    for i in 0..polygons.len() {
        for j in 0..polygons.len() {
            if i == j || !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (ida, a) = (&polygons[i].0, &polygons[i].1);
            let (idb, b) = (&polygons[j].0, &polygons[j].1);
            let b_vertices: Vec<Point2> = b.rings().flat_map(|r| r.vertices().iter().copied()).collect();
            for ring in a.rings() {
                for &v in ring.vertices() {
                    if !boxes[j].expand(MISMATCH_TOLERANCE).contains_point(v)
                        || b_vertices.iter().any(|w| w.coincides(v))
                    {
                        continue;
                    }
                    let near = b
                        .rings()
                        .any(|r| r.segments().any(|(p, q)| point_segment_distance(v, p, q) <= MISMATCH_TOLERANCE));
                    if near {
                        return Err(TopologyError::Snapping(*ida, *idb, v.x, v.y));
                    }
                    if point_in_polygon(v, b) {
                        return Err(TopologyError::Partition(
                            *ida,
                            *idb,
                            format!("vertex ({}, {}) lies inside", v.x, v.y),
                        ));
                    }
                }
                if i < j {
                    for (p, q) in ring.segments() {
                        let crosses = b.rings().any(|r| r.segments().any(|(s, t)| segments_cross(p, q, s, t)));
                        if crosses {
                            return Err(TopologyError::Partition(*ida, *idb, "boundaries cross".into()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Union of the edge's own box with the boxes of its adjacent areas.
pub fn compute_abox(e: &Edge, store: &TopologyStore) -> Result<Box2, TopologyError> {
    let mut abox = e.line.bbox();
    for side in [e.a_id_left, e.a_id_right].into_iter().flatten() {
        let area = store.areas.get(&side).ok_or(TopologyError::DanglingArea(e.b_id, side))?;
        abox = abox.union(&area.bbox);
    }
    Ok(abox)
}

fn assemble_ring(a_id: AreaId, refs: &[i64], lookup: &impl Fn(EdgeId) -> Option<Edge>) -> Result<Ring, TopologyError> {
    let mut vertices: Vec<Point2> = Vec::new();
    for &r in refs {
        let b_id = r.unsigned_abs() as EdgeId;
        let edge = lookup(b_id).ok_or(TopologyError::DanglingEdge(a_id, b_id))?;
        let mut chain = edge.line.vertices().to_vec();
        if r < 0 {
            chain.reverse();
        }
        match vertices.last() {
            None => vertices.extend(chain),
            Some(last) if last.coincides(chain[0]) => vertices.extend(&chain[1..]),
            Some(_) => return Err(TopologyError::BrokenChain(a_id)),
        }
    }
    if vertices.len() < 2 || !vertices[0].coincides(vertices[vertices.len() - 1]) {
        return Err(TopologyError::BrokenChain(a_id));
    }
    vertices.pop();
    Ring::new(vertices).map_err(|_| TopologyError::BrokenChain(a_id))
}

fn reconstruct_with(record: &AreaRecord, lookup: &impl Fn(EdgeId) -> Option<Edge>) -> Result<Polygon2, TopologyError> {
    let mut rings =
        record.ring_refs().map(|refs| assemble_ring(record.a_id, refs, lookup)).collect::<Result<Vec<_>, _>>()?;
    let outer = rings.remove(0);
    Polygon2::new(outer, rings).map_err(|_| TopologyError::BrokenChain(record.a_id))
}

/// Rebuilds an area's polygon from its edge references.
pub fn reconstruct_polygon(a_id: AreaId, store: &TopologyStore) -> Result<Polygon2, TopologyError> {
    let record = store.areas.get(&a_id).ok_or(TopologyError::UnknownArea(a_id))?;
    reconstruct_with(record, &|b| store.edges.get(&b).cloned())
}

/// Edges are fetched by `selection` and only those edges are available for
/// rebuilding the areas whose bbox overlaps the window.
pub fn window_query_with(
    store: &TopologyStore,
    window: &Box2,
    selection: EdgeSelection,
) -> Result<WindowResult, TopologyError> {
    let fetched: HashMap<EdgeId, &Edge> = store
        .edges
        .values()
        .filter(|e| match selection {
            EdgeSelection::Abox => boxes_overlap(&e.abox, window),
            EdgeSelection::Bbox => boxes_overlap(&e.bbox, window),
        })
        .map(|e| (e.b_id, e))
        .collect();

    let mut result = WindowResult::default();
    for area in store.areas.values().filter(|a| boxes_overlap(&a.bbox, window)) {
        let all_fetched =
            area.edge_refs.iter().filter(|&&r| r != 0).all(|r| fetched.contains_key(&(r.unsigned_abs() as EdgeId)));
        if !all_fetched {
            result.incomplete.push(area.a_id);
            continue;
        }
        let polygon = reconstruct_with(area, &|b| fetched.get(&b).map(|e| (*e).clone()))?;
        result.complete.push((area.a_id, polygon));
    }
    Ok(result)
}

/// All areas whose bbox overlaps `window`, each rebuilt completely.
pub fn window_query(store: &TopologyStore, window: &Box2) -> Result<Vec<(AreaId, Polygon2)>, TopologyError> {
    let result = window_query_with(store, window, EdgeSelection::Abox)?;
    if let Some(a_id) = result.incomplete.first() {
        return Err(TopologyError::Integrity(format!("abox selection missed an edge of area {a_id}")));
    }
    Ok(result.complete)
}

impl TopologyStore {
    /// Total number of vertices over all stored edge lines.
    pub fn stored_vertex_count(&self) -> usize {
        self.edges.values().map(|e| e.line.vertices().len()).sum()
    }

    /// Signed references to each edge, in area order.
    pub fn references(&self) -> BTreeMap<EdgeId, Vec<(AreaId, i64)>> {
        let mut refs: BTreeMap<EdgeId, Vec<(AreaId, i64)>> = self.edges.keys().map(|&b| (b, Vec::new())).collect();
        for area in self.areas.values() {
            for &r in area.edge_refs.iter().filter(|&&r| r != 0) {
                refs.entry(r.unsigned_abs() as EdgeId).or_default().push((area.a_id, r));
            }
        }
        refs
    }

    /// Checks every store invariant: refs resolve, interior edges are
    /// referenced twice with opposite signs, hull edges once, abox contains
    /// bbox, and every area rebuilds.
    pub fn validate(&self) -> Result<(), TopologyError> {
        if !TOPOLOGY_TYPES.contains(&self.catalog.topoltype.as_str()) {
            return Err(TopologyError::Integrity(format!("unknown topoltype {:?}", self.catalog.topoltype)));
        }
        for (&b_id, edge) in &self.edges {
            if b_id != edge.b_id || b_id == 0 {
                return Err(TopologyError::Integrity(format!("edge key {b_id} mismatch")));
            }
            if edge.a_id_left.is_none() && edge.a_id_right.is_none() {
                return Err(TopologyError::Integrity(format!("edge {b_id} has no adjacent area")));
            }
            if !edge.abox.contains_box(&edge.bbox) || edge.bbox != edge.line.bbox() {
                return Err(TopologyError::Integrity(format!("edge {b_id} boxes are inconsistent")));
            }
            compute_abox(edge, self)?;
        }
        for (&b_id, refs) in &self.references() {
            let edge = self.edges.get(&b_id).ok_or_else(|| TopologyError::DanglingEdge(refs[0].0, b_id))?;
            let ok = if edge.is_interior() {
                refs.len() == 2
                    && refs[0].1 == -refs[1].1
                    && refs.iter().any(|&(a, r)| r > 0 && Some(a) == edge.a_id_left)
                    && refs.iter().any(|&(a, r)| r < 0 && Some(a) == edge.a_id_right)
            } else {
                refs.len() == 1
            };
            if !ok {
                return Err(TopologyError::Integrity(format!("edge {b_id} referenced {refs:?}")));
            }
        }
        for &a_id in self.areas.keys() {
            reconstruct_polygon(a_id, self)?;
        }
        Ok(())
    }
}
