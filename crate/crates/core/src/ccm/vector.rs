use std::collections::HashMap;

use super::cdt::{dedup_points, Mesh};
use super::dijkstra::shortest_path;
use super::{CcmError, CostMap, Method, PathResult, Triangulation};
use crate::geometry::{segments_intersect, Point2};

/// Position of the `k`-th Steiner point (1-based) along an edge: the base-2
/// van der Corput sequence 1/2, 1/4, 3/4, 1/8, 5/8, 3/8, 7/8, 1/16, ...
/// Every prefix is contained in the next, so node sets are nested in `m`.
pub fn steiner_parameter(k: usize) -> f64 {
    let (mut n, mut denom, mut value) = (k, 1.0, 0.0);
    while n > 0 {
        denom *= 2.0;
        value += (n & 1) as f64 / denom;
        n >>= 1;
    }
    value
}

fn map_input(map: &CostMap) -> (Vec<Point2>, Vec<(usize, usize)>) {
    let mut points = map.extent().corners().to_vec();
    let mut constraints = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    for region in map.regions() {
        for ring in region.polygon.rings() {
            let start = points.len();
            let n = ring.vertices().len();
            points.extend_from_slice(ring.vertices());
            constraints.extend((0..n).map(|i| (start + i, start + (i + 1) % n)));
        }
    }
    (points, constraints)
}

fn finish(map: &CostMap, mut tri: Triangulation) -> Triangulation {
    tri.triangle_regions = tri
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| tri.points[i]);
            map.region_at(Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0))
        })
        .collect();
    tri
}

fn build(points: &[Point2], constraints: &[(usize, usize)]) -> Result<(Triangulation, Vec<usize>), CcmError> {
    let (unique, remap) = dedup_points(points);
    let mut mesh = Mesh::new(unique);
    mesh.insert_all();
    for &(a, b) in constraints {
        mesh.insert_constraint(remap[a], remap[b])?;
    }
    Ok((mesh.finish(), remap))
}

/// Constrained Delaunay triangulation of the map extent with every region
/// ring segment as a constraint. Each triangle records its region.
pub fn triangulate(map: &CostMap) -> Result<Triangulation, CcmError> {
    let (points, constraints) = map_input(map);
    Ok(finish(map, build(&points, &constraints)?.0))
}

/// The triangulation the vector solver searches for endpoints `s` and `t`.
///
/// Both endpoints become vertices. When they lie in the same region and the
/// segment between them touches no region boundary, that segment is also a
/// constraint, so an unobstructed straight path is always a graph arc.
/// Returns the triangulation and the vertex indices of `s` and `t`.
pub fn vector_triangulation(map: &CostMap, s: Point2, t: Point2) -> Result<(Triangulation, usize, usize), CcmError> {
    for p in [s, t] {
        if !p.is_finite() || !map.extent().contains_point(p) {
            return Err(CcmError::OutsideMap(p.x, p.y));
        }
    }
    let (mut points, mut constraints) = map_input(map);
    let base = points.len();
    // endpoint order is fixed so swapping s and t yields the same mesh
    let swapped = (t.x, t.y) < (s.x, s.y);
    if swapped {
        points.extend([t, s]);
    } else {
        points.extend([s, t]);
    }
    let straight = s != t
        && map.region_at(s) == map.region_at(t)
        && !map
            .regions()
            .iter()
            .any(|r| r.polygon.rings().any(|ring| ring.segments().any(|(a, b)| segments_intersect(s, t, a, b))));
    if straight {
        constraints.push((base, base + 1));
    }
    let (tri, remap) = build(&points, &constraints)?;
    let (si, ti) = if swapped { (remap[base + 1], remap[base]) } else { (remap[base], remap[base + 1]) };
    Ok((finish(map, tri), si, ti))
}

/// Search graph over a triangulation: vertices plus `m` Steiner points per
/// edge, with straight arcs between all nodes on one triangle's boundary.
pub(crate) struct SteinerGraph<'a> {
    tri: &'a Triangulation,
    weights: Vec<f64>,
    edges: Vec<(usize, usize)>,
    edge_tris: Vec<Vec<usize>>,
    tri_edges: Vec<[usize; 3]>,
    vertex_tris: Vec<Vec<usize>>,
}

impl<'a> SteinerGraph<'a> {
    pub(crate) fn new(map: &CostMap, tri: &'a Triangulation) -> Self {
        let edges = tri.edges();
        let lookup: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut edge_tris = vec![Vec::new(); edges.len()];
        let mut vertex_tris = vec![Vec::new(); tri.points.len()];
        let mut tri_edges = Vec::with_capacity(tri.triangles.len());
        for (ti, t) in tri.triangles.iter().enumerate() {
            let mut ids = [0; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = lookup[&(a.min(b), a.max(b))];
                ids[k] = e;
                edge_tris[e].push(ti);
                vertex_tris[a].push(ti);
            }
            tri_edges.push(ids);
        }
        let weights = tri.triangle_regions.iter().map(|&r| map.weight_of(r)).collect();
        SteinerGraph { tri, weights, edges, edge_tris, tri_edges, vertex_tris }
    }

    fn node_count(&self, m: usize) -> usize {
        self.tri.points.len() + self.edges.len() * m
    }

    fn position(&self, node: usize, m: usize) -> Point2 {
        let n = self.tri.points.len();
        if node < n {
            return self.tri.points[node];
        }
        let (e, k) = ((node - n) / m, (node - n) % m + 1);
        let (a, b) = self.edges[e];
        self.tri.points[a].lerp(self.tri.points[b], steiner_parameter(k))
    }

    fn triangles_of(&self, node: usize, m: usize) -> &[usize] {
        let n = self.tri.points.len();
        if node < n {
            &self.vertex_tris[node]
        } else {
            &self.edge_tris[(node - n) / m]
        }
    }

    fn triangle_nodes(&self, ti: usize, m: usize, out: &mut Vec<usize>) {
        out.clear();
        out.extend_from_slice(&self.tri.triangles[ti]);
        let n = self.tri.points.len();
        for &e in &self.tri_edges[ti] {
            out.extend((0..m).map(|k| n + e * m + k));
        }
    }

    pub(crate) fn solve(&self, si: usize, ti: usize, m: usize) -> Option<(f64, Vec<Point2>)> {
        let positions: Vec<Point2> = (0..self.node_count(m)).map(|v| self.position(v, m)).collect();
        let mut members = Vec::new();
        let (cost, nodes) = shortest_path(positions.len(), si, ti, |u, out| {
            let pu = positions[u];
            for &tr in self.triangles_of(u, m) {
                let w = self.weights[tr];
                if w.is_infinite() {
                    continue;
                }
                self.triangle_nodes(tr, m, &mut members);
                for &v in &members {
                    if v != u {
                        out.push((v, pu.distance(positions[v]) * w));
                    }
                }
            }
        })?;
        Some((cost, nodes.into_iter().map(|v| positions[v]).collect()))
    }
}

/// Least-cost path over the Steiner graph of the map's triangulation with
/// `m` Steiner points per edge. The cost is an upper bound on the weighted
/// region optimum and does not increase with `m`.
pub fn vector_path(map: &CostMap, s: Point2, t: Point2, m: usize) -> Result<PathResult, CcmError> {
    if m < 1 {
        return Err(CcmError::BadSteinerCount);
    }
    let (tri, si, ti) = vector_triangulation(map, s, t)?;
    Ok(solve_on(map, &SteinerGraph::new(map, &tri), s, t, si, ti, m))
}

pub(crate) fn solve_on(
    map: &CostMap,
    graph: &SteinerGraph<'_>,
    s: Point2,
    t: Point2,
    si: usize,
    ti: usize,
    m: usize,
) -> PathResult {
    let method = Method::Vector(m);
    if map.weight_at(s).is_infinite() || map.weight_at(t).is_infinite() {
        return PathResult::no_path(method);
    }
    match graph.solve(si, ti, m) {
        None => PathResult::no_path(method),
        Some((cost, mut vertices)) => {
            if vertices.len() == 1 {
                vertices.push(t);
            }
            let last = vertices.len() - 1;
            vertices[0] = s;
            vertices[last] = t;
            PathResult { vertices: merge_collinear(map, vertices), total_cost: cost, method }
        }
    }
}

/// Drops interior vertices that lie on the segment joining their neighbours
/// inside one weight. Such detours only win Dijkstra ties by rounding.
fn merge_collinear(map: &CostMap, vertices: Vec<Point2>) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        if let (Some(&a), Some(&c)) = (out.last(), vertices.get(i + 1)) {
            let ac = a.distance(c);
            let cross = (v.x - a.x) * (c.y - a.y) - (v.y - a.y) * (c.x - a.x);
            let between = (v.x - a.x) * (c.x - v.x) + (v.y - a.y) * (c.y - v.y) >= 0.0;
            let same_weight = map.weight_at(a.lerp(v, 0.5)) == map.weight_at(v.lerp(c, 0.5));
            if between && same_weight && cross.abs() <= 1e-9 * ac * ac {
                continue;
            }
        }
        out.push(v);
    }
    out
}
