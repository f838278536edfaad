//! Constrained Delaunay triangulation.
//!
//! Points are inserted one by one into a bounding super-triangle with
//! Lawson flips restoring the Delaunay property. Constraint segments are
//! then recovered by flipping the edges they cross, after which the new
//! edges are flipped again until every unconstrained edge is locally
//! Delaunay. Orientation and in-circle tests use adaptive exact predicates.

use std::collections::{HashMap, HashSet, VecDeque};

use robust::Coord;
use serde::{Deserialize, Serialize};

use super::CcmError;
use crate::geometry::{Point2, EPSILON};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    pub points: Vec<Point2>,
    /// Counter-clockwise vertex index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Normalized `(low, high)` index pairs, sorted.
    pub constrained_edges: Vec<(usize, usize)>,
    /// Cost region containing each triangle, when built from a cost map.
    pub triangle_regions: Vec<Option<usize>>,
}

impl Triangulation {
    /// Every undirected edge once, as sorted `(low, high)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> =
            self.triangles.iter().flat_map(|t| (0..3).map(move |i| norm(t[i], t[(i + 1) % 3]))).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn is_constrained(&self, a: usize, b: usize) -> bool {
        self.constrained_edges.binary_search(&norm(a, b)).is_ok()
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn coord(p: Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

pub(crate) fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

fn in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
}

fn properly_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

pub(crate) struct Mesh {
    pts: Vec<Point2>,
    real: usize,
    tris: Vec<[usize; 3]>,
    edge_tri: HashMap<(usize, usize), usize>,
    constrained: HashSet<(usize, usize)>,
}

impl Mesh {
    pub(crate) fn new(points: Vec<Point2>) -> Self {
        let bb = crate::geometry::Box2::from_points(&points).expect("nonempty");
        let c = bb.center();
        let d = bb.width().max(bb.height()).max(1.0);
        let real = points.len();
        let mut pts = points;
        pts.push(Point2::new(c.x - 100.0 * d, c.y - 100.0 * d));
        pts.push(Point2::new(c.x + 100.0 * d, c.y - 100.0 * d));
        pts.push(Point2::new(c.x, c.y + 100.0 * d));
        let mut mesh = Mesh { pts, real, tris: Vec::new(), edge_tri: HashMap::new(), constrained: HashSet::new() };
        mesh.add_tri([real, real + 1, real + 2]);
        mesh
    }

    fn p(&self, i: usize) -> Point2 {
        self.pts[i]
    }

    fn add_tri(&mut self, t: [usize; 3]) -> usize {
        let id = self.tris.len();
        self.tris.push(t);
        self.link(id);
        id
    }

    fn link(&mut self, id: usize) {
        let t = self.tris[id];
        for i in 0..3 {
            self.edge_tri.insert((t[i], t[(i + 1) % 3]), id);
        }
    }

    fn unlink(&mut self, id: usize) {
        let t = self.tris[id];
        for i in 0..3 {
            self.edge_tri.remove(&(t[i], t[(i + 1) % 3]));
        }
    }

    fn set_tri(&mut self, id: usize, t: [usize; 3]) {
        self.unlink(id);
        self.tris[id] = t;
        self.link(id);
    }

    /// Vertex of triangle `id` opposite the directed edge `(u, v)`.
    fn apex(&self, id: usize, u: usize, v: usize) -> usize {
        let t = self.tris[id];
        *t.iter().find(|&&x| x != u && x != v).expect("triangle has an apex")
    }

    /// Replaces triangles `(u, v, p)` and `(v, u, q)` by `(u, q, p)` and
    /// `(q, v, p)`.
    fn flip(&mut self, u: usize, v: usize) -> (usize, usize) {
        let t1 = self.edge_tri[&(u, v)];
        let t2 = self.edge_tri[&(v, u)];
        let p = self.apex(t1, u, v);
        let q = self.apex(t2, v, u);
        self.unlink(t1);
        self.unlink(t2);
        self.tris[t1] = [u, q, p];
        self.tris[t2] = [q, v, p];
        self.link(t1);
        self.link(t2);
        (p, q)
    }

    pub(crate) fn insert_all(&mut self) {
        for i in 0..self.real {
            self.insert_point(i);
        }
    }

    fn insert_point(&mut self, i: usize) {
        let p = self.p(i);
        let mut target = None;
        for (id, t) in self.tris.iter().enumerate() {
            let o = [
                orient(self.pts[t[0]], self.pts[t[1]], p),
                orient(self.pts[t[1]], self.pts[t[2]], p),
                orient(self.pts[t[2]], self.pts[t[0]], p),
            ];
            if o.iter().all(|&x| x >= 0.0) {
                target = Some((id, o));
                break;
            }
        }
        let (id, o) = target.expect("super triangle contains every point");
        let [a, b, c] = self.tris[id];
        let mut stack = Vec::new();
        match o.iter().position(|&x| x == 0.0) {
            None => {
                self.set_tri(id, [a, b, i]);
                self.add_tri([b, c, i]);
                self.add_tri([c, a, i]);
                stack.extend([(a, b), (b, c), (c, a)]);
            }
            Some(k) => {
                // on edge (u, v) of this triangle, w opposite
                let (u, v, w) = match k {
                    0 => (a, b, c),
                    1 => (b, c, a),
                    _ => (c, a, b),
                };
                let other = self.edge_tri[&(v, u)];
                let x = self.apex(other, v, u);
                self.set_tri(id, [u, i, w]);
                self.add_tri([i, v, w]);
                self.set_tri(other, [v, i, x]);
                self.add_tri([i, u, x]);
                stack.extend([(v, w), (w, u), (u, x), (x, v)]);
            }
        }
        self.legalize(i, stack);
    }

    /// Flips edges `(u, v)` of triangles `(u, v, apex)` until locally Delaunay.
    fn legalize(&mut self, apex: usize, mut stack: Vec<(usize, usize)>) {
        while let Some((u, v)) = stack.pop() {
            if self.constrained.contains(&norm(u, v)) {
                continue;
            }
            let Some(&other) = self.edge_tri.get(&(v, u)) else { continue };
            let q = self.apex(other, v, u);
            if in_circle(self.p(u), self.p(v), self.p(apex), self.p(q)) > 0.0 {
                self.flip(u, v);
                stack.push((u, q));
                stack.push((q, v));
            }
        }
    }

    fn crossing_edges(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let (pa, pb) = (self.p(a), self.p(b));
        let mut out = Vec::new();
        for t in &self.tris {
            for i in 0..3 {
                let (u, v) = (t[i], t[(i + 1) % 3]);
                if u < v && properly_cross(pa, pb, self.p(u), self.p(v)) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub(crate) fn insert_constraint(&mut self, a: usize, b: usize) -> Result<(), CcmError> {
        if a == b {
            return Ok(());
        }
        let (pa, pb) = (self.p(a), self.p(b));
        let (dx, dy) = (pb.x - pa.x, pb.y - pa.y);
        let len2 = dx * dx + dy * dy;
        let mut between: Vec<(f64, usize)> = (0..self.real)
            .filter(|&k| k != a && k != b)
            .filter_map(|k| {
                let q = self.p(k);
                if orient(pa, pb, q) != 0.0 {
                    return None;
                }
                let t = ((q.x - pa.x) * dx + (q.y - pa.y) * dy) / len2;
                (t > 0.0 && t < 1.0).then_some((t, k))
            })
            .collect();
        if !between.is_empty() {
            between.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut from = a;
            for (_, k) in between {
                self.insert_constraint(from, k)?;
                from = k;
            }
            return self.insert_constraint(from, b);
        }

        if self.edge_tri.contains_key(&(a, b)) || self.edge_tri.contains_key(&(b, a)) {
            self.constrained.insert(norm(a, b));
            return Ok(());
        }

        let mut queue: VecDeque<(usize, usize)> = self.crossing_edges(a, b).into();
        if let Some(&e) = queue.iter().find(|e| self.constrained.contains(e)) {
            return Err(CcmError::CrossingConstraints(norm(a, b), e));
        }
        let mut fresh = Vec::new();
        let mut stalls = 0usize;
        while let Some((u, v)) = queue.pop_front() {
            let t1 = self.edge_tri[&(u, v)];
            let t2 = self.edge_tri[&(v, u)];
            let p = self.apex(t1, u, v);
            let q = self.apex(t2, v, u);
            if properly_cross(self.p(p), self.p(q), self.p(u), self.p(v)) {
                stalls = 0;
                self.flip(u, v);
                if properly_cross(pa, pb, self.p(p), self.p(q)) {
                    queue.push_back(norm(p, q));
                } else {
                    fresh.push(norm(p, q));
                }
            } else {
                stalls += 1;
                if stalls > queue.len() + 1 {
                    return Err(CcmError::Degenerate("constraint recovery stalled"));
                }
                queue.push_back((u, v));
            }
        }
        self.constrained.insert(norm(a, b));

        let mut changed = true;
        while changed {
            changed = false;
            for e in fresh.iter_mut() {
                let (u, v) = *e;
                if self.constrained.contains(&(u, v)) {
                    continue;
                }
                let (Some(&t1), Some(&t2)) = (self.edge_tri.get(&(u, v)), self.edge_tri.get(&(v, u))) else {
                    continue;
                };
                let p = self.apex(t1, u, v);
                let q = self.apex(t2, v, u);
                if in_circle(self.p(u), self.p(v), self.p(p), self.p(q)) > 0.0 {
                    self.flip(u, v);
                    *e = norm(p, q);
                    changed = true;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Triangulation {
        let real = self.real;
        let triangles: Vec<[usize; 3]> = self.tris.iter().copied().filter(|t| t.iter().all(|&v| v < real)).collect();
        let mut constrained_edges: Vec<(usize, usize)> =
            self.constrained.into_iter().filter(|&(a, b)| a < real && b < real).collect();
        constrained_edges.sort_unstable();
        let mut points = self.pts;
        points.truncate(real);
        let triangle_regions = vec![None; triangles.len()];
        Triangulation { points, triangles, constrained_edges, triangle_regions }
    }
}

/// Andrew's monotone chain; collinear hull points are left out.
fn convex_hull(points: &[Point2]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(points[a].y.total_cmp(&points[b].y)));
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in order {
            while hull.len() >= start + 2
                && orient(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Snaps points closer than [`EPSILON`] together. Returns the unique points
/// and, for every input index, its unique index.
pub(crate) fn dedup_points(points: &[Point2]) -> (Vec<Point2>, Vec<usize>) {
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut unique = Vec::new();
    let mut map = Vec::with_capacity(points.len());
    for &p in points {
        let key = ((p.x / EPSILON).round() as i64, (p.y / EPSILON).round() as i64);
        let id = *seen.entry(key).or_insert_with(|| {
            unique.push(p);
            unique.len() - 1
        });
        map.push(id);
    }
    (unique, map)
}

/// Constrained Delaunay triangulation of the convex hull of `points`.
///
/// Near-duplicate points are merged; constraint indices refer to the input
/// list and are remapped. Segments passing through other points are split
/// there.
pub fn triangulate_points(points: &[Point2], constraints: &[(usize, usize)]) -> Result<Triangulation, CcmError> {
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(CcmError::OutsideMap(p.x, p.y));
    }
    if let Some(&(a, b)) = constraints.iter().find(|&&(a, b)| a >= points.len() || b >= points.len()) {
        return Err(CcmError::BadConstraint(a.max(b)));
    }
    let (unique, map) = dedup_points(points);
    if unique.len() < 3 {
        return Err(CcmError::Degenerate("fewer than 3 distinct points"));
    }
    let (p0, p1) = (unique[0], unique[1]);
    if unique.iter().all(|&q| orient(p0, p1, q) == 0.0) {
        return Err(CcmError::Degenerate("all points are collinear"));
    }

    let hull = convex_hull(&unique);
    let mut mesh = Mesh::new(unique);
    mesh.insert_all();
    for k in 0..hull.len() {
        mesh.insert_constraint(hull[k], hull[(k + 1) % hull.len()])?;
    }
    for &(a, b) in constraints {
        mesh.insert_constraint(map[a], map[b])?;
    }
    Ok(mesh.finish())
}
