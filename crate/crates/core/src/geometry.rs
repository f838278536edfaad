//! Planar geometry primitives and the spatial operators built on them.
//!
//! Coordinates are local meters. Predicates use plain `f64` arithmetic; two
//! vertices closer than [`EPSILON`] are treated as the same vertex.

use serde::{Deserialize, Serialize};

/// Vertex identity tolerance in meters.
pub const EPSILON: f64 = 1e-9;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum GeomError {
    #[error("coordinate is not finite: ({0}, {1})")]
    NonFinite(f64, f64),

    #[error("box min ({0}, {1}) exceeds max ({2}, {3})")]
    InvertedBox(f64, f64, f64, f64),

    #[error("polyline needs at least 2 vertices, got {0}")]
    TooFewPolylineVertices(usize),

    #[error("consecutive vertices {0} and {1} are identical")]
    RepeatedVertex(usize, usize),

    #[error("ring needs at least 3 distinct vertices, got {0}")]
    TooFewRingVertices(usize),

    #[error("ring has zero area")]
    ZeroAreaRing,

    #[error("ring is not simple: segments {0} and {1} intersect")]
    SelfIntersecting(usize, usize),

    #[error("island {0} is not strictly inside the outer ring")]
    IslandOutside(usize),

    #[error("islands {0} and {1} overlap")]
    IslandsOverlap(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn checked(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeomError::NonFinite(x, y))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Same vertex up to [`EPSILON`] on each axis.
    pub fn coincides(&self, other: Point2) -> bool {
        (self.x - other.x).abs() <= EPSILON && (self.y - other.y).abs() <= EPSILON
    }

    pub fn lerp(&self, other: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Closed axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box2 {
    pub min: Point2,
    pub max: Point2,
}

impl Box2 {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeomError> {
        if !min.is_finite() {
            return Err(GeomError::NonFinite(min.x, min.y));
        }
        if !max.is_finite() {
            return Err(GeomError::NonFinite(max.x, max.y));
        }
        if min.x > max.x || min.y > max.y {
            return Err(GeomError::InvertedBox(min.x, min.y, max.x, max.y));
        }
        Ok(Self { min, max })
    }

    pub fn from_coords(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        Self::new(Point2::new(x0, y0), Point2::new(x1, y1))
    }

    /// Tight box around a nonempty point set.
    pub fn from_points<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a Point2>,
    {
        let mut iter = points.into_iter();
        let first = *iter.next()?;
        let mut b = Box2 { min: first, max: first };
        for p in iter {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.min.x + self.max.x), 0.5 * (self.min.y + self.max.y))
    }

    pub fn union(&self, other: &Box2) -> Box2 {
        Box2 {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    /// Grow by `d` on every side.
    pub fn expand(&self, d: f64) -> Box2 {
        Box2 { min: Point2::new(self.min.x - d, self.min.y - d), max: Point2::new(self.max.x + d, self.max.y + d) }
    }

    pub fn contains_point(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_box(&self, other: &Box2) -> bool {
        self.contains_point(other.min) && self.contains_point(other.max)
    }

    pub fn overlaps(&self, other: &Box2) -> bool {
        boxes_overlap(self, other)
    }

    pub fn corners(&self) -> [Point2; 4] {
        [self.min, Point2::new(self.max.x, self.min.y), self.max, Point2::new(self.min.x, self.max.y)]
    }
}

/// Closed-interval overlap on both axes; touching boxes overlap.
pub fn boxes_overlap(a: &Box2, b: &Box2) -> bool {
    a.min.x <= b.max.x && b.min.x <= a.max.x && a.min.y <= b.max.y && b.min.y <= a.max.y
}

fn check_finite(points: &[Point2]) -> Result<(), GeomError> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(GeomError::NonFinite(p.x, p.y)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polyline2 {
    vertices: Vec<Point2>,
}

impl Polyline2 {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeomError> {
        check_finite(&vertices)?;
        if vertices.len() < 2 {
            return Err(GeomError::TooFewPolylineVertices(vertices.len()));
        }
        for i in 1..vertices.len() {
            if vertices[i - 1].coincides(vertices[i]) {
                return Err(GeomError::RepeatedVertex(i - 1, i));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn reversed(&self) -> Polyline2 {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline2 { vertices }
    }
}

impl TryFrom<Vec<Point2>> for Polyline2 {
    type Error = GeomError;
    fn try_from(v: Vec<Point2>) -> Result<Self, Self::Error> {
        Polyline2::new(v)
    }
}

impl From<Polyline2> for Vec<Point2> {
    fn from(p: Polyline2) -> Self {
        p.vertices
    }
}

/// Simple closed ring. The closing vertex is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Ring {
    vertices: Vec<Point2>,
}

impl Ring {
    /// Validates simplicity and nonzero area. An explicit closing vertex
    /// equal to the first one is dropped.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeomError> {
        check_finite(&vertices)?;
        if vertices.len() > 1 && vertices[0].coincides(vertices[vertices.len() - 1]) {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeomError::TooFewRingVertices(vertices.len()));
        }
        for i in 1..vertices.len() {
            if vertices[i - 1].coincides(vertices[i]) {
                return Err(GeomError::RepeatedVertex(i - 1, i));
            }
        }
        let ring = Ring { vertices };
        ring.check_simple()?;
        if ring.signed_area().abs() <= EPSILON * EPSILON {
            return Err(GeomError::ZeroAreaRing);
        }
        Ok(ring)
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point2>) -> Self {
        Ring { vertices }
    }

    fn check_simple(&self) -> Result<(), GeomError> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.segment(i);
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = self.segment(j);
                if adjacent {
                    // neighbours share exactly one endpoint; they may not fold back
                    let shared = if j == i + 1 { b } else { a };
                    let (far_1, far_2) = if j == i + 1 { (a, d) } else { (b, c) };
                    if orient(shared, far_1, far_2) == 0.0
                        && (far_1.x - shared.x) * (far_2.x - shared.x) + (far_1.y - shared.y) * (far_2.y - shared.y)
                            > 0.0
                    {
                        return Err(GeomError::SelfIntersecting(i, j));
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return Err(GeomError::SelfIntersecting(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Segment `i` runs from vertex `i` to vertex `i + 1` (wrapping).
    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        (0..self.vertices.len()).map(move |i| self.segment(i))
    }

    /// Shoelace area, positive for counter-clockwise rings.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Ring {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Ring { vertices }
    }

    pub(crate) fn oriented(&self, ccw: bool) -> Ring {
        if self.is_ccw() == ccw {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn bbox(&self) -> Box2 {
        Box2::from_points(&self.vertices).expect("ring has vertices")
    }

    /// True on the boundary (within [`EPSILON`]) or strictly inside.
    pub fn contains(&self, q: Point2) -> bool {
        self.on_boundary(q) || self.strictly_contains(q)
    }

    pub fn on_boundary(&self, q: Point2) -> bool {
        self.segments().any(|(a, b)| point_segment_distance(q, a, b) <= EPSILON)
    }

    /// Even-odd crossing test; boundary points may go either way.
    pub fn strictly_contains(&self, q: Point2) -> bool {
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let pi = self.vertices[i];
            let pj = self.vertices[j];
            if (pi.y > q.y) != (pj.y > q.y) {
                let x_cross = pj.x + (q.y - pj.y) * (pi.x - pj.x) / (pi.y - pj.y);
                if q.x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

impl TryFrom<Vec<Point2>> for Ring {
    type Error = GeomError;
    fn try_from(v: Vec<Point2>) -> Result<Self, Self::Error> {
        Ring::new(v)
    }
}

impl From<Ring> for Vec<Point2> {
    fn from(r: Ring) -> Self {
        r.vertices
    }
}

/// Polygon with optional islands (holes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2 {
    outer: Ring,
    islands: Vec<Ring>,
}

impl Polygon2 {
    pub fn new(outer: Ring, islands: Vec<Ring>) -> Result<Self, GeomError> {
        for (k, island) in islands.iter().enumerate() {
            let inside = island.vertices().iter().all(|&v| outer.strictly_contains(v) && !outer.on_boundary(v));
            if !inside || rings_cross(&outer, island) {
                return Err(GeomError::IslandOutside(k));
            }
        }
        for i in 0..islands.len() {
            for j in i + 1..islands.len() {
                let (a, b) = (&islands[i], &islands[j]);
                if !a.bbox().overlaps(&b.bbox()) {
                    continue;
                }
                if rings_cross(a, b)
                    || a.vertices().iter().any(|&v| b.contains(v))
                    || b.vertices().iter().any(|&v| a.contains(v))
                {
                    return Err(GeomError::IslandsOverlap(i, j));
                }
            }
        }
        Ok(Self { outer, islands })
    }

    /// Convenience constructor from raw coordinate rings.
    pub fn from_rings(outer: Vec<Point2>, islands: Vec<Vec<Point2>>) -> Result<Self, GeomError> {
        let outer = Ring::new(outer)?;
        let islands = islands.into_iter().map(Ring::new).collect::<Result<Vec<_>, _>>()?;
        Polygon2::new(outer, islands)
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        Polygon2::from_rings(
            vec![Point2::new(x0, y0), Point2::new(x1, y0), Point2::new(x1, y1), Point2::new(x0, y1)],
            vec![],
        )
    }

    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn islands(&self) -> &[Ring] {
        &self.islands
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.outer).chain(self.islands.iter())
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(Ring::len).sum()
    }

    /// Outer ring counter-clockwise, islands clockwise, so the interior is
    /// always on the left of every ring.
    pub fn normalized(&self) -> Polygon2 {
        Polygon2 { outer: self.outer.oriented(true), islands: self.islands.iter().map(|r| r.oriented(false)).collect() }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Polygon2 {
        self.map_points(|p| Point2::new(p.x + dx, p.y + dy))
    }

    pub fn scale(&self, k: f64) -> Polygon2 {
        self.map_points(|p| Point2::new(p.x * k, p.y * k))
    }

    fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Polygon2 {
        let map_ring = |r: &Ring| Ring::new_unchecked(r.vertices().iter().map(|&p| f(p)).collect());
        Polygon2 { outer: map_ring(&self.outer), islands: self.islands.iter().map(map_ring).collect() }
    }
}

/// Anything with a tight bounding box.
pub trait Bounded {
    fn bbox(&self) -> Box2;
}

impl Bounded for Polygon2 {
    fn bbox(&self) -> Box2 {
        self.outer.bbox()
    }
}

impl Bounded for Polyline2 {
    fn bbox(&self) -> Box2 {
        Box2::from_points(&self.vertices).expect("polyline has vertices")
    }
}

impl Bounded for Ring {
    fn bbox(&self) -> Box2 {
        Ring::bbox(self)
    }
}

pub fn bbox<G: Bounded>(g: &G) -> Box2 {
    g.bbox()
}

pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    // shifted to the first vertex to limit cancellation on large coordinates
    let o = vertices[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        let a = vertices[i];
        let b = vertices[i + 1];
        twice += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
    }
    0.5 * twice
}

/// Outer ring area minus island areas.
pub fn area(p: &Polygon2) -> f64 {
    p.outer.area() - p.islands.iter().map(Ring::area).sum::<f64>()
}

pub fn length(l: &Polyline2) -> f64 {
    l.segments().map(|(a, b)| a.distance(b)).sum()
}

/// Closed-region containment: boundary points (including island boundaries)
/// count as inside.
pub fn point_in_polygon(q: Point2, p: &Polygon2) -> bool {
    if !p.outer.bbox().expand(EPSILON).contains_point(q) {
        return false;
    }
    if !p.outer.contains(q) {
        return false;
    }
    for island in &p.islands {
        if island.on_boundary(q) {
            return true;
        }
        if island.strictly_contains(q) {
            return false;
        }
    }
    true
}

/// Cross product of (b - a) x (c - a); positive when c lies left of a->b.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

pub fn point_segment_distance(q: Point2, a: Point2, b: Point2) -> f64 {
    point_segment_distance_sq(q, a, b).sqrt()
}

fn point_segment_distance_sq(q: Point2, a: Point2, b: Point2) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((q.x - a.x) * dx + (q.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    let (ex, ey) = (q.x - (a.x + t * dx), q.y - (a.y + t * dy));
    ex * ex + ey * ey
}

fn on_segment(a: Point2, b: Point2, q: Point2) -> bool {
    q.x >= a.x.min(b.x) && q.x <= a.x.max(b.x) && q.y >= a.y.min(b.y) && q.y <= a.y.max(b.y)
}

/// Closed segment intersection, including touching and collinear overlap.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Proper crossing only: the segments cross at a single interior point of both.
pub fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

pub fn segment_distance(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance_sq(a, c, d)
        .min(point_segment_distance_sq(b, c, d))
        .min(point_segment_distance_sq(c, a, b))
        .min(point_segment_distance_sq(d, a, b))
        .sqrt()
}

fn rings_cross(a: &Ring, b: &Ring) -> bool {
    a.segments().any(|(p, q)| b.segments().any(|(r, s)| segments_intersect(p, q, r, s)))
}

/// Zero when the polyline touches the closed polygon region, otherwise the
/// smallest distance between the polyline and any polygon boundary.
pub fn min_dist_polygon_polyline(p: &Polygon2, l: &Polyline2) -> f64 {
    if l.vertices().iter().any(|&v| point_in_polygon(v, p)) {
        return 0.0;
    }
    // box gaps are lower bounds on distance; skip anything that cannot improve
    let gap = |a: Point2, b: Point2, bx: &Box2| {
        let gx = (a.x.min(b.x) - bx.max.x).max(bx.min.x - a.x.max(b.x)).max(0.0);
        let gy = (a.y.min(b.y) - bx.max.y).max(bx.min.y - a.y.max(b.y)).max(0.0);
        gx.max(gy)
    };
    let pbox = p.outer.bbox();
    let mut best = f64::INFINITY;
    for (c, d) in l.segments() {
        if gap(c, d, &pbox) > best {
            continue;
        }
        let sbox = Box2 { min: Point2::new(c.x.min(d.x), c.y.min(d.y)), max: Point2::new(c.x.max(d.x), c.y.max(d.y)) };
        for ring in p.rings() {
            for (a, b) in ring.segments() {
                if gap(a, b, &sbox) > best {
                    continue;
                }
                let dist = segment_distance(a, b, c, d);
                if dist == 0.0 {
                    return 0.0;
                }
                best = best.min(dist);
            }
        }
    }
    best
}

/// `min_dist_polygon_polyline(p, l) < d`, rejecting far pairs by their
/// boxes first. The margin keeps rounding from deciding boundary cases.
pub fn within_distance(p: &Polygon2, l: &Polyline2, d: f64) -> bool {
    let (a, b) = (p.bbox(), l.bbox());
    let gx = (a.min.x - b.max.x).max(b.min.x - a.max.x);
    let gy = (a.min.y - b.max.y).max(b.min.y - a.max.y);
    if gx.max(gy) > d * (1.0 + 1e-9) + 1e-9 {
        return false;
    }
    min_dist_polygon_polyline(p, l) < d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn unit_square() -> Polygon2 {
        Polygon2::rectangle(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    fn square_with_hole() -> Polygon2 {
        Polygon2::from_rings(
            vec![p(0.0, 0.0), p(3.0, 0.0), p(3.0, 3.0), p(0.0, 3.0)],
            vec![vec![p(1.0, 1.0), p(2.0, 1.0), p(2.0, 2.0), p(1.0, 2.0)]],
        )
        .unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(area(&unit_square()), 1.0);
        assert_eq!(area(&Polygon2::rectangle(0.0, 0.0, 200.0, 100.0).unwrap()), 20000.0);
        assert_eq!(area(&square_with_hole()), 8.0);
    }

    #[test]
    fn length_examples() {
        let l = Polyline2::new(vec![p(0.0, 0.0), p(3.0, 4.0)]).unwrap();
        assert_eq!(length(&l), 5.0);
        let sq = Polyline2::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.0, 0.0)]).unwrap();
        assert_eq!(length(&sq), 4.0);
    }

    #[test]
    fn polyline_validation() {
        assert_eq!(Polyline2::new(vec![p(0.0, 0.0)]), Err(GeomError::TooFewPolylineVertices(1)));
        assert_eq!(Polyline2::new(vec![p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)]), Err(GeomError::RepeatedVertex(0, 1)));
        assert!(matches!(Polyline2::new(vec![p(0.0, f64::NAN), p(1.0, 0.0)]), Err(GeomError::NonFinite(..))));
    }

    #[test]
    fn ring_validation() {
        assert_eq!(Ring::new(vec![p(0.0, 0.0), p(1.0, 0.0)]), Err(GeomError::TooFewRingVertices(2)));
        assert!(Ring::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]).is_err());
        assert_eq!(Ring::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 1e-19)]), Err(GeomError::ZeroAreaRing));
        // bow tie
        assert!(matches!(
            Ring::new(vec![p(0.0, 0.0), p(3.0, 3.0), p(3.0, 0.0), p(0.0, 1.0)]),
            Err(GeomError::SelfIntersecting(..))
        ));
        // explicit closing vertex is dropped
        let r = Ring::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(0.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn island_validation() {
        let err = Polygon2::from_rings(
            vec![p(0.0, 0.0), p(3.0, 0.0), p(3.0, 3.0), p(0.0, 3.0)],
            vec![vec![p(2.0, 2.0), p(4.0, 2.0), p(4.0, 4.0), p(2.0, 4.0)]],
        );
        assert_eq!(err, Err(GeomError::IslandOutside(0)));
        let err = Polygon2::from_rings(
            vec![p(0.0, 0.0), p(10.0, 0.0), p(10.0, 10.0), p(0.0, 10.0)],
            vec![
                vec![p(1.0, 1.0), p(4.0, 1.0), p(4.0, 4.0), p(1.0, 4.0)],
                vec![p(3.0, 3.0), p(6.0, 3.0), p(6.0, 6.0), p(3.0, 6.0)],
            ],
        );
        assert_eq!(err, Err(GeomError::IslandsOverlap(0, 1)));
    }

    #[test]
    fn bbox_examples() {
        assert_eq!(unit_square().bbox(), Box2::from_coords(0.0, 0.0, 1.0, 1.0).unwrap());
        let seg = Polyline2::new(vec![p(2.0, 7.0), p(-1.0, 3.0)]).unwrap();
        assert_eq!(bbox(&seg), Box2::from_coords(-1.0, 3.0, 2.0, 7.0).unwrap());
    }

    #[test]
    fn box_overlap_examples() {
        let a = Box2::from_coords(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(boxes_overlap(&a, &a));
        assert!(boxes_overlap(&a, &Box2::from_coords(1.0, 1.0, 2.0, 2.0).unwrap()));
        assert!(!boxes_overlap(&a, &Box2::from_coords(2.0, 2.0, 3.0, 3.0).unwrap()));
        assert!(Box2::from_coords(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn min_dist_examples() {
        let sq = unit_square();
        let crossing = Polyline2::new(vec![p(-1.0, 0.5), p(2.0, 0.5)]).unwrap();
        assert_eq!(min_dist_polygon_polyline(&sq, &crossing), 0.0);
        let gap = Polyline2::new(vec![p(3.0, 0.0), p(3.0, 1.0)]).unwrap();
        assert_eq!(min_dist_polygon_polyline(&sq, &gap), 2.0);
        let inside = Polyline2::new(vec![p(0.2, 0.2), p(0.8, 0.8)]).unwrap();
        assert_eq!(min_dist_polygon_polyline(&sq, &inside), 0.0);
        // a road running inside a hole is outside the region
        let in_hole = Polyline2::new(vec![p(1.25, 1.5), p(1.75, 1.5)]).unwrap();
        assert!((min_dist_polygon_polyline(&square_with_hole(), &in_hole) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn point_in_polygon_examples() {
        assert!(point_in_polygon(p(0.5, 0.5), &unit_square()));
        assert!(point_in_polygon(p(1.0, 0.5), &unit_square()));
        assert!(point_in_polygon(p(0.0, 0.0), &unit_square()));
        assert!(!point_in_polygon(p(1.5, 0.5), &unit_square()));
        let holed = square_with_hole();
        assert!(!point_in_polygon(p(1.5, 1.5), &holed));
        assert!(point_in_polygon(p(1.0, 1.5), &holed));
        assert!(point_in_polygon(p(0.5, 1.5), &holed));
    }

    #[test]
    fn normalized_orientation() {
        let n = square_with_hole().reversed_rings().normalized();
        assert!(n.outer().is_ccw());
        assert!(!n.islands()[0].is_ccw());
    }

    impl Polygon2 {
        fn reversed_rings(&self) -> Polygon2 {
            Polygon2 { outer: self.outer.reversed(), islands: self.islands.iter().map(Ring::reversed).collect() }
        }
    }
}
