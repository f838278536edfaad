//! Seeded generators for test fixtures and demos.

use chrono::NaiveDate;
use rand::Rng;

use crate::ccm::{CostMap, CostRegion};
use crate::geometry::{Box2, Point2, Polygon2, Polyline2};
use crate::query::{Dataset, Road, Town};
use crate::stratification::Field;
use crate::topology::AreaId;

/// Random towns (rectangles and star-shaped polygons) and roads (random
/// walks) in a 10 km square, on an integer lattice so that area and
/// distance thresholds are regularly hit exactly.
pub fn random_dataset<R: Rng>(rng: &mut R, max_towns: usize, max_roads: usize) -> Dataset {
    let n_towns = rng.random_range(0..=max_towns);
    let n_roads = rng.random_range(0..=max_roads);
    let towns = (0..n_towns)
        .map(|i| {
            let cx = rng.random_range(0..10_000) as f64;
            let cy = rng.random_range(0..10_000) as f64;
            let region = if rng.random_bool(0.5) {
                let w = rng.random_range(1..=200) as f64;
                let h = rng.random_range(1..=200) as f64;
                Polygon2::rectangle(cx, cy, cx + w, cy + h).unwrap()
            } else {
                star(rng, Point2::new(cx, cy))
            };
            Town { name: format!("T{i}"), population: rng.random_range(0..1_000_000), region }
        })
        .collect();
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).unwrap();
    let roads = (0..n_roads)
        .map(|i| {
            let mut p = Point2::new(rng.random_range(0..10_000) as f64, rng.random_range(0..10_000) as f64);
            let mut pts = vec![p];
            for _ in 0..rng.random_range(1..=5) {
                let step = Point2::new(rng.random_range(-3000..=3000) as f64, rng.random_range(-3000..=3000) as f64);
                let next = Point2::new(p.x + step.x, p.y + step.y);
                if next != p {
                    pts.push(next);
                    p = next;
                }
            }
            if pts.len() < 2 {
                pts.push(Point2::new(p.x + 1.0, p.y));
            }
            Road {
                name: format!("R{i}"),
                construct: epoch + chrono::Days::new(rng.random_range(0..15_000)),
                shape: Polyline2::new(pts).unwrap(),
            }
        })
        .collect();
    Dataset::new(towns, roads).expect("generated names are unique")
}

/// Star-shaped polygon around `c`: sorted angles, integer-rounded radii.
fn star<R: Rng>(rng: &mut R, c: Point2) -> Polygon2 {
    loop {
        let n = rng.random_range(3..=8);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point2> = angles
            .iter()
            .map(|a| {
                let r = rng.random_range(10.0..150.0);
                Point2::new((c.x + r * a.cos()).round(), (c.y + r * a.sin()).round())
            })
            .collect();
        if let Ok(p) = Polygon2::from_rings(pts, vec![]) {
            return p;
        }
    }
}

/// Deterministic sideways offset for an interior grid-side vertex, the same
/// for both cells sharing the side.
fn wiggle(i: i64, j: i64, amplitude: f64) -> f64 {
    let h = (i.wrapping_mul(73_856_093) ^ j.wrapping_mul(19_349_663)).rem_euclid(1000);
    (h as f64 / 999.0 - 0.5) * 2.0 * amplitude
}

/// `n × n` grid of square cells, each side split into `subdiv` segments.
/// Interior sides get a deterministic wiggle so that no two sides are
/// collinear; the outer boundary stays straight. Area ids run row-major
/// from 1.
pub fn grid_partition(n: usize, cell: f64, subdiv: usize) -> Vec<(AreaId, Polygon2)> {
    let amp = 0.2 * cell / subdiv as f64;
    let k = subdiv as i64;
    let size = n as i64 * k;
    // point on the lattice of side vertices, in units of cell/subdiv
    let vertex = |u: i64, v: i64| -> Point2 {
        let (mut x, mut y) = (u as f64 * cell / k as f64, v as f64 * cell / k as f64);
        let on_vertical = u % k == 0 && v % k != 0;
        let on_horizontal = v % k == 0 && u % k != 0;
        if on_vertical && u != 0 && u != size {
            x += wiggle(u, v, amp);
        }
        if on_horizontal && v != 0 && v != size {
            y += wiggle(u, v, amp);
        }
        Point2::new(x, y)
    };
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n as i64 {
        for col in 0..n as i64 {
            let (u0, v0) = (col * k, row * k);
            let mut ring = Vec::with_capacity(4 * subdiv);
            ring.extend((0..k).map(|s| vertex(u0 + s, v0)));
            ring.extend((0..k).map(|s| vertex(u0 + k, v0 + s)));
            ring.extend((0..k).map(|s| vertex(u0 + k - s, v0 + k)));
            ring.extend((0..k).map(|s| vertex(u0, v0 + k - s)));
            let id = (row * n as i64 + col + 1) as AreaId;
            out.push((id, Polygon2::from_rings(ring, vec![]).expect("grid cell is simple")));
        }
    }
    out
}

/// Random planar partition: a `nx × ny` grid (each 1..=7) with jittered
/// interior nodes and sides split into 1..=3 segments. Some cells get a
/// square hole, and some holes are filled by an island area.
pub fn random_partition<R: Rng>(rng: &mut R) -> Vec<(AreaId, Polygon2)> {
    let nx = rng.random_range(1..=7usize);
    let ny = rng.random_range(1..=7usize);
    let cell = 10.0;
    let nodes: Vec<Vec<Point2>> = (0..=ny)
        .map(|j| {
            (0..=nx)
                .map(|i| {
                    let mut p = Point2::new(i as f64 * cell, j as f64 * cell);
                    if i > 0 && i < nx {
                        p.x += rng.random_range(-0.25..0.25) * cell;
                    }
                    if j > 0 && j < ny {
                        p.y += rng.random_range(-0.25..0.25) * cell;
                    }
                    p
                })
                .collect()
        })
        .collect();
    let h_split: Vec<Vec<usize>> = (0..=ny).map(|_| (0..nx).map(|_| rng.random_range(1..=3)).collect()).collect();
    let v_split: Vec<Vec<usize>> = (0..ny).map(|_| (0..=nx).map(|_| rng.random_range(1..=3)).collect()).collect();
    let side =
        |a: Point2, b: Point2, k: usize| -> Vec<Point2> { (0..k).map(|s| a.lerp(b, s as f64 / k as f64)).collect() };

    let mut out = Vec::new();
    let mut next_id: AreaId = 1;
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p11, p01) = (nodes[j][i], nodes[j][i + 1], nodes[j + 1][i + 1], nodes[j + 1][i]);
            let mut ring = side(p00, p10, h_split[j][i]);
            ring.extend(side(p10, p11, v_split[j][i + 1]));
            let mut top = side(p01, p11, h_split[j + 1][i]);
            top.push(p11);
            top.reverse();
            top.pop();
            ring.extend(top);
            let mut left = side(p00, p01, v_split[j][i]);
            left.push(p01);
            left.reverse();
            left.pop();
            ring.extend(left);

            let mut islands = Vec::new();
            let mut filler = None;
            if rng.random_bool(0.3) {
                let c = Point2::new((p00.x + p10.x + p11.x + p01.x) / 4.0, (p00.y + p10.y + p11.y + p01.y) / 4.0);
                let h = 0.1 * cell;
                let hole = vec![
                    Point2::new(c.x - h, c.y - h),
                    Point2::new(c.x + h, c.y - h),
                    Point2::new(c.x + h, c.y + h),
                    Point2::new(c.x - h, c.y + h),
                ];
                if rng.random_bool(0.5) {
                    filler = Some(hole.clone());
                }
                islands.push(hole);
            }
            out.push((next_id, Polygon2::from_rings(ring, islands).expect("cell is valid")));
            next_id += 1;
            if let Some(h) = filler {
                out.push((next_id, Polygon2::from_rings(h, vec![]).expect("hole is valid")));
                next_id += 1;
            }
        }
    }
    out
}

/// Two half-square regions of weights 1 (x < 50) and 2 (x > 50) over a
/// 100 m square, with endpoints on opposite sides of the interface.
pub fn refraction_map() -> (CostMap, Point2, Point2) {
    let extent = Box2::from_coords(0.0, 0.0, 100.0, 100.0).unwrap();
    let regions = vec![
        CostRegion { polygon: Polygon2::rectangle(0.0, 0.0, 50.0, 100.0).unwrap(), weight: 1.0 },
        CostRegion { polygon: Polygon2::rectangle(50.0, 0.0, 100.0, 100.0).unwrap(), weight: 2.0 },
    ];
    let map = CostMap::new(regions, extent, 1.0).expect("regions tile the extent");
    (map, Point2::new(20.0, 20.0), Point2::new(80.0, 80.0))
}

/// Non-overlapping rectangular fields, one random rectangle (or none) per
/// slot of a `slots × slots` layout over `extent`.
pub fn random_fields<R: Rng>(rng: &mut R, extent: Box2, slots: usize, pivot_share: f64) -> Vec<Field> {
    let (sw, sh) = (extent.width() / slots as f64, extent.height() / slots as f64);
    let mut out = Vec::new();
    for j in 0..slots {
        for i in 0..slots {
            if rng.random_bool(0.35) {
                continue;
            }
            let x0 = extent.min.x + i as f64 * sw;
            let y0 = extent.min.y + j as f64 * sh;
            let (a, b) = (rng.random_range(0.0..0.5), rng.random_range(0.5..1.0));
            let (c, d) = (rng.random_range(0.0..0.5), rng.random_range(0.5..1.0));
            out.push(Field {
                geometry: Polygon2::rectangle(x0 + a * sw, y0 + c * sh, x0 + b * sw, y0 + d * sh).unwrap(),
                pivot_irrigation: rng.random_bool(pivot_share),
                small_scale: rng.random_bool(0.5),
            });
        }
    }
    out
}
