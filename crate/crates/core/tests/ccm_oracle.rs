use landcore::ccm::*;
use landcore::geometry::{point_in_polygon, Box2, Point2, Polygon2};
use landcore::synth::refraction_map;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn move_allowed(c: Connectivity, dc: i64, dr: i64) -> bool {
    let (a, b) = (dc.abs().min(dr.abs()), dc.abs().max(dr.abs()));
    match c {
        Connectivity::Four => (a, b) == (0, 1),
        Connectivity::Eight => b == 1,
        Connectivity::Sixteen => b == 1 || (a, b) == (1, 2),
    }
}

/// Bellman-Ford over the declared move graph, relaxing until stable.
fn bellman_ford(g: &CostGrid, s: (usize, usize), t: (usize, usize), c: Connectivity) -> f64 {
    let n = g.ncols * g.nrows;
    let mut dist = vec![f64::INFINITY; n];
    if g.weight(s.0, s.1).is_infinite() || g.weight(t.0, t.1).is_infinite() {
        return f64::INFINITY;
    }
    dist[g.index(s.0, s.1)] = 0.0;
    let mut arcs = Vec::new();
    for r in 0..g.nrows as i64 {
        for col in 0..g.ncols as i64 {
            for dr in -2..=2i64 {
                for dc in -2..=2i64 {
                    let (c2, r2) = (col + dc, r + dr);
                    if !move_allowed(c, dc, dr) || c2 < 0 || r2 < 0 || c2 >= g.ncols as i64 || r2 >= g.nrows as i64 {
                        continue;
                    }
                    let (u, v) = (g.index(col as usize, r as usize), g.index(c2 as usize, r2 as usize));
                    let (wu, wv) = (g.weights[u], g.weights[v]);
                    if wu.is_infinite() || wv.is_infinite() {
                        continue;
                    }
                    let len = ((dc * dc + dr * dr) as f64).sqrt() * g.cell_size;
                    arcs.push((u, v, len * (wu + wv) / 2.0));
                }
            }
        }
    }
    loop {
        let mut changed = false;
        for &(u, v, w) in &arcs {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            return dist[g.index(t.0, t.1)];
        }
    }
}

fn random_grid(rng: &mut impl Rng) -> CostGrid {
    let (nc, nr) = (rng.random_range(1..=40), rng.random_range(1..=40));
    let weights = (0..nc * nr)
        .map(|_| if rng.random_bool(0.15) { f64::INFINITY } else { rng.random_range(1..=9) as f64 * 0.5 })
        .collect();
    CostGrid::new(Point2::new(-3.0, 7.0), rng.random_range(0.5..3.0), nc, nr, weights).unwrap()
}

#[test]
fn raster_matches_bellman_ford() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..120 {
        let g = random_grid(&mut rng);
        let pick = |rng: &mut ChaCha8Rng| (rng.random_range(0..g.ncols), rng.random_range(0..g.nrows));
        let (s, t) = (pick(&mut rng), pick(&mut rng));
        let mut costs = Vec::new();
        for c in [Connectivity::Four, Connectivity::Eight, Connectivity::Sixteen] {
            let r = raster_path(&g, g.cell_center(s.0, s.1), g.cell_center(t.0, t.1), c).unwrap();
            assert_eq!(r.total_cost, bellman_ford(&g, s, t, c), "{c:?}");
            if r.found() {
                let cells: Vec<(usize, usize)> = r.vertices.iter().map(|&p| g.cell_of(p).unwrap()).collect();
                for w in cells.windows(2) {
                    let (dc, dr) = (w[1].0 as i64 - w[0].0 as i64, w[1].1 as i64 - w[0].1 as i64);
                    assert!(move_allowed(c, dc, dr) || (s == t && dc == 0 && dr == 0));
                }
            }
            costs.push(r.total_cost);
        }
        assert!(costs[2] <= costs[1] && costs[1] <= costs[0]);
    }
}

fn circumcircle_contains(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    // relative tolerance keeps cocircular lattice points from counting
    let (ax, ay, bx, by, cx, cy) = (a.x - d.x, a.y - d.y, b.x - d.x, b.y - d.y, c.x - d.x, c.y - d.y);
    let det = (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay);
    let scale = (ax * ax + ay * ay + bx * bx + by * by + cx * cx + cy * cy).powi(2);
    det > 1e-10 * scale
}

fn tri_area(t: &Triangulation, tri: [usize; 3]) -> f64 {
    let [a, b, c] = tri.map(|i| t.points[i]);
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
}

fn hull_area(points: &[Point2]) -> f64 {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    let cross = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point2> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let it: Vec<Point2> = if pass == 0 { p.clone() } else { p.iter().rev().copied().collect() };
        for q in it {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    landcore::geometry::signed_area(&hull)
}

#[test]
fn delaunay_circumcircle_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for round in 0..60 {
        let n = rng.random_range(3..=200);
        // half the sets sit on a coarse lattice to force cocircular and collinear cases
        let lattice = round % 2 == 0;
        let pts: Vec<Point2> = (0..n)
            .map(|_| {
                if lattice {
                    Point2::new(rng.random_range(0..12) as f64, rng.random_range(0..12) as f64)
                } else {
                    Point2::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0))
                }
            })
            .collect();
        let Ok(t) = triangulate_points(&pts, &[]) else { continue };
        let total: f64 = t.triangles.iter().map(|&tri| tri_area(&t, tri)).sum();
        assert!((total - hull_area(&pts)).abs() < 1e-9 * total.max(1.0));
        for &tri in &t.triangles {
            assert!(tri_area(&t, tri) > 0.0);
            let [a, b, c] = tri.map(|i| t.points[i]);
            for (i, &d) in t.points.iter().enumerate() {
                if !tri.contains(&i) {
                    assert!(!circumcircle_contains(a, b, c, d), "point {i} inside circumcircle of {tri:?}");
                }
            }
        }
    }
}

#[test]
fn constrained_edges_present_and_locally_delaunay() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        // a fan of spokes around the center never crosses itself
        let k = rng.random_range(3..10);
        let mut pts = vec![Point2::new(0.0, 0.0)];
        let mut cons = Vec::new();
        for i in 0..k {
            let a = std::f64::consts::TAU * (i as f64 + rng.random_range(0.0..0.5)) / k as f64;
            let r = rng.random_range(20.0..50.0);
            pts.push(Point2::new(r * a.cos(), r * a.sin()));
            cons.push((0, pts.len() - 1));
        }
        for _ in 0..rng.random_range(10..80) {
            pts.push(Point2::new(rng.random_range(-60.0..60.0), rng.random_range(-60.0..60.0)));
        }
        let t = triangulate_points(&pts, &cons).unwrap();
        let edges = t.edges();
        for &(a, b) in &cons {
            // a spoke may have been split at points lying exactly on it
            let on: Vec<usize> = (0..t.points.len())
                .filter(|&i| {
                    let (p, q, r) = (t.points[a], t.points[b], t.points[i]);
                    ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)) == 0.0
                        && (r.x - p.x) * (r.x - q.x) + (r.y - p.y) * (r.y - q.y) <= 0.0
                })
                .collect();
            if on.len() == 2 {
                assert!(edges.contains(&(a.min(b), a.max(b))));
                assert!(t.is_constrained(a, b));
            }
        }
        // every unconstrained interior edge is locally Delaunay
        let mut opposite: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
        for tri in &t.triangles {
            for i in 0..3 {
                let (u, v, w) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
                opposite.entry((u.min(v), u.max(v))).or_default().push(w);
            }
        }
        for (&(u, v), opp) in &opposite {
            if opp.len() == 2 && !t.is_constrained(u, v) {
                let (a, b, c, d) = (t.points[u], t.points[v], t.points[opp[0]], t.points[opp[1]]);
                let (a, b) = if tri_area(&t, [u, v, opp[0]]) > 0.0 { (a, b) } else { (b, a) };
                assert!(!circumcircle_contains(a, b, c, d));
            }
        }
    }
}

fn random_map(rng: &mut impl Rng, allow_obstacles: bool) -> CostMap {
    let extent = Box2::from_coords(0.0, 0.0, 100.0, 100.0).unwrap();
    let mut regions = Vec::new();
    // disjoint rectangles in a 3x3 slot layout
    for j in 0..3 {
        for i in 0..3 {
            if rng.random_bool(0.5) {
                continue;
            }
            let (x0, y0) = (i as f64 * 33.0 + rng.random_range(1.0..8.0), j as f64 * 33.0 + rng.random_range(1.0..8.0));
            let (x1, y1) = (x0 + rng.random_range(8.0..24.0), y0 + rng.random_range(8.0..24.0));
            let weight =
                if allow_obstacles && rng.random_bool(0.3) { f64::INFINITY } else { rng.random_range(0.2..5.0) };
            regions.push(CostRegion { polygon: Polygon2::rectangle(x0, y0, x1, y1).unwrap(), weight });
        }
    }
    CostMap::new(regions, extent, 1.0).unwrap()
}

fn free_point(rng: &mut impl Rng, map: &CostMap) -> Point2 {
    loop {
        let p = Point2::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0));
        if map.weight_at(p).is_finite() {
            return p;
        }
    }
}

/// Dense O(n^2) Dijkstra over the Steiner graph built independently.
fn graph_oracle(map: &CostMap, s: Point2, t: Point2, m: usize) -> f64 {
    let (tri, si, ti) = vector_triangulation(map, s, t).unwrap();
    let edges = tri.edges();
    let n = tri.points.len();
    let mut nodes: Vec<Point2> = tri.points.clone();
    for &(a, b) in &edges {
        for k in 1..=m {
            nodes.push(tri.points[a].lerp(tri.points[b], steiner_parameter(k)));
        }
    }
    let edge_index = |a: usize, b: usize| edges.binary_search(&(a.min(b), a.max(b))).unwrap();
    let mut adj = vec![Vec::new(); nodes.len()];
    for (ti_, tr) in tri.triangles.iter().enumerate() {
        let w = map.weight_of(tri.triangle_regions[ti_]);
        if w.is_infinite() {
            continue;
        }
        let mut members: Vec<usize> = tr.to_vec();
        for i in 0..3 {
            let e = edge_index(tr[i], tr[(i + 1) % 3]);
            members.extend((0..m).map(|k| n + e * m + k));
        }
        for &u in &members {
            for &v in &members {
                if u != v {
                    adj[u].push((v, nodes[u].distance(nodes[v]) * w));
                }
            }
        }
    }
    let mut dist = vec![f64::INFINITY; nodes.len()];
    let mut done = vec![false; nodes.len()];
    dist[si] = 0.0;
    loop {
        let u =
            (0..nodes.len()).filter(|&i| !done[i] && dist[i].is_finite()).min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(u) = u else { break };
        done[u] = true;
        for &(v, w) in &adj[u] {
            dist[v] = dist[v].min(dist[u] + w);
        }
    }
    dist[ti]
}

#[test]
fn vector_matches_graph_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..12 {
        let map = random_map(&mut rng, true);
        let (s, t) = (free_point(&mut rng, &map), free_point(&mut rng, &map));
        for m in [1, 2, 3] {
            let r = vector_path(&map, s, t, m).unwrap();
            let oracle = graph_oracle(&map, s, t, m);
            assert!((r.total_cost - oracle).abs() <= 1e-9 * oracle.max(1.0), "m {m}: {} vs {oracle}", r.total_cost);
        }
    }
}

#[test]
fn vector_paths_stay_inside_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..10 {
        let map = random_map(&mut rng, true);
        let (s, t) = (free_point(&mut rng, &map), free_point(&mut rng, &map));
        let (tri, _, _) = vector_triangulation(&map, s, t).unwrap();
        let r = vector_path(&map, s, t, 2).unwrap();
        let inside = |p: Point2, k: usize| {
            let [a, b, c] = tri.triangles[k].map(|i| tri.points[i]);
            let o = |p1: Point2, p2: Point2| (p2.x - p1.x) * (p.y - p1.y) - (p2.y - p1.y) * (p.x - p1.x) >= -1e-9;
            o(a, b) && o(b, c) && o(c, a)
        };
        for w in r.vertices.windows(2) {
            assert!((0..tri.triangles.len()).any(|k| inside(w[0], k) && inside(w[1], k)));
        }
    }
}

#[test]
fn monotone_symmetric_and_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..10 {
        let map = random_map(&mut rng, false);
        let (s, t) = (free_point(&mut rng, &map), free_point(&mut rng, &map));
        let costs: Vec<f64> = [1, 2, 4, 8].iter().map(|&m| vector_path(&map, s, t, m).unwrap().total_cost).collect();
        assert!(costs.windows(2).all(|w| w[1] <= w[0]), "{costs:?}");
        let back = vector_path(&map, t, s, 4).unwrap().total_cost;
        assert!((back - costs[2]).abs() <= 1e-9 * costs[2]);
        let base = vector_path(&map, s, t, 2).unwrap();
        for k in [0.5, 4.0, 3.0] {
            let scaled = vector_path(&map.scaled(k), s, t, 2).unwrap();
            assert!((scaled.total_cost - k * base.total_cost).abs() <= 1e-12 * scaled.total_cost);
            // power-of-two factors scale every arc exactly, so ties break the same way
            if k != 3.0 {
                assert_eq!(scaled.vertices, base.vertices);
            }
        }
        let g = rasterize(&map, 4.0).unwrap();
        let gs = rasterize(&map.scaled(2.0), 4.0).unwrap();
        let (a, b) =
            (raster_path(&g, s, t, Connectivity::Eight).unwrap(), raster_path(&gs, s, t, Connectivity::Eight).unwrap());
        assert_eq!(b.total_cost, 2.0 * a.total_cost);
        assert_eq!(a.vertices, b.vertices);
        let swapped = raster_path(&g, t, s, Connectivity::Eight).unwrap();
        assert!((swapped.total_cost - a.total_cost).abs() <= 1e-9 * a.total_cost.max(1.0));
    }
}

#[test]
fn rasterize_matches_point_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let map = random_map(&mut rng, true);
        for cs in [7.0, 3.5] {
            let g = rasterize(&map, cs).unwrap();
            for r in 0..g.nrows {
                for c in 0..g.ncols {
                    let p = g.cell_center(c, r);
                    let expected = map
                        .regions()
                        .iter()
                        .find(|reg| point_in_polygon(p, &reg.polygon))
                        .map_or(map.default_weight(), |reg| reg.weight);
                    assert_eq!(g.weight(c, r), expected);
                }
            }
        }
    }
}

#[test]
fn triangulated_map_respects_regions() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for _ in 0..10 {
        let map = random_map(&mut rng, true);
        let t = triangulate(&map).unwrap();
        let total: f64 = t.triangles.iter().map(|&tri| tri_area(&t, tri)).sum();
        assert!((total - 10_000.0).abs() < 1e-7);
        for (k, &tri) in t.triangles.iter().enumerate() {
            if let Some(r) = t.triangle_regions[k] {
                for v in tri {
                    assert!(point_in_polygon(t.points[v], &map.regions()[r].polygon));
                }
            }
        }
        let edges = t.edges();
        for reg in map.regions() {
            for (a, b) in reg.polygon.outer().segments() {
                let ia = t.points.iter().position(|&p| p == a).unwrap();
                let ib = t.points.iter().position(|&p| p == b).unwrap();
                assert!(edges.contains(&(ia.min(ib), ia.max(ib))));
            }
        }
    }
}

#[test]
fn refraction_against_crossing_point_oracle() {
    let (map, s, t) = refraction_map();
    let best = (0..=1_000_000)
        .map(|i| {
            let c = Point2::new(50.0, i as f64 * 1e-4);
            s.distance(c) + 2.0 * c.distance(t)
        })
        .fold(f64::INFINITY, f64::min);
    let costs: Vec<f64> = [1, 2, 4, 8].iter().map(|&m| vector_path(&map, s, t, m).unwrap().total_cost).collect();
    assert!(costs.windows(2).all(|w| w[1] <= w[0]));
    assert!(costs[3] >= best - 1e-9);
    assert!((costs[3] - best) / best < 0.005, "{} vs {best}", costs[3]);
}

#[test]
fn obstacle_map_connectivity_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..5 {
        let map = random_map(&mut rng, true);
        let (s, t) = (free_point(&mut rng, &map), free_point(&mut rng, &map));
        let rep = convergence_report(
            &map,
            s,
            t,
            &[10.0, 5.0, 2.5],
            &[Connectivity::Four, Connectivity::Eight, Connectivity::Sixteen],
            &[1, 2, 4],
        )
        .unwrap();
        assert!(rep.connectivity_monotone());
        assert!(rep.steiner_monotone());
    }
}
