use super::dijkstra::shortest_path;
use super::{CcmError, Connectivity, CostGrid, CostMap, Method, PathResult};
use crate::geometry::Point2;

/// Samples the map at every cell center.
pub fn rasterize(map: &CostMap, cell_size: f64) -> Result<CostGrid, CcmError> {
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(CcmError::BadCellSize(cell_size));
    }
    let extent = map.extent();
    let count = |span: f64| (((span / cell_size) - 1e-9).ceil() as usize).max(1);
    let ncols = count(extent.width());
    let nrows = count(extent.height());
    let mut grid = CostGrid { origin: extent.min, cell_size, ncols, nrows, weights: Vec::with_capacity(ncols * nrows) };
    for row in 0..nrows {
        for col in 0..ncols {
            let w = map.weight_at(grid.cell_center(col, row));
            grid.weights.push(w);
        }
    }
    Ok(grid)
}

/// Least-cost path between the cells containing `s` and `t`.
///
/// A move from cell `a` to neighbour `b` costs the distance between their
/// centers times the mean of both weights. The returned vertices are the
/// visited cell centers with the first and last replaced by `s` and `t`;
/// the cost is measured center to center.
pub fn raster_path(grid: &CostGrid, s: Point2, t: Point2, connectivity: Connectivity) -> Result<PathResult, CcmError> {
    let method = Method::Raster(connectivity);
    let (sc, sr) = grid.cell_of(s).ok_or(CcmError::OutsideMap(s.x, s.y))?;
    let (tc, tr) = grid.cell_of(t).ok_or(CcmError::OutsideMap(t.x, t.y))?;
    if grid.weight(sc, sr).is_infinite() || grid.weight(tc, tr).is_infinite() {
        return Ok(PathResult::no_path(method));
    }

    let (ncols, nrows) = (grid.ncols as i64, grid.nrows as i64);
    let moves = connectivity.moves();
    let step_len: Vec<f64> =
        moves.iter().map(|&(dc, dr)| ((dc * dc + dr * dr) as f64).sqrt() * grid.cell_size).collect();
    let found = shortest_path(grid.weights.len(), grid.index(sc, sr), grid.index(tc, tr), |u, out| {
        let (col, row) = ((u % grid.ncols) as i64, (u / grid.ncols) as i64);
        let wu = grid.weights[u];
        for (&(dc, dr), &len) in moves.iter().zip(&step_len) {
            let (c, r) = (col + dc, row + dr);
            if c < 0 || r < 0 || c >= ncols || r >= nrows {
                continue;
            }
            let v = (r * ncols + c) as usize;
            let wv = grid.weights[v];
            if wv.is_infinite() {
                continue;
            }
            out.push((v, len * (wu + wv) / 2.0));
        }
    });

    Ok(match found {
        None => PathResult::no_path(method),
        Some((cost, cells)) => {
            let mut vertices: Vec<Point2> =
                cells.iter().map(|&i| grid.cell_center(i % grid.ncols, i / grid.ncols)).collect();
            if vertices.len() == 1 {
                vertices.push(t);
            }
            let last = vertices.len() - 1;
            vertices[0] = s;
            vertices[last] = t;
            PathResult { vertices, total_cost: cost, method }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccm::CostRegion;
    use crate::geometry::{Box2, Polygon2};

    fn uniform_grid(n: usize, w: f64) -> CostGrid {
        CostGrid::new(Point2::new(0.0, 0.0), 2.0, n, n, vec![w; n * n]).unwrap()
    }

    #[test]
    fn straight_corridor_rook_moves() {
        let g = uniform_grid(12, 1.0);
        let r = raster_path(&g, g.cell_center(0, 3), g.cell_center(10, 3), Connectivity::Four).unwrap();
        assert_eq!(r.total_cost, 10.0 * 2.0);
        assert_eq!(r.vertices.len(), 11);
        assert_eq!(r.method.to_string(), "RASTER-4");
    }

    #[test]
    fn diagonal_king_moves() {
        let g = uniform_grid(12, 1.0);
        let r = raster_path(&g, g.cell_center(0, 0), g.cell_center(10, 10), Connectivity::Eight).unwrap();
        assert!((r.total_cost - 10.0 * 2f64.sqrt() * 2.0).abs() < 1e-12);
    }

    #[test]
    fn knight_moves_help() {
        let g = uniform_grid(12, 1.0);
        let (s, t) = (g.cell_center(0, 0), g.cell_center(2, 1));
        let c8 = raster_path(&g, s, t, Connectivity::Eight).unwrap().total_cost;
        let c16 = raster_path(&g, s, t, Connectivity::Sixteen).unwrap().total_cost;
        assert!((c16 - 5f64.sqrt() * 2.0).abs() < 1e-12);
        assert!(c16 < c8);
    }

    #[test]
    fn same_cell() {
        let g = uniform_grid(4, 1.0);
        let r = raster_path(&g, Point2::new(0.2, 0.2), Point2::new(0.8, 0.9), Connectivity::Four).unwrap();
        assert_eq!(r.total_cost, 0.0);
        assert_eq!(r.vertices, vec![Point2::new(0.2, 0.2), Point2::new(0.8, 0.9)]);
    }

    #[test]
    fn walled_off_target() {
        let mut g = uniform_grid(5, 1.0);
        for row in 0..5 {
            let i = g.index(2, row);
            g.weights[i] = f64::INFINITY;
        }
        let r = raster_path(&g, g.cell_center(0, 0), g.cell_center(4, 4), Connectivity::Eight).unwrap();
        assert!(!r.found());
        assert!(r.vertices.is_empty());
        // knight moves jump the one-cell wall
        let r = raster_path(&g, g.cell_center(0, 0), g.cell_center(4, 4), Connectivity::Sixteen).unwrap();
        assert!(r.found());
        let blocked = raster_path(&g, g.cell_center(2, 2), g.cell_center(4, 4), Connectivity::Four).unwrap();
        assert!(!blocked.found());
    }

    #[test]
    fn outside_grid_is_an_error() {
        let g = uniform_grid(4, 1.0);
        assert!(raster_path(&g, Point2::new(-1.0, 0.0), Point2::new(1.0, 1.0), Connectivity::Four).is_err());
        // far border belongs to the last cell
        assert_eq!(g.cell_of(Point2::new(8.0, 8.0)), Some((3, 3)));
    }

    #[test]
    fn rasterize_regions() {
        let extent = Box2::from_coords(0.0, 0.0, 10.0, 10.0).unwrap();
        let full = CostMap::new(
            vec![CostRegion { polygon: Polygon2::rectangle(0.0, 0.0, 10.0, 10.0).unwrap(), weight: 3.0 }],
            extent,
            1.0,
        )
        .unwrap();
        let g = rasterize(&full, 1.0).unwrap();
        assert_eq!((g.ncols, g.nrows), (10, 10));
        assert!(g.weights.iter().all(|&w| w == 3.0));

        let obstacle = CostMap::new(
            vec![CostRegion { polygon: Polygon2::rectangle(2.0, 2.0, 4.0, 4.0).unwrap(), weight: f64::INFINITY }],
            extent,
            1.0,
        )
        .unwrap();
        let g = rasterize(&obstacle, 1.0).unwrap();
        let blocked = g.weights.iter().filter(|w| w.is_infinite()).count();
        assert_eq!(blocked, 4);
        assert!(g.weight(2, 3).is_infinite());
        assert_eq!(g.weight(4, 3), 1.0);
        // non-multiple extent rounds the grid up
        assert_eq!(rasterize(&obstacle, 3.0).unwrap().ncols, 4);
        assert!(rasterize(&obstacle, 0.0).is_err());
    }
}
