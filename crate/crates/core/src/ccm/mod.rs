//! Cross-country movement: least-cost paths over a weighted planar
//! subdivision.
//!
//! Two solvers are provided. The raster solver runs Dijkstra over a cost
//! grid with 4, 8 or 16 move directions. The vector solver triangulates the
//! region map (constrained Delaunay), places nested dyadic Steiner points on
//! every triangulation edge and runs Dijkstra over straight arcs inside each
//! triangle. Both return upper bounds that tighten as the grid gets finer or
//! the Steiner count grows.

mod cdt;
mod convergence;
mod dijkstra;
mod raster;
mod vector;

pub use cdt::{triangulate_points, Triangulation};
pub use convergence::{convergence_report, ConvergenceReport, ConvergenceRow};
pub use raster::{raster_path, rasterize};
pub use vector::{steiner_parameter, triangulate, vector_path, vector_triangulation};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{point_in_polygon, segments_cross, Box2, Point2, Polygon2};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CcmError {
    #[error("weight {weight} of region {region} must be positive or infinite")]
    InvalidWeight { region: usize, weight: f64 },

    #[error("default weight {0} must be positive or infinite")]
    InvalidDefaultWeight(f64),

    #[error("extent has zero area")]
    EmptyExtent,

    #[error("region {0} extends outside the map extent")]
    RegionOutsideExtent(usize),

    #[error("regions {0} and {1} overlap")]
    OverlappingRegions(usize, usize),

    #[error("cell size must be positive, got {0}")]
    BadCellSize(f64),

    #[error("grid dimensions must be at least 1x1 with one weight per cell")]
    BadGrid,

    #[error("connectivity must be 4, 8 or 16, got {0}")]
    BadConnectivity(u32),

    #[error("steiner points per edge must be at least 1")]
    BadSteinerCount,

    #[error("point ({0}, {1}) lies outside the map")]
    OutsideMap(f64, f64),

    #[error("triangulation input is degenerate: {0}")]
    Degenerate(&'static str),

    #[error("constraint segments {0:?} and {1:?} cross")]
    CrossingConstraints((usize, usize), (usize, usize)),

    #[error("constraint index {0} out of range")]
    BadConstraint(usize),

    #[error("parameter lists must be nonempty")]
    EmptyParameters,
}

/// Permitted raster moves: rook, king, king plus knight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Connectivity {
    Four,
    Eight,
    Sixteen,
}

impl Connectivity {
    pub fn from_count(n: u32) -> Result<Self, CcmError> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            16 => Ok(Connectivity::Sixteen),
            other => Err(CcmError::BadConnectivity(other)),
        }
    }

    pub fn count(self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
            Connectivity::Sixteen => 16,
        }
    }

    /// (dcol, drow) offsets, each move set a superset of the previous one.
    pub fn moves(self) -> &'static [(i64, i64)] {
        const MOVES: [(i64, i64); 16] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ];
        &MOVES[..self.count() as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    Raster(Connectivity),
    /// Steiner points per triangulation edge.
    Vector(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Raster(c) => write!(f, "RASTER-{}", c.count()),
            Method::Vector(m) => write!(f, "VECTOR({m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    /// Source first, target last; empty when no path exists.
    pub vertices: Vec<Point2>,
    /// Weighted length; infinite when no path exists.
    pub total_cost: f64,
    pub method: Method,
}

impl PathResult {
    pub fn no_path(method: Method) -> Self {
        PathResult { vertices: Vec::new(), total_cost: f64::INFINITY, method }
    }

    pub fn found(&self) -> bool {
        self.total_cost.is_finite()
    }
}

fn valid_weight(w: f64) -> bool {
    w > 0.0 && !w.is_nan()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRegion {
    pub polygon: Polygon2,
    /// Cost per meter; `f64::INFINITY` marks an obstacle.
    pub weight: f64,
}

/// Regions of uniform traversal cost over a rectangular extent.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMap {
    regions: Vec<CostRegion>,
    extent: Box2,
    default_weight: f64,
}

impl CostMap {
    pub fn new(regions: Vec<CostRegion>, extent: Box2, default_weight: f64) -> Result<Self, CcmError> {
        if extent.area() <= 0.0 {
            return Err(CcmError::EmptyExtent);
        }
        if !valid_weight(default_weight) {
            return Err(CcmError::InvalidDefaultWeight(default_weight));
        }
        for (i, r) in regions.iter().enumerate() {
            if !valid_weight(r.weight) {
                return Err(CcmError::InvalidWeight { region: i, weight: r.weight });
            }
            let inside = r.polygon.rings().all(|ring| ring.vertices().iter().all(|&v| extent.contains_point(v)));
            if !inside {
                return Err(CcmError::RegionOutsideExtent(i));
            }
        }
        check_disjoint(&regions)?;
        Ok(CostMap { regions, extent, default_weight })
    }

    pub fn uniform(extent: Box2, weight: f64) -> Result<Self, CcmError> {
        CostMap::new(Vec::new(), extent, weight)
    }

    pub fn regions(&self) -> &[CostRegion] {
        &self.regions
    }

    pub fn extent(&self) -> Box2 {
        self.extent
    }

    pub fn default_weight(&self) -> f64 {
        self.default_weight
    }

    /// First region containing `p` (boundary inclusive).
    pub fn region_at(&self, p: Point2) -> Option<usize> {
        self.regions.iter().position(|r| point_in_polygon(p, &r.polygon))
    }

    pub fn weight_of(&self, region: Option<usize>) -> f64 {
        region.map_or(self.default_weight, |i| self.regions[i].weight)
    }

    pub fn weight_at(&self, p: Point2) -> f64 {
        self.weight_of(self.region_at(p))
    }

    /// Same map with every weight multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> CostMap {
        CostMap {
            regions: self
                .regions
                .iter()
                .map(|r| CostRegion { polygon: r.polygon.clone(), weight: r.weight * k })
                .collect(),
            extent: self.extent,
            default_weight: self.default_weight * k,
        }
    }
}

fn check_disjoint(regions: &[CostRegion]) -> Result<(), CcmError> {
    use crate::geometry::Bounded;
    let boxes: Vec<Box2> = regions.iter().map(|r| r.polygon.bbox()).collect();
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (a, b) = (&regions[i].polygon, &regions[j].polygon);
            let crossing = a.rings().any(|ra| {
                ra.segments().any(|(p, q)| b.rings().any(|rb| rb.segments().any(|(s, t)| segments_cross(p, q, s, t))))
            });
            let nested = |x: &Polygon2, y: &Polygon2| {
                x.rings()
                    .flat_map(|r| r.vertices().iter())
                    .any(|&v| point_in_polygon(v, y) && !y.rings().any(|r| r.on_boundary(v)))
            };
            if crossing || nested(a, b) || nested(b, a) {
                return Err(CcmError::OverlappingRegions(i, j));
            }
        }
    }
    Ok(())
}

/// Rasterized cost surface, row 0 at the bottom (smallest y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostGrid {
    pub origin: Point2,
    pub cell_size: f64,
    pub ncols: usize,
    pub nrows: usize,
    /// Row-major cell weights.
    pub weights: Vec<f64>,
}

impl CostGrid {
    pub fn new(
        origin: Point2,
        cell_size: f64,
        ncols: usize,
        nrows: usize,
        weights: Vec<f64>,
    ) -> Result<Self, CcmError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(CcmError::BadCellSize(cell_size));
        }
        if ncols == 0 || nrows == 0 || weights.len() != ncols * nrows {
            return Err(CcmError::BadGrid);
        }
        if let Some(&w) = weights.iter().find(|&&w| !valid_weight(w)) {
            return Err(CcmError::InvalidDefaultWeight(w));
        }
        Ok(CostGrid { origin, cell_size, ncols, nrows, weights })
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.ncols + col
    }

    pub fn weight(&self, col: usize, row: usize) -> f64 {
        self.weights[self.index(col, row)]
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Point2 {
        Point2::new(
            self.origin.x + (col as f64 + 0.5) * self.cell_size,
            self.origin.y + (row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Cell containing `p`; points on the far grid border map to the last cell.
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        let locate = |v: f64, o: f64, n: usize| -> Option<usize> {
            let f = ((v - o) / self.cell_size).floor();
            if f < 0.0 || !f.is_finite() {
                return None;
            }
            let i = f as usize;
            if i < n {
                Some(i)
            } else if i == n && v <= o + n as f64 * self.cell_size {
                Some(n - 1)
            } else {
                None
            }
        };
        Some((locate(p.x, self.origin.x, self.ncols)?, locate(p.y, self.origin.y, self.nrows)?))
    }
}
