use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::raster::{raster_path, rasterize};
use super::vector::{solve_on, vector_triangulation, SteinerGraph};
use super::{CcmError, Connectivity, CostMap, Method};
use crate::geometry::Point2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub method: Method,
    /// Cell size for raster rows, Steiner count for vector rows.
    pub parameter: f64,
    pub cost: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Solves the same query at every resolution × connectivity and every
/// Steiner count. Raster rows come first, grouped by cell size.
pub fn convergence_report(
    map: &CostMap,
    s: Point2,
    t: Point2,
    resolutions: &[f64],
    connectivities: &[Connectivity],
    m_values: &[usize],
) -> Result<ConvergenceReport, CcmError> {
    if resolutions.is_empty() || connectivities.is_empty() || m_values.is_empty() {
        return Err(CcmError::EmptyParameters);
    }
    if m_values.contains(&0) {
        return Err(CcmError::BadSteinerCount);
    }
    let mut rows = Vec::new();
    for &cell in resolutions {
        let clock = Instant::now();
        let grid = rasterize(map, cell)?;
        let setup = clock.elapsed().as_secs_f64() * 1e3;
        for &c in connectivities {
            let clock = Instant::now();
            let r = raster_path(&grid, s, t, c)?;
            rows.push(ConvergenceRow {
                method: r.method,
                parameter: cell,
                cost: r.total_cost,
                runtime_ms: setup + clock.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    let clock = Instant::now();
    let (tri, si, ti) = vector_triangulation(map, s, t)?;
    let graph = SteinerGraph::new(map, &tri);
    let setup = clock.elapsed().as_secs_f64() * 1e3;
    for &m in m_values {
        let clock = Instant::now();
        let r = solve_on(map, &graph, s, t, si, ti, m);
        rows.push(ConvergenceRow {
            method: r.method,
            parameter: m as f64,
            cost: r.total_cost,
            runtime_ms: setup + clock.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(ConvergenceReport { rows })
}

impl ConvergenceReport {
    pub fn raster_cost(&self, cell_size: f64, connectivity: Connectivity) -> Option<f64> {
        self.rows.iter().find(|r| r.method == Method::Raster(connectivity) && r.parameter == cell_size).map(|r| r.cost)
    }

    pub fn vector_cost(&self, m: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.method == Method::Vector(m)).map(|r| r.cost)
    }

    pub fn best_vector_cost(&self) -> f64 {
        self.rows.iter().filter(|r| matches!(r.method, Method::Vector(_))).map(|r| r.cost).fold(f64::INFINITY, f64::min)
    }

    /// Raster costs never rise with connectivity at a fixed cell size.
    pub fn connectivity_monotone(&self) -> bool {
        let raster: Vec<&ConvergenceRow> = self.rows.iter().filter(|r| matches!(r.method, Method::Raster(_))).collect();
        raster.iter().all(|a| {
            raster.iter().all(|b| match (a.method, b.method) {
                (Method::Raster(ca), Method::Raster(cb)) if a.parameter == b.parameter && ca < cb => b.cost <= a.cost,
                _ => true,
            })
        })
    }

    /// Vector costs never rise with the Steiner count.
    pub fn steiner_monotone(&self) -> bool {
        let mut vector: Vec<(usize, f64)> = self
            .rows
            .iter()
            .filter_map(|r| match r.method {
                Method::Vector(m) => Some((m, r.cost)),
                _ => None,
            })
            .collect();
        vector.sort_by_key(|v| v.0);
        vector.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// CSV with header `method,resolution_or_m,cost,runtime_ms`. Without
    /// `timing` the runtime column is written as 0 so output is reproducible.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("method,resolution_or_m,cost,runtime_ms\n");
        for r in &self.rows {
            let ms = if timing { r.runtime_ms } else { 0.0 };
            let _ = writeln!(out, "{},{},{},{:.3}", r.method, r.parameter, format_cost(r.cost), ms);
        }
        out
    }
}

pub(crate) fn format_cost(c: f64) -> String {
    if c.is_finite() {
        format!("{c:.6}")
    } else {
        "inf".to_string()
    }
}
