//! Stratified sampling of digitized fields and the estimates built on it.
//!
//! The extent is cut into square blocks. Each block is classified HIGH,
//! MEDIUM or LOW by field density (pivot irrigation forces HIGH), sample
//! points are allocated to strata in proportion to area times prior crop
//! probability, and crop/no-crop outcomes at those points are expanded to a
//! cultivable-area estimate.

use std::collections::BTreeMap;
use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Bounded, Box2, Point2, Polygon2};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum StratError {
    #[error("extent has zero area")]
    EmptyExtent,

    #[error("block size must be positive, got {0}")]
    BadBlockSize(f64),

    #[error("thresholds must satisfy 0 < medium < high <= 1, got high {high}, medium {medium}")]
    BadThresholds { high: f64, medium: f64 },

    #[error("prior crop probability must be in (0, 1], got {0}")]
    BadPrior(f64),

    #[error("{requested} samples cannot cover {needed} nonempty strata")]
    TooFewSamples { requested: usize, needed: usize },

    #[error("every stratum is empty")]
    AllStrataEmpty,

    #[error("no outcome recorded for sample point {0}")]
    MissingOutcome(usize),

    #[error("outcome given for unknown sample point {0}")]
    UnknownPoint(usize),

    #[error("at least two distinct years are required")]
    TooFewYears,

    #[error("year {0} appears more than once")]
    DuplicateYear(i32),

    #[error("{0} must be a nonnegative number, got {1}")]
    Negative(&'static str, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Level {
    High,
    Medium,
    Low,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::High, Level::Medium, Level::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::High => "HIGH",
            Level::Medium => "MEDIUM",
            Level::Low => "LOW",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub geometry: Polygon2,
    pub pivot_irrigation: bool,
    /// Recorded only; does not affect classification.
    pub small_scale: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMap {
    pub fields: Vec<Field>,
    pub extent: Box2,
    pub block_size: f64,
}

impl FieldMap {
    pub fn new(fields: Vec<Field>, extent: Box2, block_size: f64) -> Result<Self, StratError> {
        if extent.area() <= 0.0 {
            return Err(StratError::EmptyExtent);
        }
        if !(block_size > 0.0 && block_size.is_finite()) {
            return Err(StratError::BadBlockSize(block_size));
        }
        Ok(FieldMap { fields, extent, block_size })
    }

    /// Grid blocks clipped to the extent, row-major from the minimum corner.
    pub fn blocks(&self) -> Vec<Box2> {
        let e = self.extent;
        let count = |span: f64| (((span / self.block_size) - 1e-9).ceil() as usize).max(1);
        let (ncols, nrows) = (count(e.width()), count(e.height()));
        let mut out = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                let x0 = e.min.x + col as f64 * self.block_size;
                let y0 = e.min.y + row as f64 * self.block_size;
                let x1 = if col + 1 == ncols { e.max.x } else { x0 + self.block_size };
                let y1 = if row + 1 == nrows { e.max.y } else { y0 + self.block_size };
                out.push(Box2 { min: Point2::new(x0, y0), max: Point2::new(x1, y1) });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub high: f64,
    pub medium: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { high: 0.6, medium: 0.3 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<(), StratError> {
        if 0.0 < self.medium && self.medium < self.high && self.high <= 1.0 {
            Ok(())
        } else {
            Err(StratError::BadThresholds { high: self.high, medium: self.medium })
        }
    }
}

/// Prior crop probability per level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub high: f64,
    pub medium: f64,
    pub low: f64,
}

impl Default for Priors {
    fn default() -> Self {
        Priors { high: 0.9, medium: 0.5, low: 0.1 }
    }
}

impl Priors {
    pub fn of(&self, level: Level) -> f64 {
        match level {
            Level::High => self.high,
            Level::Medium => self.medium,
            Level::Low => self.low,
        }
    }

    pub fn validate(&self) -> Result<(), StratError> {
        for p in [self.high, self.medium, self.low] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(StratError::BadPrior(p));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub level: Level,
    pub blocks: Vec<Box2>,
    pub area: f64,
    pub prior_crop_probability: f64,
}

impl Stratum {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.blocks.iter().any(|b| b.contains_point(p))
    }
}

/// Sutherland-Hodgman clip of a closed vertex loop against a box.
fn clip_to_box(vertices: &[Point2], b: &Box2) -> Vec<Point2> {
    let mut poly = vertices.to_vec();
    // (axis, bound, keep values >= bound)
    let planes = [(0, b.min.x, true), (0, b.max.x, false), (1, b.min.y, true), (1, b.max.y, false)];
    for (axis, bound, keep_above) in planes {
        if poly.is_empty() {
            break;
        }
        let coord = |p: &Point2| if axis == 0 { p.x } else { p.y };
        let inside = |p: &Point2| if keep_above { coord(p) >= bound } else { coord(p) <= bound };
        let mut out = Vec::with_capacity(poly.len() + 4);
        for i in 0..poly.len() {
            let (cur, next) = (poly[i], poly[(i + 1) % poly.len()]);
            let (ci, ni) = (inside(&cur), inside(&next));
            if ci {
                out.push(cur);
            }
            if ci != ni {
                let t = (bound - coord(&cur)) / (coord(&next) - coord(&cur));
                out.push(cur.lerp(next, t));
            }
        }
        poly = out;
    }
    poly
}

/// Area of `polygon ∩ b`, islands subtracted.
pub fn intersection_area(polygon: &Polygon2, b: &Box2) -> f64 {
    if !polygon.bbox().overlaps(b) {
        return 0.0;
    }
    let ring_area = |v: &[Point2]| crate::geometry::signed_area(&clip_to_box(v, b)).abs();
    let outer = ring_area(polygon.outer().vertices());
    let holes: f64 = polygon.islands().iter().map(|r| ring_area(r.vertices())).sum();
    (outer - holes).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockClass {
    pub bbox: Box2,
    pub density: f64,
    pub pivot: bool,
    pub level: Level,
}

/// Density and level of every block, in [`FieldMap::blocks`] order.
pub fn classify_blocks(fm: &FieldMap, thresholds: Thresholds) -> Result<Vec<BlockClass>, StratError> {
    thresholds.validate()?;
    let boxes: Vec<Box2> = fm.fields.iter().map(|f| f.geometry.bbox()).collect();
    Ok(fm
        .blocks()
        .into_iter()
        .map(|block| {
            let mut covered = 0.0;
            let mut pivot = false;
            for (f, fb) in fm.fields.iter().zip(&boxes) {
                if !fb.overlaps(&block) {
                    continue;
                }
                let a = intersection_area(&f.geometry, &block);
                covered += a;
                pivot |= f.pivot_irrigation && a > 0.0;
            }
            let density = covered / block.area();
            let level = if pivot || density >= thresholds.high {
                Level::High
            } else if density >= thresholds.medium {
                Level::Medium
            } else {
                Level::Low
            };
            BlockClass { bbox: block, density, pivot, level }
        })
        .collect())
}

/// Groups blocks into the three strata, always returned HIGH, MEDIUM, LOW.
pub fn stratify(fm: &FieldMap, thresholds: Thresholds, priors: Priors) -> Result<Vec<Stratum>, StratError> {
    priors.validate()?;
    let classes = classify_blocks(fm, thresholds)?;
    Ok(Level::ALL
        .iter()
        .map(|&level| {
            let blocks: Vec<Box2> = classes.iter().filter(|c| c.level == level).map(|c| c.bbox).collect();
            Stratum {
                level,
                area: blocks.iter().map(Box2::area).sum(),
                blocks,
                prior_crop_probability: priors.of(level),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    /// 1-based, sequential across strata in stratum order.
    pub id: usize,
    pub stratum: usize,
    pub point: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    /// Point count per stratum, parallel to the strata list.
    pub counts: Vec<usize>,
    pub points: Vec<SamplePoint>,
}

/// Largest-remainder apportionment of `total` seats by `weights`. Ties in
/// the remainder go to the larger weight, then the lower index.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(weights[b].total_cmp(&weights[a])).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Splits `total_n` points over the strata by area × prior and draws each
/// stratum's points uniformly over its blocks.
///
/// Every nonempty stratum receives at least one point: if rounding leaves one
/// at zero, a point is moved from the stratum with the largest count.
pub fn allocate_samples(strata: &[Stratum], total_n: usize, seed: u64) -> Result<SamplePlan, StratError> {
    let needed = strata.iter().filter(|s| !s.is_empty()).count();
    if needed == 0 {
        return Err(StratError::AllStrataEmpty);
    }
    if total_n < needed {
        return Err(StratError::TooFewSamples { requested: total_n, needed });
    }
    let weights: Vec<f64> = strata.iter().map(|s| s.area * s.prior_crop_probability).collect();
    let mut counts = largest_remainder(&weights, total_n);
    while let Some(starved) = (0..strata.len()).find(|&i| !strata[i].is_empty() && counts[i] == 0) {
        let donor = (0..counts.len()).max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a))).unwrap();
        counts[donor] -= 1;
        counts[starved] += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(total_n);
    for (h, stratum) in strata.iter().enumerate() {
        if counts[h] == 0 {
            continue;
        }
        let pick = WeightedIndex::new(stratum.blocks.iter().map(Box2::area)).expect("blocks have positive area");
        for _ in 0..counts[h] {
            let b = stratum.blocks[pick.sample(&mut rng)];
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            points.push(SamplePoint {
                id: points.len() + 1,
                stratum: h,
                point: Point2::new(b.min.x + u * b.width(), b.min.y + v * b.height()),
            });
        }
    }
    Ok(SamplePlan { seed, counts, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub area: f64,
    pub stderr: f64,
}

/// Stratified expansion estimate from `(stratum area, points, crop points)`.
pub fn estimate_from_tallies(tallies: &[(f64, usize, usize)]) -> AreaEstimate {
    let mut area = 0.0;
    let mut var = 0.0;
    for &(a_h, n, crops) in tallies {
        if n == 0 {
            continue;
        }
        let p = crops as f64 / n as f64;
        area += a_h * p;
        var += a_h * a_h * p * (1.0 - p) / (n.max(2) - 1) as f64;
    }
    AreaEstimate { area, stderr: var.sqrt() }
}

/// Expands crop/no-crop outcomes, keyed by sample point id, to an estimate
/// of cultivable area with its standard error.
pub fn estimate_cultivable_area(
    strata: &[Stratum],
    plan: &SamplePlan,
    outcomes: &BTreeMap<usize, bool>,
) -> Result<AreaEstimate, StratError> {
    if let Some(&id) = outcomes.keys().find(|&&id| id == 0 || id > plan.points.len()) {
        return Err(StratError::UnknownPoint(id));
    }
    let mut tallies: Vec<(f64, usize, usize)> = strata.iter().map(|s| (s.area, 0, 0)).collect();
    for p in &plan.points {
        let crop = *outcomes.get(&p.id).ok_or(StratError::MissingOutcome(p.id))?;
        tallies[p.stratum].1 += 1;
        tallies[p.stratum].2 += crop as usize;
    }
    Ok(estimate_from_tallies(&tallies))
}

/// Change in cultivable area per year, absolute and as a fraction of the
/// earliest year's area (0 when that area is 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub latest_change: f64,
    pub latest_change_fraction: f64,
    pub slope: f64,
    pub slope_fraction: f64,
}

impl LossReport {
    /// Fraction of the first year's area lost per year (trend based).
    pub fn loss_rate(&self) -> f64 {
        -self.slope_fraction
    }
}

pub fn yearly_loss(series: &[(i32, f64)]) -> Result<LossReport, StratError> {
    let mut s = series.to_vec();
    s.sort_by_key(|p| p.0);
    if let Some(w) = s.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(StratError::DuplicateYear(w[0].0));
    }
    if s.len() < 2 {
        return Err(StratError::TooFewYears);
    }
    let n = s.len() as f64;
    let mean_x = s.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_y = s.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = s.iter().map(|p| (p.0 as f64 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = s.iter().map(|p| (p.0 as f64 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let (prev, last) = (s[s.len() - 2], s[s.len() - 1]);
    let latest_change = (last.1 - prev.1) / (last.0 - prev.0) as f64;
    let base = s[0].1;
    let frac = |v: f64| if base == 0.0 { 0.0 } else { v / base };
    Ok(LossReport { latest_change, latest_change_fraction: frac(latest_change), slope, slope_fraction: frac(slope) })
}

/// Tonnes per year that domestic production falls short of demand.
pub fn import_requirement(
    population: f64,
    per_capita_demand: f64,
    cultivable_area: f64,
    yield_per_m2: f64,
) -> Result<f64, StratError> {
    for (name, v) in [
        ("population", population),
        ("per_capita_demand", per_capita_demand),
        ("cultivable_area", cultivable_area),
        ("yield", yield_per_m2),
    ] {
        if v.is_nan() || v < 0.0 {
            return Err(StratError::Negative(name, v));
        }
    }
    Ok((population * per_capita_demand - cultivable_area * yield_per_m2).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandStats {
    pub year: i32,
    pub cultivable_area: f64,
    pub stderr: f64,
    pub loss_rate: f64,
    pub import_requirement: f64,
}
