//! Town/road dataset and the canonical spatial queries over it.
//!
//! Every query returns rows in input order. When the dataset carries a box
//! index, spatial predicates are prefiltered on boxes and then tested
//! exactly; results are identical to the plain scan.

mod index;

pub use index::BoxIndex;

use std::collections::HashSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::geometry::{area, length, within_distance, Bounded, Box2, Polygon2, Polyline2};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum QueryError {
    #[error("duplicate town name {0:?}")]
    DuplicateTown(String),

    #[error("duplicate road name {0:?}")]
    DuplicateRoad(String),

    #[error("no road named {0:?}")]
    RoadNotFound(String),

    #[error("{0} must be a nonnegative number, got {1}")]
    BadParameter(&'static str, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Town {
    pub name: String,
    pub population: u64,
    pub region: Polygon2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Road {
    pub name: String,
    pub construct: NaiveDate,
    pub shape: Polyline2,
}

#[derive(Debug, Clone)]
struct DatasetIndex {
    town_boxes: Vec<Box2>,
    road_boxes: Vec<Box2>,
    towns: BoxIndex,
    roads: BoxIndex,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    towns: Vec<Town>,
    roads: Vec<Road>,
    index: Option<DatasetIndex>,
}

/// Names compare after trimming surrounding whitespace.
fn name_key(name: &str) -> &str {
    name.trim()
}

impl Dataset {
    pub fn new(towns: Vec<Town>, roads: Vec<Road>) -> Result<Self, QueryError> {
        let mut seen = HashSet::new();
        for t in &towns {
            if !seen.insert(name_key(&t.name)) {
                return Err(QueryError::DuplicateTown(t.name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for r in &roads {
            if !seen.insert(name_key(&r.name)) {
                return Err(QueryError::DuplicateRoad(r.name.clone()));
            }
        }
        Ok(Dataset { towns, roads, index: None })
    }

    pub fn with_index(mut self) -> Self {
        self.build_index();
        self
    }

    pub fn build_index(&mut self) {
        let town_boxes: Vec<Box2> = self.towns.iter().map(|t| t.region.bbox()).collect();
        let road_boxes: Vec<Box2> = self.roads.iter().map(|r| r.shape.bbox()).collect();
        self.index = Some(DatasetIndex {
            towns: BoxIndex::new(&town_boxes),
            roads: BoxIndex::new(&road_boxes),
            town_boxes,
            road_boxes,
        });
    }

    pub fn drop_index(&mut self) {
        self.index = None;
    }

    pub fn has_index(&self) -> bool {
        self.index.is_some()
    }

    pub fn towns(&self) -> &[Town] {
        &self.towns
    }

    pub fn roads(&self) -> &[Road] {
        &self.roads
    }

    pub fn road(&self, name: &str) -> Option<&Road> {
        self.roads.iter().find(|r| name_key(&r.name) == name_key(name))
    }
}

fn check_nonnegative(what: &'static str, v: f64) -> Result<(), QueryError> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(QueryError::BadParameter(what, v))
    }
}

/// Widens a box so a closed-overlap test cannot miss pairs closer than `dist`.
fn reach(b: &Box2, dist: f64) -> Box2 {
    b.expand(dist * (1.0 + 1e-12) + 1e-9)
}

/// Towns with region area strictly greater than `threshold` square meters.
pub fn towns_area_gt(ds: &Dataset, threshold: f64) -> Result<Vec<&Town>, QueryError> {
    check_nonnegative("threshold", threshold)?;
    Ok(ds.towns.iter().filter(|t| area(&t.region) > threshold).collect())
}

/// Towns whose region bbox overlaps `window` (touching counts).
pub fn towns_bbox_overlapping<'a>(ds: &'a Dataset, window: &Box2) -> Vec<&'a Town> {
    match &ds.index {
        Some(ix) => ix.towns.query_exact(&ix.town_boxes, window).into_iter().map(|i| &ds.towns[i]).collect(),
        None => ds.towns.iter().filter(|t| t.region.bbox().overlaps(window)).collect(),
    }
}

/// Roads shorter than `max_len` built strictly after `after`.
pub fn roads_short_recent(ds: &Dataset, max_len: f64, after: NaiveDate) -> Result<Vec<&Road>, QueryError> {
    check_nonnegative("max_len", max_len)?;
    Ok(ds.roads.iter().filter(|r| r.construct > after && length(&r.shape) < max_len).collect())
}

/// Towns closer than `dist` to the named road.
pub fn towns_near_road<'a>(ds: &'a Dataset, dist: f64, road_name: &str) -> Result<Vec<&'a Town>, QueryError> {
    check_nonnegative("dist", dist)?;
    let road = ds.road(road_name).ok_or_else(|| QueryError::RoadNotFound(road_name.to_string()))?;
    let near = |t: &Town| within_distance(&t.region, &road.shape, dist);
    Ok(match &ds.index {
        Some(ix) => ix
            .towns
            .query_exact(&ix.town_boxes, &reach(&road.shape.bbox(), dist))
            .into_iter()
            .map(|i| &ds.towns[i])
            .filter(|t| near(t))
            .collect(),
        None => ds.towns.iter().filter(|t| near(t)).collect(),
    })
}

/// Every (town, road) pair closer than `dist`, town-major in input order.
pub fn towns_near_any_road(ds: &Dataset, dist: f64) -> Result<Vec<(&Town, &Road)>, QueryError> {
    check_nonnegative("dist", dist)?;
    let mut pairs = Vec::new();
    for (ti, town) in ds.towns.iter().enumerate() {
        let candidates: Vec<usize> = match &ds.index {
            Some(ix) => ix.roads.query_exact(&ix.road_boxes, &reach(&ix.town_boxes[ti], dist)),
            None => (0..ds.roads.len()).collect(),
        };
        for ri in candidates {
            let road = &ds.roads[ri];
            if within_distance(&town.region, &road.shape, dist) {
                pairs.push((town, road));
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn town(name: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> Town {
        Town { name: name.into(), population: 1000, region: Polygon2::rectangle(x0, y0, x1, y1).unwrap() }
    }

    fn road(name: &str, built: &str, pts: &[(f64, f64)]) -> Road {
        Road {
            name: name.into(),
            construct: built.parse().unwrap(),
            shape: Polyline2::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap(),
        }
    }

    fn both(ds: Dataset) -> [Dataset; 2] {
        [ds.clone(), ds.with_index()]
    }

    #[test]
    fn area_threshold() {
        let ds = Dataset::new(vec![town("big", 0.0, 0.0, 200.0, 100.0), town("small", 0.0, 0.0, 100.0, 50.0)], vec![])
            .unwrap();
        let names: Vec<_> = towns_area_gt(&ds, 10_000.0).unwrap().iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, ["big"]);
        assert_eq!(towns_area_gt(&ds, 0.0).unwrap().len(), 2);
        assert!(towns_area_gt(&ds, -1.0).is_err());
    }

    #[test]
    fn bbox_window() {
        for ds in both(
            Dataset::new(
                vec![town("in", 100.0, 100.0, 300.0, 200.0), town("far", 1000.0, 1000.0, 1100.0, 1100.0)],
                vec![],
            )
            .unwrap(),
        ) {
            let w = Box2::from_coords(0.0, 0.0, 800.0, 400.0).unwrap();
            let got: Vec<_> = towns_bbox_overlapping(&ds, &w).iter().map(|t| t.name.clone()).collect();
            assert_eq!(got, ["in"]);
            let exact = Box2::from_coords(1000.0, 1000.0, 1100.0, 1100.0).unwrap();
            assert_eq!(towns_bbox_overlapping(&ds, &exact)[0].name, "far");
        }
    }

    #[test]
    fn short_recent_roads() {
        let ds = Dataset::new(
            vec![],
            vec![
                road("kept", "1995-06-01", &[(0.0, 0.0), (4000.0, 0.0)]),
                road("old", "1989-01-01", &[(0.0, 0.0), (4000.0, 0.0)]),
                road("long", "1995-06-01", &[(0.0, 0.0), (6000.0, 0.0)]),
                road("boundary-date", "1990-01-01", &[(0.0, 0.0), (10.0, 0.0)]),
            ],
        )
        .unwrap();
        let after = NaiveDate::from_ymd_opt(1990, 1, 1).unwrap();
        let got: Vec<_> = roads_short_recent(&ds, 5000.0, after).unwrap().iter().map(|r| r.name.clone()).collect();
        assert_eq!(got, ["kept"]);
        assert!(roads_short_recent(&ds, 0.0, after).unwrap().is_empty());
    }

    #[test]
    fn near_road() {
        for ds in both(
            Dataset::new(
                vec![town("crossed", 0.0, 0.0, 100.0, 100.0), town("far", 2100.0, 0.0, 2200.0, 100.0)],
                vec![road("A12", "2000-01-01", &[(50.0, -50.0), (50.0, 150.0), (100.0, 150.0)])],
            )
            .unwrap(),
        ) {
            let got: Vec<_> = towns_near_road(&ds, 500.0, "A12").unwrap().iter().map(|t| t.name.clone()).collect();
            assert_eq!(got, ["crossed"]);
            // leading space in the road name is tolerated
            assert_eq!(towns_near_road(&ds, 500.0, " A12").unwrap().len(), 1);
            assert_eq!(towns_near_road(&ds, 500.0, "B7"), Err(QueryError::RoadNotFound("B7".into())));
        }
    }

    #[test]
    fn near_any() {
        let ds = Dataset::new(vec![town("t", 0.0, 0.0, 10.0, 10.0)], vec![]).unwrap();
        assert!(towns_near_any_road(&ds, 500.0).unwrap().is_empty());
        for ds in both(
            Dataset::new(
                vec![town("t", 0.0, 0.0, 10.0, 10.0)],
                vec![road("r", "2000-01-01", &[(-5.0, 5.0), (15.0, 5.0)])],
            )
            .unwrap(),
        ) {
            let pairs = towns_near_any_road(&ds, 1.0).unwrap();
            assert_eq!(pairs.len(), 1);
            assert_eq!((pairs[0].0.name.as_str(), pairs[0].1.name.as_str()), ("t", "r"));
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Dataset::new(vec![town("a", 0.0, 0.0, 1.0, 1.0), town(" a", 2.0, 2.0, 3.0, 3.0)], vec![]);
        assert_eq!(err.unwrap_err(), QueryError::DuplicateTown(" a".into()));
    }
}
