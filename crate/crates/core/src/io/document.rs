use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::IoError;
use crate::ccm::{CostMap, CostRegion};
use crate::geometry::{Box2, Point2, Polygon2, Polyline2};
use crate::query::{Dataset, Road, Town};
use crate::stratification::{Field, FieldMap};
use crate::topology::AreaId;

pub const SCHEMA_VERSION: &str = "1";
pub const CRS: &str = "local-meters";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureId {
    Int(i64),
    Text(String),
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureId::Int(i) => write!(f, "{i}"),
            FeatureId::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Geometry {
    /// Outer ring first, then islands. Rings may repeat the first vertex.
    Polygon {
        coordinates: Vec<Vec<[f64; 2]>>,
    },
    Polyline {
        coordinates: Vec<[f64; 2]>,
    },
}

impl Geometry {
    fn kind(&self) -> &'static str {
        match self {
            Geometry::Polygon { .. } => "polygon",
            Geometry::Polyline { .. } => "polyline",
        }
    }

    pub fn from_polygon(p: &Polygon2) -> Self {
        Geometry::Polygon {
            coordinates: p.rings().map(|r| r.vertices().iter().map(|v| [v.x, v.y]).collect()).collect(),
        }
    }

    pub fn from_polyline(l: &Polyline2) -> Self {
        Geometry::Polyline { coordinates: l.vertices().iter().map(|v| [v.x, v.y]).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Feature {
    pub id: FeatureId,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, Value>,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoDocument {
    pub schema_version: String,
    pub crs: String,
    /// `[xmin, ymin, xmax, ymax]`; defaults to the union of feature boxes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub towns: Vec<Feature>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roads: Vec<Feature>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Feature>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<Feature>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cost_regions: Vec<Feature>,
}

impl Default for GeoDocument {
    fn default() -> Self {
        GeoDocument {
            schema_version: SCHEMA_VERSION.into(),
            crs: CRS.into(),
            extent: None,
            towns: Vec::new(),
            roads: Vec::new(),
            regions: Vec::new(),
            fields: Vec::new(),
            cost_regions: Vec::new(),
        }
    }
}

pub fn load_document(path: impl AsRef<Path>) -> Result<GeoDocument, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_document(&text)
}

/// Parses and fully validates a document.
pub fn parse_document(text: &str) -> Result<GeoDocument, IoError> {
    let doc: GeoDocument = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.validate()?;
    Ok(doc)
}

struct Ctx<'a> {
    collection: &'static str,
    feature: &'a Feature,
}

impl Ctx<'_> {
    fn err(&self, reason: impl fmt::Display) -> IoError {
        IoError::Feature { collection: self.collection, id: self.feature.id.to_string(), reason: reason.to_string() }
    }

    fn prop(&self, key: &str) -> Option<&Value> {
        self.feature.properties.get(key)
    }

    fn string(&self, key: &str) -> Result<Option<String>, IoError> {
        match self.prop(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.err(format!("property {key} must be a string"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, IoError> {
        match self.prop(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(self.err(format!("property {key} must be true or false"))),
        }
    }

    fn name(&self) -> Result<String, IoError> {
        Ok(self.string("name")?.unwrap_or_else(|| match &self.feature.id {
            FeatureId::Int(i) => i.to_string(),
            FeatureId::Text(s) => s.clone(),
        }))
    }

    fn polygon(&self) -> Result<Polygon2, IoError> {
        let Geometry::Polygon { coordinates } = &self.feature.geometry else {
            return Err(self.err(format!("expected polygon geometry, got {}", self.feature.geometry.kind())));
        };
        let mut rings = coordinates.iter().map(|r| points(r));
        let outer = rings.next().ok_or_else(|| self.err("polygon has no rings"))?;
        Polygon2::from_rings(outer, rings.collect()).map_err(|e| self.err(e))
    }

    fn polyline(&self) -> Result<Polyline2, IoError> {
        let Geometry::Polyline { coordinates } = &self.feature.geometry else {
            return Err(self.err(format!("expected polyline geometry, got {}", self.feature.geometry.kind())));
        };
        Polyline2::new(points(coordinates)).map_err(|e| self.err(e))
    }
}

fn points(coords: &[[f64; 2]]) -> Vec<Point2> {
    coords.iter().map(|&[x, y]| Point2::new(x, y)).collect()
}

fn each<'a, T>(
    collection: &'static str,
    features: &'a [Feature],
    mut f: impl FnMut(&Ctx<'a>) -> Result<T, IoError>,
) -> Result<Vec<T>, IoError> {
    let mut seen = HashSet::new();
    features
        .iter()
        .map(|feature| {
            let ctx = Ctx { collection, feature };
            if !seen.insert(&feature.id) {
                return Err(ctx.err("duplicate id"));
            }
            f(&ctx)
        })
        .collect()
}

impl GeoDocument {
    pub fn validate(&self) -> Result<(), IoError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(IoError::UnknownSchema(self.schema_version.clone()));
        }
        if self.crs != CRS {
            return Err(IoError::BadCrs(self.crs.clone()));
        }
        if let Some([x0, y0, x1, y1]) = self.extent {
            let ok = [x0, y0, x1, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
            if !ok {
                return Err(IoError::Invalid(format!("extent {:?} must be finite with min < max", [x0, y0, x1, y1])));
            }
        }
        self.dataset()?;
        self.regions()?;
        self.fields()?;
        self.cost_regions()?;
        Ok(())
    }

    /// Towns use properties `name` (defaults to the id) and `population`.
    pub fn towns(&self) -> Result<Vec<Town>, IoError> {
        each("towns", &self.towns, |c| {
            let population = match c.prop("population") {
                None => 0,
                Some(v) => v.as_u64().ok_or_else(|| c.err("population must be a nonnegative integer"))?,
            };
            Ok(Town { name: c.name()?, population, region: c.polygon()? })
        })
    }

    /// Roads use properties `name` (defaults to the id) and `construct`
    /// (YYYY-MM-DD, required).
    pub fn roads(&self) -> Result<Vec<Road>, IoError> {
        each("roads", &self.roads, |c| {
            let date = c.string("construct")?.ok_or_else(|| c.err("missing construct date"))?;
            let construct = NaiveDate::parse_from_str(&date, "%Y-%m-%d")
                .map_err(|e| c.err(format!("bad construct date {date:?}: {e}")))?;
            Ok(Road { name: c.name()?, construct, shape: c.polyline()? })
        })
    }

    pub fn dataset(&self) -> Result<Dataset, IoError> {
        Dataset::new(self.towns()?, self.roads()?).map_err(|e| IoError::Invalid(e.to_string()))
    }

    /// Partition areas keyed by their positive integer ids.
    pub fn regions(&self) -> Result<Vec<(AreaId, Polygon2)>, IoError> {
        each("regions", &self.regions, |c| {
            let id = match c.feature.id {
                FeatureId::Int(i) if i > 0 && i <= AreaId::MAX as i64 => i as AreaId,
                _ => return Err(c.err("region ids must be positive integers")),
            };
            Ok((id, c.polygon()?))
        })
    }

    /// Fields use boolean properties `pivot_irrigation` and `small_scale`.
    pub fn fields(&self) -> Result<Vec<Field>, IoError> {
        each("fields", &self.fields, |c| {
            Ok(Field {
                geometry: c.polygon()?,
                pivot_irrigation: c.flag("pivot_irrigation")?,
                small_scale: c.flag("small_scale")?,
            })
        })
    }

    /// Cost regions use `weight` (positive number or "inf") times an
    /// optional positive `multiplier`.
    pub fn cost_regions(&self) -> Result<Vec<CostRegion>, IoError> {
        each("cost_regions", &self.cost_regions, |c| {
            let weight = match c.prop("weight") {
                Some(Value::String(s)) if s == "inf" => f64::INFINITY,
                Some(Value::Number(n)) => {
                    n.as_f64().filter(|w| *w > 0.0).ok_or_else(|| c.err("weight must be positive"))?
                }
                Some(_) => return Err(c.err("weight must be a positive number or \"inf\"")),
                None => return Err(c.err("missing weight")),
            };
            let multiplier = match c.prop("multiplier") {
                None => 1.0,
                Some(v) => v
                    .as_f64()
                    .filter(|m| *m > 0.0 && m.is_finite())
                    .ok_or_else(|| c.err("multiplier must be a positive number"))?,
            };
            Ok(CostRegion { polygon: c.polygon()?, weight: weight * multiplier })
        })
    }

    /// Explicit extent, or the union of every feature's bounding box.
    pub fn extent(&self) -> Option<Box2> {
        if let Some([x0, y0, x1, y1]) = self.extent {
            return Box2::from_coords(x0, y0, x1, y1).ok();
        }
        let all = [&self.towns, &self.roads, &self.regions, &self.fields, &self.cost_regions];
        let pts: Vec<Point2> = all
            .iter()
            .flat_map(|fs| fs.iter())
            .flat_map(|f| match &f.geometry {
                Geometry::Polygon { coordinates } => coordinates.iter().flatten().copied().collect::<Vec<_>>(),
                Geometry::Polyline { coordinates } => coordinates.clone(),
            })
            .map(|[x, y]| Point2::new(x, y))
            .collect();
        Box2::from_points(&pts)
    }

    pub fn cost_map(&self, default_weight: f64) -> Result<CostMap, IoError> {
        let regions = self.cost_regions()?;
        let extent = self.extent().ok_or_else(|| IoError::Invalid("document has no extent".into()))?;
        CostMap::new(regions, extent, default_weight).map_err(|e| IoError::Invalid(e.to_string()))
    }

    pub fn field_map(&self, block_size: f64) -> Result<FieldMap, IoError> {
        let extent = self.extent().ok_or_else(|| IoError::Invalid("document has no extent".into()))?;
        FieldMap::new(self.fields()?, extent, block_size).map_err(|e| IoError::Invalid(e.to_string()))
    }

    /// Every polygon in the document with its collection name, for rendering.
    pub fn polygons(&self) -> Result<Vec<(&'static str, Polygon2)>, IoError> {
        let mut out: Vec<(&'static str, Polygon2)> = Vec::new();
        out.extend(self.regions()?.into_iter().map(|(_, p)| ("region", p)));
        out.extend(self.cost_regions()?.into_iter().map(|r| ("cost-region", r.polygon)));
        out.extend(self.fields()?.into_iter().map(|f| ("field", f.geometry)));
        out.extend(self.towns()?.into_iter().map(|t| ("town", t.region)));
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
