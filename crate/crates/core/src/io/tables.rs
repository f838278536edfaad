//! CSV tables written by the command line and read back as inputs.

use std::collections::BTreeMap;

use super::IoError;
use crate::ccm::PathResult;
use crate::geometry::Point2;
use crate::query::{Road, Town};
use crate::stratification::{LandStats, SamplePlan, Stratum};

/// Fixed six-decimal rendering for computed quantities; `inf` for infinity.
pub fn fixed(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else if v > 0.0 {
        "inf".into()
    } else {
        "nan".into()
    }
}

fn write_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn towns_csv(towns: &[&Town]) -> String {
    write_rows(&["name", "population"], towns.iter().map(|t| [t.name.clone(), t.population.to_string()]))
}

pub fn roads_csv(roads: &[&Road]) -> String {
    write_rows(&["name", "construct"], roads.iter().map(|r| [r.name.clone(), r.construct.to_string()]))
}

pub fn pairs_csv(pairs: &[(&Town, &Road)]) -> String {
    write_rows(&["town", "road"], pairs.iter().map(|(t, r)| [t.name.clone(), r.name.clone()]))
}

pub fn path_summary_csv(r: &PathResult) -> String {
    write_rows(
        &["method", "total_cost", "n_vertices"],
        [[r.method.to_string(), fixed(r.total_cost), r.vertices.len().to_string()]],
    )
}

/// Path vertices at full precision so they read back exactly.
pub fn path_csv(vertices: &[Point2]) -> String {
    write_rows(&["x", "y"], vertices.iter().map(|p| [p.x.to_string(), p.y.to_string()]))
}

pub fn strata_csv(strata: &[Stratum], plan: &SamplePlan) -> String {
    write_rows(
        &["level", "blocks", "area", "prior", "samples"],
        strata.iter().zip(&plan.counts).map(|(s, n)| {
            [
                s.level.to_string(),
                s.blocks.len().to_string(),
                fixed(s.area),
                s.prior_crop_probability.to_string(),
                n.to_string(),
            ]
        }),
    )
}

pub fn plan_csv(strata: &[Stratum], plan: &SamplePlan) -> String {
    write_rows(
        &["point_id", "stratum", "x", "y"],
        plan.points
            .iter()
            .map(|p| [p.id.to_string(), strata[p.stratum].level.to_string(), fixed(p.point.x), fixed(p.point.y)]),
    )
}

pub fn stats_csv(s: &LandStats) -> String {
    write_rows(
        &["year", "cultivable_area", "stderr", "loss_rate", "import_requirement"],
        [[
            s.year.to_string(),
            fixed(s.cultivable_area),
            fixed(s.stderr),
            fixed(s.loss_rate),
            fixed(s.import_requirement),
        ]],
    )
}

fn records(text: &str, expected: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>, IoError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(IoError::Invalid(format!(
            "expected CSV header {}, got {}",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            Ok((line, rec))
        })
        .collect()
}

fn csv_err(e: csv::Error) -> IoError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    IoError::Parse { line, column: 0, message: e.to_string() }
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: usize, what: &str) -> Result<T, IoError> {
    rec.get(i).and_then(|v| v.parse().ok()).ok_or_else(|| IoError::Parse {
        line,
        column: i + 1,
        message: format!("bad {what} {:?}", rec.get(i).unwrap_or("")),
    })
}

/// Reads `point_id,crop` rows with crop 0 or 1.
pub fn read_outcomes(text: &str) -> Result<BTreeMap<usize, bool>, IoError> {
    let mut out = BTreeMap::new();
    for (line, rec) in records(text, &["point_id", "crop"])? {
        let id: usize = field(&rec, 0, line, "point_id")?;
        let crop = match rec.get(1) {
            Some("0") => false,
            Some("1") => true,
            other => {
                return Err(IoError::Parse {
                    line,
                    column: 2,
                    message: format!("crop must be 0 or 1, got {:?}", other.unwrap_or("")),
                })
            }
        };
        if out.insert(id, crop).is_some() {
            return Err(IoError::Parse { line, column: 1, message: format!("duplicate point_id {id}") });
        }
    }
    Ok(out)
}

/// Reads `year,cultivable_area` rows.
pub fn read_history(text: &str) -> Result<Vec<(i32, f64)>, IoError> {
    records(text, &["year", "cultivable_area"])?
        .into_iter()
        .map(|(line, rec)| Ok((field(&rec, 0, line, "year")?, field(&rec, 1, line, "cultivable_area")?)))
        .collect()
}

/// Reads `x,y` rows as written by [`path_csv`].
pub fn read_path(text: &str) -> Result<Vec<Point2>, IoError> {
    records(text, &["x", "y"])?
        .into_iter()
        .map(|(line, rec)| Ok(Point2::new(field(&rec, 0, line, "x")?, field(&rec, 1, line, "y")?)))
        .collect()
}
