//! Static SVG rendering. Output depends only on the scene, so the same
//! inputs always produce the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use super::IoError;
use crate::geometry::{Bounded, Box2, Point2, Polygon2, Polyline2};
use crate::stratification::Level;

pub const WIDTH: f64 = 800.0;
pub const MARGIN: f64 = 20.0;

#[derive(Debug, Clone, Default)]
pub struct Scene {
    /// `(css class, polygon)`, drawn in order.
    pub polygons: Vec<(String, Polygon2)>,
    pub polylines: Vec<(String, Polyline2)>,
    pub strata: Vec<(Level, Box2)>,
    pub path: Option<Vec<Point2>>,
    /// Area to show; defaults to the bounding box of the content.
    pub extent: Option<Box2>,
}

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty() && self.polylines.is_empty() && self.strata.is_empty() && self.path.is_none()
    }

    fn content_box(&self) -> Option<Box2> {
        let boxes = self
            .polygons
            .iter()
            .map(|(_, p)| p.bbox())
            .chain(self.polylines.iter().map(|(_, l)| l.bbox()))
            .chain(self.strata.iter().map(|(_, b)| *b))
            .chain(self.path.iter().filter_map(Box2::from_points));
        boxes.reduce(|a, b| a.union(&b))
    }
}

/// Maps data coordinates to SVG pixels: uniform scale, y up, fixed margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub extent: Box2,
    pub scale: f64,
    pub height: f64,
}

impl Viewport {
    pub fn new(extent: Box2) -> Self {
        let span = extent.width().max(extent.height()).max(f64::MIN_POSITIVE);
        let scale =
            if extent.width() > 0.0 { (WIDTH - 2.0 * MARGIN) / extent.width() } else { (WIDTH - 2.0 * MARGIN) / span };
        let height = (extent.height() * scale + 2.0 * MARGIN).ceil();
        Viewport { extent, scale, height }
    }

    pub fn to_screen(&self, p: Point2) -> (f64, f64) {
        (MARGIN + (p.x - self.extent.min.x) * self.scale, MARGIN + (self.extent.max.y - p.y) * self.scale)
    }

    pub fn to_world(&self, sx: f64, sy: f64) -> Point2 {
        Point2::new(self.extent.min.x + (sx - MARGIN) / self.scale, self.extent.max.y - (sy - MARGIN) / self.scale)
    }
}

fn level_color(level: Level) -> &'static str {
    match level {
        Level::High => "#1a9850",
        Level::Medium => "#fee08b",
        Level::Low => "#d73027",
    }
}

fn coords(vp: &Viewport, pts: &[Point2]) -> String {
    let mut s = String::new();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = vp.to_screen(p);
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(scene: &Scene) -> Result<String, IoError> {
    if scene.is_empty() {
        return Err(IoError::Invalid("nothing to render".into()));
    }
    let extent = scene.extent.or_else(|| scene.content_box()).expect("nonempty scene has a box");
    let vp = Viewport::new(extent);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{h}" viewBox="0 0 {WIDTH} {h}">"#,
        h = vp.height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    for (level, b) in &scene.strata {
        let (x, y) = vp.to_screen(Point2::new(b.min.x, b.max.y));
        let _ = writeln!(
            out,
            r#"<rect class="stratum {cls}" x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="{c}" fill-opacity="0.6" stroke="none"/>"#,
            cls = level.as_str().to_lowercase(),
            w = b.width() * vp.scale,
            h = b.height() * vp.scale,
            c = level_color(*level),
        );
    }
    for (class, poly) in &scene.polygons {
        let mut d = String::new();
        for ring in poly.rings() {
            let _ = write!(
                d,
                "{}M {} Z",
                if d.is_empty() { "" } else { " " },
                coords(&vp, ring.vertices()).replace(' ', " L ")
            );
        }
        let _ = writeln!(
            out,
            r##"<path class="{}" d="{d}" fill="#9ecae1" fill-opacity="0.4" fill-rule="evenodd" stroke="#08519c" stroke-width="1"/>"##,
            escape(class)
        );
    }
    for (class, line) in &scene.polylines {
        let _ = writeln!(
            out,
            r##"<polyline class="{}" points="{}" fill="none" stroke="#636363" stroke-width="2"/>"##,
            escape(class),
            coords(&vp, line.vertices())
        );
    }
    if let Some(path) = &scene.path {
        let _ = writeln!(
            out,
            r##"<polyline class="ccm-path" points="{}" fill="none" stroke="#e31a1c" stroke-width="3"/>"##,
            coords(&vp, path)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg(scene: &Scene, path: impl AsRef<Path>) -> Result<(), IoError> {
    let svg = render_svg(scene)?;
    std::fs::write(path.as_ref(), svg).map_err(|e| IoError::io(path.as_ref(), e))
}

/// Parses the `points` attribute of the `ccm-path` element back to screen
/// coordinates.
pub fn path_points(svg: &str) -> Option<Vec<(f64, f64)>> {
    let line = svg.lines().find(|l| l.contains("class=\"ccm-path\""))?;
    let start = line.find("points=\"")? + 8;
    let end = start + line[start..].find('"')?;
    line[start..end]
        .split(' ')
        .map(|pair| {
            let (x, y) = pair.split_once(',')?;
            Some((x.parse().ok()?, y.parse().ok()?))
        })
        .collect()
}
