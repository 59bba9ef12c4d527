//! Deterministic SVG 1.1 output. World coordinates are written with six
//! fractional digits and the y axis points up.

use std::fmt::Write as _;
use std::path::Path;

use crate::conic::Conic;
use crate::error::{Error, Result};
use crate::geom::{GeneralizedCircle, Line, Point};

/// Samples per conic branch.
pub const CONIC_SAMPLES: usize = 256;

/// Axis-aligned world rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

impl ViewBox {
    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && height > 0.0)
            || ![min_x, min_y, width, height].iter().all(|v| v.is_finite())
        {
            return Err(Error::InvalidParameter(
                "view box needs a positive finite size".into(),
            ));
        }
        Ok(Self {
            min_x,
            min_y,
            width,
            height,
        })
    }

    /// Smallest box holding every point, padded by `margin` of its size.
    pub fn around(points: &[Point], margin: f64) -> Option<Self> {
        let first = points.iter().find(|p| p.is_finite())?;
        let (mut lo, mut hi) = (*first, *first);
        for p in points.iter().filter(|p| p.is_finite()) {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let size = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let pad = size * margin;
        Some(Self {
            min_x: lo.x - pad,
            min_y: lo.y - pad,
            width: hi.x - lo.x + 2.0 * pad,
            height: hi.y - lo.y + 2.0 * pad,
        })
    }

    fn max_x(&self) -> f64 {
        self.min_x + self.width
    }

    fn max_y(&self) -> f64 {
        self.min_y + self.height
    }

    /// Segment of `line` inside the box (Liang–Barsky), if any.
    pub fn clip(&self, line: &Line) -> Option<(Point, Point)> {
        let (p, d) = (line.point, line.direction);
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for (delta, lo, hi) in [
            (d.x, self.min_x - p.x, self.max_x() - p.x),
            (d.y, self.min_y - p.y, self.max_y() - p.y),
        ] {
            if delta.abs() < 1e-300 {
                if lo > 0.0 || hi < 0.0 {
                    return None;
                }
                continue;
            }
            let (a, b) = (lo / delta, hi / delta);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 < t1).then(|| (p + d * t0, p + d * t1))
    }
}

/// Fixed six-digit decimal, never `-0.000000`.
pub fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Builds an SVG document element by element.
#[derive(Debug, Clone)]
pub struct SvgWriter {
    view: ViewBox,
    width_px: u32,
    stroke: f64,
    body: String,
    open_groups: usize,
}

impl SvgWriter {
    /// `stroke_px` is the stroke width in pixels of the output image.
    pub fn new(view: ViewBox, width_px: u32, stroke_px: f64) -> Result<Self> {
        if width_px == 0 {
            return Err(Error::InvalidParameter(
                "image width must be positive".into(),
            ));
        }
        let mut w = Self {
            view,
            width_px,
            stroke: 0.0,
            body: String::new(),
            open_groups: 0,
        };
        w.stroke = stroke_px * w.px();
        Ok(w)
    }

    /// One output pixel in world units.
    pub fn px(&self) -> f64 {
        self.view.width / self.width_px as f64
    }

    fn height_px(&self) -> u32 {
        ((self.width_px as f64) * self.view.height / self.view.width)
            .round()
            .max(1.0) as u32
    }

    fn xy(p: Point) -> (String, String) {
        (num(p.x), num(-p.y))
    }

    pub fn begin_group(&mut self, id: &str, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<g id="{id}" fill="none" stroke="{color}" stroke-width="{}">"#,
            num(self.stroke)
        );
        self.open_groups += 1;
    }

    pub fn end_group(&mut self) {
        if self.open_groups > 0 {
            self.body.push_str("</g>\n");
            self.open_groups -= 1;
        }
    }

    /// A circle element, or the visible segment of a line.
    pub fn gcircle(&mut self, c: &GeneralizedCircle) {
        match *c {
            GeneralizedCircle::Circle { center, radius } => {
                let (x, y) = Self::xy(center);
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="{x}" cy="{y}" r="{}"/>"#,
                    num(radius)
                );
            }
            GeneralizedCircle::Line { normal, offset } => {
                if let Ok(line) = Line::new(normal * offset, normal.perp()) {
                    self.line(&line);
                }
            }
        }
    }

    pub fn line(&mut self, line: &Line) {
        if let Some((a, b)) = self.view.clip(line) {
            let ((x1, y1), (x2, y2)) = (Self::xy(a), Self::xy(b));
            let _ = writeln!(
                self.body,
                r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
            );
        }
    }

    pub fn polyline(&mut self, pts: &[Point]) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .filter(|p| p.is_finite())
            .map(|&p| {
                let (x, y) = Self::xy(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(self.body, r#"<polyline points="{}"/>"#, coords.join(" "));
    }

    /// Every branch of `conic`, [`CONIC_SAMPLES`] points each.
    pub fn conic(&mut self, conic: &Conic) {
        let extent = self.view.width.max(self.view.height);
        for branch in conic.sample_branches(CONIC_SAMPLES, extent) {
            self.polyline(&branch);
        }
    }

    /// A filled dot two pixels across.
    pub fn dot(&mut self, p: Point, color: &str) {
        let (x, y) = Self::xy(p);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x}" cy="{y}" r="{}" fill="{color}" stroke="none"/>"#,
            num(self.px())
        );
    }

    pub fn finish(mut self) -> String {
        while self.open_groups > 0 {
            self.end_group();
        }
        let v = self.view;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
            self.width_px,
            self.height_px(),
            num(v.min_x),
            num(-v.max_y()),
            num(v.width),
            num(v.height)
        );
        let _ = writeln!(
            out,
            r##"<rect id="frame" x="{}" y="{}" width="{}" height="{}" fill="#ffffff" stroke="#000000" stroke-width="{}"/>"##,
            num(v.min_x),
            num(-v.max_y()),
            num(v.width),
            num(v.height),
            num(self.stroke)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Writes `svg` to `path`.
pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::UnwritablePath(format!("{}: {e}", path.display())))
}
