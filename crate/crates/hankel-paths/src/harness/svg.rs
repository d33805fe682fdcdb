//! Deterministic SVG 1.1 drawings of survivors, folded overlays and overlay
//! graphs.
//!
//! Elements are emitted in a fixed order (background, axes, reference lines,
//! region, strips, edges, points) and every coordinate is printed with two
//! decimals, so equal inputs give byte-identical documents.

use std::fmt::Write;

use crate::error::RenderError;
use crate::folded_overlays::{Colour, EssentialRegion, FoldedOverlay};
use crate::lattice_paths::{LatticePath, PathTuple, Point};
use crate::xi_bijection::{build_graph, decompose_strips, OverlayGraph};

const BLUE: &str = "#1f5fbf";
const GREEN: &str = "#2e9e44";
const RED: &str = "#c62828";
const GREY: &str = "#9e9e9e";
const COLUMN_FILLS: [&str; 6] = ["#ffe082", "#b3e5fc", "#f8bbd0", "#c8e6c9", "#d1c4e9", "#ffccbc"];

/// What to draw.
#[derive(Debug, Clone, Copy)]
pub enum RenderObject<'a> {
    /// A path tuple of an instance with forbidden-line offset `k`.
    Survivor { tuple: &'a PathTuple, k: i64 },
    /// A folded overlay with its essential region and strip columns.
    Overlay(&'a FoldedOverlay),
    /// The planar overlay graph, closing edges dashed.
    Graph(&'a OverlayGraph),
}

/// Drawing settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SvgOptions {
    /// Pixels per lattice unit.
    pub scale: u32,
    /// Largest accepted width or height in lattice units.
    pub max_span: i64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { scale: 40, max_span: 200 }
    }
}

struct Canvas {
    x0: i64,
    y1: i64,
    scale: f64,
    width: f64,
    height: f64,
    body: String,
}

impl Canvas {
    fn new(points: &[Point], opts: &SvgOptions) -> Result<Self, RenderError> {
        let xs = points.iter().map(|p| p.x).chain([0]);
        let ys = points.iter().map(|p| p.y).chain([0]);
        let (x0, x1) = (xs.clone().min().unwrap_or(0) - 1, xs.max().unwrap_or(0) + 1);
        let (y0, y1) = (ys.clone().min().unwrap_or(0) - 1, ys.max().unwrap_or(0) + 1);
        let span = (x1 - x0).max(y1 - y0);
        if span > opts.max_span {
            return Err(RenderError::TooLarge { span, limit: opts.max_span });
        }
        let scale = f64::from(opts.scale);
        Ok(Self {
            x0,
            y1,
            scale,
            width: (x1 - x0) as f64 * scale,
            height: (y1 - y0) as f64 * scale,
            body: String::new(),
        })
    }

    fn px(&self, x: f64) -> f64 {
        (x - self.x0 as f64) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        (self.y1 as f64 - y) * self.scale
    }

    fn coords(&self, pts: &[(f64, f64)]) -> String {
        pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect::<Vec<_>>().join(" ")
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, dashed: bool) {
        let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        let (ax, ay, bx, by) = (self.px(a.0), self.py(a.1), self.px(b.0), self.py(b.1));
        writeln!(
            self.body,
            "  <line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"{stroke}\" stroke-width=\"{width:.2}\"{dash}/>"
        )
        .expect("writing to a string");
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        let c = self.coords(pts);
        writeln!(
            self.body,
            "  <polyline points=\"{c}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width:.2}\"/>"
        )
        .expect("writing to a string");
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, opacity: f64) {
        let c = self.coords(pts);
        writeln!(
            self.body,
            "  <polygon points=\"{c}\" fill=\"{fill}\" fill-opacity=\"{opacity:.2}\" stroke=\"none\"/>"
        )
        .expect("writing to a string");
    }

    fn dot(&mut self, p: Point, fill: &str) {
        let (cx, cy) = (self.px(p.x as f64), self.py(p.y as f64));
        writeln!(self.body, "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3.00\" fill=\"{fill}\"/>")
            .expect("writing to a string");
    }

    /// Axes, the diagonal and (when given) the dashed forbidden line.
    fn reference_lines(&mut self, k: Option<i64>) {
        let (lo, hi) = (self.x0 as f64, self.x0 as f64 + self.width / self.scale);
        let (bottom, top) = (self.y1 as f64 - self.height / self.scale, self.y1 as f64);
        self.line((lo, 0.0), (hi, 0.0), GREY, 1.0, false);
        self.line((0.0, bottom), (0.0, top), GREY, 1.0, false);
        let clip = |c: f64| -> Option<((f64, f64), (f64, f64))> {
            let a = lo.max(bottom + c);
            let b = hi.min(top + c);
            (a < b).then_some(((a, a - c), (b, b - c)))
        };
        if let Some((a, b)) = clip(0.0) {
            self.line(a, b, GREY, 1.0, false);
        }
        if let Some((a, b)) = k.and_then(|k| clip(k as f64)) {
            self.line(a, b, RED, 1.5, true);
        }
    }

    fn path(&mut self, p: &LatticePath, stroke: &str, offset: f64) {
        let pts: Vec<(f64, f64)> = p.points().map(|q| (q.x as f64 + offset, q.y as f64 + offset)).collect();
        if pts.len() > 1 {
            self.polyline(&pts, stroke, 2.5);
        }
    }

    fn finish(self) -> String {
        let (w, h) = (self.width, self.height);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             \x20 <rect x=\"0\" y=\"0\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn region_corners(r: &EssentialRegion) -> Vec<(f64, f64)> {
    let (k, s0, xm) = (r.k as f64, r.s0 as f64, r.x_max as f64);
    if xm < s0 / 2.0 {
        return Vec::new();
    }
    let low = ((s0 + k) / 2.0).min(xm);
    vec![(s0 / 2.0, s0 / 2.0), (low, s0 - low), (xm, (xm - k).max(s0 - xm)), (xm, xm)]
}

fn overlay_points(o: &FoldedOverlay) -> Vec<Point> {
    o.blue.iter().chain(&o.green).flat_map(LatticePath::points).collect()
}

/// Renders `obj` as a standalone SVG 1.1 document.
pub fn render_svg(obj: RenderObject<'_>, opts: &SvgOptions) -> Result<String, RenderError> {
    match obj {
        RenderObject::Survivor { tuple, k } => {
            let pts: Vec<Point> = tuple.paths.iter().flat_map(LatticePath::points).collect();
            let mut c = Canvas::new(&pts, opts)?;
            c.reference_lines(Some(k));
            for p in &tuple.paths {
                c.path(p, "black", 0.0);
            }
            for p in &tuple.paths {
                c.dot(p.start, BLUE);
                c.dot(p.end(), RED);
            }
            Ok(c.finish())
        }
        RenderObject::Overlay(o) => {
            let region = EssentialRegion::new(o.params);
            let mut pts = overlay_points(o);
            pts.push(Point::new(region.x_max, region.x_max));
            let mut c = Canvas::new(&pts, opts)?;
            c.reference_lines(Some(region.k));
            let corners = region_corners(&region);
            if !corners.is_empty() {
                c.polygon(&corners, "#eeeeee", 1.0);
            }
            if let Ok(dec) = decompose_strips(&build_graph(o)) {
                for (ci, col) in dec.columns.iter().enumerate() {
                    let fill = COLUMN_FILLS[ci % COLUMN_FILLS.len()];
                    for &si in col {
                        let s = &dec.strips[si];
                        let (l, r) = (s.left_x as f64, s.right_x as f64);
                        let quad =
                            [(l, s.left.0 as f64), (r, s.right.0 as f64), (r, s.right.1 as f64), (l, s.left.1 as f64)];
                        c.polygon(&quad, fill, 0.8);
                    }
                }
            }
            for p in &o.blue {
                c.path(p, BLUE, 0.0);
            }
            for p in &o.green {
                c.path(p, GREEN, 0.06);
            }
            for (p, colour) in o.terminal_colours() {
                c.dot(p, if colour == Colour::Blue { BLUE } else { GREEN });
            }
            Ok(c.finish())
        }
        RenderObject::Graph(g) => {
            let pts: Vec<Point> = g.adj.keys().copied().collect();
            let mut c = Canvas::new(&pts, opts)?;
            c.reference_lines(Some(g.region.k));
            for (&(a, b), e) in &g.edges {
                let stroke = match (e.colours.blue, e.colours.green) {
                    (true, true) => "#00838f",
                    (true, false) => BLUE,
                    (false, true) => GREEN,
                    (false, false) => GREY,
                };
                c.line((a.x as f64, a.y as f64), (b.x as f64, b.y as f64), stroke, 2.0, e.slanted);
            }
            for &p in g.adj.keys() {
                c.dot(p, "black");
            }
            Ok(c.finish())
        }
    }
}
