//! Vertical strips, columns and rows of the overlay graph.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::graph::{finite_faces, ColourSet, Face, OverlayGraph};
use crate::error::XiError;
use crate::folded_overlays::Colour;
use crate::lattice_paths::Point;

/// Type of a strip: colour of its left side, then of its right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StripType {
    pub left: Colour,
    pub right: Colour,
}

impl StripType {
    pub const BG: StripType = StripType { left: Colour::Blue, right: Colour::Green };
    pub const GB: StripType = StripType { left: Colour::Green, right: Colour::Blue };
}

impl fmt::Display for StripType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = |c: Colour| match c {
            Colour::Blue => "B",
            Colour::Green => "G",
        };
        write!(f, "{}{}", l(self.left), l(self.right))
    }
}

/// A finite face bounded by one bottom edge, a vertical right side, one top
/// edge and a vertical left side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalStrip {
    pub strip_type: StripType,
    /// Abscissa of the left side.
    pub left_x: i64,
    /// Abscissa of the right side.
    pub right_x: i64,
    /// Closed `y` interval of the left side.
    pub left: (i64, i64),
    /// Closed `y` interval of the right side.
    pub right: (i64, i64),
    /// Bottom closing edge, left to right.
    pub bottom: (Point, Point),
    /// Top closing edge, right to left.
    pub top: (Point, Point),
}

fn is_black((a, b): (Point, Point)) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    dx > 0 || (dx == 0 && dy > 0)
}

fn is_vertical((a, b): (Point, Point)) -> bool {
    a.x == b.x
}

fn interval(side: &[(Point, Point)], fallback: i64) -> (i64, i64) {
    let ys = side.iter().flat_map(|(a, b)| [a.y, b.y]);
    match (ys.clone().min(), ys.max()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => (fallback, fallback),
    }
}

/// Classifies a finite face as a vertical strip, or explains why it is not one.
pub fn strip_of_face(g: &OverlayGraph, face: &Face) -> Result<VerticalStrip, XiError> {
    let f = &face.boundary;
    let n = f.len();
    let fail = |why: &str| XiError::NonStripFace(format!("{why}: {:?}", f.iter().map(|e| e.0).collect::<Vec<_>>()));
    let black: Vec<bool> = f.iter().map(|&e| is_black(e)).collect();
    let changes = (0..n).filter(|&i| black[i] != black[(i + n - 1) % n]).count();
    if changes != 2 {
        return Err(fail("boundary does not split into one black and one red segment"));
    }
    let i0 = (0..n).find(|&i| black[i] && !black[(i + n - 1) % n]).expect("two colour changes");
    let rotated: Vec<(Point, Point)> = f[i0..].iter().chain(&f[..i0]).copied().collect();
    let (blk, red): (Vec<_>, Vec<_>) = rotated.into_iter().partition(|&e| is_black(e));
    let nonvert = |s: &[(Point, Point)]| s.iter().filter(|&&e| !is_vertical(e)).count();
    if nonvert(&blk) != 1 || nonvert(&red) != 1 {
        return Err(fail("a side contains more than one horizontal or slanted step"));
    }
    if is_vertical(blk[0]) || is_vertical(red[0]) {
        return Err(fail("closing edge is not at the end of its segment"));
    }
    let (bottom, right) = (blk[0], &blk[1..]);
    let (top, left) = (red[0], &red[1..]);
    let info = |e: (Point, Point)| *g.edge(e.0, e.1).expect("face edges belong to the graph");
    let (eb, et) = (info(bottom), info(top));
    let common = |side: &[(Point, Point)]| -> Option<Colour> {
        side.iter().map(|&e| info(e).colours).reduce(ColourSet::intersect).and_then(ColourSet::unique)
    };
    let plain = |e: super::graph::GraphEdge| if e.slanted { None } else { e.colours.unique() };
    let left_colour = common(left)
        .or_else(|| plain(eb).map(Colour::other))
        .or_else(|| plain(et))
        .ok_or_else(|| fail("left side colour undetermined"))?;
    let right_colour = common(right)
        .or_else(|| plain(et).map(Colour::other))
        .or_else(|| plain(eb))
        .ok_or_else(|| fail("right side colour undetermined"))?;
    if let (Some(&last), false) = (right.last(), et.slanted) {
        if info(last).colours == et.colours {
            return Err(fail("top edge has the colour of the right side's last edge"));
        }
    }
    if let (Some(&last), false) = (left.last(), eb.slanted) {
        if info(last).colours == eb.colours {
            return Err(fail("bottom edge has the colour of the left side's last edge"));
        }
    }
    Ok(VerticalStrip {
        strip_type: StripType { left: left_colour, right: right_colour },
        left_x: bottom.0.x,
        right_x: bottom.1.x,
        left: interval(left, bottom.0.y),
        right: interval(right, top.0.y),
        bottom,
        top,
    })
}

/// How two horizontally adjacent strips meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adjacency {
    /// The shared side has one colour on both faces.
    Ascending,
    /// The shared side carries different colours on the two faces and the
    /// right strip does not lie entirely above the left one.
    Descending,
}

/// Strips with their column and row grouping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripDecomposition {
    pub strips: Vec<VerticalStrip>,
    /// Adjacent pairs `(left strip, right strip, kind)` sharing a side segment
    /// of positive length.
    pub adjacencies: Vec<(usize, usize, Adjacency)>,
    /// Maximal descending chains, each sorted left to right.
    pub columns: Vec<Vec<usize>>,
    /// Column indices in left-to-right order.
    pub row: Vec<usize>,
}

impl StripDecomposition {
    /// Type of each column (the type of its first strip).
    pub fn column_types(&self) -> Vec<StripType> {
        self.columns.iter().map(|c| self.strips[c[0]].strip_type).collect()
    }

    fn column_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.strips.len()];
        for (ci, col) in self.columns.iter().enumerate() {
            for &s in col {
                of[s] = ci;
            }
        }
        of
    }

    /// Columns whose strips do not all share one type.
    pub fn mixed_columns(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&ci| {
                let t = self.strips[self.columns[ci][0]].strip_type;
                self.columns[ci].iter().any(|&s| self.strips[s].strip_type != t)
            })
            .collect()
    }

    /// Ascending adjacencies leaving a GB strip into a strip that is not BG.
    pub fn gb_violations(&self) -> Vec<(usize, usize)> {
        self.adjacencies
            .iter()
            .filter(|&&(a, b, kind)| {
                kind == Adjacency::Ascending
                    && self.strips[a].strip_type == StripType::GB
                    && self.strips[b].strip_type != StripType::BG
            })
            .map(|&(a, b, _)| (a, b))
            .collect()
    }

    /// Pairs of columns joined by an ascending adjacency, as `(left, right)`.
    pub fn ascending_column_pairs(&self) -> Vec<(usize, usize)> {
        let of = self.column_of();
        let mut v: Vec<(usize, usize)> =
            self.adjacencies.iter().filter(|a| a.2 == Adjacency::Ascending).map(|&(a, b, _)| (of[a], of[b])).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn side_len(iv: (i64, i64)) -> i64 {
    iv.1 - iv.0
}

/// Splits every finite face into a vertical strip and groups the strips.
///
/// Fails with [`XiError::NonStripFace`] on the first face that is not a strip.
pub fn decompose_strips(g: &OverlayGraph) -> Result<StripDecomposition, XiError> {
    let mut strips = finite_faces(g).iter().map(|f| strip_of_face(g, f)).collect::<Result<Vec<_>, _>>()?;
    strips.sort_by_key(|s| (s.left_x, std::cmp::Reverse(s.left.1), s.bottom));
    let mut adjacencies = Vec::new();
    for (i, a) in strips.iter().enumerate() {
        for (j, b) in strips.iter().enumerate() {
            if b.left_x != a.right_x || side_len(a.right) == 0 || side_len(b.left) == 0 {
                continue;
            }
            let lo = a.right.0.max(b.left.0);
            let hi = a.right.1.min(b.left.1);
            if lo > hi {
                continue;
            }
            let kind = if a.strip_type.right == b.strip_type.left {
                Adjacency::Ascending
            } else if b.left.0 < a.right.1 {
                Adjacency::Descending
            } else {
                // Different colours meeting only where the right strip lies
                // entirely above the left one: a corner contact, not a link.
                continue;
            };
            adjacencies.push((i, j, kind));
        }
    }
    // Columns are the connected components of the descending relation.
    let mut parent: Vec<usize> = (0..strips.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for &(a, b, kind) in &adjacencies {
        if kind == Adjacency::Descending {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in 0..strips.len() {
        let r = find(&mut parent, s);
        groups.entry(r).or_default().push(s);
    }
    let mut columns: Vec<Vec<usize>> = groups.into_values().collect();
    columns.sort_by_key(|c| c[0]);
    let row = (0..columns.len()).collect();
    Ok(StripDecomposition { strips, adjacencies, columns, row })
}
