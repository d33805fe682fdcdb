//! Planar graph of a folded overlay inside its essential region, its faces
//! and its free kinks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::folded_overlays::{Colour, EssentialRegion, FoldedOverlay};
use crate::lattice_paths::Point;

/// Set of colours carried by an undirected graph edge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColourSet {
    pub blue: bool,
    pub green: bool,
}

impl ColourSet {
    pub fn single(c: Colour) -> Self {
        let mut s = Self::default();
        s.insert(c);
        s
    }

    pub fn insert(&mut self, c: Colour) {
        match c {
            Colour::Blue => self.blue = true,
            Colour::Green => self.green = true,
        }
    }

    pub fn contains(self, c: Colour) -> bool {
        match c {
            Colour::Blue => self.blue,
            Colour::Green => self.green,
        }
    }

    /// The colour if exactly one is present.
    pub fn unique(self) -> Option<Colour> {
        match (self.blue, self.green) {
            (true, false) => Some(Colour::Blue),
            (false, true) => Some(Colour::Green),
            _ => None,
        }
    }

    pub fn is_bicoloured(self) -> bool {
        self.blue && self.green
    }

    pub fn intersect(self, other: Self) -> Self {
        Self { blue: self.blue && other.blue, green: self.green && other.green }
    }
}

/// An undirected edge of the overlay graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub colours: ColourSet,
    /// Artificial edge closing the region along a boundary line.
    pub slanted: bool,
}

/// Normalized key of an undirected edge.
pub fn edge_key(a: Point, b: Point) -> (Point, Point) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Boundary lines along which loose ends are joined by artificial edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    Diagonal,
    Initial,
    Forbidden,
    Level(i64),
}

/// Merged, slant-closed planar graph of an overlay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayGraph {
    pub region: EssentialRegion,
    pub adj: BTreeMap<Point, BTreeSet<Point>>,
    pub edges: BTreeMap<(Point, Point), GraphEdge>,
}

impl OverlayGraph {
    pub fn edge(&self, a: Point, b: Point) -> Option<&GraphEdge> {
        self.edges.get(&edge_key(a, b))
    }

    pub fn degree(&self, v: Point) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    fn add(&mut self, a: Point, b: Point, e: GraphEdge) {
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        self.edges.insert(edge_key(a, b), e);
    }
}

/// Builds the planar graph of `o` inside its essential region.
pub fn build_graph(o: &FoldedOverlay) -> OverlayGraph {
    build_restricted(o, None)
}

/// The graph restricted to `y >= z`, with loose ends on the line `y = z`
/// joined by artificial edges as on the other boundary lines.
pub fn level_restricted_graph(o: &FoldedOverlay, z: i64) -> OverlayGraph {
    build_restricted(o, Some(z))
}

fn build_restricted(o: &FoldedOverlay, level: Option<i64>) -> OverlayGraph {
    let region = EssentialRegion::new(o.params);
    let inside = |p: Point| region.contains(p) && level.map_or(true, |z| p.y >= z);
    let mut g = OverlayGraph { region, adj: BTreeMap::new(), edges: BTreeMap::new() };
    let mut merged: BTreeMap<(Point, Point), ColourSet> = BTreeMap::new();
    for c in [Colour::Blue, Colour::Green] {
        for (a, b) in o.edges(c) {
            if inside(a) && inside(b) {
                merged.entry(edge_key(a, b)).or_default().insert(c);
            }
        }
    }
    for (&(a, b), &colours) in &merged {
        g.add(a, b, GraphEdge { colours, slanted: false });
    }
    let mut lines = vec![Boundary::Diagonal, Boundary::Initial, Boundary::Forbidden];
    if let Some(z) = level {
        lines.push(Boundary::Level(z));
    }
    let mut closing = Vec::new();
    for line in lines {
        let on = |p: &Point| match line {
            Boundary::Diagonal => p.x == p.y,
            Boundary::Initial => p.x + p.y == region.s0,
            Boundary::Forbidden => p.x - p.y == region.k,
            Boundary::Level(z) => p.y == z,
        };
        let vs: Vec<Point> = g.adj.keys().copied().filter(on).collect();
        for w in vs.windows(2) {
            let (a, b) = (w[0], w[1]);
            if merged.contains_key(&edge_key(a, b)) {
                continue;
            }
            let colour = match line {
                Boundary::Diagonal | Boundary::Level(_) => {
                    let blue_at_a = g.adj[&a].iter().any(|&n| merged[&edge_key(a, n)].contains(Colour::Blue));
                    if blue_at_a {
                        Colour::Blue
                    } else {
                        Colour::Green
                    }
                }
                Boundary::Initial => Colour::Green,
                Boundary::Forbidden => Colour::Blue,
            };
            closing.push((a, b, colour));
        }
    }
    for (a, b, c) in closing {
        g.add(a, b, GraphEdge { colours: ColourSet::single(c), slanted: true });
    }
    g
}

/// Cyclic angle code of the direction `u -> v`, increasing counterclockwise
/// from south-west.
fn angle(u: Point, v: Point) -> i8 {
    match ((v.x - u.x).signum(), (v.y - u.y).signum()) {
        (-1, -1) => -3,
        (0, -1) => -2,
        (1, -1) => -1,
        (1, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        (-1, 1) => 3,
        (-1, 0) => 4,
        _ => unreachable!("graph edges join distinct points"),
    }
}

/// A face boundary as a cycle of half-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<(Point, Point)>,
    /// Twice the signed area; positive for bounded faces.
    pub twice_area: i64,
}

/// All faces of the planar embedding given by lattice coordinates.
pub fn faces(g: &OverlayGraph) -> Vec<Face> {
    let order: BTreeMap<Point, Vec<Point>> = g
        .adj
        .iter()
        .map(|(&v, ns)| {
            let mut ns: Vec<Point> = ns.iter().copied().collect();
            ns.sort_by_key(|&w| angle(v, w));
            (v, ns)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (&u, ns) in &g.adj {
        for &v in ns {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut boundary = Vec::new();
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b)) {
                boundary.push((a, b));
                let around = &order[&b];
                let back = angle(b, a);
                let w = around
                    .iter()
                    .rev()
                    .find(|&&w| angle(b, w) < back)
                    .or_else(|| around.last())
                    .copied()
                    .expect("every vertex has a neighbour");
                a = b;
                b = w;
            }
            let twice_area = boundary.iter().map(|(p, q)| p.x * q.y - q.x * p.y).sum();
            out.push(Face { boundary, twice_area });
        }
    }
    out
}

/// Bounded faces only.
pub fn finite_faces(g: &OverlayGraph) -> Vec<Face> {
    faces(g).into_iter().filter(|f| f.twice_area > 0).collect()
}

/// Middle vertices of free kinks: degree-2 vertices entered by a unicoloured
/// Right step and left by an Up step of the same colour.
pub fn detect_free_kinks(g: &OverlayGraph) -> Vec<Point> {
    g.adj
        .iter()
        .filter(|(_, ns)| ns.len() == 2)
        .filter_map(|(&v, ns)| {
            let (l, u) = (Point::new(v.x - 1, v.y), Point::new(v.x, v.y + 1));
            if !ns.contains(&l) || !ns.contains(&u) {
                return None;
            }
            let (e1, e2) = (g.edge(l, v)?, g.edge(v, u)?);
            let same = !e1.slanted && !e2.slanted && e1.colours.unique().is_some() && e1.colours == e2.colours;
            same.then_some(v)
        })
        .collect()
}
