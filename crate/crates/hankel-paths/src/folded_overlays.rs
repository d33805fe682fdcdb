//! Folded overlays of lhs survivors, essential regions, bicoloured
//! connections and the sign-reversing involution `psi`.
//!
//! Folding keeps the free part of every path that starts below the diagonal
//! (blue) and reflects the part of every path above the diagonal into the
//! half-plane `y <= x` (green). Paths of the two-faced block are forced and
//! carry no information, so they are dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::OverlayError;
use crate::exact_arith::IdentityParams;
use crate::lattice_paths::{initial_point, survivors, terminal_point, Budget, LatticePath, PathTuple, Point, Step};
use crate::Code01;

/// Edge colour in an overlay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Blue,
    Green,
}

impl Colour {
    pub fn other(self) -> Self {
        match self {
            Colour::Blue => Colour::Green,
            Colour::Green => Colour::Blue,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Blue => "blue",
            Colour::Green => "green",
        })
    }
}

/// A directed unit edge `from -> to`.
pub type Edge = (Point, Point);

/// Fixed points of the lhs geometry used by folding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldGeometry {
    pub params: IdentityParams,
    /// Convolution order `K`.
    pub k: i64,
    /// Index shift `M`.
    pub m: i64,
    /// Matrix size `N`.
    pub n: usize,
    /// Enforced points of the below-diagonal paths, the blue initial points.
    pub blue_starts: Vec<Point>,
    /// Diagonal points where the above-diagonal paths leave `y = x`, the green initial points.
    pub green_starts: Vec<Point>,
    /// Path index of the first two-faced path.
    pub first_two_faced: usize,
    /// Path index of the first above-diagonal path.
    pub first_green: usize,
    /// Terminal points not occupied by the two-faced block, ascending.
    pub free_terminals: Vec<Point>,
}

impl FoldGeometry {
    pub fn new(params: IdentityParams) -> Self {
        let dims = params.lhs().dims();
        let (k, m) = (i64::from(params.k), i64::from(params.m));
        let ev = params.ev();
        let blue_starts = (0..params.k as i64 - 1).map(|i| Point::new(-dims.m - i, -dims.m - dims.k + 2 + i)).collect();
        let green_starts = (0..i64::from(params.n)).map(|j| Point::new(-1 - j, -1 - j)).collect();
        let first_two_faced = (k - 1) as usize;
        let first_green = (k - 1 + m + ev) as usize;
        let free_terminals = ((m + ev) as usize..dims.n).map(terminal_point).collect();
        Self {
            params,
            k: dims.k,
            m: dims.m,
            n: dims.n,
            blue_starts,
            green_starts,
            first_two_faced,
            first_green,
            free_terminals,
        }
    }
}

/// Two-coloured overlay of a folded lhs tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoldedOverlay {
    pub params: IdentityParams,
    /// Free parts of the below-diagonal paths, in path order.
    pub blue: Vec<LatticePath>,
    /// Reflected above-diagonal paths, in path order.
    pub green: Vec<LatticePath>,
}

fn edges_of(p: &LatticePath) -> impl Iterator<Item = Edge> + '_ {
    let pts: Vec<Point> = p.point_vec();
    (0..pts.len().saturating_sub(1)).map(move |t| (pts[t], pts[t + 1]))
}

impl FoldedOverlay {
    pub fn geometry(&self) -> FoldGeometry {
        FoldGeometry::new(self.params)
    }

    /// Paths of the given colour.
    pub fn paths(&self, c: Colour) -> &[LatticePath] {
        match c {
            Colour::Blue => &self.blue,
            Colour::Green => &self.green,
        }
    }

    /// Directed edges of one colour.
    pub fn edges(&self, c: Colour) -> BTreeSet<Edge> {
        self.paths(c).iter().flat_map(edges_of).collect()
    }

    /// Edge-colour multiset: each directed edge with the set of colours using it.
    pub fn edge_colours(&self) -> BTreeMap<Edge, BTreeSet<Colour>> {
        let mut out: BTreeMap<Edge, BTreeSet<Colour>> = BTreeMap::new();
        for c in [Colour::Blue, Colour::Green] {
            for e in self.edges(c) {
                out.entry(e).or_default().insert(c);
            }
        }
        out
    }

    /// Points on both a blue and a green path.
    pub fn bicoloured_points(&self) -> BTreeSet<Point> {
        let blue: HashSet<Point> = self.blue.iter().flat_map(LatticePath::points).collect();
        self.green.iter().flat_map(LatticePath::points).filter(|p| blue.contains(p)).collect()
    }

    /// Terminal points with the colour of the path ending there, ascending.
    pub fn terminal_colours(&self) -> Vec<(Point, Colour)> {
        let mut t: Vec<(Point, Colour)> = self
            .blue
            .iter()
            .map(|p| (p.end(), Colour::Blue))
            .chain(self.green.iter().map(|p| (p.end(), Colour::Green)))
            .collect();
        t.sort();
        t
    }

    /// Lhs 01-code over the free terminals: bit 1 iff the terminal is green.
    pub fn code(&self) -> Code01 {
        Code01::new(self.terminal_colours().into_iter().map(|(_, c)| c == Colour::Green).collect())
    }

    /// Sign of the unfolded permutation.
    pub fn sign(&self) -> Result<i32, OverlayError> {
        Ok(unfold(self)?.sign())
    }
}

/// Folds an lhs survivor into an overlay.
pub fn fold(s: &PathTuple, params: IdentityParams) -> Result<FoldedOverlay, OverlayError> {
    let g = FoldGeometry::new(params);
    let dims = params.lhs().dims();
    if !s.is_consistent(dims) || !s.is_nonintersecting() {
        return Err(OverlayError::BadInput(format!("tuple is not a survivor of {}", params.lhs())));
    }
    let mut blue = Vec::with_capacity(g.blue_starts.len());
    let mut green = Vec::with_capacity(g.green_starts.len());
    for (i, path) in s.paths.iter().enumerate() {
        let pts = path.point_vec();
        if i < g.first_two_faced {
            let e = g.blue_starts[i];
            let at = pts
                .iter()
                .position(|&q| q == e)
                .ok_or_else(|| OverlayError::BadInput(format!("path {i} misses its enforced point {e}")))?;
            blue.push(LatticePath::new(e, path.steps[at..].to_vec()));
        } else if i < g.first_green {
            if path.steps.iter().any(|&st| st != Step::Up) {
                return Err(OverlayError::BadInput(format!("two-faced path {i} is not vertical")));
            }
        } else {
            let d = g.green_starts[i - g.first_green];
            let at = pts
                .iter()
                .position(|q| q.y > q.x)
                .ok_or_else(|| OverlayError::BadInput(format!("path {i} never rises above the diagonal")))?;
            if at == 0 || pts[at - 1] != d {
                return Err(OverlayError::BadInput(format!("path {i} leaves the diagonal away from {d}")));
            }
            green.push(LatticePath::new(d, path.steps[at - 1..].iter().map(|st| st.reflect()).collect()));
        }
    }
    Ok(FoldedOverlay { params, blue, green })
}

fn vertical(from: Point, to: Point) -> Result<Vec<Step>, OverlayError> {
    if from.x != to.x || to.y < from.y {
        return Err(OverlayError::Rebuild(format!("no vertical run from {from} to {to}")));
    }
    Ok(vec![Step::Up; (to.y - from.y) as usize])
}

/// Inverse of [`fold`].
pub fn unfold(o: &FoldedOverlay) -> Result<PathTuple, OverlayError> {
    let g = o.geometry();
    if o.blue.len() != g.blue_starts.len() || o.green.len() != g.green_starts.len() {
        return Err(OverlayError::Rebuild("wrong number of blue or green paths".into()));
    }
    let mut paths = Vec::with_capacity(g.n);
    for i in 0..g.n {
        let a = initial_point(i, g.k, g.m);
        let path = if i < g.first_two_faced {
            let b = &o.blue[i];
            let mut steps = vertical(a, b.start)?;
            steps.extend(&b.steps);
            LatticePath::new(a, steps)
        } else if i < g.first_green {
            LatticePath::new(a, vertical(a, Point::new(a.x, a.x))?)
        } else {
            let gp = &o.green[i - g.first_green];
            let mut steps = vertical(a, gp.start)?;
            steps.extend(gp.steps.iter().map(|st| st.reflect()));
            LatticePath::new(a, steps)
        };
        paths.push(path);
    }
    let perm = paths
        .iter()
        .map(|p| {
            let e = p.end();
            if e.on_diagonal() && e.x >= 0 && (e.x as usize) < g.n {
                Ok(e.x as usize)
            } else {
                Err(OverlayError::Rebuild(format!("path ends off the terminal points at {e}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PathTuple::new(perm, paths))
}

/// Reflects a rhs survivor in the diagonal; the forbidden line becomes `y = x + K`.
pub fn reflect_rhs(s: &PathTuple, params: IdentityParams) -> Result<PathTuple, OverlayError> {
    let dims = params.rhs().dims();
    if !s.is_consistent(dims) || !s.is_nonintersecting() {
        return Err(OverlayError::BadInput(format!("tuple is not a survivor of {}", params.rhs())));
    }
    Ok(s.reflect())
}

/// Inverse of [`reflect_rhs`].
pub fn unreflect_rhs(s: &PathTuple) -> PathTuple {
    s.reflect()
}

/// The trapezoid containing every bicoloured intersection of a folded overlay:
/// between the diagonal and the forbidden line, on or above the line through
/// the blue initial points, and left of the last terminal point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialRegion {
    /// Forbidden line is `x - y = k`.
    pub k: i64,
    /// Blue-initial line is `x + y = s0`.
    pub s0: i64,
    /// Right boundary `x = x_max`.
    pub x_max: i64,
}

impl EssentialRegion {
    pub fn new(params: IdentityParams) -> Self {
        let dims = params.lhs().dims();
        Self { k: dims.k, s0: 2 * i64::from(params.m) - params.parity.odd_bit(), x_max: dims.n as i64 - 1 }
    }

    pub fn contains(&self, p: Point) -> bool {
        let (s, d) = (p.x + p.y, p.x - p.y);
        s >= self.s0 && (0..=self.k).contains(&d) && p.x <= self.x_max
    }

    pub fn on_diagonal(&self, p: Point) -> bool {
        p.x == p.y
    }

    pub fn on_initial_line(&self, p: Point) -> bool {
        p.x + p.y == self.s0
    }

    pub fn on_forbidden_line(&self, p: Point) -> bool {
        p.x - p.y == self.k
    }
}

/// Direction in which a connection traverses an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Normal,
    Reversed,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::Normal => Direction::Reversed,
            Direction::Reversed => Direction::Normal,
        }
    }
}

/// One traversed edge of a bicoloured connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConnectionStep {
    pub edge: Edge,
    pub colour: Colour,
    pub direction: Direction,
}

/// Walk through an overlay that swaps colour and direction at every
/// bicoloured point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicolouredConnection {
    pub start: Point,
    pub end: Point,
    pub start_colour: Colour,
    pub steps: Vec<ConnectionStep>,
}

/// Adjacency maps of an overlay used by connection walks.
struct Walker {
    into: HashMap<(Colour, Point), Point>,
    out_of: HashMap<(Colour, Point), Point>,
    bicoloured: BTreeSet<Point>,
}

impl Walker {
    fn new(o: &FoldedOverlay) -> Self {
        let mut into = HashMap::new();
        let mut out_of = HashMap::new();
        for c in [Colour::Blue, Colour::Green] {
            for (a, b) in o.edges(c) {
                into.insert((c, b), a);
                out_of.insert((c, a), b);
            }
        }
        Self { into, out_of, bicoloured: o.bicoloured_points() }
    }

    fn trace(&self, start: Point) -> Result<BicolouredConnection, OverlayError> {
        let start_colour = if self.into.contains_key(&(Colour::Blue, start)) {
            Colour::Blue
        } else if self.into.contains_key(&(Colour::Green, start)) {
            Colour::Green
        } else {
            return Err(OverlayError::BadInput(format!("no path ends at {start}")));
        };
        let (mut colour, mut dir, mut p) = (start_colour, Direction::Reversed, start);
        let mut steps = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let next = match dir {
                Direction::Reversed => self.into.get(&(colour, p)).map(|&q| ((q, p), q)),
                Direction::Normal => self.out_of.get(&(colour, p)).map(|&q| ((p, q), q)),
            };
            let Some((edge, q)) = next else { break };
            if !seen.insert((edge, colour, dir)) {
                return Err(OverlayError::Cycle { start });
            }
            steps.push(ConnectionStep { edge, colour, direction: dir });
            p = q;
            if self.bicoloured.contains(&q) {
                colour = colour.other();
                dir = dir.flip();
            }
        }
        Ok(BicolouredConnection { start, end: p, start_colour, steps })
    }
}

/// Traces the bicoloured connection starting at terminal point `b`.
pub fn trace_connection(o: &FoldedOverlay, b: Point) -> Result<BicolouredConnection, OverlayError> {
    Walker::new(o).trace(b)
}

/// `true` iff the connection joins two distinct terminal points of the
/// overlay and none of its green edges touches the forbidden line.
pub fn is_involutive(o: &FoldedOverlay, conn: &BicolouredConnection) -> bool {
    let k = o.geometry().k;
    let terminals: HashSet<Point> = o.terminal_colours().into_iter().map(|(p, _)| p).collect();
    conn.end != conn.start
        && terminals.contains(&conn.end)
        && conn
            .steps
            .iter()
            .filter(|s| s.colour == Colour::Green)
            .all(|s| s.edge.0.x - s.edge.0.y != k && s.edge.1.x - s.edge.1.y != k)
}

/// Connections from every terminal point, descending by terminal point.
pub fn all_connections(o: &FoldedOverlay) -> Result<Vec<BicolouredConnection>, OverlayError> {
    let w = Walker::new(o);
    let mut ts: Vec<Point> = o.terminal_colours().into_iter().map(|(p, _)| p).collect();
    ts.sort_by(|a, b| b.cmp(a));
    ts.into_iter().map(|t| w.trace(t)).collect()
}

/// The involutive connection from the lexicographically maximal terminal
/// point that admits one.
pub fn find_involutive_connection(o: &FoldedOverlay) -> Result<Option<BicolouredConnection>, OverlayError> {
    let w = Walker::new(o);
    let mut ts: Vec<Point> = o.terminal_colours().into_iter().map(|(p, _)| p).collect();
    ts.sort_by(|a, b| b.cmp(a));
    for t in ts {
        let conn = w.trace(t)?;
        if is_involutive(o, &conn) {
            return Ok(Some(conn));
        }
    }
    Ok(None)
}

fn rebuild(edges: &BTreeSet<Edge>, starts: &[Point], what: Colour) -> Result<Vec<LatticePath>, OverlayError> {
    let mut next: HashMap<Point, Point> = HashMap::with_capacity(edges.len());
    for &(a, b) in edges {
        if next.insert(a, b).is_some() {
            return Err(OverlayError::Rebuild(format!("{what} edges branch at {a}")));
        }
    }
    let mut used = 0;
    let mut out = Vec::with_capacity(starts.len());
    for &s in starts {
        let mut steps = Vec::new();
        let mut p = s;
        while let Some(&q) = next.get(&p) {
            steps.push(Step::between(p, q).expect("overlay edges are unit steps"));
            p = q;
            used += 1;
            if used > edges.len() {
                return Err(OverlayError::Rebuild(format!("{what} edges contain a cycle")));
            }
        }
        out.push(LatticePath::new(s, steps));
    }
    if used != edges.len() {
        return Err(OverlayError::Rebuild(format!("{what} edges not reachable from the initial points")));
    }
    Ok(out)
}

/// Applies a colour swap along a connection and reassembles the paths.
pub fn swap_along(o: &FoldedOverlay, conn: &BicolouredConnection) -> Result<FoldedOverlay, OverlayError> {
    let mut blue = o.edges(Colour::Blue);
    let mut green = o.edges(Colour::Green);
    for s in &conn.steps {
        let (from, to) = match s.colour {
            Colour::Blue => (&mut blue, &mut green),
            Colour::Green => (&mut green, &mut blue),
        };
        if !from.remove(&s.edge) || !to.insert(s.edge) {
            return Err(OverlayError::Rebuild(format!("edge {:?} cannot change colour", s.edge)));
        }
    }
    let starts_b: Vec<Point> = o.blue.iter().map(|p| p.start).collect();
    let starts_g: Vec<Point> = o.green.iter().map(|p| p.start).collect();
    Ok(FoldedOverlay {
        params: o.params,
        blue: rebuild(&blue, &starts_b, Colour::Blue)?,
        green: rebuild(&green, &starts_g, Colour::Green)?,
    })
}

/// The involution `psi`: identity on folded survivors, otherwise the colour
/// swap along the maximal involutive connection.
pub fn psi(o: &FoldedOverlay) -> Result<FoldedOverlay, OverlayError> {
    match find_involutive_connection(o)? {
        None => Ok(o.clone()),
        Some(conn) => swap_along(o, &conn),
    }
}

/// Folds of every lhs survivor, in survivor order.
pub fn all_folded_overlays(params: IdentityParams, budget: &Budget) -> Result<Vec<FoldedOverlay>, OverlayError> {
    survivors(params.lhs().dims(), budget)?.iter().map(|s| fold(s, params)).collect()
}

/// Folded overlays fixed by `psi`.
pub fn folded_survivors(params: IdentityParams, budget: &Budget) -> Result<Vec<FoldedOverlay>, OverlayError> {
    let mut out = Vec::new();
    for o in all_folded_overlays(params, budget)? {
        if find_involutive_connection(&o)?.is_none() {
            out.push(o);
        }
    }
    Ok(out)
}

/// Reflected rhs survivors, in survivor order.
pub fn reflected_rhs_survivors(params: IdentityParams, budget: &Budget) -> Result<Vec<PathTuple>, OverlayError> {
    survivors(params.rhs().dims(), budget)?.iter().map(|s| reflect_rhs(s, params)).collect()
}
