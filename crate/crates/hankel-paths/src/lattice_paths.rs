//! Lattice-path model of Hankel determinants: endpoints, the forbidden line,
//! path counting by reflection, tuple enumeration, and the LGV involution.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::EnumError;
use crate::exact_arith::{binomial, ExactInteger, HankelDims};
use crate::Int;

/// Environment variable overriding the tuple budget.
pub const BUDGET_ENV: &str = "HANKEL_BUDGET";

/// A point of the integer lattice, ordered lexicographically by `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Mirror image in the diagonal `y = x`.
    pub const fn reflect(self) -> Self {
        Self { x: self.y, y: self.x }
    }

    /// `true` iff the point lies strictly above the line `y = x - K`.
    pub const fn avoids(self, k: i64) -> bool {
        self.y > self.x - k
    }

    /// `true` iff the point lies on the diagonal `y = x`.
    pub const fn on_diagonal(self) -> bool {
        self.x == self.y
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A unit lattice step; `Right < Up`, which fixes the lexicographic order of paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    Right,
    Up,
}

impl Step {
    /// Step between two adjacent points, if they are one unit step apart.
    pub fn between(a: Point, b: Point) -> Option<Step> {
        match (b.x - a.x, b.y - a.y) {
            (1, 0) => Some(Step::Right),
            (0, 1) => Some(Step::Up),
            _ => None,
        }
    }

    pub fn apply(self, p: Point) -> Point {
        match self {
            Step::Right => Point::new(p.x + 1, p.y),
            Step::Up => Point::new(p.x, p.y + 1),
        }
    }

    /// The step after reflecting in the diagonal.
    pub fn reflect(self) -> Step {
        match self {
            Step::Right => Step::Up,
            Step::Up => Step::Right,
        }
    }
}

/// A start point followed by a sequence of unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePath {
    pub start: Point,
    pub steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(start: Point, steps: Vec<Step>) -> Self {
        Self { start, steps }
    }

    /// Builds a path from consecutive points; `None` if two neighbours are not
    /// one unit step apart or the list is empty.
    pub fn from_points(points: &[Point]) -> Option<Self> {
        let (&start, _) = points.split_first()?;
        let steps = points.windows(2).map(|w| Step::between(w[0], w[1])).collect::<Option<Vec<_>>>()?;
        Some(Self { start, steps })
    }

    /// All visited points, starting with `start`.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().scan(self.start, |p, s| {
            *p = s.apply(*p);
            Some(*p)
        }))
    }

    pub fn point_vec(&self) -> Vec<Point> {
        self.points().collect()
    }

    /// Final point.
    pub fn end(&self) -> Point {
        self.steps.iter().fold(self.start, |p, s| s.apply(p))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `true` iff no point of the path touches the forbidden line `y = x - K`.
    pub fn avoids(&self, k: i64) -> bool {
        self.points().all(|p| p.avoids(k))
    }

    /// The last step, if any.
    pub fn last_step(&self) -> Option<Step> {
        self.steps.last().copied()
    }

    /// Mirror image in the diagonal.
    pub fn reflect(&self) -> Self {
        Self { start: self.start.reflect(), steps: self.steps.iter().map(|s| s.reflect()).collect() }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start)?;
        for s in &self.steps {
            f.write_str(match s {
                Step::Right => "R",
                Step::Up => "U",
            })?;
        }
        Ok(())
    }
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let inv = permutation_inversions(perm);
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of pairs `i < j` with `perm[i] > perm[j]`.
pub fn permutation_inversions(perm: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// An `N`-tuple of paths with path `i` running from `A_i` to `B_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathTuple {
    pub perm: Vec<usize>,
    pub paths: Vec<LatticePath>,
}

impl PathTuple {
    pub fn new(perm: Vec<usize>, paths: Vec<LatticePath>) -> Self {
        assert_eq!(perm.len(), paths.len(), "one terminal index per path");
        Self { perm, paths }
    }

    /// The empty tuple.
    pub fn empty() -> Self {
        Self { perm: Vec::new(), paths: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `sgn(perm)`.
    pub fn sign(&self) -> i32 {
        permutation_sign(&self.perm)
    }

    /// `true` iff no lattice point is shared by two paths.
    pub fn is_nonintersecting(&self) -> bool {
        let mut seen = HashSet::new();
        self.paths.iter().flat_map(LatticePath::points).all(|p| seen.insert(p))
    }

    /// Checks that path `i` runs from `A_i` to `B_{perm[i]}` avoiding the forbidden line.
    pub fn is_consistent(&self, dims: HankelDims) -> bool {
        self.len() == dims.n
            && is_permutation(&self.perm)
            && self.paths.iter().enumerate().all(|(i, p)| {
                p.start == initial_point(i, dims.k, dims.m)
                    && p.end() == terminal_point(self.perm[i])
                    && p.avoids(dims.k)
            })
    }

    /// Mirror image of every path in the diagonal.
    pub fn reflect(&self) -> Self {
        Self { perm: self.perm.clone(), paths: self.paths.iter().map(LatticePath::reflect).collect() }
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&j| j < perm.len() && !std::mem::replace(&mut seen[j], true))
}

/// Initial point `A_i = (-i-M, -i-M-K+1)`.
pub fn initial_point(i: usize, k: i64, m: i64) -> Point {
    let i = i as i64;
    Point::new(-i - m, -i - m - k + 1)
}

/// Terminal point `B_j = (j, j)`.
pub fn terminal_point(j: usize) -> Point {
    Point::new(j as i64, j as i64)
}

/// Number of Right/Up paths `a -> b` never touching `y = x - K`, by the
/// reflection principle.
pub fn count_avoiding_paths<T: ExactInteger>(a: Point, b: Point, k: i64) -> T {
    if b.x < a.x || b.y < a.y || !a.avoids(k) || !b.avoids(k) {
        return T::zero();
    }
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    // The mirror image of `a` in the forbidden line is (a.y + K, a.x - K).
    let rdx = b.x - (a.y + k);
    binomial::<T>(dx + dy, dx) - binomial::<T>(dx + dy, rdx)
}

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Cap on the unconstrained path count `binom(dx+dy, dx)` of a single endpoint pair.
    pub paths_per_pair: u64,
    /// Cap on the number of tuples streamed per instance; also bounds the
    /// total path-list size and the survivor search.
    pub tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { paths_per_pair: 1_000_000, tuples: 10_000_000 }
    }
}

impl Budget {
    /// Default budget, with the tuple cap taken from [`BUDGET_ENV`] when set
    /// to a positive integer.
    pub fn from_env() -> Self {
        let mut b = Self::default();
        if let Some(v) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok()) {
            if v > 0 {
                b.tuples = v;
            }
        }
        b
    }

    pub fn with_tuples(self, tuples: u64) -> Self {
        Self { tuples, ..self }
    }

    fn check(&self, what: &'static str, needed: &BigInt, budget: u64) -> Result<(), EnumError> {
        if *needed > BigInt::from(budget) {
            Err(EnumError::TooLarge { what, needed: needed.to_string(), budget })
        } else {
            Ok(())
        }
    }
}

/// All Right/Up paths `a -> b` avoiding `y = x - K`, in lexicographic step order.
pub fn enumerate_avoiding_paths(a: Point, b: Point, k: i64, budget: &Budget) -> Result<Vec<LatticePath>, EnumError> {
    if b.x < a.x || b.y < a.y || !a.avoids(k) || !b.avoids(k) {
        return Ok(Vec::new());
    }
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    budget.check("unconstrained paths", &binomial::<Int>(dx + dy, dx), budget.paths_per_pair)?;
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity((dx + dy) as usize);
    fn rec(p: Point, b: Point, k: i64, start: Point, steps: &mut Vec<Step>, out: &mut Vec<LatticePath>) {
        if p == b {
            out.push(LatticePath::new(start, steps.clone()));
            return;
        }
        for s in [Step::Right, Step::Up] {
            let q = s.apply(p);
            if q.x <= b.x && q.y <= b.y && q.avoids(k) {
                steps.push(s);
                rec(q, b, k, start, steps, out);
                steps.pop();
            }
        }
    }
    rec(a, b, k, a, &mut steps, &mut out);
    Ok(out)
}

/// Matrix of avoiding-path counts `count(A_i, B_j)`.
pub fn count_matrix(dims: HankelDims) -> Vec<Vec<Int>> {
    (0..dims.n)
        .map(|i| {
            (0..dims.n)
                .map(|j| count_avoiding_paths(initial_point(i, dims.k, dims.m), terminal_point(j), dims.k))
                .collect()
        })
        .collect()
}

/// Advances `perm` to the next permutation in lexicographic order.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Per-permutation tuple counts `prod_i count(A_i, B_{perm(i)})`, in
/// lexicographic order of permutations, omitting zero products.
pub fn tuple_counts_by_permutation(dims: HankelDims) -> Vec<(Vec<usize>, Int)> {
    let counts = count_matrix(dims);
    let mut perm: Vec<usize> = (0..dims.n).collect();
    let mut out = Vec::new();
    loop {
        let prod = perm.iter().enumerate().fold(Int::one(), |acc, (i, &j)| acc * &counts[i][j]);
        if !prod.is_zero() {
            out.push((perm.clone(), prod));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

/// Total number of tuples of the instance.
pub fn tuple_count(dims: HankelDims) -> Int {
    tuple_counts_by_permutation(dims).into_iter().map(|(_, c)| c).sum()
}

/// Signed tuple sum `sum_perm sgn(perm) prod_i count(A_i, B_{perm(i)})`,
/// grouped by permutation rather than streamed.
pub fn signed_tuple_sum_grouped(dims: HankelDims) -> Int {
    tuple_counts_by_permutation(dims).into_iter().map(|(p, c)| if permutation_sign(&p) == 1 { c } else { -c }).sum()
}

/// Path lists for every endpoint pair, checked against the budget.
#[derive(Debug, Clone)]
pub struct PairPaths {
    dims: HankelDims,
    lists: Vec<Vec<LatticePath>>,
}

impl PairPaths {
    /// Enumerates all pair lists; refuses when any pair exceeds the per-pair
    /// budget or the total list size exceeds the tuple budget.
    pub fn new(dims: HankelDims, budget: &Budget) -> Result<Self, EnumError> {
        let total: Int = count_matrix(dims).iter().flatten().sum();
        budget.check("stored paths", &total, budget.tuples)?;
        let mut lists = Vec::with_capacity(dims.n * dims.n);
        for i in 0..dims.n {
            for j in 0..dims.n {
                lists.push(enumerate_avoiding_paths(
                    initial_point(i, dims.k, dims.m),
                    terminal_point(j),
                    dims.k,
                    budget,
                )?);
            }
        }
        Ok(Self { dims, lists })
    }

    pub fn dims(&self) -> HankelDims {
        self.dims
    }

    /// Paths from `A_i` to `B_j`.
    pub fn get(&self, i: usize, j: usize) -> &[LatticePath] {
        &self.lists[i * self.dims.n + j]
    }
}

/// Stream of all tuples of an instance, in lexicographic order of the
/// permutation and then of the paths.
#[derive(Debug, Clone)]
pub struct TupleStream {
    pairs: PairPaths,
    perm: Vec<usize>,
    idx: Vec<usize>,
    state: StreamState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

impl TupleStream {
    fn perm_nonempty(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| !self.pairs.get(i, j).is_empty())
    }

    fn advance_perm(&mut self) -> bool {
        loop {
            if !next_permutation(&mut self.perm) {
                return false;
            }
            if self.perm_nonempty() {
                self.idx.iter_mut().for_each(|v| *v = 0);
                return true;
            }
        }
    }

    fn current(&self) -> PathTuple {
        let paths = self.perm.iter().enumerate().map(|(i, &j)| self.pairs.get(i, j)[self.idx[i]].clone()).collect();
        PathTuple::new(self.perm.clone(), paths)
    }
}

impl Iterator for TupleStream {
    type Item = PathTuple;

    fn next(&mut self) -> Option<PathTuple> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.state = StreamState::Running;
                if self.perm_nonempty() || self.advance_perm() {
                    return Some(self.current());
                }
                self.state = StreamState::Done;
                return None;
            }
            StreamState::Running => {}
        }
        // Odometer over the per-path list indices, last path fastest.
        for i in (0..self.idx.len()).rev() {
            let len = self.pairs.get(i, self.perm[i]).len();
            if self.idx[i] + 1 < len {
                self.idx[i] += 1;
                return Some(self.current());
            }
            self.idx[i] = 0;
        }
        if self.advance_perm() {
            Some(self.current())
        } else {
            self.state = StreamState::Done;
            None
        }
    }
}

/// Streams every tuple of the instance; refuses when the total tuple count
/// exceeds the budget.
pub fn enumerate_tuples(dims: HankelDims, budget: &Budget) -> Result<TupleStream, EnumError> {
    budget.check("tuples", &tuple_count(dims), budget.tuples)?;
    let pairs = PairPaths::new(dims, budget)?;
    Ok(TupleStream { pairs, perm: (0..dims.n).collect(), idx: vec![0; dims.n], state: StreamState::Fresh })
}

/// Deterministic, evenly spaced sample of `count` tuples by global rank in
/// the stream order; usable when the full stream exceeds the budget.
pub fn sample_tuples(dims: HankelDims, budget: &Budget, count: u64) -> Result<Vec<PathTuple>, EnumError> {
    let groups = tuple_counts_by_permutation(dims);
    let total: Int = groups.iter().map(|(_, c)| c).sum();
    if total.is_zero() || count == 0 {
        return Ok(Vec::new());
    }
    let pairs = PairPaths::new(dims, budget)?;
    let count = Int::from(count).min(total.clone());
    let mut out = Vec::new();
    let mut r = Int::zero();
    while r < count {
        let mut rank = &r * &total / &count;
        let (perm, _) = groups
            .iter()
            .find(|(_, c)| {
                if rank < *c {
                    true
                } else {
                    rank -= c;
                    false
                }
            })
            .expect("rank below total");
        let mut paths = vec![None; dims.n];
        for i in (0..dims.n).rev() {
            let list = pairs.get(i, perm[i]);
            let len = Int::from(list.len());
            let pos = (&rank % &len).to_usize().expect("index fits");
            rank /= len;
            paths[i] = Some(list[pos].clone());
        }
        out.push(PathTuple::new(perm.clone(), paths.into_iter().map(Option::unwrap).collect()));
        r += 1;
    }
    Ok(out)
}

/// The lexicographically maximal point shared by two or more paths, with the
/// two paths through it that have the largest terminal indices (smaller
/// path index first).
pub fn max_intersection(t: &PathTuple) -> Option<(Point, (usize, usize))> {
    let mut pts: Vec<(Point, usize)> =
        t.paths.iter().enumerate().flat_map(|(i, p)| p.points().map(move |q| (q, i))).collect();
    pts.sort_unstable_by(|a, b| b.cmp(a));
    let at = pts.windows(2).position(|w| w[0].0 == w[1].0)?;
    let point = pts[at].0;
    let mut through: Vec<usize> = pts[at..].iter().take_while(|(q, _)| *q == point).map(|&(_, i)| i).collect();
    through.sort_unstable_by_key(|&i| std::cmp::Reverse(t.perm[i]));
    let (a, b) = (through[0], through[1]);
    Some((point, (a.min(b), a.max(b))))
}

fn split_at_point(path: &LatticePath, p: Point) -> usize {
    path.points().position(|q| q == p).expect("point lies on path")
}

/// The LGV involution: swap the tails after the maximal intersection point.
pub fn lgv_involution(t: &PathTuple) -> PathTuple {
    let Some((p, (a, b))) = max_intersection(t) else {
        return t.clone();
    };
    let (pa, pb) = (&t.paths[a], &t.paths[b]);
    let (ca, cb) = (split_at_point(pa, p), split_at_point(pb, p));
    let mut out = t.clone();
    out.paths[a].steps = pa.steps[..ca].iter().chain(&pb.steps[cb..]).copied().collect();
    out.paths[b].steps = pb.steps[..cb].iter().chain(&pa.steps[ca..]).copied().collect();
    out.perm.swap(a, b);
    out
}

/// Dense occupancy grid over the bounding box of an instance.
struct Grid {
    x0: i64,
    y0: i64,
    w: usize,
    h: usize,
}

impl Grid {
    fn new(dims: HankelDims) -> Self {
        let pts: Vec<Point> = (0..dims.n).flat_map(|i| [initial_point(i, dims.k, dims.m), terminal_point(i)]).collect();
        let (x0, x1) = (pts.iter().map(|p| p.x).min().unwrap_or(0), pts.iter().map(|p| p.x).max().unwrap_or(0));
        let (y0, y1) = (pts.iter().map(|p| p.y).min().unwrap_or(0), pts.iter().map(|p| p.y).max().unwrap_or(0));
        Self { x0, y0, w: (x1 - x0 + 1) as usize, h: (y1 - y0 + 1) as usize }
    }

    fn index(&self, p: Point) -> Option<usize> {
        let (dx, dy) = (p.x - self.x0, p.y - self.y0);
        (dx >= 0 && dy >= 0 && (dx as usize) < self.w && (dy as usize) < self.h)
            .then(|| dx as usize * self.h + dy as usize)
    }
}

/// All nonintersecting tuples of the instance in stream order.
///
/// Backtracking over paths in index order. Two sound prunings keep the search
/// small: a path may not visit another path's initial or terminal point, and
/// after each placement the remaining initial points must still admit a
/// matching to unused terminal points through free lattice points.
pub fn survivors(dims: HankelDims, budget: &Budget) -> Result<Vec<PathTuple>, EnumError> {
    let pairs = PairPaths::new(dims, budget)?;
    let grid = Grid::new(dims);
    let n = dims.n;
    let starts: Vec<Point> = (0..n).map(|i| initial_point(i, dims.k, dims.m)).collect();
    let ends: Vec<Point> = (0..n).map(terminal_point).collect();
    let endpoints: HashSet<Point> = starts.iter().chain(&ends).copied().collect();
    let cells: Vec<Vec<(usize, Vec<usize>)>> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            pairs
                .get(i, j)
                .iter()
                .map(LatticePath::point_vec)
                .enumerate()
                .filter(|(_, pts)| {
                    let last = pts.len() - 1;
                    pts[1..last.max(1)].iter().all(|q| !endpoints.contains(q))
                })
                .map(|(c, pts)| (c, pts.iter().map(|&q| grid.index(q).expect("paths stay in the box")).collect()))
                .collect()
        })
        .collect();
    let mut blocked = vec![false; grid.w * grid.h];
    for xi in 0..grid.w {
        for yi in 0..grid.h {
            let p = Point::new(grid.x0 + xi as i64, grid.y0 + yi as i64);
            blocked[xi * grid.h + yi] = !p.avoids(dims.k);
        }
    }
    let mut endpoint_cell = vec![false; grid.w * grid.h];
    for p in &endpoints {
        if let Some(c) = grid.index(*p) {
            endpoint_cell[c] = true;
        }
    }
    let terminal_cells: Vec<usize> = ends.iter().map(|&b| grid.index(b).expect("terminals in the box")).collect();
    let start_cells: Vec<usize> = starts.iter().map(|&a| grid.index(a).expect("starts in the box")).collect();

    struct Search<'a> {
        n: usize,
        grid: &'a Grid,
        pairs: &'a PairPaths,
        cells: &'a [Vec<(usize, Vec<usize>)>],
        blocked: &'a [bool],
        endpoint_cell: &'a [bool],
        start_cells: &'a [usize],
        terminal_cells: &'a [usize],
        occupied: Vec<bool>,
        reach: Vec<bool>,
        used: Vec<bool>,
        perm: Vec<usize>,
        chosen: Vec<usize>,
        nodes: u64,
        limit: u64,
        out: Vec<PathTuple>,
    }

    impl Search<'_> {
        /// Unused terminals reachable from the start of path `i` through free points.
        fn reachable(&mut self, i: usize) -> Vec<usize> {
            let h = self.grid.h;
            self.reach.iter_mut().for_each(|r| *r = false);
            let s = self.start_cells[i];
            self.reach[s] = true;
            let (sx, sy) = (s / h, s % h);
            for x in sx..self.grid.w {
                for y in 0..h {
                    let c = x * h + y;
                    if c == s || (x == sx && y < sy) || self.blocked[c] || self.occupied[c] {
                        continue;
                    }
                    let from_left = x > sx && self.reach[c - h] && (c - h == s || !self.endpoint_cell[c - h]);
                    let from_below = y > 0 && self.reach[c - 1] && (c - 1 == s || !self.endpoint_cell[c - 1]);
                    self.reach[c] = from_left || from_below;
                }
            }
            (0..self.n).filter(|&j| !self.used[j] && self.reach[self.terminal_cells[j]]).collect()
        }

        /// Perfect matching test between paths `from..n` and unused terminals.
        fn feasible(&mut self, from: usize) -> bool {
            let options: Vec<Vec<usize>> = (from..self.n).map(|i| self.reachable(i)).collect();
            let mut owner: Vec<Option<usize>> = vec![None; self.n];
            fn augment(r: usize, options: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
                for &j in &options[r] {
                    if std::mem::replace(&mut seen[j], true) {
                        continue;
                    }
                    if owner[j].map_or(true, |o| augment(o, options, owner, seen)) {
                        owner[j] = Some(r);
                        return true;
                    }
                }
                false
            }
            (0..options.len()).all(|r| augment(r, &options, &mut owner, &mut vec![false; self.n]))
        }

        fn run(&mut self, i: usize) -> Result<(), EnumError> {
            if i == self.n {
                let paths = (0..self.n).map(|r| self.pairs.get(r, self.perm[r])[self.chosen[r]].clone()).collect();
                self.out.push(PathTuple::new(self.perm.clone(), paths));
                return Ok(());
            }
            let cells = self.cells;
            for j in 0..self.n {
                if self.used[j] {
                    continue;
                }
                for (c, path) in &cells[i * self.n + j] {
                    if path.iter().any(|&q| self.occupied[q]) {
                        continue;
                    }
                    self.nodes += 1;
                    if self.nodes > self.limit {
                        return Err(EnumError::TooLarge {
                            what: "survivor search nodes",
                            needed: format!("more than {}", self.limit),
                            budget: self.limit,
                        });
                    }
                    path.iter().for_each(|&q| self.occupied[q] = true);
                    self.used[j] = true;
                    if self.feasible(i + 1) {
                        self.perm.push(j);
                        self.chosen.push(*c);
                        self.run(i + 1)?;
                        self.chosen.pop();
                        self.perm.pop();
                    }
                    self.used[j] = false;
                    path.iter().for_each(|&q| self.occupied[q] = false);
                }
            }
            Ok(())
        }
    }

    let size = grid.w * grid.h;
    let mut s = Search {
        n,
        grid: &grid,
        pairs: &pairs,
        cells: &cells,
        blocked: &blocked,
        endpoint_cell: &endpoint_cell,
        start_cells: &start_cells,
        terminal_cells: &terminal_cells,
        occupied: vec![false; size],
        reach: vec![false; size],
        used: vec![false; n],
        perm: Vec::new(),
        chosen: Vec::new(),
        nodes: 0,
        limit: budget.tuples,
        out: Vec::new(),
    };
    if s.feasible(0) {
        s.run(0)?;
    }
    Ok(s.out)
}
