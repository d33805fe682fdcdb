//! Enforced initial segments, two-faced points, 01-codes of admissible
//! permutations, and the sign formulas built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CodeError, EnumError};
use crate::exact_arith::{HankelInstance, IdentityParams, Side};
use crate::lattice_paths::{initial_point, terminal_point, PathTuple, Point, Step};

/// A finite 01 sequence, indexed from 1 in all public accessors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Code01 {
    bits: Vec<bool>,
}

impl Code01 {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based position `i`.
    pub fn bit(&self, i: usize) -> Result<bool, CodeError> {
        if i == 0 || i > self.len() {
            return Err(CodeError::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(self.bits[i - 1])
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 1-based positions `z_1 < z_2 < ...` of the zeros.
    pub fn zero_positions(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i + 1).collect()
    }

    /// Number of pairs `i < j` with `c_i = 1, c_j = 0`, computed as `sum_i (z_i - i)`.
    pub fn inversions(&self) -> usize {
        self.zero_positions().iter().enumerate().map(|(i, z)| z - (i + 1)).sum()
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Self {
        Self { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// The code with bits at 1-based positions `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Result<Self, CodeError> {
        let (a, b) = (self.bit(i)?, self.bit(j)?);
        if a == b {
            return Err(CodeError::EqualBits { i, j });
        }
        let mut bits = self.bits.clone();
        bits.swap(i - 1, j - 1);
        Ok(Self { bits })
    }
}

impl fmt::Display for Code01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Code01 {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodeError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl From<Code01> for String {
    fn from(c: Code01) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Code01 {
    type Error = CodeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

fn parity_sign(e: usize) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn binom2(t: i64) -> usize {
    (t * (t - 1) / 2).max(0) as usize
}

/// `(-1)^(sum of zero positions)`: the sign of a rhs permutation from its code.
pub fn sign_rhs(c: &Code01) -> i32 {
    parity_sign(c.zero_positions().iter().sum())
}

/// Sign change `(-1)^|j-i|` caused by swapping the unequal bits `i` and `j`.
pub fn swap_parity(c: &Code01, i: usize, j: usize) -> Result<i32, CodeError> {
    c.swapped(i, j)?;
    Ok(parity_sign(i.abs_diff(j)))
}

/// The two candidate exponents for the sign of a lhs permutation from its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LhsExponent {
    /// `binom(m+[even], 2) + inv(C)`, counting only the two-faced block.
    TwoFacedBase,
    /// `binom(m+k-1+[even], 2) + inv(C)`, counting the two-faced block and the
    /// below-diagonal paths.
    FullBase,
}

impl LhsExponent {
    pub const ALL: [LhsExponent; 2] = [LhsExponent::TwoFacedBase, LhsExponent::FullBase];

    /// Human-readable formula.
    pub fn formula(self) -> &'static str {
        match self {
            LhsExponent::TwoFacedBase => "binom(m+[even],2)+inv(C)",
            LhsExponent::FullBase => "binom(m+k-1+[even],2)+inv(C)",
        }
    }

    /// The binomial base of the exponent.
    pub fn base(self, p: IdentityParams) -> usize {
        let m = i64::from(p.m) + p.ev();
        match self {
            LhsExponent::TwoFacedBase => binom2(m),
            LhsExponent::FullBase => binom2(m + i64::from(p.k) - 1),
        }
    }
}

/// `(-1)^(base + inv(c))` for the chosen exponent.
pub fn sign_lhs(c: &Code01, p: IdentityParams, exponent: LhsExponent) -> i32 {
    parity_sign(exponent.base(p) + c.inversions())
}

/// Enforced initial points, two-faced points and related counts of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClassification {
    /// Point where the enforced vertical run of path `i` ends, for every `i`.
    pub enforced_initial_points: Vec<Point>,
    /// Length of each enforced run.
    pub run_lengths: Vec<usize>,
    /// Enforced points that are terminal points, in path order.
    pub two_faced: Vec<Point>,
    /// Paths whose enforced point lies strictly below the diagonal.
    pub below_diagonal_count: usize,
    /// Paths whose enforced point lies strictly above the diagonal.
    pub above_diagonal_count: usize,
    /// `(i, j)` with path `i` forced to end at terminal `B_j`.
    pub enforced_subpermutation: Vec<(usize, usize)>,
    /// Twice the projected distance between the first blue initial point and
    /// the first free terminal point along the diagonal direction.
    pub two_delta: i64,
}

impl PointClassification {
    /// Path indices of the enforced subpermutation.
    pub fn two_faced_indices(&self) -> Vec<usize> {
        self.enforced_subpermutation.iter().map(|&(i, _)| i).collect()
    }
}

/// Computes enforced runs: the run of path 0 has length 1, each later run is
/// two longer than the (possibly truncated) previous one, and a run stops
/// early when it reaches a terminal point.
pub fn classify_points(inst: HankelInstance) -> PointClassification {
    let dims = inst.dims();
    let mut enforced = Vec::with_capacity(dims.n);
    let mut runs = Vec::with_capacity(dims.n);
    let mut two_faced = Vec::new();
    let mut sub = Vec::new();
    let (mut below, mut above) = (0, 0);
    let is_terminal = |p: Point| p.on_diagonal() && p.x >= 0 && (p.x as usize) < dims.n;
    let mut prev: Option<usize> = None;
    for i in 0..dims.n {
        let target = prev.map_or(1, |l| l + 2);
        let mut p = initial_point(i, dims.k, dims.m);
        let mut len = 0;
        while len < target && !is_terminal(p) {
            p = Step::Up.apply(p);
            len += 1;
        }
        if is_terminal(p) {
            two_faced.push(p);
            sub.push((i, p.x as usize));
        } else if p.y < p.x {
            below += 1;
        } else {
            above += 1;
        }
        enforced.push(p);
        runs.push(len);
        prev = Some(len);
    }
    PointClassification {
        enforced_initial_points: enforced,
        run_lengths: runs,
        two_faced,
        below_diagonal_count: below,
        above_diagonal_count: above,
        enforced_subpermutation: sub,
        two_delta: inst.params.two_delta(),
    }
}

/// Range of terminal indices whose reaching direction forms the code.
pub fn code_terminals(inst: HankelInstance) -> std::ops::Range<usize> {
    let n = inst.dims().n;
    match inst.side {
        Side::Lhs => {
            let first = (i64::from(inst.params.m) + inst.params.ev()) as usize;
            first.min(n)..n
        }
        Side::Rhs => 1.min(n)..n,
    }
}

/// 01-code of a survivor: bit `t` is 1 iff the path ending at the `t`-th
/// code terminal arrives with a Right step.
///
/// For the lhs the code runs over the terminals left free by the enforced
/// two-faced block; for the rhs it runs over `B_1 .. B_{N-1}`.
pub fn code_of_survivor(s: &PathTuple, inst: HankelInstance) -> Result<Code01, EnumError> {
    let dims = inst.dims();
    if !s.is_consistent(dims) {
        return Err(EnumError::NotSurvivor(format!("tuple does not match {inst}")));
    }
    if !s.is_nonintersecting() {
        return Err(EnumError::NotSurvivor("paths intersect".into()));
    }
    let mut ending = vec![None; dims.n];
    for (i, &j) in s.perm.iter().enumerate() {
        ending[j] = Some(i);
    }
    code_terminals(inst)
        .map(|j| {
            let path = &s.paths[ending[j].expect("perm is a bijection")];
            match path.last_step() {
                Some(step) => Ok(step == Step::Right),
                None => Err(EnumError::NotSurvivor(format!("empty path ends at code terminal {}", terminal_point(j)))),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Code01::new)
}
