//! Exact integer combinatorics: generalized binomials, convoluted Catalan
//! numbers, Hankel matrices and fraction-free determinants.
//!
//! Every routine is generic over [`ExactInteger`], so the same code runs on
//! arbitrary-precision integers (the crate-level [`crate::Int`]) and on
//! machine integers where the values are known to fit.

use std::fmt::{self, Debug, Display};
use std::ops::RangeInclusive;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};
use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// Exact signed integer arithmetic with truncating exact division.
pub trait ExactInteger: Clone + Debug + Display + Integer + Signed + FromPrimitive {}

impl<T> ExactInteger for T where T: Clone + Debug + Display + Integer + Signed + FromPrimitive {}

fn lift<T: ExactInteger>(v: i64) -> T {
    T::from_i64(v).expect("every ExactInteger represents small i64 values")
}

/// Generalized binomial coefficient via the falling factorial.
///
/// `binomial(n, r) = n (n-1) ... (n-r+1) / r!` for `r >= 0` and any integer
/// `n`; `0` for `r < 0`.
pub fn binomial<T: ExactInteger>(n: i64, r: i64) -> T {
    if r < 0 {
        return T::zero();
    }
    let mut acc = T::one();
    for t in 0..r {
        // acc = binom(n, t); binom(n, t+1) = binom(n, t) (n - t) / (t + 1) exactly.
        acc = acc * lift::<T>(n - t);
        acc = acc / lift::<T>(t + 1);
    }
    acc
}

fn check_order(k: i64) -> Result<(), ArithError> {
    if k <= 0 {
        Err(ArithError::NonPositiveOrder(k))
    } else {
        Ok(())
    }
}

/// Convoluted Catalan number `C_{K,p} = binom(2p+K-1, p) - binom(2p+K-1, p-1)`,
/// zero for `p < 0`.
pub fn catalan_convolution<T: ExactInteger>(k: i64, p: i64) -> Result<T, ArithError> {
    check_order(k)?;
    if p < 0 {
        return Ok(T::zero());
    }
    Ok(binomial::<T>(2 * p + k - 1, p) - binomial::<T>(2 * p + k - 1, p - 1))
}

/// The three closed forms of `C_{K,p}` for `p >= 0`, in the order
/// difference form, `K/(p+K) binom(2p+K-1, p)`, `K/(2p+K) binom(2p+K, p)`.
///
/// Each quotient is checked to be exact.
pub fn catalan_closed_forms<T: ExactInteger>(k: i64, p: i64) -> Result<[T; 3], ArithError> {
    check_order(k)?;
    let diff = catalan_convolution::<T>(k, p)?;
    if p < 0 {
        return Ok([diff, T::zero(), T::zero()]);
    }
    let exact = |num: T, den: i64| -> Result<T, ArithError> {
        let (q, r) = num.div_rem(&lift::<T>(den));
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ArithError::InexactDivision { k, p })
        }
    };
    let second = exact(lift::<T>(k) * binomial::<T>(2 * p + k - 1, p), p + k)?;
    let third = exact(lift::<T>(k) * binomial::<T>(2 * p + k, p), 2 * p + k)?;
    Ok([diff, second, third])
}

/// Parity of the identity family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Iverson bracket `[even]`.
    pub fn even_bit(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => 0,
        }
    }

    /// Iverson bracket `[odd]`.
    pub fn odd_bit(self) -> i64 {
        1 - self.even_bit()
    }

    /// Both parities, even first.
    pub const ALL: [Parity; 2] = [Parity::Even, Parity::Odd];
}

impl Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(format!("parity must be 'even' or 'odd', got {other:?}")),
        }
    }
}

/// Which determinant of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

impl Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

/// The matrix parameters `(K, M, N)` of `D_{K,M}(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HankelDims {
    /// Convolution order `K >= 1`.
    pub k: i64,
    /// Index shift `M`.
    pub m: i64,
    /// Matrix size `N`.
    pub n: usize,
}

impl HankelDims {
    pub fn new(k: i64, m: i64, n: usize) -> Self {
        Self { k, m, n }
    }
}

impl Display for HankelDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={} M={} N={}", self.k, self.m, self.n)
    }
}

/// Identity parameters `(k, m, n, parity)` shared by both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdentityParams {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    pub parity: Parity,
}

impl IdentityParams {
    /// Panics unless `k >= 1` and `m >= 1`.
    pub fn new(k: u32, m: u32, n: u32, parity: Parity) -> Self {
        assert!(k >= 1 && m >= 1, "identity parameters need k >= 1 and m >= 1");
        Self { k, m, n, parity }
    }

    /// The instance on one side of the identity.
    pub fn side(self, side: Side) -> HankelInstance {
        HankelInstance { params: self, side }
    }

    pub fn lhs(self) -> HankelInstance {
        self.side(Side::Lhs)
    }

    pub fn rhs(self) -> HankelInstance {
        self.side(Side::Rhs)
    }

    /// Iverson bracket `[even]`.
    pub fn ev(self) -> i64 {
        self.parity.even_bit()
    }

    /// Exponent `binom(m+k-1+[even], 2)` of the sign factor between the sides.
    pub fn factor_exponent(self) -> i64 {
        let t = i64::from(self.m) + i64::from(self.k) - 1 + self.ev();
        t * (t - 1) / 2
    }

    /// Sign factor `(-1)^binom(m+k-1+[even], 2)` relating lhs and rhs.
    pub fn theorem_sign(self) -> i32 {
        if self.factor_exponent() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Sizes `N` of the lhs matrix family for which the determinant vanishes.
    pub fn zero_range(self) -> RangeInclusive<usize> {
        let top = i64::from(self.m) + i64::from(self.k) - 1 - self.parity.odd_bit();
        1..=(top.max(0) as usize)
    }

    /// `2 delta = 2m + [odd]`, twice the projected distance between the first
    /// initial and first terminal point on the forbidden line.
    pub fn two_delta(self) -> i64 {
        2 * i64::from(self.m) + self.parity.odd_bit()
    }
}

impl Display for IdentityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} m={} n={} {}", self.k, self.m, self.n, self.parity)
    }
}

/// One side of one identity, naming every parameter symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HankelInstance {
    pub params: IdentityParams,
    pub side: Side,
}

impl HankelInstance {
    /// Derived matrix parameters `(K, M, N)`.
    pub fn dims(&self) -> HankelDims {
        let IdentityParams { k, m, n, parity } = self.params;
        let (k, m, n) = (i64::from(k), i64::from(m), i64::from(n));
        let big_k = match parity {
            Parity::Even => 2 * k,
            Parity::Odd => 2 * k - 1,
        };
        let (big_m, big_n) = match (self.side, parity) {
            (Side::Lhs, Parity::Even) => (1 - k - m, n + m + k),
            (Side::Lhs, Parity::Odd) => (2 - k - m, n + m + k - 1),
            (Side::Rhs, _) => (1 - k + m, n),
        };
        HankelDims::new(big_k, big_m, big_n as usize)
    }
}

impl Display for HankelInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ({})", self.params, self.side, self.dims())
    }
}

/// Dense square matrix over an exact integer type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: ExactInteger> ExactMatrix<T> {
    /// Builds a matrix from row-major entries; panics if the length is not `dim^2`.
    pub fn from_rows(dim: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self { dim, entries }
    }

    /// The `dim x dim` identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = T::one();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry in row `i`, column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(<[T]>::to_vec).collect()
    }
}

/// Hankel matrix `(C_{K, i+j+M})_{0 <= i,j < N}`.
pub fn hankel_matrix<T: ExactInteger>(dims: HankelDims) -> Result<ExactMatrix<T>, ArithError> {
    check_order(dims.k)?;
    let n = dims.n;
    let diag: Vec<T> = (0..(2 * n).saturating_sub(1))
        .map(|s| catalan_convolution::<T>(dims.k, s as i64 + dims.m))
        .collect::<Result<_, _>>()?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(diag[i + j].clone());
        }
    }
    Ok(ExactMatrix::from_rows(n, entries))
}

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
///
/// The empty matrix has determinant one.
pub fn determinant<T: ExactInteger>(matrix: &ExactMatrix<T>) -> T {
    let n = matrix.dim();
    if n == 0 {
        return T::one();
    }
    let mut a = matrix.rows();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant by cofactor expansion along the first row.
///
/// Exponential time; intended as an independent oracle for small matrices.
pub fn cofactor_determinant<T: ExactInteger>(matrix: &ExactMatrix<T>) -> T {
    fn expand<T: ExactInteger>(rows: &[Vec<T>], cols: &[usize]) -> T {
        if cols.is_empty() {
            return T::one();
        }
        let row = &rows[rows.len() - cols.len()];
        let mut acc = T::zero();
        for (pos, &c) in cols.iter().enumerate() {
            if row[c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = row[c].clone() * expand(rows, &rest);
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
    let cols: Vec<usize> = (0..matrix.dim()).collect();
    expand(&matrix.rows(), &cols)
}

/// `D_{K,M}(N)`, the determinant of the Hankel matrix.
pub fn hankel_det<T: ExactInteger>(dims: HankelDims) -> Result<T, ArithError> {
    Ok(determinant(&hankel_matrix::<T>(dims)?))
}
