//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers or rationals. The
//! single normal form used throughout is the row-style Hermite normal form
//! computed by [`row_hermite`]; kernels and quotient projections are both read
//! off its unimodular transform and then canonicalized by a second Hermite
//! reduction so results are independent of the elimination order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("basis is singular")]
    SingularBasis,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("spanning vectors are linearly dependent")]
    DependentSpan,
    #[error("spanning vectors do not generate a saturated sublattice")]
    NotSaturated,
    #[error("matrix entry count {found} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },
}

/// An integer vector in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[axis] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content. The zero vector is returned unchanged.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// Concatenation `(self, other)`, used for product fans.
    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn sum<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a LatticeVector>) -> Self {
        vectors.into_iter().fold(Self::zero(dim), |acc, v| acc.add(v))
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for LatticeVector {
    fn from(v: &[i64]) -> Self {
        Self(v.iter().copied().map(BigInt::from).collect())
    }
}

/// Serializes an integer as a number when it fits in `i64`, otherwise as a decimal string.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub(crate) struct BigIntRepr<'a>(pub &'a BigInt);

impl Serialize for BigIntRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(self.0, s)
    }
}

/// Serializes a slice of integers with [`serialize_bigint`] per entry.
pub fn serialize_bigints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&BigIntRepr(x))?;
    }
    seq.end()
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigints(&self.0, s)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A rational vector; entries are always kept in reduced form by `BigRational`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Integer entries if every coordinate is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl From<Vec<i64>> for RationalVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::BadShape { rows, cols, found: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors. All vectors must share a length.
    pub fn from_rows(rows: &[LatticeVector], cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            debug_assert_eq!(r.dim(), cols);
            entries.extend(r.coords().iter().cloned());
        }
        Self { rows: rows.len(), cols, entries }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[LatticeVector], rows: usize) -> Self {
        Self::from_rows(columns, rows).transpose()
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vecs: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from(*r)).collect();
        Self::from_rows(&vecs, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> LatticeVector {
        LatticeVector::new(self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(v.dim(), self.cols);
        LatticeVector::new(
            (0..self.rows)
                .map(|r| {
                    self.entries[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(v.coords())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(r, k) * other.get(k, c)).sum();
                out.set(r, c, s);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Replaces rows `(a, b)` by `(x*a + y*b, z*a + w*b)`.
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for c in 0..self.cols {
            let ra = self.get(a, c).clone();
            let rb = self.get(b, c).clone();
            self.set(a, c, x * &ra + y * &rb);
            self.set(b, c, z * &ra + w * &rb);
        }
    }

    /// `row[target] -= k * row[source]`
    fn sub_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(target, c) - k * self.get(source, c);
            self.set(target, c, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// Result of a row Hermite reduction: `transform * input = hermite`.
#[derive(Debug, Clone)]
pub struct HermiteDecomposition {
    pub hermite: IntegerMatrix,
    pub transform: IntegerMatrix,
    /// Column index of the pivot in each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row-style Hermite normal form with a unimodular transform.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero rows
/// sit at the bottom. The form is unique for the row lattice of the input.
pub fn row_hermite(m: &IntegerMatrix) -> HermiteDecomposition {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows());
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..m.cols() {
        if prow == m.rows() {
            break;
        }
        // Fold every nonzero entry below prow into the pivot position via extended gcd.
        for r in (prow + 1)..m.rows() {
            if h.get(r, col).is_zero() {
                continue;
            }
            if h.get(prow, col).is_zero() {
                h.swap_rows(prow, r);
                u.swap_rows(prow, r);
                continue;
            }
            let a = h.get(prow, col).clone();
            let b = h.get(r, col).clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let z = -(&b / &g);
            let w = &a / &g;
            h.combine_rows(prow, r, &x, &y, &z, &w);
            u.combine_rows(prow, r, &x, &y, &z, &w);
        }
        if h.get(prow, col).is_zero() {
            continue;
        }
        if h.get(prow, col).is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        let p = h.get(prow, col).clone();
        for r in 0..prow {
            let q = h.get(r, col).div_floor(&p);
            if !q.is_zero() {
                h.sub_row_multiple(r, prow, &q);
                u.sub_row_multiple(r, prow, &q);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    HermiteDecomposition { hermite: h, transform: u, pivots }
}

pub fn rank(m: &IntegerMatrix) -> usize {
    row_hermite(m).rank()
}

/// Canonical basis (nonzero Hermite rows) of the lattice spanned by `vectors`.
pub fn canonical_basis(vectors: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let hd = row_hermite(&IntegerMatrix::from_rows(vectors, dim));
    (0..hd.rank()).map(|r| hd.hermite.row(r)).collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt, LatticeError> {
    if m.rows() != m.cols() {
        return Err(LatticeError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match ((k + 1)..n).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Gauss–Jordan inverse of a square integer matrix over the rationals.
pub fn rational_inverse(m: &IntegerMatrix) -> Result<Vec<Vec<BigRational>>, LatticeError> {
    if m.rows() != m.cols() {
        return Err(LatticeError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            (0..2 * n)
                .map(|c| {
                    if c < n {
                        BigRational::from_integer(m.get(r, c).clone())
                    } else if c - n == r {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LatticeError::SingularBasis)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = &a[r][c] - &f * &a[col][c];
                    a[r][c] = v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coefficients `c` with `sum c_i * basis_i = target`, for `n` independent vectors in `Z^n`.
pub fn solve_in_basis(
    basis: &[LatticeVector],
    target: &LatticeVector,
) -> Result<RationalVector, LatticeError> {
    let n = target.dim();
    if basis.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, found: basis.len() });
    }
    if let Some(b) = basis.iter().find(|b| b.dim() != n) {
        return Err(LatticeError::DimensionMismatch { expected: n, found: b.dim() });
    }
    // Augmented system [B | t] with basis vectors as columns.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            basis
                .iter()
                .map(|b| BigRational::from_integer(b.coords()[r].clone()))
                .chain(std::iter::once(BigRational::from_integer(target.coords()[r].clone())))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LatticeError::SingularBasis)?;
        a.swap(col, pivot);
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..=n {
                let v = &a[r][c] - &f * &a[col][c];
                a[r][c] = v;
            }
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut s = a[r][n].clone();
        for c in (r + 1)..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Ok(RationalVector::new(x))
}

/// Canonical lattice basis of `{ v in Z^cols : m v = 0 }`.
pub fn integer_kernel(m: &IntegerMatrix) -> Vec<LatticeVector> {
    let hd = row_hermite(&m.transpose());
    let kernel: Vec<LatticeVector> = (hd.rank()..m.cols()).map(|r| hd.transform.row(r)).collect();
    canonical_basis(&kernel, m.cols())
}

/// Integer surjection `Z^dim -> Z^(dim-k)` whose kernel is exactly the lattice spanned by `span`.
pub fn quotient_lattice_projection(
    span: &[LatticeVector],
    dim: usize,
) -> Result<IntegerMatrix, LatticeError> {
    if let Some(v) = span.iter().find(|v| v.dim() != dim) {
        return Err(LatticeError::DimensionMismatch { expected: dim, found: v.dim() });
    }
    let k = span.len();
    if k == 0 {
        return Ok(IntegerMatrix::identity(dim));
    }
    let hd = row_hermite(&IntegerMatrix::from_columns(span, dim));
    if hd.rank() < k {
        return Err(LatticeError::DependentSpan);
    }
    // With full column rank the pivots sit on the diagonal; all must be 1 for saturation.
    if (0..k).any(|i| !hd.hermite.get(i, i).is_one()) {
        return Err(LatticeError::NotSaturated);
    }
    let rows: Vec<LatticeVector> = (k..dim).map(|r| hd.transform.row(r)).collect();
    Ok(IntegerMatrix::from_rows(&canonical_basis(&rows, dim), dim))
}

/// `C(n, k)` with the convention `C(n, k) = 0` for `k > n` and for negative arguments.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
