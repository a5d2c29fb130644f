//! Face counts of the simplicial polytope dual to a fan, Dehn–Sommerville
//! relations, and bounds on the Picard number derived from them.
//!
//! `f_j` counts `j`-dimensional faces, i.e. cones of the fan with `j + 1` rays,
//! with the convention `f_{-1} = 1`. The h-vector engine below is the reference
//! for every closed form in this module: closed forms are evaluated and compared
//! against it, never trusted on their own.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::Fan;
use crate::invariants::{self, InvariantError, WallCurve};
use crate::lattice::{binomial, serialize_bigint, serialize_bigints};
use crate::primitive::FaceSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FVectorError {
    #[error("{quantity} evaluated to {value}, which is not a nonnegative integer")]
    NonIntegralResult { quantity: String, value: BigRational },
    #[error("{quantity}: closed form gives {closed_form}, Dehn-Sommerville engine gives {engine}")]
    FormulaDiscrepancy { quantity: String, closed_form: BigRational, engine: BigRational },
    #[error("no bound available for n = {n}, iota = {iota}")]
    RegimeUnsupported { n: usize, iota: i64 },
    #[error("dimension {0} is too small for this computation")]
    DimensionTooSmall(usize),
    #[error("bound scan for n = {n}, iota = {iota} is not monotone: admissible again at rho = {rho}")]
    NonMonotone { n: usize, iota: i64, rho: i64 },
    #[error("malformed f-vector: {0}")]
    Malformed(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FVector {
    n: usize,
    /// `f_{-1}, f_0, ..., f_{n-1}`.
    #[serde(serialize_with = "serialize_bigints")]
    f: Vec<BigInt>,
}

impl FVector {
    /// `values` lists `f_{-1}, ..., f_{n-1}`.
    pub fn new(values: Vec<BigInt>) -> Result<Self, FVectorError> {
        if values.is_empty() || !values[0].is_one() {
            return Err(FVectorError::Malformed("f_{-1} must be 1".into()));
        }
        if values.iter().any(Signed::is_negative) {
            return Err(FVectorError::Malformed("negative face count".into()));
        }
        Ok(Self { n: values.len() - 1, f: values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self, FVectorError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `f_j` for `-1 <= j`; zero above the top dimension.
    pub fn f(&self, j: i64) -> BigInt {
        usize::try_from(j + 1)
            .ok()
            .and_then(|i| self.f.get(i).cloned())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn f0(&self) -> BigInt {
        self.f(0)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.f
    }

    /// `sum_{j=0}^{n-1} (-1)^j f_j = 1 - (-1)^n`.
    pub fn euler_holds(&self) -> bool {
        let lhs: BigInt = (0..self.n as i64).map(|j| sign(j) * self.f(j)).sum();
        lhs == BigInt::one() - sign(self.n as i64)
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn c(a: i64, b: i64) -> BigInt {
    binomial(a, b)
}

fn q(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn frac(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn factorial(n: i64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn to_count(quantity: &str, v: BigRational) -> Result<BigInt, FVectorError> {
    if v.is_integer() && !v.is_negative() {
        Ok(v.to_integer())
    } else {
        Err(FVectorError::NonIntegralResult { quantity: quantity.into(), value: v })
    }
}

pub fn f_vector(fan: &Fan) -> FVector {
    let n = fan.dim();
    let counts = FaceSet::new(fan).size_counts(n);
    FVector { n, f: counts.into_iter().map(BigInt::from).collect() }
}

/// `h_i = sum_{j <= i} (-1)^{i-j} C(n-j, i-j) f_{j-1}`, for `0 <= i <= n`.
pub fn h_vector(fv: &FVector) -> Vec<BigInt> {
    h_prefix(fv.n, &fv.f, fv.n)
}

fn h_prefix(n: usize, f: &[BigInt], upto: usize) -> Vec<BigInt> {
    let n = n as i64;
    (0..=upto as i64)
        .map(|i| (0..=i).map(|j| sign(i - j) * c(n - j, i - j) * &f[j as usize]).sum())
        .collect()
}

/// Inverse of [`h_vector`]: `f_{j-1} = sum_{i <= j} C(n-i, j-i) h_i`.
pub fn f_from_h(h: &[BigInt]) -> Vec<BigInt> {
    let n = h.len() as i64 - 1;
    (0..=n)
        .map(|j| (0..=j).map(|i| c(n - i, j - i) * &h[i as usize]).sum())
        .collect()
}

pub fn is_palindromic(fv: &FVector) -> bool {
    let h = h_vector(fv);
    h.iter().eq(h.iter().rev())
}

/// Completes `f_{-1}, ..., f_{k-1}` (`k = [n/2]`) to a full f-vector by
/// imposing `h_i = h_{n-i}`. Extra entries of `lower` are ignored.
pub fn complete_from_lower(n: usize, lower: &[BigInt]) -> Result<Vec<BigInt>, FVectorError> {
    let k = n / 2;
    if lower.len() < k + 1 {
        return Err(FVectorError::Malformed(format!(
            "need f_{{-1}}..f_{{{}}}, got {} values",
            k as i64 - 1,
            lower.len()
        )));
    }
    let low = h_prefix(n, lower, k);
    let h: Vec<BigInt> = (0..=n).map(|i| low[i.min(n - i)].clone()).collect();
    Ok(f_from_h(&h))
}

/// `f_{j-1} = C(f_0, j)` for `1 <= j <= iota - 1`.
pub fn check_binomial_identities(fv: &FVector, iota: i64) -> bool {
    binomial_up_to(fv, iota - 1)
}

fn binomial_up_to(fv: &FVector, top: i64) -> bool {
    let f0 = fv.f0();
    let f0 = match i64::try_from(&f0) {
        Ok(v) => v,
        Err(_) => return false,
    };
    (1..=top).all(|j| fv.f(j - 1) == c(f0, j))
}

/// The polytope is a simplex iff `f_{j-1} = C(f_0, j)` for all `j <= [n/2] + 1`.
pub fn is_simplex_criterion(fv: &FVector) -> bool {
    binomial_up_to(fv, (fv.n / 2 + 1).min(fv.n) as i64)
}

/// Lower part `f_{-1}, ..., f_{k-1}` of a polytope whose first `k` entries are binomial in `f0`.
fn binomial_lower(f0: i64, k: usize) -> Vec<BigInt> {
    (0..=k as i64).map(|j| c(f0, j)).collect()
}

/// `f_k` for `k = [n/2]` under `f_{j-1} = C(f0, j)` for `j <= k`, by closed form.
pub fn dehn_sommerville_fk(f0: i64, n: usize) -> Result<BigInt, FVectorError> {
    if n < 2 {
        return Err(FVectorError::DimensionTooSmall(n));
    }
    to_count("f_k", fk_closed_form(f0, n))
}

fn fk_closed_form(f0: i64, n: usize) -> BigRational {
    let k = (n / 2) as i64;
    if n % 2 == 0 {
        (0..k)
            .map(|j| {
                frac(sign(k - j - 1) * (j + 1), k + 1) * q(c(2 * k - j, k) * c(f0, j + 1))
            })
            .sum()
    } else {
        (-1..k).map(|j| q(sign(k - j - 1) * c(2 * k - j + 1, k + 1) * c(f0, j + 1))).sum()
    }
}

/// `f_k` from the h-vector engine under the same hypothesis as [`dehn_sommerville_fk`].
pub fn engine_fk(f0: i64, n: usize) -> Result<BigInt, FVectorError> {
    let k = n / 2;
    let full = complete_from_lower(n, &binomial_lower(f0, k))?;
    Ok(full[k + 1].clone())
}

/// `(f_{n-2}, f_{n-3})` for `k = [n/2]` under `f_{j-1} = C(f0, j)` for `j <= k - 1`,
/// with `f_{k-1}` given, by closed form. Requires `n >= 4`.
pub fn dehn_sommerville_tail(
    f0: i64,
    f_k_minus_1: &BigInt,
    n: usize,
) -> Result<(BigInt, BigInt), FVectorError> {
    let (a, b) = tail_closed_form(f0, f_k_minus_1, n, TailVariant::Correct)?;
    Ok((to_count("f_{n-2}", a)?, to_count("f_{n-3}", b)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TailVariant {
    Correct,
    /// Even-dimensional `f_{n-3}` with `C(k, 2)` as the leading inner binomial.
    #[cfg_attr(not(test), allow(dead_code))]
    LeadingBinomialK,
}

fn tail_closed_form(
    f0: i64,
    x: &BigInt,
    n: usize,
    variant: TailVariant,
) -> Result<(BigRational, BigRational), FVectorError> {
    if n < 4 {
        return Err(FVectorError::DimensionTooSmall(n));
    }
    let k = (n / 2) as i64;
    let x = q(x.clone());
    if n % 2 == 0 {
        let lead = match variant {
            TailVariant::Correct => c(k - 1, 2),
            TailVariant::LeadingBinomialK => c(k, 2),
        };
        let a: BigRational = q(k) * &x
            + (1..k)
                .map(|j| {
                    frac(sign(j) * (k - j), k + j - 1)
                        * q(((k - 1) * c(k + j, k) + c(k + j - 1, k)) * c(f0, k - j))
                })
                .sum::<BigRational>();
        let b: BigRational = q(c(k, 2)) * &x
            + (1..k)
                .map(|j| {
                    frac(sign(j) * (k - j), k + j - 2)
                        * q((&lead * c(k + j, k) + (k - 2) * c(k + j - 1, k) + c(k + j - 2, k))
                            * c(f0, k - j))
                })
                .sum::<BigRational>();
        Ok((a, b))
    } else {
        let a: BigRational = q(2 * k + 1) * &x
            + (1..=k)
                .map(|j| {
                    frac(sign(j) * (2 * k + 1), k + j)
                        * q((k * c(k + j + 1, k + 1) + c(k + j, k + 1)) * c(f0, k - j))
                })
                .sum::<BigRational>();
        let b: BigRational = q(k * k) * &x
            + (1..=k)
                .map(|j| {
                    frac(sign(j) * 2 * k, k + j - 1)
                        * q((c(k, 2) * c(k + j + 1, k + 1)
                            + (k - 1) * c(k + j, k + 1)
                            + c(k + j - 1, k + 1))
                            * c(f0, k - j))
                })
                .sum::<BigRational>();
        Ok((a, b))
    }
}

/// `(f_{n-2}, f_{n-3})` from the h-vector engine under the same hypothesis as
/// [`dehn_sommerville_tail`].
pub fn engine_tail(
    f0: i64,
    f_k_minus_1: &BigInt,
    n: usize,
) -> Result<(BigInt, BigInt), FVectorError> {
    if n < 4 {
        return Err(FVectorError::DimensionTooSmall(n));
    }
    let k = n / 2;
    let mut lower = binomial_lower(f0, k);
    lower[k] = f_k_minus_1.clone();
    let full = complete_from_lower(n, &lower)?;
    Ok((full[n - 1].clone(), full[n - 2].clone()))
}

fn discrepancy(quantity: &str, closed: BigRational, engine: BigRational) -> Result<(), FVectorError> {
    if closed == engine {
        Ok(())
    } else {
        Err(FVectorError::FormulaDiscrepancy {
            quantity: quantity.into(),
            closed_form: closed,
            engine,
        })
    }
}

/// Compares the `f_k` closed form with the engine at `(f0, n)`.
pub fn verify_fk(f0: i64, n: usize) -> Result<BigInt, FVectorError> {
    let engine = engine_fk(f0, n)?;
    discrepancy("f_k", fk_closed_form(f0, n), q(engine.clone()))?;
    Ok(engine)
}

/// Compares both tail closed forms with the engine at `(f0, f_{k-1}, n)`.
pub fn verify_tail(f0: i64, x: &BigInt, n: usize) -> Result<(BigInt, BigInt), FVectorError> {
    verify_tail_variant(f0, x, n, TailVariant::Correct)
}

fn verify_tail_variant(
    f0: i64,
    x: &BigInt,
    n: usize,
    variant: TailVariant,
) -> Result<(BigInt, BigInt), FVectorError> {
    let (e2, e3) = engine_tail(f0, x, n)?;
    let (a, b) = tail_closed_form(f0, x, n, variant)?;
    discrepancy("f_{n-2}", a, q(e2.clone()))?;
    discrepancy("f_{n-3}", b, q(e3.clone()))?;
    Ok((e2, e3))
}

/// The upper bound `Psi_k(f0) >= f_{k-1}` in closed form, `k = [n/2] >= 2`.
pub fn psi_k(f0: i64, n: usize) -> Result<BigRational, FVectorError> {
    if n < 4 {
        return Err(FVectorError::DimensionTooSmall(n));
    }
    let k = (n / 2) as i64;
    if n % 2 == 0 {
        let head = frac(k * k * k - k * k + 12, k * k) * q(c(f0, k - 1));
        let tail: BigRational = (2..k)
            .map(|j| {
                frac(
                    sign(j - 1) * (k - j) * factorial(k + j - 3),
                    BigInt::from(k) * factorial(k) * factorial(j),
                ) * q(((k + j - 1) * (k + j - 2) * k + 12 * j) * c(f0, k - j))
            })
            .sum();
        Ok(head + tail)
    } else {
        let den = (k - 1) * (2 * k + 3);
        let head = frac(2 * k * k * k + 3 * k * k - 2 * k + 21, den) * q(c(f0, k - 1));
        let tail: BigRational = (2..=k)
            .map(|j| {
                let poly = 2 * k.pow(4) + (4 * j - 1) * k.pow(3) + 2 * (j * j - 2) * k * k
                    + (j * j + 17 * j + 3) * k
                    + 3 * j * (1 - j);
                frac(
                    sign(j - 1) * factorial(k + j - 2),
                    BigInt::from(den) * factorial(k) * factorial(j),
                ) * q(poly * c(f0, k - j))
            })
            .sum();
        Ok(head + tail)
    }
}

/// `Psi_k(f0)` obtained by substituting the engine's linear expressions
/// `f_{n-2} = A x + B`, `f_{n-3} = C x + D` (with `x = f_{k-1}`) into
/// `12 f_{n-3} >= (3n + iota - 5) f_{n-2}` at `iota = k - 1` and solving for `x`.
pub fn psi_k_eliminated(f0: i64, n: usize) -> Result<BigRational, FVectorError> {
    let k = (n / 2) as i64;
    let (b, d) = engine_tail(f0, &BigInt::zero(), n)?;
    let (a1, c1) = engine_tail(f0, &BigInt::one(), n)?;
    let (a, cc) = (&a1 - &b, &c1 - &d);
    let factor = BigInt::from(3 * n as i64 + (k - 1) - 5);
    let coef = BigInt::from(12) * cc - &factor * a;
    if !coef.is_negative() {
        return Err(FVectorError::Malformed(format!(
            "elimination coefficient {coef} is not negative for n = {n}"
        )));
    }
    Ok(BigRational::new(factor * b - BigInt::from(12) * d, coef))
}

/// Compares [`psi_k`] with [`psi_k_eliminated`].
pub fn verify_psi(f0: i64, n: usize) -> Result<BigRational, FVectorError> {
    let engine = psi_k_eliminated(f0, n)?;
    discrepancy("Psi_k", psi_k(f0, n)?, engine.clone())?;
    Ok(engine)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSumCheck {
    /// `sum over walls of (degree - 2)`.
    #[serde(serialize_with = "serialize_bigint")]
    pub d_x: BigInt,
    /// `12 f_{n-3} - 3(n-1) f_{n-2}`.
    #[serde(serialize_with = "serialize_bigint")]
    pub face_count_side: BigInt,
    pub identity_holds: bool,
    /// `12 f_{n-3} >= (3n + iota - 5) f_{n-2}`; absent for non-Fano fans.
    pub inequality_holds: Option<bool>,
}

impl DegreeSumCheck {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.inequality_holds != Some(false)
    }
}

pub fn lemma_degree_sum_check(fan: &Fan) -> Result<DegreeSumCheck, FVectorError> {
    let walls = invariants::wall_curves(fan)?;
    let iota = if invariants::is_fano(fan)? {
        Some(invariants::min_wall_degree(&walls)?)
    } else {
        None
    };
    degree_sum_from_parts(fan, &walls, &f_vector(fan), iota)
}

pub(crate) fn degree_sum_from_parts(
    fan: &Fan,
    walls: &[WallCurve],
    fv: &FVector,
    iota: Option<i64>,
) -> Result<DegreeSumCheck, FVectorError> {
    let n = fan.dim() as i64;
    if n < 2 {
        return Err(FVectorError::DimensionTooSmall(fan.dim()));
    }
    let d_x: BigInt = walls.iter().map(|w| BigInt::from(w.anticanonical_degree - 2)).sum();
    let (f2, f3) = (fv.f(n - 2), fv.f(n - 3));
    let face_count_side = BigInt::from(12) * &f3 - BigInt::from(3 * (n - 1)) * &f2;
    let inequality_holds = iota.map(|i| BigInt::from(12) * &f3 >= BigInt::from(3 * n + i - 5) * &f2);
    Ok(DegreeSumCheck { identity_holds: d_x == face_count_side, d_x, face_count_side, inequality_holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    /// `iota = [n/2]`, `4 <= n <= 7`.
    HalfDimension,
    /// `iota = [n/2] - 1`, `6 <= n <= 13`.
    BelowHalfDimension,
}

fn regime(n: usize, iota: i64) -> Result<Regime, FVectorError> {
    let k = (n / 2) as i64;
    match n {
        4..=7 if iota == k => Ok(Regime::HalfDimension),
        6..=13 if iota == k - 1 => Ok(Regime::BelowHalfDimension),
        _ => Err(FVectorError::RegimeUnsupported { n, iota }),
    }
}

/// Left side minus right side of the inequality that a non-fibred Fano fan with
/// Picard number `rho` must satisfy; the inequality holds iff the margin is `<= 0`.
///
/// With `f0 = rho + n` and `k = [n/2]` the inequality is `C(f0, k+1) - f_k <= f0/(k+1)`
/// when `iota = k`, and `C(f0, k) - f0/k - Psi_k(f0) <= 0` when `iota = k - 1`.
pub fn rho_bound_margin(n: usize, iota: i64, rho: i64) -> Result<BigRational, FVectorError> {
    let k = (n / 2) as i64;
    let f0 = rho + n as i64;
    match regime(n, iota)? {
        Regime::HalfDimension => {
            let fk = engine_fk(f0, n)?;
            Ok(q(c(f0, k + 1) - fk) - frac(f0, k + 1))
        }
        Regime::BelowHalfDimension => {
            Ok(q(c(f0, k)) - frac(f0, k) - psi_k_eliminated(f0, n)?)
        }
    }
}

const MONOTONE_WINDOW: i64 = 24;
const SCAN_LIMIT: i64 = 10_000;

/// Largest `rho` whose margin is `<= 0`, scanning `rho = 1, 2, ...` up to the first
/// violation and checking that the next few values stay violated.
pub fn max_rho_bound(n: usize, iota: i64) -> Result<i64, FVectorError> {
    regime(n, iota)?;
    let mut rho = 1;
    while rho_bound_margin(n, iota, rho)? <= BigRational::zero() {
        rho += 1;
        if rho > SCAN_LIMIT {
            return Err(FVectorError::NonMonotone { n, iota, rho });
        }
    }
    for later in rho + 1..=rho + MONOTONE_WINDOW {
        if rho_bound_margin(n, iota, later)? <= BigRational::zero() {
            return Err(FVectorError::NonMonotone { n, iota, rho: later });
        }
    }
    Ok(rho - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub n: usize,
    pub iota: i64,
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub rows: Vec<BoundEntry>,
}

impl BoundTable {
    pub fn get(&self, n: usize, iota: i64) -> Option<i64> {
        self.rows.iter().find(|e| e.n == n && e.iota == iota).map(|e| e.bound)
    }
}

/// Every `(n, iota)` pair for which [`max_rho_bound`] is defined.
pub fn bound_cells() -> Vec<(usize, i64)> {
    let half = (4..=7).map(|n| (n, (n / 2) as i64));
    let below = (6..=13).map(|n| (n, (n / 2) as i64 - 1));
    half.chain(below).collect()
}

pub fn rho_bound_table() -> Result<BoundTable, FVectorError> {
    let rows = bound_cells()
        .into_iter()
        .map(|(n, iota)| Ok(BoundEntry { n, iota, bound: max_rho_bound(n, iota)? }))
        .collect::<Result<_, FVectorError>>()?;
    Ok(BoundTable { rows })
}

/// `rho <= floor(n / (iota - 1))`, the form `rho (iota - 1) <= n` takes on each cell.
pub fn corollary_bound_table() -> BoundTable {
    let rows = bound_cells()
        .into_iter()
        .map(|(n, iota)| BoundEntry { n, iota, bound: n as i64 / (iota - 1) })
        .collect();
    BoundTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{construct_projective_space, product_of_projective};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn f_vector_examples() {
        let p3 = f_vector(&construct_projective_space(3));
        assert_eq!(p3, FVector::from_i64(&[1, 4, 6, 4]).unwrap());
        assert_eq!(f_vector(&product_of_projective(&[1, 1])), FVector::from_i64(&[1, 4, 4]).unwrap());
        assert_eq!(
            f_vector(&product_of_projective(&[1, 1, 1])),
            FVector::from_i64(&[1, 6, 12, 8]).unwrap()
        );
        assert!(p3.euler_holds());
        assert!(is_palindromic(&p3));
    }

    #[test]
    fn h_vector_round_trip() {
        let fv = f_vector(&product_of_projective(&[1, 1, 1, 1]));
        let h = h_vector(&fv);
        assert_eq!(h, [1, 4, 6, 4, 1].map(big));
        assert_eq!(f_from_h(&h), fv.entries());
        assert_eq!(complete_from_lower(4, &fv.entries()[..3]).unwrap(), fv.entries());
        // non-palindromic input is detected
        assert!(!is_palindromic(&FVector::from_i64(&[1, 5, 9, 7]).unwrap()));
    }

    #[test]
    fn binomial_identities() {
        let p3 = FVector::from_i64(&[1, 4, 6, 4]).unwrap();
        assert!(check_binomial_identities(&p3, 4));
        let sq = FVector::from_i64(&[1, 4, 4]).unwrap();
        assert!(check_binomial_identities(&sq, 2));
        let oct = FVector::from_i64(&[1, 6, 12, 8]).unwrap();
        assert!(!check_binomial_identities(&oct, 3));
    }

    #[test]
    fn simplex_criterion() {
        assert!(is_simplex_criterion(&FVector::from_i64(&[1, 5, 10, 10, 5]).unwrap()));
        assert!(!is_simplex_criterion(&FVector::from_i64(&[1, 6, 12, 8]).unwrap()));
        assert!(!is_simplex_criterion(&FVector::from_i64(&[1, 8, 24, 32, 16]).unwrap()));
    }

    #[test]
    fn fk_examples() {
        assert_eq!(dehn_sommerville_fk(5, 4).unwrap(), big(10));
        assert_eq!(dehn_sommerville_fk(6, 5).unwrap(), big(20));
        assert_eq!(dehn_sommerville_fk(7, 6).unwrap(), big(35));
        for n in 4..=13usize {
            let f0 = n as i64 + 1;
            assert_eq!(verify_fk(f0, n).unwrap(), c(f0, (n / 2) as i64 + 1));
        }
    }

    #[test]
    fn tail_examples() {
        assert_eq!(dehn_sommerville_tail(7, &big(35), 6).unwrap(), (big(21), big(35)));
        assert_eq!(dehn_sommerville_tail(8, &big(56), 7).unwrap(), (big(28), big(56)));
        for n in 4..=13usize {
            let (f0, k) = (n as i64 + 1, (n / 2) as i64);
            let want = (c(f0, n as i64 - 1), c(f0, n as i64 - 2));
            assert_eq!(verify_tail(f0, &c(f0, k), n).unwrap(), want);
        }
    }

    #[test]
    fn inner_binomial_must_be_k_minus_1_choose_2() {
        let r = verify_tail_variant(7, &big(35), 6, TailVariant::LeadingBinomialK);
        match r {
            Err(FVectorError::FormulaDiscrepancy { quantity, closed_form, engine }) => {
                assert_eq!(quantity, "f_{n-3}");
                assert_eq!(engine, q(35));
                assert_eq!(closed_form, frac(-259, 3));
            }
            other => panic!("expected a discrepancy, got {other:?}"),
        }
        // odd dimensions are unaffected
        assert!(verify_tail_variant(8, &big(56), 7, TailVariant::LeadingBinomialK).is_ok());
    }

    #[test]
    fn closed_forms_agree_with_engine_on_a_grid() {
        for n in 4..=13usize {
            for f0 in n as i64 + 1..n as i64 + 10 {
                verify_fk(f0, n).unwrap();
                for x in [0, 1, 7, 100] {
                    verify_tail(f0, &big(x), n).unwrap();
                }
                if n >= 6 {
                    verify_psi(f0, n).unwrap();
                }
            }
        }
    }

    #[test]
    fn psi_pinned_values() {
        assert_eq!(psi_k_eliminated(9, 6).unwrap(), q(90));
        assert_eq!(psi_k(9, 6).unwrap(), q(90));
        assert_eq!(psi_k_eliminated(10, 7).unwrap(), q(128));
        assert_eq!(psi_k(10, 7).unwrap(), q(128));
    }

    #[test]
    fn degree_sum_examples() {
        let r = lemma_degree_sum_check(&construct_projective_space(3)).unwrap();
        assert_eq!((r.d_x.clone(), r.face_count_side.clone()), (big(12), big(12)));
        assert!(r.passed());
        let r = lemma_degree_sum_check(&construct_projective_space(2)).unwrap();
        assert_eq!((r.d_x.clone(), r.face_count_side.clone()), (big(3), big(3)));
        let r = lemma_degree_sum_check(&product_of_projective(&[1, 1, 1])).unwrap();
        assert_eq!((r.d_x.clone(), r.face_count_side.clone()), (big(0), big(0)));
        assert_eq!(r.inequality_holds, Some(true));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(max_rho_bound(4, 2).unwrap(), 2);
        assert_eq!(max_rho_bound(6, 2).unwrap(), 4);
        assert_eq!(max_rho_bound(10, 4).unwrap(), 2);
        assert_eq!(rho_bound_margin(6, 2, 4).unwrap(), BigRational::zero());
        assert!(matches!(max_rho_bound(5, 1), Err(FVectorError::RegimeUnsupported { .. })));
        assert!(matches!(max_rho_bound(14, 6), Err(FVectorError::RegimeUnsupported { .. })));
    }

    #[test]
    fn mukai_bound_examples() {
        let t = corollary_bound_table();
        assert_eq!(t.get(4, 2), Some(4));
        assert_eq!(t.get(5, 2), Some(5));
        assert_eq!(t.get(13, 5), Some(3));
        let bounds = rho_bound_table().unwrap();
        for e in &bounds.rows {
            assert!(e.bound <= t.get(e.n, e.iota).unwrap());
        }
    }
}
