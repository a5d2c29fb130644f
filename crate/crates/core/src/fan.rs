//! Smooth complete fans: the combinatorial model of a smooth toric variety.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    determinant, quotient_lattice_projection, rational_inverse, IntegerMatrix, LatticeError,
    LatticeVector,
};

/// Ray sets are stored as bitmasks, which caps a fan at this many rays.
pub const MAX_RAYS: usize = 128;

/// Seed used by the generic-direction completeness check unless overridden.
pub const DEFAULT_SEED: u64 = 0x5eed_7071_c0de;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("malformed fan: {0}")]
    Structural(String),
    #[error("fan has {0} rays; at most {MAX_RAYS} are supported")]
    TooManyRays(usize),
    #[error("dimension {requested} out of range 0..={max}")]
    DimensionOutOfRange { requested: usize, max: usize },
    #[error("ray set {0} is not a cone of the fan")]
    NotACone(RaySet),
    #[error("cone {0} is too small for this operation")]
    ConeTooSmall(RaySet),
    #[error("projection of ray {0} vanished in the quotient lattice")]
    DegenerateProjection(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A set of ray indices. Iteration is in increasing index order, and the ordering
/// is lexicographic on the sorted index sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RaySet(u128);

/// A cone of a fan, named by the indices of its generating rays.
pub type ConeRef = RaySet;

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn from_bits(bits: u128) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        Self(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RAYS && self.0 & (1u128 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        Self(self.0 | (1u128 << i))
    }

    pub fn without(self, i: usize) -> Self {
        Self(self.0 & !(1u128 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of exactly `size` elements, in lexicographic order.
    pub fn subsets_of_size(self, size: usize) -> Vec<RaySet> {
        let elems = self.to_vec();
        let mut out = Vec::new();
        if size > elems.len() {
            return out;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| elems[i]).collect());
            // advance combination
            let mut pos = size;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] < elems.len() - size + pos {
                    idx[pos] += 1;
                    for p in pos + 1..size {
                        idx[p] = idx[p - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl FromIterator<usize> for RaySet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(RaySet::EMPTY, RaySet::with)
    }
}

impl Ord for RaySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for RaySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for RaySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RaySet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&i) = v.iter().find(|&&i| i >= MAX_RAYS) {
            return Err(serde::de::Error::custom(format!("ray index {i} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

/// A simplicial fan given by primitive ray generators and maximal cones.
///
/// Construction only checks structure (arity, index ranges). Mathematical
/// validity is reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<RaySet>,
}

impl Fan {
    pub fn new(
        dim: usize,
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        if rays.len() > MAX_RAYS {
            return Err(FanError::TooManyRays(rays.len()));
        }
        if let Some((i, r)) = rays.iter().enumerate().find(|(_, r)| r.dim() != dim) {
            return Err(FanError::Structural(format!(
                "ray {i} has {} coordinates, expected {dim}",
                r.dim()
            )));
        }
        let mut max_cones = Vec::with_capacity(cones.len());
        for (c, cone) in cones.iter().enumerate() {
            if cone.len() != dim {
                return Err(FanError::Structural(format!(
                    "cone {c} has {} rays, expected {dim}",
                    cone.len()
                )));
            }
            if let Some(&i) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::Structural(format!("cone {c} references missing ray {i}")));
            }
            let set: RaySet = cone.iter().copied().collect();
            if set.len() != dim {
                return Err(FanError::Structural(format!("cone {c} repeats a ray")));
            }
            max_cones.push(set);
        }
        max_cones.sort();
        Ok(Self { dim, rays, max_cones })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self, FanError> {
        Self::new(
            dim,
            rays.iter().map(|r| LatticeVector::from(*r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[RaySet] {
        &self.max_cones
    }

    pub fn all_rays(&self) -> RaySet {
        (0..self.rays.len()).collect()
    }

    /// The `dim x rays` matrix with ray generators as columns.
    pub fn ray_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_columns(&self.rays, self.dim)
    }

    pub fn cone_generators(&self, cone: RaySet) -> Vec<LatticeVector> {
        cone.iter().map(|i| self.rays[i].clone()).collect()
    }

    /// Whether the ray set spans a cone of the fan, i.e. lies in some maximal cone.
    pub fn is_face(&self, set: RaySet) -> bool {
        self.max_cones.iter().any(|&c| set.is_subset(c))
    }

    pub fn max_cones_containing(&self, set: RaySet) -> impl Iterator<Item = RaySet> + '_ {
        self.max_cones.iter().copied().filter(move |c| set.is_subset(*c))
    }

    /// Sum of the generators indexed by `set`.
    pub fn ray_sum(&self, set: RaySet) -> LatticeVector {
        LatticeVector::sum(self.dim, set.iter().map(|i| &self.rays[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Primitivity,
    Distinctness,
    Smoothness,
    FacetPairing,
    RayCoverage,
    GenericPoint,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Primitivity => "primitivity",
            Check::Distinctness => "distinctness",
            Check::Smoothness => "smoothness",
            Check::FacetPairing => "completeness",
            Check::RayCoverage => "ray_coverage",
            Check::GenericPoint => "generic_point",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self, check: Check) -> bool {
        self.checks.iter().any(|c| c.check == check && c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<14} {}", c.check.name(), if c.passed { "pass" } else { "FAIL" })?;
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub seed: u64,
    pub trials: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, trials: 12 }
    }
}

/// Exact point location over the maximal cones of a fan.
///
/// Each nonsingular maximal cone stores `adj = det * B^{-1}`, so the
/// coordinates of `x` in the cone basis are `adj * x / det`.
pub struct PointLocator<'a> {
    fan: &'a Fan,
    inverses: Vec<Option<(IntegerMatrix, BigInt)>>,
}

impl<'a> PointLocator<'a> {
    pub fn new(fan: &'a Fan) -> Self {
        let inverses = fan
            .max_cones
            .iter()
            .map(|&c| {
                let b = IntegerMatrix::from_columns(&fan.cone_generators(c), fan.dim);
                let det = determinant(&b).ok()?;
                if det.is_zero() {
                    return None;
                }
                let inv = rational_inverse(&b).ok()?;
                let detq = BigRational::from_integer(det.clone());
                let mut adj = IntegerMatrix::zeros(fan.dim, fan.dim);
                for (r, row) in inv.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        adj.set(r, c, (x * &detq).to_integer());
                    }
                }
                Some((adj, det))
            })
            .collect();
        Self { fan, inverses }
    }

    /// Coordinates of `x` in the basis of maximal cone number `cone`, ordered by ray index.
    pub fn coordinates(&self, cone: usize, x: &LatticeVector) -> Option<Vec<BigRational>> {
        let (adj, det) = self.inverses[cone].as_ref()?;
        Some(
            adj.mul_vec(x)
                .into_coords()
                .into_iter()
                .map(|c| BigRational::new(c, det.clone()))
                .collect(),
        )
    }

    /// First maximal cone (in canonical order) containing `x`, with its coordinates.
    pub fn locate(&self, x: &LatticeVector) -> Option<(usize, Vec<BigRational>)> {
        (0..self.fan.max_cones.len()).find_map(|c| {
            let coords = self.coordinates(c, x)?;
            coords.iter().all(|q| !q.is_negative()).then_some((c, coords))
        })
    }

    /// Number of maximal cones containing `x`, and whether `x` lies on a proper face of any of them.
    fn containment(&self, x: &LatticeVector) -> (usize, bool) {
        let mut count = 0;
        let mut boundary = false;
        for c in 0..self.fan.max_cones.len() {
            if let Some(coords) = self.coordinates(c, x) {
                if coords.iter().all(|q| !q.is_negative()) {
                    count += 1;
                    boundary |= coords.iter().any(Zero::is_zero);
                }
            }
        }
        (count, boundary)
    }
}

pub fn validate(fan: &Fan) -> ValidationReport {
    validate_with(fan, ValidationOptions::default())
}

pub fn validate_with(fan: &Fan, opts: ValidationOptions) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |check, bad: Vec<String>| {
        checks.push(CheckOutcome {
            check,
            passed: bad.is_empty(),
            detail: (!bad.is_empty()).then(|| bad.join("; ")),
        })
    };

    push(
        Check::Primitivity,
        fan.rays
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_primitive())
            .map(|(i, r)| format!("ray {i} {r} is not primitive"))
            .collect(),
    );

    let mut seen: HashMap<&LatticeVector, usize> = HashMap::new();
    let mut dups = Vec::new();
    for (i, r) in fan.rays.iter().enumerate() {
        if let Some(j) = seen.insert(r, i) {
            dups.push(format!("rays {j} and {i} coincide"));
        }
    }
    push(Check::Distinctness, dups);

    let mut singular = Vec::new();
    for &c in &fan.max_cones {
        let m = IntegerMatrix::from_columns(&fan.cone_generators(c), fan.dim);
        let d = determinant(&m).expect("square by construction");
        if !d.abs().is_one() {
            singular.push(format!("cone {c} has determinant {d}"));
        }
    }
    let smooth = singular.is_empty();
    push(Check::Smoothness, singular);

    let mut facet_count: HashMap<RaySet, usize> = HashMap::new();
    for &c in &fan.max_cones {
        for i in c.iter() {
            *facet_count.entry(c.without(i)).or_default() += 1;
        }
    }
    let mut unpaired: Vec<(RaySet, usize)> =
        facet_count.into_iter().filter(|&(_, k)| k != 2).collect();
    unpaired.sort();
    push(
        Check::FacetPairing,
        unpaired
            .iter()
            .map(|(f, k)| format!("facet {f} lies in {k} maximal cone(s)"))
            .collect(),
    );

    let covered = fan.max_cones.iter().fold(RaySet::EMPTY, |a, &c| a.union(c));
    push(
        Check::RayCoverage,
        fan.all_rays()
            .difference(covered)
            .iter()
            .map(|i| format!("ray {i} is in no maximal cone"))
            .collect(),
    );

    let generic = if smooth {
        generic_point_failures(fan, opts)
    } else {
        vec!["skipped: fan is not smooth".to_string()]
    };
    push(Check::GenericPoint, generic);

    ValidationReport { checks }
}

fn generic_point_failures(fan: &Fan, opts: ValidationOptions) -> Vec<String> {
    const SPREAD: i64 = 1_000_000_000;
    let locator = PointLocator::new(fan);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut bad = Vec::new();
    for trial in 0..opts.trials {
        // Resample a few times if the direction lands on a lower-dimensional cone.
        let mut verdict = None;
        for _ in 0..8 {
            let x: LatticeVector =
                (0..fan.dim).map(|_| rng.gen_range(-SPREAD..=SPREAD)).collect::<Vec<i64>>().into();
            let (count, boundary) = locator.containment(&x);
            if boundary && count > 0 {
                continue;
            }
            verdict = Some((x, count));
            break;
        }
        if let Some((x, count)) = verdict {
            if count != 1 {
                bad.push(format!("trial {trial}: direction {x} lies in {count} maximal cones"));
            }
        }
    }
    bad
}

/// All `j`-dimensional cones, canonically sorted. `faces(fan, 0)` is the empty cone.
pub fn faces(fan: &Fan, j: usize) -> Result<Vec<ConeRef>, FanError> {
    if j > fan.dim {
        return Err(FanError::DimensionOutOfRange { requested: j, max: fan.dim });
    }
    let set: BTreeSet<RaySet> =
        fan.max_cones.iter().flat_map(|c| c.subsets_of_size(j)).collect();
    Ok(set.into_iter().collect())
}

/// Fan of `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`, maximal cones all `n`-subsets.
pub fn construct_projective_space(n: usize) -> Fan {
    assert!(n >= 1, "projective space needs n >= 1");
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    rays.push(LatticeVector::from(vec![-1; n]));
    let all: RaySet = (0..=n).collect();
    let cones = all.subsets_of_size(n).into_iter().map(RaySet::to_vec).collect();
    Fan::new(n, rays, cones).expect("well-formed")
}

/// Product fan: rays of `a` padded with zeros, then rays of `b` shifted into the new coordinates.
pub fn construct_product(a: &Fan, b: &Fan) -> Result<Fan, FanError> {
    let za = LatticeVector::zero(a.dim);
    let zb = LatticeVector::zero(b.dim);
    let rays: Vec<LatticeVector> = a
        .rays
        .iter()
        .map(|r| r.concat(&zb))
        .chain(b.rays.iter().map(|r| za.concat(r)))
        .collect();
    let shift = a.num_rays();
    let mut cones = Vec::with_capacity(a.max_cones.len() * b.max_cones.len());
    for ca in &a.max_cones {
        for cb in &b.max_cones {
            cones.push(ca.iter().chain(cb.iter().map(|i| i + shift)).collect());
        }
    }
    Fan::new(a.dim + b.dim, rays, cones)
}

/// Product of projective spaces of the given dimensions, in order.
pub fn product_of_projective(dims: &[usize]) -> Fan {
    let mut it = dims.iter();
    let first = *it.next().expect("at least one factor");
    it.fold(construct_projective_space(first), |acc, &d| {
        construct_product(&acc, &construct_projective_space(d)).expect("product of valid fans")
    })
}

/// Star subdivision at `sigma`: the new ray is the sum of the generators of `sigma`.
pub fn star_subdivision(fan: &Fan, sigma: ConeRef) -> Result<Fan, FanError> {
    if !fan.is_face(sigma) {
        return Err(FanError::NotACone(sigma));
    }
    if sigma.len() < 2 {
        return Err(FanError::ConeTooSmall(sigma));
    }
    let new_ray = fan.ray_sum(sigma).primitive_part();
    let r = fan.num_rays();
    let mut rays = fan.rays.clone();
    rays.push(new_ray);
    let mut cones = Vec::new();
    for &c in &fan.max_cones {
        if sigma.is_subset(c) {
            for s in sigma.iter() {
                cones.push(c.without(s).with(r).to_vec());
            }
        } else {
            cones.push(c.to_vec());
        }
    }
    Fan::new(fan.dim, rays, cones)
}

/// Fan of an invariant subvariety together with the origin of each of its rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientFan {
    pub fan: Fan,
    /// `ray_origin[i]` is the index in the parent fan of the ray projecting to ray `i`.
    pub ray_origin: Vec<usize>,
}

/// Fan of the orbit closure `V(sigma)`, living in `N / span(sigma)`.
pub fn invariant_subvariety_fan(fan: &Fan, sigma: ConeRef) -> Result<QuotientFan, FanError> {
    if !fan.is_face(sigma) {
        return Err(FanError::NotACone(sigma));
    }
    if sigma.is_empty() {
        return Err(FanError::ConeTooSmall(sigma));
    }
    if sigma.len() >= fan.dim {
        return Err(FanError::DimensionOutOfRange { requested: sigma.len(), max: fan.dim - 1 });
    }
    let q = quotient_lattice_projection(&fan.cone_generators(sigma), fan.dim)?;
    let star: Vec<RaySet> = fan.max_cones_containing(sigma).collect();
    let link = star.iter().fold(RaySet::EMPTY, |a, &c| a.union(c)).difference(sigma);
    let ray_origin = link.to_vec();
    let mut rays = Vec::with_capacity(ray_origin.len());
    for &u in &ray_origin {
        let p = q.mul_vec(&fan.rays[u]);
        if p.is_zero() {
            return Err(FanError::DegenerateProjection(u));
        }
        rays.push(p.primitive_part());
    }
    let new_index: HashMap<usize, usize> =
        ray_origin.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let cones = star
        .iter()
        .map(|c| c.difference(sigma).iter().map(|u| new_index[&u]).collect())
        .collect();
    let quotient = Fan::new(fan.dim - sigma.len(), rays, cones)?;
    Ok(QuotientFan { fan: quotient, ray_origin })
}
