//! Primitive collections and primitive relations.
//!
//! A primitive collection is a minimal set of rays that does not span a cone.
//! For a collection `{x_1, ..., x_h}` its relation is the unique identity
//! `x_1 + ... + x_h = a_1 y_1 + ... + a_k y_k` with `y_i` spanning the
//! smallest cone that contains the sum; its degree is `h - sum(a_i)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{Fan, PointLocator, RaySet};
use crate::lattice::serialize_bigints;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("{0} is not a primitive collection")]
    NotPrimitive(RaySet),
    #[error("sum of {0} lies in no maximal cone")]
    NotInSupport(RaySet),
    #[error("relation of {0} has a non-integral coefficient; the fan is not smooth")]
    NonIntegralCoefficient(RaySet),
    #[error("relation of {0} is inconsistent: {1}")]
    Inconsistent(RaySet, String),
}

pub type PrimitiveCollection = RaySet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    /// Rays `y_i` of the minimal cone containing the sum; empty for zero-sum relations.
    pub targets: RaySet,
    /// Positive coefficients `a_i`, aligned with `targets.iter()`.
    #[serde(serialize_with = "serialize_bigints")]
    pub coefficients: Vec<BigInt>,
    pub order: usize,
    pub degree: i64,
    /// +1 on the collection, `-a_i` on the targets, 0 elsewhere.
    #[serde(serialize_with = "serialize_bigints")]
    pub class_vector: Vec<BigInt>,
}

impl PrimitiveRelation {
    pub fn is_zero_sum(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Every face of the fan as a bitmask, for constant-time face tests.
pub(crate) struct FaceSet(HashSet<u128>);

impl FaceSet {
    pub(crate) fn new(fan: &Fan) -> Self {
        let mut set = HashSet::new();
        for c in fan.max_cones() {
            // enumerate all submasks of the cone
            let bits = c.bits();
            let mut sub = bits;
            loop {
                set.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & bits;
            }
        }
        Self(set)
    }

    pub(crate) fn contains(&self, s: RaySet) -> bool {
        self.0.contains(&s.bits())
    }

    fn of_size(&self, k: usize) -> Vec<RaySet> {
        let mut v: Vec<RaySet> = self
            .0
            .iter()
            .filter(|b| b.count_ones() as usize == k)
            .map(|&b| RaySet::from_bits(b))
            .collect();
        v.sort();
        v
    }

    /// Number of faces with `0..=max` rays.
    pub(crate) fn size_counts(&self, max: usize) -> Vec<usize> {
        let mut counts = vec![0; max + 1];
        for b in &self.0 {
            if let Some(c) = counts.get_mut(b.count_ones() as usize) {
                *c += 1;
            }
        }
        counts
    }

    fn is_primitive(&self, s: RaySet) -> bool {
        !self.contains(s) && s.iter().all(|x| self.contains(s.without(x)))
    }
}

pub fn primitive_collections(fan: &Fan) -> Vec<PrimitiveCollection> {
    primitive_collections_with(fan, Execution::default())
}

/// Primitive collections ordered by size, then lexicographically.
///
/// Every proper subset of a primitive collection is a face, so collections of
/// size `s` are found by extending faces of size `s - 1` by a larger ray index.
/// Sizes range over `2..=dim + 1`; each stratum is processed in parallel.
pub fn primitive_collections_with(fan: &Fan, exec: Execution) -> Vec<PrimitiveCollection> {
    let faces = FaceSet::new(fan);
    let m = fan.num_rays();
    let mut out = Vec::new();
    for size in 2..=fan.dim() + 1 {
        let layer = faces.of_size(size - 1);
        let mut found = par::flat_map(exec, &layer, |&f| {
            let start = f.max_index().map_or(0, |i| i + 1);
            (start..m)
                .map(|u| f.with(u))
                .filter(|&s| faces.is_primitive(s))
                .collect()
        });
        found.sort();
        out.extend(found);
    }
    out
}

pub fn primitive_relation(
    fan: &Fan,
    collection: PrimitiveCollection,
) -> Result<PrimitiveRelation, PrimitiveError> {
    let faces = FaceSet::new(fan);
    if !faces.is_primitive(collection) {
        return Err(PrimitiveError::NotPrimitive(collection));
    }
    relation_unchecked(fan, &PointLocator::new(fan), collection)
}

/// Relations of all primitive collections, in collection order.
pub fn primitive_relations(fan: &Fan) -> Result<Vec<PrimitiveRelation>, PrimitiveError> {
    primitive_relations_with(fan, Execution::default())
}

pub fn primitive_relations_with(
    fan: &Fan,
    exec: Execution,
) -> Result<Vec<PrimitiveRelation>, PrimitiveError> {
    let collections = primitive_collections_with(fan, exec);
    let locator = PointLocator::new(fan);
    par::try_map(exec, &collections, |&p| relation_unchecked(fan, &locator, p))
}

fn relation_unchecked(
    fan: &Fan,
    locator: &PointLocator<'_>,
    collection: RaySet,
) -> Result<PrimitiveRelation, PrimitiveError> {
    let m = fan.num_rays();
    let order = collection.len();
    let sum = fan.ray_sum(collection);
    let mut class_vector = vec![BigInt::zero(); m];
    for x in collection.iter() {
        class_vector[x] = BigInt::from(1);
    }
    let mut targets = RaySet::EMPTY;
    let mut coefficients = Vec::new();
    if !sum.is_zero() {
        let (cone, coords) =
            locator.locate(&sum).ok_or(PrimitiveError::NotInSupport(collection))?;
        for (y, a) in fan.max_cones()[cone].iter().zip(coords) {
            if a.is_zero() {
                continue;
            }
            if !a.is_integer() {
                return Err(PrimitiveError::NonIntegralCoefficient(collection));
            }
            if collection.contains(y) {
                return Err(PrimitiveError::Inconsistent(
                    collection,
                    format!("ray {y} is both in the collection and the target cone"),
                ));
            }
            let a = a.to_integer();
            debug_assert!(a.is_positive());
            class_vector[y] = -&a;
            targets = targets.with(y);
            coefficients.push(a);
        }
    }
    let total: BigInt = coefficients.iter().sum();
    let degree = (BigInt::from(order) - total).to_i64().ok_or_else(|| {
        PrimitiveError::Inconsistent(collection, "degree does not fit in 64 bits".into())
    })?;
    Ok(PrimitiveRelation { collection, targets, coefficients, order, degree, class_vector })
}

/// Sorted multiset of `(order, degree)` over all primitive relations.
pub fn degrees_summary(fan: &Fan) -> Result<Vec<(usize, i64)>, PrimitiveError> {
    let mut v: Vec<(usize, i64)> =
        primitive_relations(fan)?.iter().map(|r| (r.order, r.degree)).collect();
    v.sort();
    Ok(v)
}
