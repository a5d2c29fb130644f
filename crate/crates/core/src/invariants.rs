//! Fano test, Picard number, pseudo-index, Mori cone and the Mukai inequality.
//!
//! Torus-invariant curves correspond to walls, the codimension-one cones
//! shared by two maximal cones. If the wall `w` completes to maximal cones
//! with the extra rays `u` and `v`, smoothness gives a unique integral
//! identity `u + v = sum c_i x_i` over the rays of `w`, and the curve has
//! anticanonical degree `2 - sum c_i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{ConeRef, Fan, PointLocator, RaySet};
use crate::fvector::f_vector;
use crate::lattice::{binomial, rank, serialize_bigints, IntegerMatrix, LatticeVector};
use crate::par::{self, Execution};
use crate::primitive::{
    primitive_collections_with, primitive_relations_with, PrimitiveError, PrimitiveRelation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("wall {0} does not lie in exactly two maximal cones")]
    UnpairedWall(RaySet),
    #[error("wall {0} has a non-integral relation; the fan is not smooth")]
    SingularWall(RaySet),
    #[error("the fan is not Fano")]
    NotFano,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallCurve {
    pub wall: ConeRef,
    pub opposite_rays: (usize, usize),
    /// +1 on `u` and `v`, `-c_i` on the wall rays, 0 elsewhere.
    #[serde(serialize_with = "serialize_bigints")]
    pub relation: Vec<BigInt>,
    pub anticanonical_degree: i64,
}

pub fn picard_number(fan: &Fan) -> usize {
    fan.num_rays() - fan.dim()
}

pub fn is_fano(fan: &Fan) -> Result<bool, InvariantError> {
    is_fano_with(fan, Execution::default())
}

pub fn is_fano_with(fan: &Fan, exec: Execution) -> Result<bool, InvariantError> {
    Ok(primitive_relations_with(fan, exec)?.iter().all(|r| r.degree >= 1))
}

pub fn wall_curves(fan: &Fan) -> Result<Vec<WallCurve>, InvariantError> {
    wall_curves_with(fan, Execution::default())
}

/// One curve per wall, in canonical wall order.
pub fn wall_curves_with(fan: &Fan, exec: Execution) -> Result<Vec<WallCurve>, InvariantError> {
    let mut adjacency: HashMap<RaySet, Vec<(usize, usize)>> = HashMap::new();
    for (idx, &cone) in fan.max_cones().iter().enumerate() {
        for u in cone.iter() {
            adjacency.entry(cone.without(u)).or_default().push((idx, u));
        }
    }
    let mut walls: Vec<(RaySet, Vec<(usize, usize)>)> = adjacency.into_iter().collect();
    walls.sort_by_key(|(w, _)| *w);
    let locator = PointLocator::new(fan);
    par::try_map(exec, &walls, |(wall, sides)| match sides.as_slice() {
        [(cone, u), (_, v)] => wall_curve(fan, &locator, *wall, *cone, *u, *v),
        _ => Err(InvariantError::UnpairedWall(*wall)),
    })
}

fn wall_curve(
    fan: &Fan,
    locator: &PointLocator<'_>,
    wall: RaySet,
    cone: usize,
    u: usize,
    v: usize,
) -> Result<WallCurve, InvariantError> {
    let (u, v) = (u.min(v), u.max(v));
    let coords = locator
        .coordinates(cone, &fan.ray(u).add(fan.ray(v)))
        .ok_or(InvariantError::SingularWall(wall))?;
    let mut relation = vec![BigInt::zero(); fan.num_rays()];
    relation[u] = BigInt::one();
    relation[v] = BigInt::one();
    let mut sum = BigInt::zero();
    for (x, c) in fan.max_cones()[cone].iter().zip(coords) {
        if !c.is_integer() {
            return Err(InvariantError::SingularWall(wall));
        }
        let c = c.to_integer();
        if wall.contains(x) {
            sum += &c;
            relation[x] = -c;
        } else if !c.is_zero() {
            // u + v has no component along the ray off the wall
            return Err(InvariantError::SingularWall(wall));
        }
    }
    let anticanonical_degree = (BigInt::from(2) - sum)
        .to_i64()
        .ok_or_else(|| InvariantError::InternalInconsistency("wall degree overflow".into()))?;
    Ok(WallCurve { wall, opposite_rays: (u, v), relation, anticanonical_degree })
}

pub fn pseudo_index(fan: &Fan) -> Result<i64, InvariantError> {
    pseudo_index_with(fan, Execution::default())
}

pub fn pseudo_index_with(fan: &Fan, exec: Execution) -> Result<i64, InvariantError> {
    if !is_fano_with(fan, exec)? {
        return Err(InvariantError::NotFano);
    }
    min_wall_degree(&wall_curves_with(fan, exec)?)
}

pub(crate) fn min_wall_degree(walls: &[WallCurve]) -> Result<i64, InvariantError> {
    walls
        .iter()
        .map(|w| w.anticanonical_degree)
        .min()
        .ok_or_else(|| InvariantError::InternalInconsistency("fan has no walls".into()))
}

fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of the polyhedral cone `{ y : g . y >= 0 for all g }` by double description.
///
/// Returns `None` when the constraint rows do not span the space, i.e. when the
/// generated cone is not full-dimensional.
pub(crate) fn dual_extreme_rays(
    constraints: &[Vec<BigInt>],
    d: usize,
    exec: Execution,
) -> Option<Vec<Vec<BigInt>>> {
    // start from d independent constraints; their cone is simplicial
    let mut basis: Vec<usize> = Vec::new();
    for (i, g) in constraints.iter().enumerate() {
        let mut rows: Vec<LatticeVector> =
            basis.iter().map(|&j| LatticeVector::new(constraints[j].clone())).collect();
        rows.push(LatticeVector::new(g.clone()));
        if rank(&IntegerMatrix::from_rows(&rows, d)) == rows.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return None;
    }
    let rows: Vec<LatticeVector> =
        basis.iter().map(|&j| LatticeVector::new(constraints[j].clone())).collect();
    let inv = crate::lattice::rational_inverse(&IntegerMatrix::from_rows(&rows, d)).ok()?;
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|c| {
            let col: Vec<_> = (0..d).map(|r| inv[r][c].clone()).collect();
            let den = col.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let ints: Vec<BigInt> = col.iter().map(|q| (q * &den).to_integer()).collect();
            primitive_int(&ints)
        })
        .collect();
    let mut processed: Vec<usize> = basis.clone();

    for (h, g) in constraints.iter().enumerate() {
        if basis.contains(&h) {
            continue;
        }
        let values: Vec<BigInt> = par::map(exec, &rays, |r| dot(g, r));
        if values.iter().all(|s| !s.is_negative()) {
            processed.push(h);
            continue;
        }
        let tight: Vec<Vec<bool>> = par::map(exec, &rays, |r| {
            processed.iter().map(|&j| dot(&constraints[j], r).is_zero()).collect()
        });
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let pairs: Vec<(usize, usize)> =
            pos.iter().flat_map(|&p| neg.iter().map(move |&q| (p, q))).collect();
        let created = par::flat_map(exec, &pairs, |&(p, q)| {
            let common: Vec<bool> =
                tight[p].iter().zip(&tight[q]).map(|(a, b)| *a && *b).collect();
            if common.iter().filter(|&&t| t).count() + 2 < d {
                return Vec::new();
            }
            let adjacent = (0..rays.len()).all(|r| {
                r == p || r == q || common.iter().zip(&tight[r]).any(|(c, t)| *c && !*t)
            });
            if !adjacent {
                return Vec::new();
            }
            let (sp, sq) = (&values[p], &values[q]);
            let combined: Vec<BigInt> =
                rays[q].iter().zip(&rays[p]).map(|(yq, yp)| sp * yq - sq * yp).collect();
            vec![primitive_int(&combined)]
        });
        let mut next: Vec<Vec<BigInt>> = (0..rays.len())
            .filter(|&i| !values[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        next.extend(created);
        next.sort();
        next.dedup();
        rays = next;
        processed.push(h);
    }
    Some(rays)
}

/// Extreme rays of the cone generated by `generators` in `Z^d`, as primitive vectors.
///
/// A generator is extremal when the facets of the cone through it have rank `d - 1`.
pub(crate) fn extreme_generators(
    generators: &[Vec<BigInt>],
    d: usize,
    exec: Execution,
) -> Vec<Vec<BigInt>> {
    let mut dirs: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .map(|g| primitive_int(g))
        .collect();
    dirs.sort();
    dirs.dedup();
    if d <= 1 {
        return dirs;
    }
    let Some(facets) = dual_extreme_rays(&dirs, d, exec) else {
        return Vec::new();
    };
    dirs.into_iter()
        .filter(|g| {
            let tight: Vec<LatticeVector> = facets
                .iter()
                .filter(|f| dot(g, f).is_zero())
                .map(|f| LatticeVector::new(f.clone()))
                .collect();
            !tight.is_empty() && rank(&IntegerMatrix::from_rows(&tight, d)) == d - 1
        })
        .collect()
}

/// Rays off the first maximal cone; relations are determined by their entries there.
fn relation_coordinates(fan: &Fan) -> Vec<usize> {
    let base = fan.max_cones().first().copied().unwrap_or(RaySet::EMPTY);
    (0..fan.num_rays()).filter(|&i| !base.contains(i)).collect()
}

pub fn mori_cone_extremal_classes(fan: &Fan) -> Result<Vec<Vec<BigInt>>, InvariantError> {
    mori_cone_extremal_classes_with(fan, Execution::default())
}

/// Primitive integer class vectors (over all rays) spanning the extremal rays of the
/// cone of curves, sorted lexicographically.
///
/// The relation lattice is identified with `Z^rho` through the entries on the rays
/// outside one maximal cone; that cone's rays form a lattice basis, so the
/// identification is an isomorphism. A complete fan whose cone of curves is not
/// pointed yields an empty list.
pub fn mori_cone_extremal_classes_with(
    fan: &Fan,
    exec: Execution,
) -> Result<Vec<Vec<BigInt>>, InvariantError> {
    let walls = wall_curves_with(fan, exec)?;
    Ok(extremal_classes_from_walls(fan, &walls, exec))
}

pub(crate) fn extremal_classes_from_walls(
    fan: &Fan,
    walls: &[WallCurve],
    exec: Execution,
) -> Vec<Vec<BigInt>> {
    let coords = relation_coordinates(fan);
    let mut by_projection: HashMap<Vec<BigInt>, Vec<BigInt>> = HashMap::new();
    let mut projected = Vec::new();
    for w in walls {
        let class = primitive_int(&w.relation);
        let p: Vec<BigInt> = coords.iter().map(|&i| class[i].clone()).collect();
        by_projection.entry(p.clone()).or_insert(class);
        projected.push(p);
    }
    let mut out: Vec<Vec<BigInt>> = extreme_generators(&projected, coords.len(), exec)
        .into_iter()
        .map(|p| by_projection[&p].clone())
        .collect();
    out.sort();
    out
}

pub fn is_extremal(fan: &Fan, relation: &PrimitiveRelation) -> Result<bool, InvariantError> {
    let extremals = mori_cone_extremal_classes(fan)?;
    Ok(spans_extremal_ray(&extremals, relation))
}

pub fn spans_extremal_ray(extremals: &[Vec<BigInt>], relation: &PrimitiveRelation) -> bool {
    let class = primitive_int(&relation.class_vector);
    extremals.contains(&class)
}

/// `deg(P) < 2 iota` certifies that the collection is contractible.
pub fn contractible_sufficient(
    fan: &Fan,
    relation: &PrimitiveRelation,
) -> Result<bool, InvariantError> {
    Ok(relation.degree < 2 * pseudo_index(fan)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallContraction {
    pub relation: Option<PrimitiveRelation>,
    /// Whether `4 iota > n + 4`, under which a relation must exist.
    pub hypothesis_holds: bool,
    /// Hypothesis holds but no relation was found.
    pub violation: bool,
}

/// Looks for a relation with `deg < 2 iota` and at most `iota - 2` targets.
pub fn small_codim_contractible(fan: &Fan) -> Result<SmallContraction, InvariantError> {
    let exec = Execution::default();
    let relations = primitive_relations_with(fan, exec)?;
    if relations.iter().any(|r| r.degree < 1) {
        return Err(InvariantError::NotFano);
    }
    let iota = min_wall_degree(&wall_curves_with(fan, exec)?)?;
    let relation = relations
        .into_iter()
        .find(|r| r.degree < 2 * iota && (r.targets.len() as i64) <= iota - 2);
    let hypothesis_holds = 4 * iota > fan.dim() as i64 + 4;
    let violation = hypothesis_holds && relation.is_none();
    Ok(SmallContraction { relation, hypothesis_holds, violation })
}

/// Whether some primitive relation of order `iota` sums to zero.
///
/// Cross-checked against the face-count criterion `f_{iota-1} < C(f_0, iota)`.
/// Projective space counts as a fibration over a point.
pub fn fibration_in_p_iota(fan: &Fan) -> Result<bool, InvariantError> {
    let exec = Execution::default();
    let relations = primitive_relations_with(fan, exec)?;
    if relations.iter().any(|r| r.degree < 1) {
        return Err(InvariantError::NotFano);
    }
    let iota = min_wall_degree(&wall_curves_with(fan, exec)?)?;
    fibration_from_parts(fan, &relations, iota)
}

pub(crate) fn fibration_from_parts(
    fan: &Fan,
    relations: &[PrimitiveRelation],
    iota: i64,
) -> Result<bool, InvariantError> {
    let by_relation =
        relations.iter().any(|r| r.order as i64 == iota && r.is_zero_sum());
    let by_faces = face_count_fibration(fan, iota);
    if by_relation != by_faces {
        return Err(InvariantError::InternalInconsistency(format!(
            "fibration by relations is {by_relation} but by face counts is {by_faces}"
        )));
    }
    Ok(by_relation)
}

/// `f_{iota-1} < C(f_0, iota)`, with `f_n = 0` beyond the top dimension.
pub(crate) fn face_count_fibration(fan: &Fan, iota: i64) -> bool {
    let fv = f_vector(fan);
    if iota < 1 {
        return false;
    }
    let count = fv.f(iota - 1);
    count < binomial(fan.num_rays() as i64, iota)
}

/// Factor dimensions (ascending) when the fan is literally a product of projective spaces.
pub fn product_of_projective_spaces(fan: &Fan) -> Option<Vec<usize>> {
    let collections = primitive_collections_with(fan, Execution::default());
    let mut union = RaySet::EMPTY;
    for &p in &collections {
        if !union.is_disjoint(p) || !fan.ray_sum(p).is_zero() {
            return None;
        }
        union = union.union(p);
    }
    if union != fan.all_rays() {
        return None;
    }
    let dims: usize = collections.iter().map(|p| p.len() - 1).sum();
    if dims != fan.dim() {
        return None;
    }
    let transversals: usize = collections.iter().map(|p| p.len()).product();
    let all_transversal = fan
        .max_cones()
        .iter()
        .all(|c| collections.iter().all(|&p| p.difference(*c).len() == 1));
    if fan.max_cones().len() != transversals || !all_transversal {
        return None;
    }
    let mut out: Vec<usize> = collections.iter().map(|p| p.len() - 1).collect();
    out.sort();
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "factors")]
pub enum EqualityCase {
    NotEqual,
    ProductOfProjectiveSpaces(Vec<usize>),
    EqualButUnrecognized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MukaiReport {
    pub picard_rho: i64,
    pub pseudo_index_iota: i64,
    pub is_fano: bool,
    pub inequality_lhs: i64,
    pub dim_n: i64,
    pub inequality_holds: bool,
    pub equality_case: EqualityCase,
}

pub fn mukai_check(fan: &Fan) -> Result<MukaiReport, InvariantError> {
    let exec = Execution::default();
    let relations = primitive_relations_with(fan, exec)?;
    if relations.iter().any(|r| r.degree < 1) {
        return Err(InvariantError::NotFano);
    }
    let iota = min_wall_degree(&wall_curves_with(fan, exec)?)?;
    Ok(mukai_from_parts(fan, iota))
}

pub(crate) fn mukai_from_parts(fan: &Fan, iota: i64) -> MukaiReport {
    let rho = picard_number(fan) as i64;
    let n = fan.dim() as i64;
    let lhs = rho * (iota - 1);
    let equality_case = if lhs != n {
        EqualityCase::NotEqual
    } else {
        match product_of_projective_spaces(fan) {
            Some(dims)
                if dims.len() as i64 == rho && dims.iter().all(|&d| d as i64 == iota - 1) =>
            {
                EqualityCase::ProductOfProjectiveSpaces(dims)
            }
            _ => EqualityCase::EqualButUnrecognized,
        }
    };
    MukaiReport {
        picard_rho: rho,
        pseudo_index_iota: iota,
        is_fano: true,
        inequality_lhs: lhs,
        dim_n: n,
        inequality_holds: lhs <= n,
        equality_case,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{construct_projective_space, product_of_projective, star_subdivision};
    use crate::primitive::{primitive_relation, primitive_relations};

    fn set(ix: &[usize]) -> RaySet {
        ix.iter().copied().collect()
    }

    fn blow_up_p2() -> Fan {
        star_subdivision(&construct_projective_space(2), set(&[0, 1])).unwrap()
    }

    fn hirzebruch_f2() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn picard_and_fano() {
        assert_eq!(picard_number(&construct_projective_space(4)), 1);
        assert_eq!(picard_number(&product_of_projective(&[1, 1, 1])), 3);
        assert_eq!(picard_number(&blow_up_p2()), 2);
        assert!(is_fano(&construct_projective_space(3)).unwrap());
        assert!(is_fano(&blow_up_p2()).unwrap());
        assert!(!is_fano(&hirzebruch_f2()).unwrap());
        assert_eq!(pseudo_index(&hirzebruch_f2()), Err(InvariantError::NotFano));
    }

    #[test]
    fn wall_curve_examples() {
        let walls = wall_curves(&construct_projective_space(2)).unwrap();
        assert_eq!(walls.len(), 3);
        assert!(walls.iter().all(|w| w.anticanonical_degree == 3));
        let p3 = construct_projective_space(3);
        let walls = wall_curves(&p3).unwrap();
        assert_eq!(walls.len(), 6);
        assert!(walls.iter().all(|w| w.anticanonical_degree == 4));
        let walls = wall_curves(&product_of_projective(&[1, 1])).unwrap();
        assert_eq!(walls.len(), 4);
        assert!(walls.iter().all(|w| w.anticanonical_degree == 2));

        for fan in [p3, blow_up_p2(), hirzebruch_f2(), product_of_projective(&[2, 1])] {
            let m = fan.ray_matrix();
            for w in wall_curves(&fan).unwrap() {
                assert!(m.mul_vec(&LatticeVector::new(w.relation.clone())).is_zero());
                let total: BigInt = w.relation.iter().sum();
                assert_eq!(total, BigInt::from(w.anticanonical_degree));
                assert!(w.relation[w.opposite_rays.0].is_one());
                assert!(w.relation[w.opposite_rays.1].is_one());
            }
        }
    }

    #[test]
    fn pseudo_index_examples() {
        for n in 1..=5 {
            assert_eq!(pseudo_index(&construct_projective_space(n)).unwrap(), n as i64 + 1);
        }
        assert_eq!(pseudo_index(&product_of_projective(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(pseudo_index(&blow_up_p2()).unwrap(), 1);
    }

    #[test]
    fn pseudo_index_bounded_by_relation_degrees() {
        let p3 = construct_projective_space(3);
        for fan in [blow_up_p2(), star_subdivision(&p3, set(&[0, 1])).unwrap()] {
            let iota = pseudo_index(&fan).unwrap();
            for r in primitive_relations(&fan).unwrap() {
                assert!(iota <= r.degree);
            }
        }
    }

    #[test]
    fn mori_cone_examples() {
        let p2 = mori_cone_extremal_classes(&construct_projective_space(2)).unwrap();
        assert_eq!(p2, vec![ints(&[1, 1, 1])]);
        let q = mori_cone_extremal_classes(&product_of_projective(&[1, 1])).unwrap();
        assert_eq!(q, vec![ints(&[0, 0, 1, 1]), ints(&[1, 1, 0, 0])]);
        // exceptional curve r0 + r1 - r3 and the fibre class r2 + r3
        let b = mori_cone_extremal_classes(&blow_up_p2()).unwrap();
        assert_eq!(b, vec![ints(&[0, 0, 1, 1]), ints(&[1, 1, 0, -1])]);
    }

    #[test]
    fn extremality_of_relations() {
        let p2 = construct_projective_space(2);
        let r = primitive_relation(&p2, set(&[0, 1, 2])).unwrap();
        assert!(is_extremal(&p2, &r).unwrap());
        let b = blow_up_p2();
        let r = primitive_relation(&b, set(&[0, 1])).unwrap();
        assert_eq!(r.degree, 1);
        assert!(is_extremal(&b, &r).unwrap());
        let q = product_of_projective(&[1, 1]);
        for r in primitive_relations(&q).unwrap() {
            assert!(is_extremal(&q, &r).unwrap());
        }
    }

    #[test]
    fn double_description_square_cone() {
        // cone over a square: four generators, all extremal
        let gens: Vec<Vec<BigInt>> = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [0, 0, 1]]
            .iter()
            .map(|g| ints(g))
            .collect();
        let ext = extreme_generators(&gens, 3, Execution::Sequential);
        assert_eq!(ext.len(), 4);
        assert!(!ext.contains(&ints(&[0, 0, 1])));
        assert_eq!(ext, extreme_generators(&gens, 3, Execution::Parallel));
    }

    #[test]
    fn contractibility() {
        let p2 = construct_projective_space(2);
        let r = primitive_relation(&p2, set(&[0, 1, 2])).unwrap();
        assert!(contractible_sufficient(&p2, &r).unwrap());
        let b = blow_up_p2();
        let r = primitive_relation(&b, set(&[0, 1])).unwrap();
        assert!(contractible_sufficient(&b, &r).unwrap());
        let c = product_of_projective(&[1, 1, 1]);
        for r in primitive_relations(&c).unwrap() {
            assert!(contractible_sufficient(&c, &r).unwrap());
        }

        let s = small_codim_contractible(&construct_projective_space(4)).unwrap();
        assert!(s.relation.is_some_and(|r| r.targets.is_empty()));
        let s = small_codim_contractible(&product_of_projective(&[2, 2])).unwrap();
        assert!(s.hypothesis_holds);
        assert!(s.relation.is_some_and(|r| r.is_zero_sum()));
        let s = small_codim_contractible(&b).unwrap();
        assert!(!s.hypothesis_holds && !s.violation);
    }

    #[test]
    fn fibrations() {
        for n in 1..=4 {
            let ones = vec![1; n];
            assert!(fibration_in_p_iota(&product_of_projective(&ones)).unwrap());
            assert!(fibration_in_p_iota(&construct_projective_space(n)).unwrap());
        }
        assert!(!fibration_in_p_iota(&blow_up_p2()).unwrap());
        assert!(fibration_in_p_iota(&product_of_projective(&[1, 2])).unwrap());
    }

    #[test]
    fn product_recognition() {
        assert_eq!(product_of_projective_spaces(&product_of_projective(&[1, 1, 1])), Some(vec![1, 1, 1]));
        assert_eq!(product_of_projective_spaces(&product_of_projective(&[3, 2])), Some(vec![2, 3]));
        assert_eq!(product_of_projective_spaces(&construct_projective_space(4)), Some(vec![4]));
        assert_eq!(product_of_projective_spaces(&blow_up_p2()), None);
    }

    #[test]
    fn mukai_examples() {
        let r = mukai_check(&product_of_projective(&[2, 2])).unwrap();
        assert_eq!((r.picard_rho, r.pseudo_index_iota, r.inequality_lhs), (2, 3, 4));
        assert_eq!(r.equality_case, EqualityCase::ProductOfProjectiveSpaces(vec![2, 2]));
        let r = mukai_check(&construct_projective_space(4)).unwrap();
        assert_eq!((r.picard_rho, r.pseudo_index_iota, r.inequality_lhs), (1, 5, 4));
        assert_eq!(r.equality_case, EqualityCase::ProductOfProjectiveSpaces(vec![4]));
        let r = mukai_check(&construct_projective_space(6)).unwrap();
        assert_eq!(r.equality_case, EqualityCase::ProductOfProjectiveSpaces(vec![6]));
        let r = mukai_check(&blow_up_p2()).unwrap();
        assert_eq!((r.picard_rho, r.pseudo_index_iota, r.inequality_lhs), (2, 1, 0));
        assert!(r.inequality_holds);
        assert_eq!(r.equality_case, EqualityCase::NotEqual);
        assert_eq!(mukai_check(&hirzebruch_f2()), Err(InvariantError::NotFano));
    }
}
