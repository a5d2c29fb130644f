//! Brute-force reference computations and the bundled corpus.
//!
//! The reference routines deliberately share nothing with the fast paths they
//! check: subsets are enumerated exhaustively, faces are tested directly against
//! the maximal cones, and linear systems are solved by a local Gaussian
//! elimination over the rationals.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{construct_projective_space, product_of_projective, star_subdivision, Fan, RaySet};
use crate::fvector::f_vector;
use crate::invariants::{
    is_fano, mori_cone_extremal_classes, mukai_check, picard_number, pseudo_index, EqualityCase,
};
use crate::io::serialize_fan;
use crate::primitive::{degrees_summary, primitive_collections};

/// Largest ray count for exhaustive subset enumeration.
pub const ORACLE_MAX_RAYS: usize = 16;
pub const ORACLE_MAX_RHO: usize = 6;
pub const ORACLE_MAX_WALLS: usize = 200;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0} is too large for the brute-force oracle")]
    TooLarge(String),
    #[error("{name}: {what} disagrees with the oracle")]
    Mismatch { name: String, what: &'static str },
    #[error("{name}: {source}")]
    Invariant {
        name: String,
        #[source]
        source: crate::invariants::InvariantError,
    },
    #[error("writing corpus: {0}")]
    Io(#[from] std::io::Error),
}

fn is_face_direct(fan: &Fan, mask: u32) -> bool {
    fan.max_cones().iter().any(|c| {
        let cone: u32 = c.iter().map(|i| 1u32 << i).sum();
        mask & !cone == 0
    })
}

/// Minimal non-faces, by testing all `2^m` subsets.
pub fn oracle_primitive_collections(fan: &Fan) -> Result<Vec<RaySet>, OracleError> {
    let m = fan.num_rays();
    if m > ORACLE_MAX_RAYS {
        return Err(OracleError::TooLarge(format!("{m} rays")));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        if is_face_direct(fan, mask) {
            continue;
        }
        let minimal = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| is_face_direct(fan, mask & !(1 << i)));
        if minimal {
            out.push((0..m).filter(|i| mask & (1 << i) != 0).collect::<RaySet>());
        }
    }
    out.sort_by_key(|s| (s.len(), *s));
    Ok(out)
}

fn subsets_into(items: &[usize], acc: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    match items.split_first() {
        None => {
            out.insert(acc.clone());
        }
        Some((&first, rest)) => {
            subsets_into(rest, acc, out);
            acc.push(first);
            subsets_into(rest, acc, out);
            acc.pop();
        }
    }
}

/// `f_{-1}, ..., f_{n-1}` by collecting every subset of every maximal cone.
pub fn oracle_f_vector(fan: &Fan) -> Vec<BigInt> {
    let mut faces = BTreeSet::new();
    for c in fan.max_cones() {
        subsets_into(&c.to_vec(), &mut Vec::new(), &mut faces);
    }
    let mut counts = vec![0usize; fan.dim() + 1];
    for f in &faces {
        counts[f.len()] += 1;
    }
    counts.into_iter().map(BigInt::from).collect()
}

/// Solves `columns * x = target` when the columns are linearly independent.
fn solve_independent(columns: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let k = columns.len();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            columns
                .iter()
                .map(|c| BigRational::from_integer(c[r].clone()))
                .chain([BigRational::from_integer(target[r].clone())])
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let p = (pivot_row..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot_row, p);
        let lead = a[pivot_row][col].clone();
        for x in a[pivot_row].iter_mut() {
            *x /= &lead;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=k {
                    let v = &a[pivot_row][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a[i][k].clone()).collect())
}

/// Wall classes by pairing maximal cones that share `n - 1` rays.
fn oracle_wall_classes(fan: &Fan) -> Result<Vec<Vec<BigInt>>, OracleError> {
    let cones = fan.max_cones();
    let n = fan.dim();
    let mut classes = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let wall = cones[i].intersection(cones[j]);
            if wall.len() + 1 != n {
                continue;
            }
            let u = cones[i].difference(wall).to_vec()[0];
            let v = cones[j].difference(wall).to_vec()[0];
            let basis: Vec<usize> = wall.to_vec();
            let columns: Vec<Vec<BigInt>> =
                basis.iter().map(|&x| fan.ray(x).coords().to_vec()).collect();
            let target: Vec<BigInt> = fan.ray(u).add(fan.ray(v)).into_coords();
            let coeffs = solve_independent(&columns, &target)
                .ok_or_else(|| OracleError::TooLarge("wall relation outside wall span".into()))?;
            let mut class = vec![BigInt::zero(); fan.num_rays()];
            class[u] = BigInt::one();
            class[v] = BigInt::one();
            for (x, c) in basis.iter().zip(coeffs) {
                class[*x] = -c.to_integer();
            }
            classes.push(class);
        }
    }
    if classes.len() > ORACLE_MAX_WALLS {
        return Err(OracleError::TooLarge(format!("{} walls", classes.len())));
    }
    Ok(classes)
}

fn normalize(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn index_subsets(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..len {
        let extended: Vec<Vec<usize>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut t = s.clone();
                t.push(i);
                t
            })
            .collect();
        out.extend(extended);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Extremal wall classes: a class is extremal iff it is not a nonnegative
/// combination of the classes on other rays. By Caratheodory it suffices to try
/// linearly independent subsets of at most `rho` other classes.
pub fn oracle_mori_extremals(fan: &Fan) -> Result<Vec<Vec<BigInt>>, OracleError> {
    let rho = fan.num_rays() - fan.dim();
    if rho > ORACLE_MAX_RHO {
        return Err(OracleError::TooLarge(format!("Picard number {rho}")));
    }
    let mut dirs: Vec<Vec<BigInt>> =
        oracle_wall_classes(fan)?.iter().map(|c| normalize(c)).collect();
    dirs.sort();
    dirs.dedup();
    let mut out = Vec::new();
    for (i, g) in dirs.iter().enumerate() {
        let others: Vec<&Vec<BigInt>> =
            dirs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, d)| d).collect();
        let reachable = index_subsets(others.len(), rho).into_iter().any(|subset| {
            let cols: Vec<Vec<BigInt>> = subset.iter().map(|&j| others[j].clone()).collect();
            solve_independent(&cols, g)
                .is_some_and(|lambda| lambda.iter().all(|l| !l.is_negative()))
        });
        if !reachable {
            out.push(g.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Invariants pinned for each corpus member at generation time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub rho: usize,
    pub fano: bool,
    pub iota: Option<i64>,
    pub f_vector: Vec<String>,
    pub relations: Vec<(usize, i64)>,
    pub mukai: Option<EqualityCase>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub fan: Fan,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Writes `<name>.fan` for every entry.
    pub fn write_to(&self, dir: &Path) -> Result<(), OracleError> {
        std::fs::create_dir_all(dir)?;
        for e in &self.entries {
            std::fs::write(dir.join(format!("{}.fan", e.name)), serialize_fan(&e.fan))?;
        }
        Ok(())
    }
}

fn partitions(total: usize, min_part: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in min_part..=total {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn sorted_rays(fan: &Fan) -> Vec<Vec<BigInt>> {
    let mut r: Vec<Vec<BigInt>> = fan.rays().iter().map(|v| v.coords().to_vec()).collect();
    r.sort();
    r
}

/// Fans of the bundled corpus, without fingerprints, in a fixed order.
pub fn corpus_fans() -> Vec<(String, Fan)> {
    let mut out: Vec<(String, Fan)> = Vec::new();
    for n in 1..=7 {
        out.push((format!("p{n}"), construct_projective_space(n)));
    }
    for total in 2..=7 {
        for parts in partitions(total, 1).into_iter().filter(|p| p.len() >= 2) {
            let name = parts.iter().map(|d| format!("p{d}")).collect::<Vec<_>>().join("x");
            out.push((name, product_of_projective(&parts)));
        }
    }
    for n in 2..=4 {
        let pn = construct_projective_space(n);
        for d in 2..=n {
            let cone: RaySet = (0..d).collect();
            let fan = star_subdivision(&pn, cone).expect("coordinate cones exist");
            out.push((format!("blowup_p{n}_dim{d}"), fan));
        }
    }
    // iterated blow-ups of torus-fixed points of the plane that stay Fano
    let mut seen: BTreeSet<Vec<Vec<BigInt>>> = BTreeSet::new();
    let mut layer = vec![construct_projective_space(2)];
    for step in 1..=3 {
        let mut next = Vec::new();
        for fan in &layer {
            for &cone in fan.max_cones() {
                let blown = star_subdivision(fan, cone).expect("maximal cones subdivide");
                if !is_fano(&blown).unwrap_or(false) || !seen.insert(sorted_rays(&blown)) {
                    continue;
                }
                next.push(blown);
            }
        }
        for (i, fan) in next.iter().enumerate() {
            out.push((format!("p2_blowup{step}_{i}"), fan.clone()));
        }
        layer = next;
    }
    let f2 = Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
    )
    .expect("literal fan");
    out.push(("hirzebruch_f2".into(), f2));
    out
}

/// Fast-path invariants, after checking collections, extremal rays and face
/// counts against the oracles where their size limits allow.
pub fn fingerprint(name: &str, fan: &Fan) -> Result<Fingerprint, OracleError> {
    let wrap = |source| OracleError::Invariant { name: name.to_string(), source };
    let mismatch = |what| OracleError::Mismatch { name: name.to_string(), what };

    let fv = f_vector(fan);
    if fv.entries() != oracle_f_vector(fan).as_slice() {
        return Err(mismatch("f-vector"));
    }
    match oracle_primitive_collections(fan) {
        Ok(c) if c != primitive_collections(fan) => return Err(mismatch("primitive collections")),
        _ => {}
    }
    match oracle_mori_extremals(fan) {
        Ok(e) if e != mori_cone_extremal_classes(fan).map_err(wrap)? => {
            return Err(mismatch("Mori cone extremal rays"))
        }
        _ => {}
    }
    let fano = is_fano(fan).map_err(wrap)?;
    let relations = degrees_summary(fan).map_err(|e| wrap(e.into()))?;
    let (iota, mukai) = if fano {
        (Some(pseudo_index(fan).map_err(wrap)?), Some(mukai_check(fan).map_err(wrap)?.equality_case))
    } else {
        (None, None)
    };
    Ok(Fingerprint {
        rho: picard_number(fan),
        fano,
        iota,
        f_vector: fv.entries().iter().map(BigInt::to_string).collect(),
        relations,
        mukai,
    })
}

/// Builds the corpus and fingerprints every member.
pub fn generate_corpus() -> Result<Corpus, OracleError> {
    let entries = corpus_fans()
        .into_iter()
        .map(|(name, fan)| {
            let fingerprint = fingerprint(&name, &fan)?;
            Ok(CorpusEntry { name, fan, fingerprint })
        })
        .collect::<Result<_, OracleError>>()?;
    Ok(Corpus { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn collection_oracle_examples() {
        let p2 = oracle_primitive_collections(&construct_projective_space(2)).unwrap();
        assert_eq!(p2, vec![[0, 1, 2].into_iter().collect::<RaySet>()]);
        let q = oracle_primitive_collections(&product_of_projective(&[1, 1])).unwrap();
        assert_eq!(q.len(), 2);
        let big = product_of_projective(&[1; 7]);
        assert!(oracle_primitive_collections(&big).is_ok());
        let huge = product_of_projective(&[1; 9]);
        assert!(matches!(oracle_primitive_collections(&huge), Err(OracleError::TooLarge(_))));
    }

    #[test]
    fn mori_oracle_examples() {
        assert_eq!(oracle_mori_extremals(&construct_projective_space(2)).unwrap().len(), 1);
        let b = star_subdivision(&construct_projective_space(2), [0, 1].into_iter().collect())
            .unwrap();
        assert_eq!(
            oracle_mori_extremals(&b).unwrap(),
            vec![ints(&[0, 0, 1, 1]), ints(&[1, 1, 0, -1])]
        );
        assert_eq!(oracle_mori_extremals(&product_of_projective(&[1, 1, 1])).unwrap().len(), 3);
    }

    #[test]
    fn partitions_are_complete() {
        assert_eq!(partitions(4, 1).len(), 5);
        assert_eq!(partitions(7, 1).len(), 15);
    }

    #[test]
    fn corpus_contents() {
        let corpus = generate_corpus().unwrap();
        let e = corpus.get("p1xp1xp1xp1").unwrap();
        assert_eq!(e.fingerprint.mukai, Some(EqualityCase::ProductOfProjectiveSpaces(vec![1, 1, 1, 1])));
        let line = corpus.get("blowup_p3_dim2").unwrap();
        assert_eq!((line.fingerprint.fano, line.fingerprint.iota, line.fingerprint.rho), (true, Some(1), 2));
        let f2 = corpus.get("hirzebruch_f2").unwrap();
        assert!(!f2.fingerprint.fano);
        assert!(corpus.entries.iter().all(|e| crate::fan::validate(&e.fan).is_valid()));
        let names: BTreeSet<_> = corpus.entries.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), corpus.entries.len());
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(generate_corpus().unwrap(), generate_corpus().unwrap());
    }
}
