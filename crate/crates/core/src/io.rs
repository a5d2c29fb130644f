//! Line-oriented text formats for fans and polytope vertex lists.
//!
//! ```text
//! FAN <n> <m> <c>        POLY <n> <m>
//! <m ray lines>          <m vertex lines>
//! <c cone lines>
//! ```
//!
//! Ray and vertex lines hold `n` integers, cone lines hold `n` ray indices.
//! Blank lines and `#` comments are ignored; whitespace is any run of spaces
//! or tabs.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::{validate_with, Fan, FanError, RaySet, ValidationOptions};
use crate::lattice::{determinant, IntegerMatrix, LatticeVector};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("fan fails validation: {check}{}", detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default())]
    Validation { check: &'static str, detail: Option<String> },
    #[error(transparent)]
    Structure(#[from] FanError),
    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,
    #[error("facet with vertices {0} is not a simplex")]
    NonSimplicialFacet(RaySet),
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn syntax(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, reason: reason.into() }
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
    arity: usize,
) -> Result<Vec<usize>, FormatError> {
    let (line, text) = lines.next().ok_or_else(|| syntax(1, format!("missing `{tag}` header")))?;
    let mut words = text.split_whitespace();
    if words.next() != Some(tag) {
        return Err(syntax(line, format!("expected `{tag}` header")));
    }
    let nums: Vec<usize> = words
        .map(|w| w.parse().map_err(|_| syntax(line, format!("bad header field `{w}`"))))
        .collect::<Result<_, _>>()?;
    if nums.len() != arity {
        return Err(syntax(line, format!("header needs {arity} numbers, found {}", nums.len())));
    }
    Ok(nums)
}

fn parse_row<'a, T: std::str::FromStr>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    what: &str,
    last_line: usize,
) -> Result<(usize, Vec<T>), FormatError> {
    let (line, text) =
        lines.next().ok_or_else(|| syntax(last_line, format!("file ends before {what}")))?;
    let row: Vec<T> = text
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| syntax(line, format!("bad integer `{w}` in {what}"))))
        .collect::<Result<_, _>>()?;
    if row.len() != n {
        return Err(syntax(line, format!("{what} has {} entries, expected {n}", row.len())));
    }
    Ok((line, row))
}

/// Parses a fan file without running the validation checks.
pub fn parse_fan_unvalidated(text: &str) -> Result<Fan, FormatError> {
    let mut lines = content_lines(text);
    let header = parse_header(&mut lines, "FAN", 3)?;
    let (n, m, c) = (header[0], header[1], header[2]);
    let mut last = 1;
    let mut rays = Vec::with_capacity(m);
    for i in 0..m {
        let (line, row) = parse_row::<BigInt>(&mut lines, n, &format!("ray {i}"), last)?;
        last = line;
        rays.push(LatticeVector::new(row));
    }
    let mut cones = Vec::with_capacity(c);
    for i in 0..c {
        let (line, row) = parse_row::<usize>(&mut lines, n, &format!("cone {i}"), last)?;
        last = line;
        if let Some(bad) = row.iter().find(|&&r| r >= m) {
            return Err(syntax(line, format!("cone {i} references missing ray {bad}")));
        }
        cones.push(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "unexpected content after the last cone"));
    }
    Ok(Fan::new(n, rays, cones)?)
}

pub fn parse_fan(text: &str) -> Result<Fan, FormatError> {
    parse_fan_with(text, ValidationOptions::default())
}

pub fn parse_fan_with(text: &str, opts: ValidationOptions) -> Result<Fan, FormatError> {
    let fan = parse_fan_unvalidated(text)?;
    ensure_valid(fan, opts)
}

fn ensure_valid(fan: Fan, opts: ValidationOptions) -> Result<Fan, FormatError> {
    let report = validate_with(&fan, opts);
    if let Some(f) = report.failures().next() {
        return Err(FormatError::Validation { check: f.check.name(), detail: f.detail.clone() });
    }
    Ok(fan)
}

/// Canonical text form: rays in stored order, cones sorted with sorted indices.
pub fn serialize_fan(fan: &Fan) -> String {
    let mut out = format!("FAN {} {} {}\n", fan.dim(), fan.num_rays(), fan.max_cones().len());
    for r in fan.rays() {
        let row: Vec<String> = r.coords().iter().map(BigInt::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for c in fan.max_cones() {
        let row: Vec<String> = c.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses `POLY n m` vertex data and returns the validated face fan.
pub fn parse_polytope_as_face_fan(text: &str) -> Result<Fan, FormatError> {
    parse_polytope_as_face_fan_with(text, ValidationOptions::default(), Execution::default())
}

pub fn parse_polytope_as_face_fan_with(
    text: &str,
    opts: ValidationOptions,
    exec: Execution,
) -> Result<Fan, FormatError> {
    let mut lines = content_lines(text);
    let header = parse_header(&mut lines, "POLY", 2)?;
    let (n, m) = (header[0], header[1]);
    let mut last = 1;
    let mut vertices = Vec::with_capacity(m);
    for i in 0..m {
        let (line, row) = parse_row::<BigInt>(&mut lines, n, &format!("vertex {i}"), last)?;
        last = line;
        vertices.push(LatticeVector::new(row));
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "unexpected content after the last vertex"));
    }
    let facets = simplicial_facets(n, &vertices, exec)?;
    let cones = facets.iter().map(|f| f.to_vec()).collect();
    ensure_valid(Fan::new(n, vertices, cones)?, opts)
}

/// Normal of the hyperplane through `points` (n points in `Z^n`), by the
/// generalized cross product of the difference vectors.
fn hyperplane_normal(points: &[&LatticeVector], n: usize) -> Vec<BigInt> {
    let base = points[0];
    let diffs: Vec<LatticeVector> = points[1..].iter().map(|p| p.sub(base)).collect();
    (0..n)
        .map(|col| {
            let rows: Vec<Vec<BigInt>> = diffs
                .iter()
                .map(|d| {
                    d.coords()
                        .iter()
                        .enumerate()
                        .filter(|&(c, _)| c != col)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let minor = if n == 1 {
                BigInt::from(1)
            } else {
                let flat: Vec<BigInt> = rows.into_iter().flatten().collect();
                let m = IntegerMatrix::new(n - 1, n - 1, flat).expect("square minor");
                determinant(&m).expect("square minor")
            };
            if col % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

/// Facets of `conv(vertices)` found by exhaustive search over `n`-subsets.
/// Requires the origin strictly inside and every facet to be a simplex.
fn simplicial_facets(
    n: usize,
    vertices: &[LatticeVector],
    exec: Execution,
) -> Result<Vec<RaySet>, FormatError> {
    if vertices.len() > crate::fan::MAX_RAYS {
        return Err(FanError::TooManyRays(vertices.len()).into());
    }
    let all: RaySet = (0..vertices.len()).collect();
    let candidates = all.subsets_of_size(n);
    let found = par::map(exec, &candidates, |&s| {
        let pts: Vec<&LatticeVector> = s.iter().map(|i| &vertices[i]).collect();
        let normal = LatticeVector::new(hyperplane_normal(&pts, n));
        if normal.is_zero() {
            return None;
        }
        let offset = normal.dot(pts[0]);
        let mut on = RaySet::EMPTY;
        let (mut below, mut above) = (false, false);
        for (i, v) in vertices.iter().enumerate() {
            let side = normal.dot(v) - &offset;
            if side.is_zero() {
                on = on.with(i);
            } else if side.is_negative() {
                below = true;
            } else {
                above = true;
            }
        }
        if below && above {
            return None;
        }
        // origin sits at -offset relative to the hyperplane; it must be strictly
        // on the same side as the polytope
        let origin_inside = if below {
            offset.is_positive()
        } else if above {
            offset.is_negative()
        } else {
            false
        };
        Some((on, origin_inside))
    });
    let mut facets: Vec<RaySet> = Vec::new();
    for (on, origin_inside) in found.into_iter().flatten() {
        if !origin_inside {
            return Err(FormatError::OriginNotInterior);
        }
        if on.len() > n {
            return Err(FormatError::NonSimplicialFacet(on));
        }
        facets.push(on);
    }
    facets.sort();
    facets.dedup();
    if facets.is_empty() {
        return Err(FormatError::OriginNotInterior);
    }
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{construct_projective_space, product_of_projective, star_subdivision};

    const P2: &str = "FAN 2 3 3\n1 0\n0 1\n-1 -1\n0 1\n1 2\n0 2\n";

    #[test]
    fn parses_projective_plane() {
        let fan = parse_fan(P2).unwrap();
        assert_eq!(fan, construct_projective_space(2));
        let commented = "# plane\nFAN 2 3 3\n\n1\t0  # e1\n0 1\n-1 -1\n0 1\n1 2\n0 2\n";
        assert_eq!(parse_fan(commented).unwrap(), fan);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let bad = "FAN 2 3 3\n1 0\n0 1\n-1 -1\n0 1 2\n1 2\n0 2\n";
        match parse_fan(bad) {
            Err(FormatError::Syntax { line, reason }) => {
                assert_eq!(line, 5);
                assert!(reason.contains("expected 2"));
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_fan("FAN 2 x 3\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_fan("FAN 2 3 3\n1 0\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_fan(""), Err(FormatError::Syntax { .. })));
    }

    #[test]
    fn validation_failures_are_named() {
        let bad = "FAN 2 3 3\n2 0\n0 1\n-1 -1\n0 1\n1 2\n0 2\n";
        match parse_fan(bad) {
            Err(FormatError::Validation { check, .. }) => assert_eq!(check, "primitivity"),
            other => panic!("expected validation error, got {other:?}"),
        }
        let missing = "FAN 2 3 2\n1 0\n0 1\n-1 -1\n0 1\n1 2\n";
        match parse_fan(missing) {
            Err(FormatError::Validation { check, .. }) => assert_eq!(check, "completeness"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let p3 = construct_projective_space(3);
        let fans = [
            construct_projective_space(2),
            product_of_projective(&[1, 2]),
            star_subdivision(&p3, [0, 1].into_iter().collect()).unwrap(),
        ];
        for fan in fans {
            let text = serialize_fan(&fan);
            let back = parse_fan(&text).unwrap();
            assert_eq!(back, fan);
            assert_eq!(serialize_fan(&back), text);
        }
    }

    #[test]
    fn face_fans() {
        let fan = parse_polytope_as_face_fan("POLY 2 3\n1 0\n0 1\n-1 -1\n").unwrap();
        assert_eq!(fan, construct_projective_space(2));

        let sq = parse_polytope_as_face_fan("POLY 2 4\n1 0\n0 1\n-1 0\n0 -1\n").unwrap();
        let prod = product_of_projective(&[1, 1]);
        assert_eq!(sq.num_rays(), prod.num_rays());
        assert_eq!(crate::fvector::f_vector(&sq), crate::fvector::f_vector(&prod));
        assert_eq!(crate::invariants::pseudo_index(&sq).unwrap(), 2);

        let boundary = "POLY 2 4\n0 0\n1 0\n1 1\n0 1\n";
        assert_eq!(parse_polytope_as_face_fan(boundary), Err(FormatError::OriginNotInterior));
        let outside = "POLY 2 3\n1 0\n2 1\n1 1\n";
        assert_eq!(parse_polytope_as_face_fan(outside), Err(FormatError::OriginNotInterior));
    }

    #[test]
    fn non_simplicial_facet_is_rejected() {
        // octahedron's dual: the cube has square facets
        let mut text = String::from("POLY 3 8\n");
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    text.push_str(&format!("{x} {y} {z}\n"));
                }
            }
        }
        assert!(matches!(
            parse_polytope_as_face_fan(&text),
            Err(FormatError::NonSimplicialFacet(s)) if s.len() == 4
        ));
    }

    #[test]
    fn face_fan_of_octahedron_matches_cube_variety() {
        let text = "POLY 3 6\n1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n";
        let serial = parse_polytope_as_face_fan_with(
            text,
            ValidationOptions::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(serial, parse_polytope_as_face_fan(text).unwrap());
        assert_eq!(serial, product_of_projective(&[1, 1, 1]));
    }
}
