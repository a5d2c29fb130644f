//! Per-fan analysis and its deterministic text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::fan::{validate_with, Fan, ValidationOptions};
use crate::fvector::{
    check_binomial_identities, degree_sum_from_parts, f_vector, is_palindromic,
    is_simplex_criterion, DegreeSumCheck, FVectorError,
};
use crate::invariants::{
    extremal_classes_from_walls, fibration_from_parts, min_wall_degree, mukai_from_parts,
    picard_number, product_of_projective_spaces, spans_extremal_ray, wall_curves_with,
    EqualityCase, InvariantError, MukaiReport,
};
use crate::lattice::{serialize_bigints, LatticeVector};
use crate::par::Execution;
use crate::primitive::{primitive_relations_with, PrimitiveRelation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSummary {
    pub collection: Vec<usize>,
    pub order: usize,
    pub degree: i64,
    pub targets: Vec<usize>,
    #[serde(serialize_with = "serialize_bigints")]
    pub coefficients: Vec<BigInt>,
    pub extremal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub dimension: usize,
    pub rays: Vec<LatticeVector>,
    pub valid: bool,
    pub rho: Option<usize>,
    pub fano: Option<bool>,
    pub iota: Option<i64>,
    pub relations: Vec<RelationSummary>,
    #[serde(serialize_with = "serialize_bigints")]
    pub f_vector: Vec<BigInt>,
    /// Anticanonical degree of wall curves mapped to their multiplicity.
    pub wall_degrees: BTreeMap<i64, usize>,
    pub mori_extremal_rays: usize,
    /// Named checks; every entry must be `true` for the fan to pass.
    pub checks: BTreeMap<String, bool>,
    pub mukai: Option<MukaiReport>,
}

impl FanReport {
    /// Whether every check passed.
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&v| v)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, &v)| !v).map(|(k, _)| k.as_str()).collect()
    }

    pub fn mukai_equality(&self) -> bool {
        self.mukai.as_ref().is_some_and(|m| m.inequality_lhs == m.dim_n)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    FVector(#[from] FVectorError),
}

impl From<crate::primitive::PrimitiveError> for AnalysisError {
    fn from(e: crate::primitive::PrimitiveError) -> Self {
        AnalysisError::Invariant(e.into())
    }
}

/// Collections of order `iota + 1` are pairwise disjoint.
pub fn next_order_collections_disjoint(relations: &[PrimitiveRelation], iota: i64) -> bool {
    let sets: Vec<_> = relations
        .iter()
        .filter(|r| r.order as i64 == iota + 1)
        .map(|r| r.collection)
        .collect();
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| a.is_disjoint(*b)))
}

pub fn analyze(fan: &Fan) -> Result<FanReport, AnalysisError> {
    analyze_with(fan, ValidationOptions::default(), Execution::default())
}

/// Validates the fan and, if valid, computes every invariant and consistency check.
pub fn analyze_with(
    fan: &Fan,
    opts: ValidationOptions,
    exec: Execution,
) -> Result<FanReport, AnalysisError> {
    let n = fan.dim();
    let validation = validate_with(fan, opts);
    let mut checks: BTreeMap<String, bool> = validation
        .checks
        .iter()
        .map(|c| (format!("valid.{}", c.check.name()), c.passed))
        .collect();
    let fv = f_vector(fan);
    let mut report = FanReport {
        dimension: n,
        rays: fan.rays().to_vec(),
        valid: validation.is_valid(),
        rho: None,
        fano: None,
        iota: None,
        relations: Vec::new(),
        f_vector: fv.entries().to_vec(),
        wall_degrees: BTreeMap::new(),
        mori_extremal_rays: 0,
        checks: BTreeMap::new(),
        mukai: None,
    };
    if !report.valid {
        report.checks = checks;
        return Ok(report);
    }

    let relations = primitive_relations_with(fan, exec)?;
    let walls = wall_curves_with(fan, exec)?;
    let extremals = extremal_classes_from_walls(fan, &walls, exec);
    let fano = relations.iter().all(|r| r.degree >= 1);
    let iota = if fano { Some(min_wall_degree(&walls)?) } else { None };

    report.rho = Some(picard_number(fan));
    report.fano = Some(fano);
    report.iota = iota;
    report.mori_extremal_rays = extremals.len();
    for w in &walls {
        *report.wall_degrees.entry(w.anticanonical_degree).or_default() += 1;
    }
    report.relations = relations
        .iter()
        .map(|r| RelationSummary {
            collection: r.collection.to_vec(),
            order: r.order,
            degree: r.degree,
            targets: r.targets.to_vec(),
            coefficients: r.coefficients.clone(),
            extremal: spans_extremal_ray(&extremals, r),
        })
        .collect();

    checks.insert("euler_relation".into(), fv.euler_holds());
    checks.insert("h_vector_palindromic".into(), is_palindromic(&fv));
    if n >= 2 {
        let ds: DegreeSumCheck = degree_sum_from_parts(fan, &walls, &fv, iota)?;
        checks.insert("degree_sum_identity".into(), ds.identity_holds);
        if let Some(ok) = ds.inequality_holds {
            checks.insert("degree_sum_inequality".into(), ok);
        }
    }

    if let Some(iota) = iota {
        checks.insert("pseudo_index_below_degrees".into(), relations.iter().all(|r| iota <= r.degree));
        checks.insert("binomial_identities".into(), check_binomial_identities(&fv, iota));
        checks.insert(
            "fibration_criterion".into(),
            fibration_from_parts(fan, &relations, iota).is_ok(),
        );
        if iota > 1 {
            checks.insert(
                "next_order_collections_disjoint".into(),
                next_order_collections_disjoint(&relations, iota),
            );
        }
        let product = product_of_projective_spaces(fan);
        let is_projective_space = product.as_deref() == Some(&[n][..]);
        checks.insert(
            "simplex_criterion".into(),
            is_simplex_criterion(&fv) == is_projective_space,
        );
        if iota > (n / 2) as i64 + 1 {
            checks.insert("large_index_is_projective_space".into(), is_projective_space);
        }
        let hypothesis = 4 * iota > n as i64 + 4;
        if hypothesis {
            let found = relations
                .iter()
                .any(|r| r.degree < 2 * iota && (r.targets.len() as i64) <= iota - 2);
            checks.insert("small_codim_contractible".into(), found);
        }
        let mukai = mukai_from_parts(fan, iota);
        checks.insert("mukai_inequality".into(), mukai.inequality_holds);
        checks.insert(
            "mukai_equality_recognized".into(),
            mukai.equality_case != EqualityCase::EqualButUnrecognized,
        );
        report.mukai = Some(mukai);
    }
    report.checks = checks;
    Ok(report)
}

/// Key-sorted, pretty-printed JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("reports serialize to JSON");
    let mut s = serde_json::to_string_pretty(&tree).expect("JSON values print");
    s.push('\n');
    s
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

pub fn to_text(r: &FanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimension: {}", r.dimension);
    let _ = writeln!(s, "rays: {}", join(&r.rays, " "));
    let _ = writeln!(s, "valid: {}", r.valid);
    let _ = writeln!(s, "rho: {}", opt(&r.rho));
    let _ = writeln!(s, "fano: {}", opt(&r.fano));
    let _ = writeln!(s, "iota: {}", opt(&r.iota));
    let _ = writeln!(s, "relations:");
    for rel in &r.relations {
        let rhs = if rel.targets.is_empty() {
            "0".to_string()
        } else {
            join(rel.coefficients.iter().zip(&rel.targets).map(|(a, y)| format!("{a}*x{y}")), " + ")
        };
        let _ = writeln!(
            s,
            "  {{{}}} = {rhs}  order {} degree {}{}",
            join(&rel.collection, ","),
            rel.order,
            rel.degree,
            if rel.extremal { "  extremal" } else { "" }
        );
    }
    let _ = writeln!(s, "f_vector: {}", join(&r.f_vector, " "));
    let _ = writeln!(
        s,
        "wall_degrees: {}",
        join(r.wall_degrees.iter().map(|(d, c)| format!("{d}x{c}")), " ")
    );
    let _ = writeln!(s, "mori_extremal_rays: {}", r.mori_extremal_rays);
    let _ = writeln!(s, "checks:");
    for (name, ok) in &r.checks {
        let _ = writeln!(s, "  {name}: {}", if *ok { "pass" } else { "FAIL" });
    }
    if let Some(m) = &r.mukai {
        let _ = writeln!(s, "{}", mukai_text(m).trim_end());
    }
    s
}

pub fn mukai_text(m: &MukaiReport) -> String {
    let verdict = match &m.equality_case {
        EqualityCase::NotEqual => "strict".to_string(),
        EqualityCase::ProductOfProjectiveSpaces(f) => format!("equality, product of P^{}", join(f, " x P^")),
        EqualityCase::EqualButUnrecognized => "equality, NOT RECOGNIZED".to_string(),
    };
    format!(
        "mukai: rho={} iota={} rho*(iota-1)={} n={} holds={} ({verdict})\n",
        m.picard_rho, m.pseudo_index_iota, m.inequality_lhs, m.dim_n, m.inequality_holds
    )
}
