//! Cone predicates and ray analysis.
//!
//! Three nested membership tests (positive cone, its closure, and the dual
//! cone that models the closed birational Kähler cone), the parallel-or-
//! negative-square classification of classes orthogonal to a null class,
//! an exact extremal-ray test over an explicit generator list, and the
//! construction writing a null dual-cone class as a nonnegative prime
//! combination from a nontrivial splitting.

use crate::model::{DivisorClass, EffectiveExpression, HKModel};
use crate::rat::{format_rat, serde_rat, serde_rat_vec, Rat};
use crate::simplex::{self, LpResult};
use crate::zariski::{decompose, Decomposition};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConesError {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no nonnegative combination of the generators reaches the class")]
    NotInCone,
    /// A conclusion that is a theorem for valid inputs failed to hold;
    /// indicates a bug or an invalid model rather than caller error.
    #[error("internal consistency failure: {0}")]
    InternalConsistencyFailure(String),
    /// `b + g = 1` in the representative construction: the two split
    /// classes were proportional to the null class after all.
    #[error("split classes are proportional to the null class (b + g = 1)")]
    ProportionalityContradiction,
}

/// One violated membership inequality with its exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedCondition {
    pub condition: String,
    #[serde(with = "serde_rat")]
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeVerdict {
    pub member: bool,
    pub failed_conditions: Vec<FailedCondition>,
}

impl ConeVerdict {
    fn from_failures(failed_conditions: Vec<FailedCondition>) -> Self {
        ConeVerdict {
            member: failed_conditions.is_empty(),
            failed_conditions,
        }
    }

    /// Human-readable summary of the violated inequalities.
    pub fn describe_failures(&self) -> String {
        self.failed_conditions
            .iter()
            .map(|f| format!("{} has value {}", f.condition, format_rat(&f.value)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn check_rank(m: &HKModel, l: &DivisorClass) -> Result<(), ConesError> {
    if l.rank() != m.rank() {
        return Err(ConesError::DimensionMismatch {
            expected: m.rank(),
            found: l.rank(),
        });
    }
    Ok(())
}

/// Strict positive cone: `q(L) > 0` and `q(L, ω) > 0`.
pub fn in_positive_cone(m: &HKModel, l: &DivisorClass) -> Result<ConeVerdict, ConesError> {
    check_rank(m, l)?;
    let mut failed = Vec::new();
    let q = m.q_square(l);
    if !q.is_positive() {
        failed.push(FailedCondition {
            condition: "q(L) > 0".to_string(),
            value: q,
        });
    }
    let qo = m.q(l, m.kahler());
    if !qo.is_positive() {
        failed.push(FailedCondition {
            condition: "q(L, omega) > 0".to_string(),
            value: qo,
        });
    }
    Ok(ConeVerdict::from_failures(failed))
}

/// Closure of the positive cone: `q(L) ≥ 0` and `q(L, ω) ≥ 0`.
pub fn in_closed_positive_cone(m: &HKModel, l: &DivisorClass) -> Result<ConeVerdict, ConesError> {
    check_rank(m, l)?;
    let mut failed = Vec::new();
    let q = m.q_square(l);
    if q.is_negative() {
        failed.push(FailedCondition {
            condition: "q(L) >= 0".to_string(),
            value: q,
        });
    }
    let qo = m.q(l, m.kahler());
    if qo.is_negative() {
        failed.push(FailedCondition {
            condition: "q(L, omega) >= 0".to_string(),
            value: qo,
        });
    }
    Ok(ConeVerdict::from_failures(failed))
}

/// Dual cone modeling the closed birational Kähler cone: nonnegative
/// pairing against every model prime, intersected with the closed positive
/// cone.
pub fn in_dual_bk_cone(m: &HKModel, l: &DivisorClass) -> Result<ConeVerdict, ConesError> {
    check_rank(m, l)?;
    let mut failed = Vec::new();
    for p in m.primes() {
        let v = m.q(l, &p.class);
        if v.is_negative() {
            failed.push(FailedCondition {
                condition: format!("q(L, {}) >= 0", p.name),
                value: v,
            });
        }
    }
    failed.extend(in_closed_positive_cone(m, l)?.failed_conditions);
    Ok(ConeVerdict::from_failures(failed))
}

/// Outcome of classifying a class `D` orthogonal to a null class `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum NullPairClass {
    /// `D = factor · L` (and then `q(D) = 0`).
    Parallel {
        #[serde(with = "serde_rat")]
        factor: Rat,
    },
    /// `D` is not proportional to `L`, forcing `q(D) < 0`.
    NegativeSquare {
        #[serde(with = "serde_rat")]
        q_value: Rat,
    },
}

fn require_pseudoeffective_witness(
    m: &HKModel,
    d: &DivisorClass,
    witness: Option<&EffectiveExpression>,
) -> Result<(), ConesError> {
    match witness {
        Some(w) => {
            w.validate_in(m)
                .map_err(|e| ConesError::PreconditionFailed(e.to_string()))?;
            let cls = w
                .class_in(m)
                .map_err(|e| ConesError::PreconditionFailed(e.to_string()))?;
            if cls != *d {
                return Err(ConesError::PreconditionFailed(
                    "witness expression does not sum to D".to_string(),
                ));
            }
        }
        None => {
            let dec = decompose(m, d).map_err(|e| {
                ConesError::PreconditionFailed(format!(
                    "no pseudo-effective witness for D could be derived: {e}"
                ))
            })?;
            if !dec.has_clean_diagnostics() {
                return Err(ConesError::PreconditionFailed(
                    "derived decomposition of D carries incomplete-model diagnostics".to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// For a nonzero `L` in the closed positive cone and a pseudo-effective `D`
/// with `q(L, D) = 0`: either `D` is a rational multiple of `L` (with
/// `q(D) = 0`), or `q(D) < 0`. The dichotomy is forced by the signature,
/// so a violation raises [`ConesError::InternalConsistencyFailure`].
///
/// `witness` certifies pseudo-effectivity of `D`; with `None`, a witness is
/// derived by decomposing `D` and requiring clean diagnostics.
pub fn null_pair_classify(
    m: &HKModel,
    l: &DivisorClass,
    d: &DivisorClass,
    witness: Option<&EffectiveExpression>,
) -> Result<NullPairClass, ConesError> {
    check_rank(m, l)?;
    check_rank(m, d)?;
    if l.is_zero() {
        return Err(ConesError::PreconditionFailed("L is zero".to_string()));
    }
    let verdict = in_closed_positive_cone(m, l)?;
    if !verdict.member {
        return Err(ConesError::PreconditionFailed(format!(
            "L is outside the closed positive cone ({})",
            verdict.describe_failures()
        )));
    }
    let pairing = m.q(l, d);
    if !pairing.is_zero() {
        return Err(ConesError::PreconditionFailed(format!(
            "q(L, D) = {}, expected 0",
            format_rat(&pairing)
        )));
    }
    require_pseudoeffective_witness(m, d, witness)?;

    let qd = m.q_square(d);
    match d.proportion_to(l) {
        Some(factor) => {
            if !qd.is_zero() {
                return Err(ConesError::InternalConsistencyFailure(format!(
                    "D is parallel to L but q(D) = {}",
                    format_rat(&qd)
                )));
            }
            Ok(NullPairClass::Parallel { factor })
        }
        None => {
            if !qd.is_negative() {
                return Err(ConesError::InternalConsistencyFailure(format!(
                    "D is not parallel to L but q(D) = {} is not negative",
                    format_rat(&qd)
                )));
            }
            Ok(NullPairClass::NegativeSquare { q_value: qd })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ExtremalityResult {
    /// Every nonnegative combination reaching `L` is supported on
    /// generators proportional to `L`.
    Extremal,
    /// `Σ witness_i · g_i = L` with some non-proportional generator
    /// weighted positively.
    NotExtremal {
        #[serde(with = "serde_rat_vec")]
        witness: Vec<Rat>,
    },
}

/// Decides whether `L` spans an extremal ray of the cone generated by
/// `generators`: for each generator not proportional to `L`, the maximum of
/// its coefficient over `{λ ≥ 0 : Σ λ_i g_i = L}` is computed exactly; any
/// positive (or unbounded) maximum yields a witness.
pub fn extremal_ray_test(
    generators: &[DivisorClass],
    l: &DivisorClass,
) -> Result<ExtremalityResult, ConesError> {
    for g in generators {
        if g.rank() != l.rank() {
            return Err(ConesError::DimensionMismatch {
                expected: l.rank(),
                found: g.rank(),
            });
        }
    }
    if l.is_zero() {
        return Err(ConesError::PreconditionFailed("L is zero".to_string()));
    }
    let columns: Vec<Vec<Rat>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    let rhs = l.coords().to_vec();
    if !simplex::is_feasible(&columns, &rhs) {
        return Err(ConesError::NotInCone);
    }
    for (j, g) in generators.iter().enumerate() {
        if g.proportion_to(l).is_some() {
            continue;
        }
        let witness = match simplex::maximize_coordinate(&columns, &rhs, j) {
            LpResult::Bounded { value, point } if value.is_positive() => Some(point),
            LpResult::Unbounded { point } => Some(point),
            _ => None,
        };
        if let Some(witness) = witness {
            debug_assert!(reaches(generators, &witness, l));
            return Ok(ExtremalityResult::NotExtremal { witness });
        }
    }
    Ok(ExtremalityResult::Extremal)
}

fn reaches(generators: &[DivisorClass], lambda: &[Rat], l: &DivisorClass) -> bool {
    let mut acc = DivisorClass::zero(l.rank());
    for (c, g) in lambda.iter().zip(generators) {
        acc = acc.add(&g.scale(c));
    }
    acc == *l && lambda.iter().all(|c| !c.is_negative())
}

/// Classifies a positive part against `L`, returning its proportionality
/// factor. The positive part of a clean decomposition lies in the closed
/// positive cone, so a non-parallel outcome is an internal inconsistency.
fn parallel_factor(
    m: &HKModel,
    l: &DivisorClass,
    dec: &Decomposition,
    which: &str,
) -> Result<Rat, ConesError> {
    let p = dec.positive_part();
    let witness = EffectiveExpression::new(BTreeMap::new(), Some(p.clone()));
    match null_pair_classify(m, l, p, Some(&witness))? {
        NullPairClass::Parallel { factor } => Ok(factor),
        NullPairClass::NegativeSquare { q_value } => {
            Err(ConesError::InternalConsistencyFailure(format!(
                "positive part of {which} is not parallel to L (q = {})",
                format_rat(&q_value)
            )))
        }
    }
}

/// Writes a nonzero null class `L` of the dual cone as a nonnegative prime
/// combination, given a splitting `L = D + G` into pseudo-effective
/// expressions. Decomposes both sides, reads off the proportionality
/// factors `P_D = b·L`, `P_G = g·L`, and returns
/// `M = (N_D + N_G) / (1 − b − g)`, which equals `L` as a class.
///
/// `b + g = 1` means `D` and `G` were proportional to `L` after all and
/// raises [`ConesError::ProportionalityContradiction`].
pub fn effective_null_representative(
    m: &HKModel,
    l: &DivisorClass,
    d_expr: &EffectiveExpression,
    g_expr: &EffectiveExpression,
) -> Result<EffectiveExpression, ConesError> {
    check_rank(m, l)?;
    if l.is_zero() {
        return Err(ConesError::PreconditionFailed("L is zero".to_string()));
    }
    let verdict = in_dual_bk_cone(m, l)?;
    if !verdict.member {
        return Err(ConesError::PreconditionFailed(format!(
            "L is outside the dual cone ({})",
            verdict.describe_failures()
        )));
    }
    let ql = m.q_square(l);
    if !ql.is_zero() {
        return Err(ConesError::PreconditionFailed(format!(
            "q(L) = {}, expected 0",
            format_rat(&ql)
        )));
    }
    for (expr, which) in [(d_expr, "D"), (g_expr, "G")] {
        expr.validate_in(m).map_err(|e| {
            ConesError::PreconditionFailed(format!("{which} is not pseudo-effective: {e}"))
        })?;
    }
    let d = d_expr
        .class_in(m)
        .expect("validated expression always sums");
    let g = g_expr
        .class_in(m)
        .expect("validated expression always sums");
    if d.add(&g) != *l {
        return Err(ConesError::PreconditionFailed(
            "D + G does not sum to L".to_string(),
        ));
    }

    let mut factor_sum = Rat::zero();
    let mut coefficients: BTreeMap<String, Rat> = BTreeMap::new();
    for (cls, which) in [(&d, "D"), (&g, "G")] {
        let dec = decompose(m, cls).map_err(|e| {
            ConesError::InternalConsistencyFailure(format!(
                "decomposition of pseudo-effective {which} failed: {e}"
            ))
        })?;
        if !dec.has_clean_diagnostics() {
            return Err(ConesError::InternalConsistencyFailure(format!(
                "decomposition of {which} carries incomplete-model diagnostics"
            )));
        }
        let qlp = m.q(l, dec.positive_part());
        if !qlp.is_zero() {
            return Err(ConesError::InternalConsistencyFailure(format!(
                "q(L, P_{which}) = {}, expected 0",
                format_rat(&qlp)
            )));
        }
        factor_sum += parallel_factor(m, l, &dec, which)?;
        for (name, c) in dec.coefficients() {
            *coefficients.entry(name.clone()).or_insert_with(Rat::zero) += c;
        }
    }

    let one = Rat::from_integer(1.into());
    if factor_sum == one {
        return Err(ConesError::ProportionalityContradiction);
    }
    if factor_sum > one {
        return Err(ConesError::InternalConsistencyFailure(format!(
            "b + g = {} exceeds 1",
            format_rat(&factor_sum)
        )));
    }
    let scale = &one - &factor_sum;
    let coefficients: BTreeMap<String, Rat> = coefficients
        .into_iter()
        .map(|(k, v)| (k, v / &scale))
        .collect();
    let result = EffectiveExpression::from_coefficients(coefficients);
    let reconstructed = result
        .class_in(m)
        .expect("coefficients come from model primes");
    if reconstructed != *l {
        return Err(ConesError::InternalConsistencyFailure(
            "representative does not reconstruct L".to_string(),
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog_model, validate_model, Prime, QuadraticSpace};
    use crate::rat::{rat_int, ratio};
    use crate::ratlin::RatMatrix;

    fn dc(coords: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(coords)
    }

    #[test]
    fn positive_cone_examples() {
        let m = catalog_model("U-basic").unwrap();
        assert!(in_positive_cone(&m, m.kahler()).unwrap().member);
        let v = dc(&[0, 1]);
        let verdict = in_positive_cone(&m, &v).unwrap();
        assert!(!verdict.member);
        assert_eq!(verdict.failed_conditions.len(), 1);
        assert_eq!(verdict.failed_conditions[0].condition, "q(L) > 0");
        let neg = dc(&[-1, -2]);
        let verdict = in_positive_cone(&m, &neg).unwrap();
        assert!(!verdict.member);
        assert_eq!(verdict.failed_conditions[0].condition, "q(L, omega) > 0");
    }

    #[test]
    fn closed_cone_examples() {
        let m = catalog_model("U-basic").unwrap();
        assert!(in_closed_positive_cone(&m, &dc(&[0, 1])).unwrap().member);
        assert!(in_closed_positive_cone(&m, &DivisorClass::zero(2))
            .unwrap()
            .member);
        let verdict = in_closed_positive_cone(&m, &dc(&[1, -1])).unwrap();
        assert!(!verdict.member);
        assert_eq!(verdict.failed_conditions[0].condition, "q(L) >= 0");
    }

    #[test]
    fn strict_implies_closed() {
        let m = catalog_model("U-neg2-chain").unwrap();
        for l in [dc(&[1, 2, -1]), dc(&[1, 1, 0]), dc(&[2, 3, 1])] {
            if in_positive_cone(&m, &l).unwrap().member {
                assert!(in_closed_positive_cone(&m, &l).unwrap().member);
            }
        }
    }

    #[test]
    fn dual_cone_examples() {
        let u = catalog_model("U-basic").unwrap();
        let verdict = in_dual_bk_cone(&u, &dc(&[1, 0])).unwrap();
        assert!(!verdict.member);
        assert_eq!(verdict.failed_conditions[0].condition, "q(L, E) >= 0");
        assert_eq!(verdict.failed_conditions[0].value, rat_int(-1));

        let chain = catalog_model("U-neg2-chain").unwrap();
        assert!(in_dual_bk_cone(&chain, &dc(&[2, 2, 1])).unwrap().member);

        let dec = decompose(&u, &dc(&[1, 0])).unwrap();
        assert!(dec.has_clean_diagnostics());
        assert!(in_dual_bk_cone(&u, dec.positive_part()).unwrap().member);
    }

    #[test]
    fn membership_is_scale_invariant() {
        let m = catalog_model("U-neg2-chain").unwrap();
        let t = ratio(7, 3);
        for l in [dc(&[2, 2, 1]), dc(&[0, 1, 0]), dc(&[1, 2, -1])] {
            for f in [
                in_positive_cone as fn(&HKModel, &DivisorClass) -> Result<ConeVerdict, ConesError>,
                in_closed_positive_cone,
                in_dual_bk_cone,
            ] {
                assert_eq!(
                    f(&m, &l).unwrap().member,
                    f(&m, &l.scale(&t)).unwrap().member
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = catalog_model("U-basic").unwrap();
        assert!(matches!(
            in_positive_cone(&m, &dc(&[1, 0, 0])),
            Err(ConesError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn null_pair_parallel_cases() {
        let m = catalog_model("U-basic").unwrap();
        let v = dc(&[0, 1]);
        assert_eq!(
            null_pair_classify(&m, &v, &v, None).unwrap(),
            NullPairClass::Parallel { factor: rat_int(1) }
        );
        assert_eq!(
            null_pair_classify(&m, &v, &v.scale(&rat_int(3)), None).unwrap(),
            NullPairClass::Parallel { factor: rat_int(3) }
        );
        // The zero class is degenerate-parallel with factor 0.
        assert_eq!(
            null_pair_classify(&m, &v, &DivisorClass::zero(2), None).unwrap(),
            NullPairClass::Parallel { factor: rat_int(0) }
        );
    }

    #[test]
    fn null_pair_negative_square_case() {
        let m = catalog_model("U-neg2-chain").unwrap();
        let l = dc(&[0, 1, 0]);
        let e1 = dc(&[0, 1, 1]);
        let witness =
            EffectiveExpression::from_coefficients([("E1".to_string(), rat_int(1))]);
        let got = null_pair_classify(&m, &l, &e1, Some(&witness)).unwrap();
        assert_eq!(
            got,
            NullPairClass::NegativeSquare {
                q_value: rat_int(-2)
            }
        );
        // The derived-witness path agrees.
        assert_eq!(null_pair_classify(&m, &l, &e1, None).unwrap(), got);
    }

    #[test]
    fn null_pair_preconditions() {
        let m = catalog_model("U-basic").unwrap();
        let v = dc(&[0, 1]);
        assert!(matches!(
            null_pair_classify(&m, &DivisorClass::zero(2), &v, None),
            Err(ConesError::PreconditionFailed(_))
        ));
        // L outside the closed positive cone.
        assert!(matches!(
            null_pair_classify(&m, &dc(&[1, -1]), &v, None),
            Err(ConesError::PreconditionFailed(_))
        ));
        // q(L, D) ≠ 0.
        assert!(matches!(
            null_pair_classify(&m, &v, &dc(&[1, 0]), None),
            Err(ConesError::PreconditionFailed(_))
        ));
        // Witness that does not sum to D.
        let wrong =
            EffectiveExpression::from_coefficients([("E".to_string(), rat_int(1))]);
        assert!(matches!(
            null_pair_classify(&m, &v, &v, Some(&wrong)),
            Err(ConesError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn extremality_documented_examples() {
        let gens = vec![dc(&[1, 0]), dc(&[0, 1])];
        match extremal_ray_test(&gens, &dc(&[1, 1])).unwrap() {
            ExtremalityResult::NotExtremal { witness } => {
                assert_eq!(witness, vec![rat_int(1), rat_int(1)]);
            }
            other => panic!("expected NotExtremal, got {other:?}"),
        }
        assert_eq!(
            extremal_ray_test(&gens, &dc(&[1, 0])).unwrap(),
            ExtremalityResult::Extremal
        );

        let gens3 = vec![dc(&[1, 0]), dc(&[0, 1]), dc(&[1, 1])];
        match extremal_ray_test(&gens3, &dc(&[1, 1])).unwrap() {
            ExtremalityResult::NotExtremal { witness } => {
                assert_eq!(witness, vec![rat_int(1), rat_int(1), rat_int(0)]);
                assert!(reaches(&gens3, &witness, &dc(&[1, 1])));
            }
            other => panic!("expected NotExtremal, got {other:?}"),
        }
    }

    #[test]
    fn extremality_errors() {
        let gens = vec![dc(&[1, 0]), dc(&[0, 1])];
        assert_eq!(
            extremal_ray_test(&gens, &dc(&[-1, 0])),
            Err(ConesError::NotInCone)
        );
        assert!(matches!(
            extremal_ray_test(&gens, &DivisorClass::zero(2)),
            Err(ConesError::PreconditionFailed(_))
        ));
        assert_eq!(
            extremal_ray_test(&[], &dc(&[1, 0])),
            Err(ConesError::NotInCone)
        );
        assert!(matches!(
            extremal_ray_test(&[dc(&[1, 0, 0])], &dc(&[1, 0])),
            Err(ConesError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn extremality_with_lineality() {
        let gens = vec![dc(&[1, 0]), dc(&[-1, 0]), dc(&[0, 1])];
        let l = dc(&[0, 1]);
        match extremal_ray_test(&gens, &l).unwrap() {
            ExtremalityResult::NotExtremal { witness } => {
                assert!(reaches(&gens, &witness, &l));
                assert!(witness[0].is_positive() || witness[1].is_positive());
            }
            other => panic!("expected NotExtremal, got {other:?}"),
        }
    }

    #[test]
    fn zero_generators_cannot_fake_nonextremality() {
        // The zero class is proportional to everything, so padding with it
        // never produces a witness.
        let gens = vec![dc(&[1, 0]), dc(&[0, 0])];
        assert_eq!(
            extremal_ray_test(&gens, &dc(&[2, 0])).unwrap(),
            ExtremalityResult::Extremal
        );
    }

    /// Rank-3 model carrying a null dual-cone class that splits through
    /// prime-supported pieces: E1 = (0,1,1), E2 = (4,0,1), L = E1 + E2.
    fn null_split_model() -> HKModel {
        let gram = RatMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(-2)],
        ])
        .unwrap();
        HKModel::new(
            QuadraticSpace::new(gram),
            vec![
                Prime {
                    name: "E1".to_string(),
                    class: dc(&[0, 1, 1]),
                },
                Prime {
                    name: "E2".to_string(),
                    class: dc(&[4, 0, 1]),
                },
            ],
            dc(&[2, 3, -1]),
        )
    }

    #[test]
    fn representative_reconstructs_null_class() {
        let m = null_split_model();
        assert!(validate_model(&m).is_empty());
        let l = dc(&[4, 1, 2]);
        assert!(in_dual_bk_cone(&m, &l).unwrap().member);
        assert!(m.q_square(&l).is_zero());

        let d_expr = EffectiveExpression::from_coefficients([("E1".to_string(), rat_int(1))]);
        let g_expr = EffectiveExpression::from_coefficients([("E2".to_string(), rat_int(1))]);
        let rep = effective_null_representative(&m, &l, &d_expr, &g_expr).unwrap();
        assert_eq!(rep.coefficient("E1"), rat_int(1));
        assert_eq!(rep.coefficient("E2"), rat_int(1));
        assert!(rep.positive_part().is_none());
        assert_eq!(rep.class_in(&m).unwrap(), l);
    }

    #[test]
    fn representative_detects_proportional_split() {
        let m = catalog_model("U-basic").unwrap();
        let v = dc(&[0, 1]);
        let half = EffectiveExpression::new(
            BTreeMap::new(),
            Some(DivisorClass::new(vec![rat_int(0), ratio(1, 2)])),
        );
        assert_eq!(
            effective_null_representative(&m, &v, &half, &half),
            Err(ConesError::ProportionalityContradiction)
        );
    }

    #[test]
    fn representative_preconditions() {
        let m = null_split_model();
        let l = dc(&[4, 1, 2]);
        let d_expr = EffectiveExpression::from_coefficients([("E1".to_string(), rat_int(1))]);
        let g_expr = EffectiveExpression::from_coefficients([("E2".to_string(), rat_int(1))]);
        // q(L) ≠ 0.
        assert!(matches!(
            effective_null_representative(&m, m.kahler(), &d_expr, &g_expr),
            Err(ConesError::PreconditionFailed(_))
        ));
        // Sum mismatch.
        assert!(matches!(
            effective_null_representative(&m, &l, &d_expr, &d_expr),
            Err(ConesError::PreconditionFailed(_))
        ));
        // L outside the dual cone: q((0,2,1)) = -2 < 0.
        let bad_l = dc(&[0, 2, 1]);
        assert!(matches!(
            effective_null_representative(&m, &bad_l, &d_expr, &g_expr),
            Err(ConesError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn verdict_json_shape() {
        let m = catalog_model("U-basic").unwrap();
        let verdict = in_dual_bk_cone(&m, &dc(&[1, 0])).unwrap();
        let text = serde_json::to_string(&verdict).unwrap();
        assert_eq!(
            text,
            r#"{"member":false,"failed_conditions":[{"condition":"q(L, E) >= 0","value":"-1"}]}"#
        );
        let parallel = NullPairClass::Parallel { factor: rat_int(3) };
        assert_eq!(
            serde_json::to_string(&parallel).unwrap(),
            r#"{"kind":"Parallel","factor":"3"}"#
        );
        let extremal = ExtremalityResult::Extremal;
        assert_eq!(
            serde_json::to_string(&extremal).unwrap(),
            r#"{"verdict":"Extremal"}"#
        );
        let witness = ExtremalityResult::NotExtremal {
            witness: vec![rat_int(1), ratio(1, 2)],
        };
        assert_eq!(
            serde_json::to_string(&witness).unwrap(),
            r#"{"verdict":"NotExtremal","witness":["1","1/2"]}"#
        );
    }
}
