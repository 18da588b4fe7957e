//! Zariski q-decomposition `D = P + N`.
//!
//! `N` is a nonnegative combination of prime classes whose pairwise Gram
//! matrix is negative definite, and `P` pairs nonnegatively with every
//! prime and is orthogonal to the primes in `N`'s support. The engine
//! [`decompose`] realizes the decomposition by accumulating every prime
//! that pairs negatively with the running class and re-solving the full
//! orthogonality system each round; [`decompose_bruteforce`] is an
//! independent oracle that finds the same answer by subset exhaustion.

use crate::model::{DivisorClass, EffectiveExpression, HKModel, ModelError};
use crate::rat::{format_rat, serde_rat, serde_rat_map, Rat};
use crate::ratlin::{is_negative_definite, solve_symmetric};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZariskiError {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// The accumulated support's Gram matrix failed negative definiteness:
    /// the input is outside the pseudo-effective model cone, or the model
    /// is invalid.
    #[error("support {{{}}} has a Gram matrix that is not negative definite", .0.join(", "))]
    SupportNotNegativeDefinite(Vec<String>),
    /// The orthogonality solve produced a negative coefficient. Unreachable
    /// on validated models (nonnegative pairwise prime pairings make every
    /// accumulated solve monotone); kept as a hard error for defense.
    #[error("orthogonality solution assigns {} to prime `{name}`", format_rat(.value))]
    NegativeCoefficient { name: String, value: Rat },
    /// Defensive: negative-definite support Gram matrices are always
    /// invertible, so this cannot fire after the definiteness check.
    #[error("support Gram matrix is singular")]
    SingularSupportGram,
    #[error("prime count {0} exceeds the brute-force guard of 20")]
    PrimeCountTooLarge(usize),
    /// No prime subset yields an acceptable decomposition: the class is
    /// outside the pseudo-effective model cone.
    #[error("no prime subset yields a valid decomposition")]
    NoValidSubset,
    /// Impossible for valid models; raised as an internal-consistency
    /// failure.
    #[error("multiple distinct decompositions found")]
    MultipleDistinctDecompositions,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Soft warnings attached to a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Diagnostic {
    /// `q(P) < 0` or `q(P, ω) < 0`: cannot happen when the prime list is
    /// complete for a genuine manifold, so the model is probably truncated.
    IncompleteModelSuspected,
}

/// The result `D = P + Σ coefficients[E]·E`, canonicalized: every stored
/// coefficient is strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(rename = "P")]
    positive: DivisorClass,
    #[serde(rename = "N", with = "serde_rat_map")]
    coefficients: BTreeMap<String, Rat>,
    rounds: usize,
    diagnostics: Vec<Diagnostic>,
}

impl Decomposition {
    /// Unchecked assembly, for hand-built inputs to [`verify`].
    pub fn from_parts(
        positive: DivisorClass,
        coefficients: BTreeMap<String, Rat>,
        rounds: usize,
        diagnostics: Vec<Diagnostic>,
    ) -> Self {
        Decomposition {
            positive,
            coefficients,
            rounds,
            diagnostics,
        }
    }

    pub fn positive_part(&self) -> &DivisorClass {
        &self.positive
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rat> {
        &self.coefficients
    }

    /// Prime names with strictly positive coefficient, in name order.
    pub fn support(&self) -> Vec<&str> {
        self.coefficients.keys().map(String::as_str).collect()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn has_clean_diagnostics(&self) -> bool {
        self.diagnostics.is_empty()
    }

    /// `N` as a class: `Σ coefficients[E]·E`.
    pub fn negative_part(&self, m: &HKModel) -> Result<DivisorClass, ModelError> {
        self.as_effective_expression().class_in(m)
    }

    pub fn as_effective_expression(&self) -> EffectiveExpression {
        EffectiveExpression::from_coefficients(
            self.coefficients
                .iter()
                .map(|(k, v)| (k.clone(), v.clone())),
        )
    }

    /// Semantic agreement: identical `P`, coefficients, and diagnostics.
    /// `rounds` is deliberately ignored (the brute-force oracle performs no
    /// iteration and always reports 0 rounds).
    pub fn agrees_with(&self, other: &Decomposition) -> bool {
        self.positive == other.positive
            && self.coefficients == other.coefficients
            && self.diagnostics == other.diagnostics
    }

    /// Coefficient of a prime, zero when absent from the support.
    pub fn coefficient(&self, name: &str) -> Rat {
        self.coefficients
            .get(name)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
}

fn diagnostics_for(m: &HKModel, p: &DivisorClass) -> Vec<Diagnostic> {
    if m.q_square(p).is_negative() || m.q(p, m.kahler()).is_negative() {
        vec![Diagnostic::IncompleteModelSuspected]
    } else {
        Vec::new()
    }
}

/// Iterative engine. See [`decompose_trace`] for the intermediate classes.
pub fn decompose(m: &HKModel, d: &DivisorClass) -> Result<Decomposition, ZariskiError> {
    decompose_trace(m, d).map(|(dec, _)| dec)
}

/// Like [`decompose`], also returning the running class after each round
/// (the last entry equals the final positive part when rounds > 0).
pub fn decompose_trace(
    m: &HKModel,
    d: &DivisorClass,
) -> Result<(Decomposition, Vec<DivisorClass>), ZariskiError> {
    if d.rank() != m.rank() {
        return Err(ZariskiError::DimensionMismatch {
            expected: m.rank(),
            found: d.rank(),
        });
    }
    let primes = m.primes();
    let mut support: Vec<usize> = Vec::new();
    let mut in_support = vec![false; primes.len()];
    let mut coeffs: Vec<Rat> = Vec::new();
    let mut current = d.clone();
    let mut trace = Vec::new();
    let mut rounds = 0;

    loop {
        let mut grew = false;
        for (i, p) in primes.iter().enumerate() {
            if !in_support[i] && m.q(&current, &p.class).is_negative() {
                support.push(i);
                in_support[i] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
        rounds += 1;

        let classes: Vec<&DivisorClass> = support.iter().map(|&i| &primes[i].class).collect();
        let gram = m.space().gram_of(&classes);
        if !is_negative_definite(&gram) {
            return Err(ZariskiError::SupportNotNegativeDefinite(
                support.iter().map(|&i| primes[i].name.clone()).collect(),
            ));
        }
        let rhs: Vec<Rat> = support.iter().map(|&i| m.q(d, &primes[i].class)).collect();
        let x = solve_symmetric(&gram, &rhs).map_err(|_| ZariskiError::SingularSupportGram)?;
        if let Some(k) = x.iter().position(Signed::is_negative) {
            return Err(ZariskiError::NegativeCoefficient {
                name: primes[support[k]].name.clone(),
                value: x[k].clone(),
            });
        }
        current = d.clone();
        for (k, &i) in support.iter().enumerate() {
            current = current.sub(&primes[i].class.scale(&x[k]));
        }
        coeffs = x;
        trace.push(current.clone());
    }

    let mut coefficients = BTreeMap::new();
    for (k, &i) in support.iter().enumerate() {
        if coeffs[k].is_positive() {
            coefficients.insert(primes[i].name.clone(), coeffs[k].clone());
        }
    }
    let diagnostics = diagnostics_for(m, &current);
    Ok((
        Decomposition {
            positive: current,
            coefficients,
            rounds,
            diagnostics,
        },
        trace,
    ))
}

/// Every distinct canonical decomposition the exhaustive search accepts.
/// A subset `S` of primes is accepted when its Gram matrix is negative
/// definite, the orthogonality solve over `S` is nonnegative, and the
/// resulting `P` pairs nonnegatively with every model prime.
pub fn bruteforce_candidates(
    m: &HKModel,
    d: &DivisorClass,
) -> Result<Vec<Decomposition>, ZariskiError> {
    if d.rank() != m.rank() {
        return Err(ZariskiError::DimensionMismatch {
            expected: m.rank(),
            found: d.rank(),
        });
    }
    let primes = m.primes();
    let count = primes.len();
    if count > 20 {
        return Err(ZariskiError::PrimeCountTooLarge(count));
    }
    let prime_gram = m.prime_gram();
    let qd: Vec<Rat> = primes.iter().map(|p| m.q(d, &p.class)).collect();

    let mut results: Vec<Decomposition> = Vec::new();
    if qd.iter().all(|v| !v.is_negative()) {
        results.push(Decomposition {
            positive: d.clone(),
            coefficients: BTreeMap::new(),
            rounds: 0,
            diagnostics: diagnostics_for(m, d),
        });
    }

    // negdef[mask] is only consulted for masks strictly below the current
    // one, so ascending order lets each subset reuse its children.
    let mut negdef = vec![false; 1usize << count];
    if count > 0 {
        negdef[0] = true;
    }
    'mask: for mask in 1..(1usize << count) {
        let mut bits = mask;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !negdef[mask ^ low] {
                continue 'mask;
            }
            bits ^= low;
        }
        let idx: Vec<usize> = (0..count).filter(|i| mask & (1 << i) != 0).collect();
        let sub = prime_gram.principal_submatrix(&idx);
        if !is_negative_definite(&sub) {
            continue;
        }
        negdef[mask] = true;

        let rhs: Vec<Rat> = idx.iter().map(|&i| qd[i].clone()).collect();
        let x = solve_symmetric(&sub, &rhs).map_err(|_| ZariskiError::SingularSupportGram)?;
        if x.iter().any(Signed::is_negative) {
            continue;
        }
        // q(P, E_e) = q(D, E_e) − Σ_k x_k q(E_{idx_k}, E_e), no class
        // arithmetic needed for the acceptance scan.
        for e in 0..count {
            let mut val = qd[e].clone();
            for (k, &i) in idx.iter().enumerate() {
                val -= &x[k] * prime_gram.at(i, e);
            }
            if val.is_negative() {
                continue 'mask;
            }
        }

        let mut coefficients = BTreeMap::new();
        let mut positive = d.clone();
        for (k, &i) in idx.iter().enumerate() {
            positive = positive.sub(&primes[i].class.scale(&x[k]));
            if x[k].is_positive() {
                coefficients.insert(primes[i].name.clone(), x[k].clone());
            }
        }
        if !results.iter().any(|r| r.coefficients == coefficients) {
            let diagnostics = diagnostics_for(m, &positive);
            results.push(Decomposition {
                positive,
                coefficients,
                rounds: 0,
                diagnostics,
            });
        }
    }
    Ok(results)
}

/// Exhaustive oracle: enumerates prime subsets and demands exactly one
/// accepted canonical decomposition. `rounds` is reported as 0.
pub fn decompose_bruteforce(m: &HKModel, d: &DivisorClass) -> Result<Decomposition, ZariskiError> {
    let mut candidates = bruteforce_candidates(m, d)?;
    match candidates.len() {
        0 => Err(ZariskiError::NoValidSubset),
        1 => Ok(candidates.pop().expect("length checked")),
        _ => Err(ZariskiError::MultipleDistinctDecompositions),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// The two soft conditions, reported with their exact values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyDiagnostic {
    pub name: &'static str,
    pub pass: bool,
    #[serde(with = "serde_rat")]
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
    pub diagnostics: Vec<VerifyDiagnostic>,
    pub all_passed: bool,
}

/// Checks the defining conditions of a claimed decomposition of `d`:
/// sum reconstruction, strict coefficient positivity, support Gram negative
/// definiteness, orthogonality of `P` on the support, and nonnegative
/// pairing of `P` against every model prime. Failures are data, never
/// errors.
pub fn verify(m: &HKModel, d: &DivisorClass, dec: &Decomposition) -> VerifyReport {
    let rank_ok = d.rank() == m.rank() && dec.positive.rank() == m.rank();
    let p = &dec.positive;
    let mut checks = Vec::with_capacity(5);

    // Resolve coefficient names against the model once.
    let mut resolved = Vec::new();
    let mut unknown: Option<&str> = None;
    for (name, c) in &dec.coefficients {
        match m.prime(name) {
            Some(prime) => resolved.push((prime, c)),
            None => {
                unknown = Some(name);
                break;
            }
        }
    }
    let structural_detail = if !rank_ok {
        Some("class rank differs from model rank".to_string())
    } else {
        unknown.map(|n| format!("coefficient references unknown prime `{n}`"))
    };

    checks.push(match &structural_detail {
        Some(detail) => VerifyCheck {
            name: "sum_matches_input",
            pass: false,
            detail: Some(detail.clone()),
        },
        None => {
            let mut acc = p.clone();
            for (prime, c) in &resolved {
                acc = acc.add(&prime.class.scale(c));
            }
            let pass = acc == *d;
            VerifyCheck {
                name: "sum_matches_input",
                pass,
                detail: (!pass).then(|| "P + N differs from the input class".to_string()),
            }
        }
    });

    {
        let offender = dec
            .coefficients
            .iter()
            .find(|(_, c)| !c.is_positive());
        checks.push(VerifyCheck {
            name: "coefficients_positive",
            pass: offender.is_none(),
            detail: offender
                .map(|(n, c)| format!("coefficient of `{n}` is {}", format_rat(c))),
        });
    }

    checks.push(match &structural_detail {
        Some(detail) => VerifyCheck {
            name: "support_negative_definite",
            pass: false,
            detail: Some(detail.clone()),
        },
        None => {
            let classes: Vec<&DivisorClass> =
                resolved.iter().map(|(prime, _)| &prime.class).collect();
            let pass = is_negative_definite(&m.space().gram_of(&classes));
            VerifyCheck {
                name: "support_negative_definite",
                pass,
                detail: (!pass).then(|| "support Gram matrix is not negative definite".to_string()),
            }
        }
    });

    checks.push(match &structural_detail {
        Some(detail) => VerifyCheck {
            name: "orthogonality_on_support",
            pass: false,
            detail: Some(detail.clone()),
        },
        None => {
            let offender = resolved.iter().find_map(|(prime, _)| {
                let v = m.q(p, &prime.class);
                (!v.is_zero()).then(|| format!("q(P, {}) = {}", prime.name, format_rat(&v)))
            });
            VerifyCheck {
                name: "orthogonality_on_support",
                pass: offender.is_none(),
                detail: offender,
            }
        }
    });

    checks.push(if rank_ok {
        let offender = m.primes().iter().find_map(|prime| {
            let v = m.q(p, &prime.class);
            v.is_negative()
                .then(|| format!("q(P, {}) = {}", prime.name, format_rat(&v)))
        });
        VerifyCheck {
            name: "nonnegative_pairing_all_primes",
            pass: offender.is_none(),
            detail: offender,
        }
    } else {
        VerifyCheck {
            name: "nonnegative_pairing_all_primes",
            pass: false,
            detail: Some("class rank differs from model rank".to_string()),
        }
    });

    let diagnostics = if rank_ok {
        let qp = m.q_square(p);
        let qpo = m.q(p, m.kahler());
        vec![
            VerifyDiagnostic {
                name: "q_P_nonnegative",
                pass: !qp.is_negative(),
                value: qp,
            },
            VerifyDiagnostic {
                name: "q_P_omega_nonnegative",
                pass: !qpo.is_negative(),
                value: qpo,
            },
        ]
    } else {
        Vec::new()
    };

    let all_passed = checks.iter().all(|c| c.pass);
    VerifyReport {
        checks,
        diagnostics,
        all_passed,
    }
}

/// Minimality of `N`: any nonnegative prime combination `N'` with
/// `D − N'` in the dual cone dominates `N` coefficient-wise. Returns the
/// comparison verdict; `false` would contradict the theory, so callers
/// treat it as a bug detector.
pub fn minimality_check(
    m: &HKModel,
    d: &DivisorClass,
    dec: &Decomposition,
    nprime: &EffectiveExpression,
) -> Result<bool, ZariskiError> {
    if d.rank() != m.rank() {
        return Err(ZariskiError::DimensionMismatch {
            expected: m.rank(),
            found: d.rank(),
        });
    }
    if nprime.positive_part().is_some_and(|pp| !pp.is_zero()) {
        return Err(ZariskiError::PreconditionFailed(
            "N' must be a pure nonnegative prime combination".to_string(),
        ));
    }
    nprime
        .validate_in(m)
        .map_err(|e| ZariskiError::PreconditionFailed(e.to_string()))?;
    let nclass = nprime
        .class_in(m)
        .map_err(|e| ZariskiError::PreconditionFailed(e.to_string()))?;
    let remainder = d.sub(&nclass);
    let verdict = crate::cones::in_dual_bk_cone(m, &remainder)
        .expect("rank already checked against the model");
    if !verdict.member {
        return Err(ZariskiError::PreconditionFailed(format!(
            "D − N' is outside the dual cone ({})",
            verdict.describe_failures()
        )));
    }
    Ok(m.primes()
        .iter()
        .all(|p| nprime.coefficient(&p.name) >= dec.coefficient(&p.name)))
}
