//! Lattice model of a HyperKähler Néron–Severi group.
//!
//! A model is a rational quadratic space of signature `(1, r-1)`, a finite
//! list of named prime classes, and a distinguished Kähler class pairing
//! strictly positively with itself and with every prime. Models are
//! immutable after construction and safe to share across threads.

use crate::rat::{format_rat, parse_rat, Rat};
use crate::ratlin::{inertia, Inertia, RatMatrix};
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Rational coordinate vector in the fixed basis of the ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    coords: Vec<Rat>,
}

impl DivisorClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass {
            coords: coords.iter().map(|&c| crate::rat::rat_int(c)).collect(),
        }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        DivisorClass {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        DivisorClass {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rat) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// `Some(c)` iff `self == c * other`. Returns `None` when `other` is the
    /// zero class (no well-defined factor).
    pub fn proportion_to(&self, other: &DivisorClass) -> Option<Rat> {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        let k = other.coords.iter().position(|c| !c.is_zero())?;
        let factor = &self.coords[k] / &other.coords[k];
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if *a != b * &factor {
                return None;
            }
        }
        Some(factor)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&format_rat(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coords = raw
            .iter()
            .map(|s| parse_rat(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorClass { coords })
    }
}

/// Rational quadratic space: a rank together with the Gram matrix of its
/// bilinear form in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: RatMatrix,
}

impl QuadraticSpace {
    /// Structural requirement only (square matrix); symmetry and the
    /// signature requirement are reported by [`validate_model`].
    pub fn new(gram: RatMatrix) -> Self {
        assert!(gram.is_square(), "gram matrix must be square");
        QuadraticSpace { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram_matrix(&self) -> &RatMatrix {
        &self.gram
    }

    /// `q(a, b) = aᵀ G b`.
    pub fn bilinear(&self, a: &DivisorClass, b: &DivisorClass) -> Rat {
        assert_eq!(a.rank(), self.rank(), "rank mismatch");
        assert_eq!(b.rank(), self.rank(), "rank mismatch");
        let gb = self.gram.mul_vec(b.coords());
        a.coords()
            .iter()
            .zip(&gb)
            .map(|(x, y)| x * y)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// `q(a) = q(a, a)`.
    pub fn square(&self, a: &DivisorClass) -> Rat {
        self.bilinear(a, a)
    }

    /// Pairwise Gram matrix of the given classes under this form.
    pub fn gram_of(&self, classes: &[&DivisorClass]) -> RatMatrix {
        let n = classes.len();
        let mut g = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.bilinear(classes[i], classes[j]);
                g.set(i, j, v.clone());
                g.set(j, i, v);
            }
        }
        g
    }

    pub fn signature(&self) -> Inertia {
        inertia(&self.gram)
    }
}

/// A named prime class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prime {
    pub name: String,
    pub class: DivisorClass,
}

/// The full model: quadratic space, primes (sorted by name for deterministic
/// output), and Kähler class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HKModel {
    space: QuadraticSpace,
    primes: Vec<Prime>,
    kahler: DivisorClass,
}

impl HKModel {
    /// Structural shape checks are asserted here; semantic invariants are
    /// the business of [`validate_model`].
    pub fn new(space: QuadraticSpace, mut primes: Vec<Prime>, kahler: DivisorClass) -> Self {
        let rank = space.rank();
        assert_eq!(kahler.rank(), rank, "kahler class rank mismatch");
        for p in &primes {
            assert_eq!(p.class.rank(), rank, "prime `{}` rank mismatch", p.name);
        }
        primes.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in primes.windows(2) {
            assert_ne!(pair[0].name, pair[1].name, "duplicate prime name");
        }
        HKModel {
            space,
            primes,
            kahler,
        }
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    pub fn prime(&self, name: &str) -> Option<&Prime> {
        self.primes
            .binary_search_by(|p| p.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.primes[i])
    }

    pub fn kahler(&self) -> &DivisorClass {
        &self.kahler
    }

    pub fn q(&self, a: &DivisorClass, b: &DivisorClass) -> Rat {
        self.space.bilinear(a, b)
    }

    pub fn q_square(&self, a: &DivisorClass) -> Rat {
        self.space.square(a)
    }

    /// Full pairwise Gram matrix of the prime classes.
    pub fn prime_gram(&self) -> RatMatrix {
        let refs: Vec<&DivisorClass> = self.primes.iter().map(|p| &p.class).collect();
        self.space.gram_of(&refs)
    }
}

/// A single violated model invariant. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    GramAsymmetric { row: usize, col: usize },
    SignatureViolation { found: Inertia },
    ZeroPrime { name: String },
    DuplicatePrime { first: String, second: String },
    PrimePairingViolation { first: String, second: String, value: Rat },
    KahlerNotPositive { value: Rat },
    KahlerPrimePairing { prime: String, value: Rat },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::GramAsymmetric { .. } => "GramAsymmetric",
            Violation::SignatureViolation { .. } => "SignatureViolation",
            Violation::ZeroPrime { .. } => "ZeroPrime",
            Violation::DuplicatePrime { .. } => "DuplicatePrime",
            Violation::PrimePairingViolation { .. } => "PrimePairingViolation",
            Violation::KahlerNotPositive { .. } | Violation::KahlerPrimePairing { .. } => {
                "KahlerViolation"
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GramAsymmetric { row, col } => {
                write!(f, "gram[{row}][{col}] differs from gram[{col}][{row}]")
            }
            Violation::SignatureViolation { found } => write!(
                f,
                "gram inertia is ({}, {}, {}), expected (1, 0, {})",
                found.positive,
                found.zero,
                found.negative,
                found.positive + found.zero + found.negative - 1
            ),
            Violation::ZeroPrime { name } => write!(f, "prime `{name}` is the zero class"),
            Violation::DuplicatePrime { first, second } => {
                write!(f, "primes `{first}` and `{second}` have identical classes")
            }
            Violation::PrimePairingViolation {
                first,
                second,
                value,
            } => write!(
                f,
                "q({first}, {second}) = {} is negative",
                format_rat(value)
            ),
            Violation::KahlerNotPositive { value } => {
                write!(f, "q(kahler) = {} is not positive", format_rat(value))
            }
            Violation::KahlerPrimePairing { prime, value } => write!(
                f,
                "q(kahler, {prime}) = {} is not positive",
                format_rat(value)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown catalog model `{0}`")]
    UnknownCatalogName(String),
    #[error("unknown prime `{0}`")]
    UnknownPrime(String),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid effective expression: {0}")]
    InvalidExpression(String),
}

/// Checks every semantic model invariant, returning one entry per violation.
pub fn validate_model(m: &HKModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let gram = m.space().gram_matrix();
    let r = m.rank();

    let mut symmetric = true;
    for i in 0..r {
        for j in (i + 1)..r {
            if gram.at(i, j) != gram.at(j, i) {
                out.push(Violation::GramAsymmetric { row: i, col: j });
                symmetric = false;
            }
        }
    }
    if symmetric {
        let sig = m.space().signature();
        if !(sig.positive == 1 && sig.zero == 0) {
            out.push(Violation::SignatureViolation { found: sig });
        }
    }

    let primes = m.primes();
    for p in primes {
        if p.class.is_zero() {
            out.push(Violation::ZeroPrime {
                name: p.name.clone(),
            });
        }
    }
    for i in 0..primes.len() {
        for j in (i + 1)..primes.len() {
            if primes[i].class == primes[j].class {
                out.push(Violation::DuplicatePrime {
                    first: primes[i].name.clone(),
                    second: primes[j].name.clone(),
                });
            }
            let v = m.q(&primes[i].class, &primes[j].class);
            if v.is_negative() {
                out.push(Violation::PrimePairingViolation {
                    first: primes[i].name.clone(),
                    second: primes[j].name.clone(),
                    value: v,
                });
            }
        }
    }

    let q_omega = m.q_square(m.kahler());
    if !q_omega.is_positive() {
        out.push(Violation::KahlerNotPositive { value: q_omega });
    }
    for p in primes {
        let v = m.q(m.kahler(), &p.class);
        if !v.is_positive() {
            out.push(Violation::KahlerPrimePairing {
                prime: p.name.clone(),
                value: v,
            });
        }
    }
    out
}

/// On-disk model schema: rationals as canonical strings.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    rank: usize,
    gram: Vec<Vec<String>>,
    primes: BTreeMap<String, Vec<String>>,
    kahler: Vec<String>,
}

fn parse_coords(raw: &[String], rank: usize, what: &str) -> Result<Vec<Rat>, ModelError> {
    if raw.len() != rank {
        return Err(ModelError::Parse(format!(
            "{what} has {} coordinates, expected {rank}",
            raw.len()
        )));
    }
    raw.iter()
        .map(|s| parse_rat(s).map_err(|e| ModelError::Parse(format!("{what}: {e}"))))
        .collect()
}

/// Parses model JSON without semantic validation (shape and rational syntax
/// are still enforced).
pub fn parse_model(text: &str) -> Result<HKModel, ModelError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
    let rank = file.rank;
    if rank == 0 {
        return Err(ModelError::Parse("rank must be positive".to_string()));
    }
    if file.gram.len() != rank {
        return Err(ModelError::Parse(format!(
            "gram has {} rows, expected {rank}",
            file.gram.len()
        )));
    }
    let mut entries = Vec::with_capacity(rank * rank);
    for (i, row) in file.gram.iter().enumerate() {
        entries.extend(parse_coords(row, rank, &format!("gram row {i}"))?);
    }
    let space = QuadraticSpace::new(RatMatrix::new(rank, rank, entries));
    let kahler = DivisorClass::new(parse_coords(&file.kahler, rank, "kahler")?);
    let primes = file
        .primes
        .iter()
        .map(|(name, coords)| {
            Ok(Prime {
                name: name.clone(),
                class: DivisorClass::new(parse_coords(coords, rank, &format!("prime {name}"))?),
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(HKModel::new(space, primes, kahler))
}

/// Parses and fully validates; any violation is an error carrying the
/// complete violation list.
pub fn load_model(text: &str) -> Result<HKModel, ModelError> {
    let m = parse_model(text)?;
    let violations = validate_model(&m);
    if violations.is_empty() {
        Ok(m)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

/// Canonical JSON form; round-trips through [`parse_model`] bit-exactly.
pub fn serialize_model(m: &HKModel, pretty: bool) -> String {
    let rank = m.rank();
    let gram = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| format_rat(m.space().gram_matrix().at(i, j)))
                .collect()
        })
        .collect();
    let file = ModelFile {
        rank,
        gram,
        primes: m
            .primes()
            .iter()
            .map(|p| {
                (
                    p.name.clone(),
                    p.class.coords().iter().map(format_rat).collect(),
                )
            })
            .collect(),
        kahler: m.kahler().coords().iter().map(format_rat).collect(),
    };
    if pretty {
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    } else {
        serde_json::to_string(&file).expect("model serialization cannot fail")
    }
}

pub const CATALOG_NAMES: [&str; 3] = ["U-basic", "U-neg2-chain", "no-primes"];

fn int_space(rows: &[&[i64]]) -> QuadraticSpace {
    let n = rows.len();
    let entries = rows
        .iter()
        .flat_map(|r| r.iter().map(|&v| crate::rat::rat_int(v)))
        .collect();
    QuadraticSpace::new(RatMatrix::new(n, n, entries))
}

fn int_prime(name: &str, coords: &[i64]) -> Prime {
    Prime {
        name: name.to_string(),
        class: DivisorClass::from_ints(coords),
    }
}

/// Built-in models used throughout the documentation and tests.
pub fn catalog_model(name: &str) -> Result<HKModel, ModelError> {
    match name {
        "U-basic" => Ok(HKModel::new(
            int_space(&[&[0, 1], &[1, 0]]),
            vec![int_prime("E", &[1, -1])],
            DivisorClass::from_ints(&[1, 2]),
        )),
        "U-neg2-chain" => Ok(HKModel::new(
            int_space(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]),
            vec![int_prime("E1", &[0, 1, 1]), int_prime("E2", &[1, -1, 0])],
            DivisorClass::from_ints(&[1, 2, -1]),
        )),
        "no-primes" => Ok(HKModel::new(
            int_space(&[&[0, 1], &[1, 0]]),
            vec![],
            DivisorClass::from_ints(&[1, 1]),
        )),
        _ => Err(ModelError::UnknownCatalogName(name.to_string())),
    }
}

/// Nonnegative prime combination plus an optional closed-positive-cone part;
/// the exact shape of a pseudo-effective class in this model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveExpression {
    coefficients: BTreeMap<String, Rat>,
    positive_part: Option<DivisorClass>,
}

impl EffectiveExpression {
    pub fn new(coefficients: BTreeMap<String, Rat>, positive_part: Option<DivisorClass>) -> Self {
        EffectiveExpression {
            coefficients,
            positive_part,
        }
    }

    pub fn from_coefficients<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, Rat)>,
    {
        EffectiveExpression {
            coefficients: pairs.into_iter().collect(),
            positive_part: None,
        }
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rat> {
        &self.coefficients
    }

    pub fn positive_part(&self) -> Option<&DivisorClass> {
        self.positive_part.as_ref()
    }

    pub fn coefficient(&self, name: &str) -> Rat {
        self.coefficients.get(name).cloned().unwrap_or_else(Rat::zero)
    }

    /// The class this expression denotes: `Σ c_E · E + positive_part`.
    pub fn class_in(&self, m: &HKModel) -> Result<DivisorClass, ModelError> {
        let mut acc = DivisorClass::zero(m.rank());
        for (name, c) in &self.coefficients {
            let prime = m
                .prime(name)
                .ok_or_else(|| ModelError::UnknownPrime(name.clone()))?;
            acc = acc.add(&prime.class.scale(c));
        }
        if let Some(pp) = &self.positive_part {
            if pp.rank() != m.rank() {
                return Err(ModelError::DimensionMismatch {
                    expected: m.rank(),
                    found: pp.rank(),
                });
            }
            acc = acc.add(pp);
        }
        Ok(acc)
    }

    /// Enforces the invariants against a model: known prime names, all
    /// coefficients nonnegative, positive part in the closed positive cone.
    pub fn validate_in(&self, m: &HKModel) -> Result<(), ModelError> {
        for (name, c) in &self.coefficients {
            if m.prime(name).is_none() {
                return Err(ModelError::UnknownPrime(name.clone()));
            }
            if c.is_negative() {
                return Err(ModelError::InvalidExpression(format!(
                    "coefficient of `{name}` is {}, expected nonnegative",
                    format_rat(c)
                )));
            }
        }
        if let Some(pp) = &self.positive_part {
            if pp.rank() != m.rank() {
                return Err(ModelError::DimensionMismatch {
                    expected: m.rank(),
                    found: pp.rank(),
                });
            }
            let q = m.q_square(pp);
            if q.is_negative() {
                return Err(ModelError::InvalidExpression(format!(
                    "positive part has q = {}, expected nonnegative",
                    format_rat(&q)
                )));
            }
            let qo = m.q(pp, m.kahler());
            if qo.is_negative() {
                return Err(ModelError::InvalidExpression(format!(
                    "positive part pairs with kahler as {}, expected nonnegative",
                    format_rat(&qo)
                )));
            }
        }
        Ok(())
    }
}

/// Parses a comma-separated rational coordinate list like `5/2,5/2,2`.
pub fn parse_class(text: &str) -> Result<DivisorClass, ModelError> {
    if text.trim().is_empty() {
        return Err(ModelError::Parse("empty coordinate list".to_string()));
    }
    let coords = text
        .split(',')
        .map(|s| parse_rat(s).map_err(|e| ModelError::Parse(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DivisorClass::new(coords))
}
