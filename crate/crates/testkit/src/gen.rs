//! Seeded random instances: valid models, cone classes, pseudo-effective
//! expressions, null-pair triples, and congruent matrices.
//!
//! Every generator takes `&mut impl Rng`; test suites pass a
//! `ChaCha8Rng::seed_from_u64(...)` so failures replay deterministically.
//! All generators assert the invariants of what they return, so a generator
//! bug surfaces as a panic at the construction site rather than as a
//! mysterious downstream failure.

use hkz_core::model::{
    validate_model, DivisorClass, EffectiveExpression, HKModel, Prime, QuadraticSpace,
};
use hkz_core::rat::{rat_int, ratio, Rat};
use hkz_core::ratlin::RatMatrix;
use num_traits::{Signed, Zero};
use rand::Rng;
use std::collections::BTreeMap;

/// Rational with numerator in `[-6, 6]` and denominator in `{1, 2, 3, 4}`.
pub fn small_rat(rng: &mut impl Rng) -> Rat {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// Rational in `[0, 6]` with denominator in `{1, 2, 3, 4}`.
pub fn nonneg_small_rat(rng: &mut impl Rng) -> Rat {
    ratio(rng.gen_range(0..=6), rng.gen_range(1..=4))
}

/// Strictly positive rational with numerator in `[1, 6]`.
pub fn positive_small_rat(rng: &mut impl Rng) -> Rat {
    ratio(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

/// Integer-coordinate class with entries in `[-bound, bound]`.
pub fn random_class(rng: &mut impl Rng, rank: usize, bound: i64) -> DivisorClass {
    DivisorClass::new((0..rank).map(|_| rat_int(rng.gen_range(-bound..=bound))).collect())
}

/// A valid model plus two tracked isotropic classes oriented positively
/// against its Kähler class (images of the hyperbolic-plane basis vectors
/// under the congruence transformations used to scramble the Gram matrix).
pub struct GeneratedModel {
    pub model: HKModel,
    pub isotropic: Vec<DivisorClass>,
}

fn entries_bounded(g: &[Vec<Rat>], bound: i64) -> bool {
    let b = num_bigint::BigInt::from(bound);
    g.iter()
        .flatten()
        .all(|v| v.numer().abs() <= b && v.denom().abs() <= b)
}

/// True iff every entry's numerator and denominator have magnitude at most
/// `bound` — the size guarantee [`random_gram`] maintains for Gram matrices.
pub fn matrix_entries_bounded(g: &RatMatrix, bound: i64) -> bool {
    let b = num_bigint::BigInt::from(bound);
    (0..g.rows()).all(|i| {
        (0..g.cols()).all(|j| {
            let v = g.at(i, j);
            v.numer().abs() <= b && v.denom().abs() <= b
        })
    })
}

fn coords_bounded(zs: &[Vec<Rat>], bound: i64) -> bool {
    let b = rat_int(bound);
    zs.iter().flatten().all(|v| v.abs() <= b)
}

/// Base Gram `U ⊕ diag(-2a_2, …, -2a_{r-1})`, scrambled by elementary
/// congruence moves `G ← EᵀGE` with `E = I + c·e_{ij}`. The moves preserve
/// the signature `(1, 0, r-1)` exactly; moves that would blow up entry
/// sizes are skipped. The inverse moves are replayed onto `e_1`, `e_2` so
/// the returned isotropic classes stay isotropic in the final coordinates.
fn random_gram(rng: &mut impl Rng, rank: usize) -> (QuadraticSpace, Vec<DivisorClass>) {
    assert!(rank >= 2, "hyperbolic signature needs rank >= 2");
    let mut g = vec![vec![Rat::zero(); rank]; rank];
    g[0][1] = rat_int(1);
    g[1][0] = rat_int(1);
    for d in 2..rank {
        g[d][d] = rat_int(-2 * rng.gen_range(1..=3));
    }
    let mut iso = vec![vec![Rat::zero(); rank], vec![Rat::zero(); rank]];
    iso[0][0] = rat_int(1);
    iso[1][1] = rat_int(1);

    let moves = rng.gen_range(0..=2 * rank);
    for _ in 0..moves {
        let i = rng.gen_range(0..rank);
        let j = rng.gen_range(0..rank);
        if i == j {
            continue;
        }
        // Mostly integer moves, with occasional half-integer ones so the
        // suites also see grams with genuine denominators.
        let c = match rng.gen_range(0..6) {
            0 => ratio(-1, 2),
            1 => ratio(1, 2),
            k => rat_int([-2, -1, 1, 2][k - 2]),
        };
        let mut cand = g.clone();
        // G ← EᵀGE with E = I + c·e_{ij}: basis vector e_j becomes e_j + c·e_i.
        for a in 0..rank {
            let t = &cand[a][i] * &c;
            cand[a][j] += t;
        }
        for b in 0..rank {
            let t = &cand[i][b] * &c;
            cand[j][b] += t;
        }
        // Tracked classes transform by E⁻¹ = I − c·e_{ij}.
        let mut cand_iso = iso.clone();
        for z in &mut cand_iso {
            let t = &z[j] * &c;
            z[i] -= t;
        }
        if entries_bounded(&cand, 20) && coords_bounded(&cand_iso, 24) {
            g = cand;
            iso = cand_iso;
        }
    }
    let entries = g.into_iter().flatten().collect();
    let space = QuadraticSpace::new(RatMatrix::new(rank, rank, entries));
    let iso = iso.into_iter().map(DivisorClass::new).collect();
    (space, iso)
}

/// Positive-square class: perturbations of `z₁ + z₂`, which has square
/// `2·q(z₁, z₂) = 2` by construction (the isotropics are the transformed
/// hyperbolic basis pair), so a fallback always exists. Blind box sampling
/// is hopeless here — the positive cone is a thin sliver in scrambled
/// coordinates.
fn sample_kahler(
    rng: &mut impl Rng,
    space: &QuadraticSpace,
    isotropic: &[DivisorClass],
) -> DivisorClass {
    let base = isotropic[0].add(&isotropic[1]);
    assert!(space.square(&base).is_positive());
    for _ in 0..40 {
        let k = rat_int(rng.gen_range(1..=3));
        let z = base.scale(&k).add(&random_class(rng, space.rank(), 2));
        if space.square(&z).is_positive() {
            return z;
        }
    }
    base
}

/// Valid model with the requested rank and up to `max_primes` primes
/// (fewer when rejection sampling runs out of candidates).
pub fn random_model(rng: &mut impl Rng, rank: usize, max_primes: usize) -> GeneratedModel {
    let (space, mut isotropic) = random_gram(rng, rank);
    let kahler = sample_kahler(rng, &space, &isotropic);

    let mut primes: Vec<Prime> = Vec::new();
    let mut tries = 0usize;
    while primes.len() < max_primes && tries < 600 {
        tries += 1;
        let mut class = random_class(rng, rank, 4);
        if class.is_zero() {
            continue;
        }
        // The Kähler pairing must be positive; a sign flip fixes half the
        // candidates for free, and only exactly-orthogonal ones are lost.
        let pairing = space.bilinear(&kahler, &class);
        if pairing.is_zero() {
            continue;
        }
        if pairing.is_negative() {
            class = class.scale(&rat_int(-1));
        }
        if primes.iter().any(|p| p.class == class) {
            continue;
        }
        if primes
            .iter()
            .any(|p| space.bilinear(&p.class, &class).is_negative())
        {
            continue;
        }
        primes.push(Prime {
            name: format!("E{}", primes.len() + 1),
            class,
        });
    }

    let model = HKModel::new(space, primes, kahler);
    let violations = validate_model(&model);
    assert!(
        violations.is_empty(),
        "generator produced an invalid model: {violations:?}"
    );
    for z in &mut isotropic {
        assert!(model.q_square(z).is_zero(), "tracked class lost isotropy");
        let pairing = model.q(z, model.kahler());
        assert!(!pairing.is_zero(), "isotropic class orthogonal to Kähler");
        if pairing.is_negative() {
            *z = z.scale(&rat_int(-1));
        }
    }
    GeneratedModel { model, isotropic }
}

/// Valid model with rank drawn from `2..=6` and prime count from `0..=8`.
pub fn random_valid_model(rng: &mut impl Rng) -> GeneratedModel {
    let rank = rng.gen_range(2..=6);
    let max_primes = rng.gen_range(0..=8);
    random_model(rng, rank, max_primes)
}

/// Nonzero class in the closed positive cone: a small integer vector pushed
/// into the cone by adding Kähler multiples (doubling terminates because
/// both defining forms grow like `t²·q(ω)` and `t·q(ω)`), then positively
/// scaled.
pub fn random_cone_class(rng: &mut impl Rng, m: &HKModel) -> DivisorClass {
    let u = random_class(rng, m.rank(), 3);
    let mut t = rat_int(if u.is_zero() { 1 } else { 0 });
    loop {
        let z = u.add(&m.kahler().scale(&t));
        if !z.is_zero() && !m.q_square(&z).is_negative() && !m.q(&z, m.kahler()).is_negative() {
            return z.scale(&positive_small_rat(rng));
        }
        t = if t.is_zero() { rat_int(1) } else { t * rat_int(2) };
    }
}

/// Random pseudo-effective expression: a sparse nonnegative prime
/// combination, optionally plus a closed-positive-cone class.
pub fn random_pe_expression(rng: &mut impl Rng, m: &HKModel) -> EffectiveExpression {
    let mut coefficients = BTreeMap::new();
    for p in m.primes() {
        if rng.gen_bool(0.5) {
            let c = nonneg_small_rat(rng);
            if !c.is_zero() {
                coefficients.insert(p.name.clone(), c);
            }
        }
    }
    let positive_part = if rng.gen_bool(0.7) {
        Some(random_cone_class(rng, m))
    } else {
        None
    };
    let expr = EffectiveExpression::new(coefficients, positive_part);
    expr.validate_in(m).expect("generated expression is valid");
    expr
}

/// The class denoted by a fresh random pseudo-effective expression.
pub fn random_pe_class(rng: &mut impl Rng, m: &HKModel) -> (DivisorClass, EffectiveExpression) {
    let expr = random_pe_expression(rng, m);
    let class = expr.class_in(m).expect("generated expression sums");
    (class, expr)
}

/// Instance satisfying the null-pair preconditions: `(L, D, witness)` with
/// `L ≠ 0` in the closed positive cone and `q(L, D) = 0`. Mixes parallel
/// instances (D a multiple of an isotropic L) with negative-square ones
/// (L the Kähler projection orthogonal to a negative prime, D on that
/// prime).
pub fn random_null_pair_instance(
    rng: &mut impl Rng,
    gm: &GeneratedModel,
) -> (DivisorClass, DivisorClass, EffectiveExpression) {
    let m = &gm.model;
    let negative_primes: Vec<&Prime> = m
        .primes()
        .iter()
        .filter(|p| m.q_square(&p.class).is_negative())
        .collect();
    if !negative_primes.is_empty() && rng.gen_bool(0.5) {
        let p = negative_primes[rng.gen_range(0..negative_primes.len())];
        let qe = m.q_square(&p.class);
        let qoe = m.q(m.kahler(), &p.class);
        // L = |q(E)|·ω + q(ω,E)·E is Kähler projected away from E, cleared
        // of denominators: q(L, E) = 0 and q(L) > 0.
        let l = m.kahler().scale(&qe.abs()).add(&p.class.scale(&qoe));
        let c = positive_small_rat(rng);
        let d = p.class.scale(&c);
        let witness = EffectiveExpression::from_coefficients([(p.name.clone(), c)]);
        (l, d, witness)
    } else {
        let base = &gm.isotropic[rng.gen_range(0..gm.isotropic.len())];
        let l = base.scale(&positive_small_rat(rng));
        let t = nonneg_small_rat(rng);
        let d = l.scale(&t);
        let witness = EffectiveExpression::new(BTreeMap::new(), Some(d.clone()));
        (l, d, witness)
    }
}

/// Applies a shared random change of basis to a model and companion
/// classes. Every pairing `q(x, y)` is preserved exactly, so a valid model
/// stays valid and any configuration of classes keeps its q-relations
/// while the coordinates get scrambled.
pub fn transformed_instance(
    rng: &mut impl Rng,
    model: &HKModel,
    classes: &[DivisorClass],
) -> (HKModel, Vec<DivisorClass>) {
    let rank = model.rank();
    let mut gram: Vec<Vec<Rat>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| model.space().gram_matrix().at(i, j).clone())
                .collect()
        })
        .collect();
    let mut tracked: Vec<Vec<Rat>> = model
        .primes()
        .iter()
        .map(|p| p.class.coords().to_vec())
        .chain(std::iter::once(model.kahler().coords().to_vec()))
        .chain(classes.iter().map(|c| c.coords().to_vec()))
        .collect();

    let moves = rng.gen_range(1..=2 * rank);
    for _ in 0..moves {
        let i = rng.gen_range(0..rank);
        let j = rng.gen_range(0..rank);
        if i == j {
            continue;
        }
        let c = rat_int([-2, -1, 1, 2][rng.gen_range(0..4)]);
        let mut cand = gram.clone();
        for a in 0..rank {
            let t = &cand[a][i] * &c;
            cand[a][j] += t;
        }
        for b in 0..rank {
            let t = &cand[i][b] * &c;
            cand[j][b] += t;
        }
        let mut cand_tracked = tracked.clone();
        for z in &mut cand_tracked {
            let t = &z[j] * &c;
            z[i] -= t;
        }
        if entries_bounded(&cand, 512) && coords_bounded(&cand_tracked, 512) {
            gram = cand;
            tracked = cand_tracked;
        }
    }

    let entries = gram.into_iter().flatten().collect();
    let space = QuadraticSpace::new(RatMatrix::new(rank, rank, entries));
    let mut it = tracked.into_iter().map(DivisorClass::new);
    let primes: Vec<Prime> = model
        .primes()
        .iter()
        .map(|p| Prime {
            name: p.name.clone(),
            class: it.next().expect("tracked prime"),
        })
        .collect();
    let kahler = it.next().expect("tracked kahler");
    let out_classes: Vec<DivisorClass> = it.collect();
    let new_model = HKModel::new(space, primes, kahler);
    let violations = validate_model(&new_model);
    assert!(
        violations.is_empty(),
        "congruence transform broke validity: {violations:?}"
    );
    (new_model, out_classes)
}

/// Symmetric matrix with small rational entries.
pub fn random_symmetric_matrix(rng: &mut impl Rng, n: usize) -> RatMatrix {
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = small_rat(rng);
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    RatMatrix::from_rows(rows).expect("square symmetric build")
}

/// A matrix congruent to `g` (same inertia by Sylvester's law): applies
/// random invertible transformations `G ← EᵀGE`, mixing row-addition moves
/// with nonzero row scalings.
pub fn random_congruent(rng: &mut impl Rng, g: &RatMatrix, moves: usize) -> RatMatrix {
    let n = g.rows();
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| g.at(i, j).clone()).collect())
        .collect();
    for _ in 0..moves {
        if n >= 2 && rng.gen_bool(0.7) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            for a in 0..n {
                let t = &rows[a][i] * &c;
                rows[a][j] += t;
            }
            for b in 0..n {
                let t = &rows[i][b] * &c;
                rows[j][b] += t;
            }
        } else {
            let i = rng.gen_range(0..n);
            let mut s = small_rat(rng);
            if s.is_zero() {
                s = rat_int(2);
            }
            for a in 0..n {
                rows[a][i] *= &s;
            }
            for b in 0..n {
                rows[i][b] *= &s;
            }
        }
    }
    RatMatrix::from_rows(rows).expect("congruent build")
}
