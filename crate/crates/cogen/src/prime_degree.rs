//! One-dimensional affine groups and coclique verdicts at prime degree.
//!
//! For a prime `p` the group `AGL_1(p)` acts on `{1, …, p}` by the maps
//! `v ↦ av + b` over the field with `p` elements (shifted so that point `x`
//! stands for field value `x − 1`).  This module builds that group from two
//! generators, checks the structural facts the coclique arguments lean on
//! (sharp 2-transitivity, the unique subgroup of order `p`, the exact cycle
//! shapes of its elements, and the two-generator property of its long
//! cycles), decides which primes admit a projective group of the same degree
//! (the "excluded" primes `p = (q^d − 1)/(q − 1)`), and runs full coclique
//! verdict sweeps over every relevant subgroup family for `p ∈ {5, 7}`.
//!
//! Degrees 11 and 23 carry sporadic 2-transitive actions (Mathieu groups,
//! and `PSL_2(11)` at degree 11) that this crate does not construct; requests
//! for those degrees return an error naming exactly what was omitted.  The
//! family list itself is available as data from [`transitive_families`].

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::coclique::{
    is_maximal_coclique, theorem_status, CocliqueError, CocliqueReport, TheoremStatus,
};
use crate::group::{GroupError, GroupKind, PermutationGroup};
use crate::perm::{PermError, Permutation};
use crate::primes::is_prime;

/// Largest prime accepted by [`verify_agl_facts`].
pub const MAX_FACTS_PRIME: u16 = 101;

/// Primes for which [`prime_degree_check`] runs its full verdict sweep.
pub const FULL_SWEEP_PRIMES: [u16; 2] = [5, 7];

/// Errors for affine-group construction and prime-degree sweeps.
#[derive(Debug, Error)]
pub enum PrimeDegreeError {
    /// The argument must be prime.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// The argument is below the smallest degree the operation handles.
    #[error("p = {p} is below the minimum {min} for this operation")]
    TooSmall { p: u64, min: u64 },
    /// The requested degree is beyond what the operation sweeps exhaustively.
    #[error("p = {p} is out of range: {detail}")]
    OutOfRange { p: u64, detail: String },
    /// A freshly built group failed one of its defining checks.
    #[error("construction check failed for p = {p}: {detail}")]
    ConstructionCheck { p: u16, detail: String },
    /// Error bubbled up from a coclique sweep.
    #[error(transparent)]
    Coclique(#[from] CocliqueError),
    /// Error bubbled up from group machinery.
    #[error(transparent)]
    Group(#[from] GroupError),
    /// Error bubbled up from permutation arithmetic.
    #[error(transparent)]
    Perm(#[from] PermError),
}

// ---------------------------------------------------------------------------
// AGL_1(p)
// ---------------------------------------------------------------------------

/// The affine group `AGL_1(p)` acting on `{1, …, p}`.
///
/// Point `x` represents field value `x − 1`, so the group realizes all maps
/// `v ↦ av + b` with `a ≠ 0` in one-based point language.  Construction via
/// [`build_agl1`] checks the defining invariants: order `p(p − 1)` and
/// transitivity.
#[derive(Debug, Clone)]
pub struct AffineGroup {
    p: u16,
    primitive_root: u16,
    group: PermutationGroup,
}

impl AffineGroup {
    /// The prime degree.
    #[must_use]
    pub fn p(&self) -> u16 {
        self.p
    }

    /// The multiplier used for the scaling generator: the smallest generator
    /// of the multiplicative group of the field.
    #[must_use]
    pub fn primitive_root(&self) -> u16 {
        self.primitive_root
    }

    /// The underlying permutation group.
    #[must_use]
    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }
}

/// Builds `AGL_1(p)` for a prime `p ≥ 3` from two generators: the
/// translation `v ↦ v + 1` (the cycle `(1, 2, …, p)`) and the scaling
/// `v ↦ gv` for the smallest primitive root `g` modulo `p`.
///
/// The returned group is checked to have order exactly `p(p − 1)` and to be
/// transitive.
pub fn build_agl1(p: u16) -> Result<AffineGroup, PrimeDegreeError> {
    if p < 3 {
        return Err(PrimeDegreeError::TooSmall {
            p: u64::from(p),
            min: 3,
        });
    }
    if !is_prime(u64::from(p)) {
        return Err(PrimeDegreeError::NotPrime(u64::from(p)));
    }
    let translation = Permutation::from_images((1..=p).map(|x| x % p + 1).collect())?;
    let g = smallest_primitive_root(p);
    let scaling = Permutation::from_images(
        (1..=p)
            .map(|x| (u32::from(x - 1) * u32::from(g) % u32::from(p)) as u16 + 1)
            .collect(),
    )?;
    let group = PermutationGroup::build(vec![translation, scaling])?;
    let expected = BigUint::from(u32::from(p) * u32::from(p - 1));
    if group.order() != &expected {
        return Err(PrimeDegreeError::ConstructionCheck {
            p,
            detail: format!("order {} differs from p(p-1) = {expected}", group.order()),
        });
    }
    if !group.is_transitive() {
        return Err(PrimeDegreeError::ConstructionCheck {
            p,
            detail: "group is not transitive".into(),
        });
    }
    Ok(AffineGroup {
        p,
        primitive_root: g,
        group,
    })
}

/// The smallest generator of the multiplicative group modulo the prime `p`.
fn smallest_primitive_root(p: u16) -> u16 {
    if p == 2 {
        return 1;
    }
    let order = u64::from(p) - 1;
    let factors = prime_factors(order);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| mod_pow(u64::from(g), order / q, u64::from(p)) != 1)
        })
        .expect("every prime has a primitive root")
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn euler_phi(m: u64) -> u64 {
    let mut out = m;
    for q in prime_factors(m) {
        out = out / q * (q - 1);
    }
    out
}

// ---------------------------------------------------------------------------
// Structural facts about AGL_1(p)
// ---------------------------------------------------------------------------

/// Outcome of the four structural checks on `AGL_1(p)`, with counters for
/// how much work each sweep did.
#[derive(Debug, Clone, Serialize)]
pub struct AglFacts {
    /// The prime degree checked.
    pub p: u16,
    /// The action on ordered pairs of distinct points is regular: the map
    /// `m ↦ (1^m, 2^m)` is a bijection onto all `p(p − 1)` such pairs.
    pub sharply_two_transitive: bool,
    /// The elements of order `p` number exactly `p − 1` and together with
    /// the identity form a subgroup — hence the unique subgroup of order `p`.
    pub unique_subgroup_of_prime_order: bool,
    /// Every non-identity element is a `p`-cycle, or fixes exactly one point
    /// and splits the rest into cycles of one common length `d ≥ 2` dividing
    /// `p − 1` (the powers of `(p − 1)`-cycles); in particular no
    /// non-identity element fixes two points.
    pub element_shapes_conform: bool,
    /// Any two `(p − 1)`-cycles generating distinct cyclic groups generate
    /// the whole group.
    pub distinct_long_cycles_generate: bool,
    /// Number of elements enumerated by the first three sweeps.
    pub elements_seen: u64,
    /// Number of `(p − 1)`-cycles found while checking shapes.
    pub long_cycle_count: u64,
    /// Number of generator pairs tested for the two-generator property
    /// (after conjugacy reduction).
    pub generator_pairs_tested: u64,
}

impl AglFacts {
    /// True when all four structural checks passed.
    #[must_use]
    pub fn all_hold(&self) -> bool {
        self.sharply_two_transitive
            && self.unique_subgroup_of_prime_order
            && self.element_shapes_conform
            && self.distinct_long_cycles_generate
    }
}

/// Runs the four structural checks on `AGL_1(p)` for a prime `3 ≤ p ≤ 101`.
///
/// The first three checks enumerate all `p(p − 1)` elements.  The fourth
/// reduces the quadratically many pairs of `(p − 1)`-cycles by conjugacy:
/// a `(p − 1)`-cycle `y` fixes exactly one point `f` and satisfies
/// `⟨y⟩ = M_f` (both have order `p − 1` and one contains the other), so two
/// long cycles span distinct cyclic groups exactly when they fix distinct
/// points.  Conjugation by the transitive group moves the first fixed point
/// to point 1, and the centralizer `⟨y_1⟩ = M_1` of the first cycle still
/// acts transitively on the remaining points, moving the second fixed point
/// to point 2.  Since conjugation preserves generation, checking every pair
/// of long cycles fixing points 1 and 2 respectively covers all pairs with
/// distinct spans.
pub fn verify_agl_facts(p: u16) -> Result<AglFacts, PrimeDegreeError> {
    if p > MAX_FACTS_PRIME {
        return Err(PrimeDegreeError::OutOfRange {
            p: u64::from(p),
            detail: format!("structural fact sweeps are bounded at p = {MAX_FACTS_PRIME}"),
        });
    }
    let agl = build_agl1(p)?;
    let elements = agl.group.elements();
    let order = u64::from(p) * u64::from(p - 1);
    debug_assert_eq!(elements.len() as u64, order);

    // (i) Regularity on ordered pairs: the image of the base pair (1, 2)
    // must hit every ordered pair of distinct points exactly once.
    let mut pair_images = BTreeSet::new();
    for e in &elements {
        pair_images.insert((e.apply(1), e.apply(2)));
    }
    let sharply_two_transitive = pair_images.len() as u64 == order
        && pair_images.iter().all(|&(a, b)| a != b);

    // (ii) Elements of order p: exactly p − 1 of them, and closed together
    // with the identity.  Any subgroup of order p is generated by an element
    // of order p, so if all of them sit in one order-p subgroup, that
    // subgroup is unique.
    let order_p: Vec<&Permutation> = elements.iter().filter(|e| e.order() == u64::from(p)).collect();
    let mut unique_subgroup_of_prime_order = order_p.len() as u64 == u64::from(p) - 1;
    if unique_subgroup_of_prime_order {
        let mut cyclic: BTreeSet<Permutation> =
            order_p.iter().map(|e| (*e).clone()).collect();
        cyclic.insert(Permutation::identity(p));
        'closure: for a in &cyclic {
            for b in &cyclic {
                if !cyclic.contains(&a.compose(b)?) {
                    unique_subgroup_of_prime_order = false;
                    break 'closure;
                }
            }
        }
    }

    // (iii) Shape law: p-cycle, or exactly one fixed point plus (p − 1)/d
    // cycles of one length d | p − 1.  The one-fixed-point consequence is
    // also checked directly.
    let mut element_shapes_conform = true;
    let mut long_cycle_count = 0u64;
    for e in &elements {
        if e.is_identity() {
            continue;
        }
        let lengths = e.cycle_type().lengths().to_vec();
        let shape_ok = if lengths == [p] {
            true
        } else {
            let fixed = lengths.iter().filter(|&&l| l == 1).count();
            let moved: Vec<u16> = lengths.iter().copied().filter(|&l| l != 1).collect();
            let d = moved.first().copied().unwrap_or(0);
            fixed == 1
                && d >= 2
                && (p - 1) % d == 0
                && moved.len() == usize::from((p - 1) / d)
                && moved.iter().all(|&l| l == d)
        };
        if lengths == [p - 1, 1] {
            long_cycle_count += 1;
        }
        let fixed_points = (1..=p).filter(|&x| e.apply(x) == x).count();
        if !shape_ok || fixed_points > 1 {
            element_shapes_conform = false;
        }
    }

    // (iv) Two-generator property, after the conjugacy reduction described
    // in the function docs.  The long cycles fixing point 1 are exactly the
    // generators of the cyclic stabilizer ⟨scaling⟩; those fixing point 2
    // are their conjugates under the translation (which maps point 1 to 2).
    let scaling = &agl.group.generators()[1];
    let translation = &agl.group.generators()[0];
    debug_assert_eq!(scaling.apply(1), 1);
    debug_assert_eq!(translation.apply(1), 2);
    let stabilizer_generators: Vec<Permutation> = (1..u64::from(p) - 1)
        .filter(|&e| gcd_u64(e, u64::from(p) - 1) == 1)
        .map(|e| scaling.power(i64::try_from(e).expect("exponent fits i64")))
        .collect();
    debug_assert_eq!(stabilizer_generators.len() as u64, euler_phi(u64::from(p) - 1));
    let mut distinct_long_cycles_generate = true;
    let mut generator_pairs_tested = 0u64;
    let expected_order = BigUint::from(order);
    for y1 in &stabilizer_generators {
        for y2_base in &stabilizer_generators {
            let y2 = y2_base.conjugate(translation)?;
            generator_pairs_tested += 1;
            let span = PermutationGroup::build(vec![y1.clone(), y2])?;
            if span.order() != &expected_order {
                distinct_long_cycles_generate = false;
            }
        }
    }

    Ok(AglFacts {
        p,
        sharply_two_transitive,
        unique_subgroup_of_prime_order,
        element_shapes_conform,
        distinct_long_cycles_generate,
        elements_seen: elements.len() as u64,
        long_cycle_count,
        generator_pairs_tested,
    })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---------------------------------------------------------------------------
// Excluded primes
// ---------------------------------------------------------------------------

/// A prime power `q` and exponent `d ≥ 2` with `p = (q^d − 1)/(q − 1)`,
/// exhibiting a projective group of degree `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExclusionWitness {
    /// The prime power.
    pub q: u64,
    /// The dimension parameter.
    pub d: u32,
}

/// Whether a prime is "excluded": equal to `(q^d − 1)/(q − 1)` for some
/// prime power `q` and `d ≥ 2`, so that projective groups act on `p` points.
#[derive(Debug, Clone, Serialize)]
pub struct ExclusionCheck {
    /// The prime tested.
    pub p: u64,
    /// True when a witness exists.
    pub excluded: bool,
    /// The witness with the smallest `q` (and smallest `d` for that `q`),
    /// when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ExclusionWitness>,
}

/// Decides whether the prime `p ≥ 5` equals `(q^d − 1)/(q − 1)` for some
/// prime power `q` and integer `d ≥ 2`, using exact integer arithmetic.
///
/// The geometric sums `1 + q + … + q^{d−1}` split into two regimes: `d = 2`
/// gives `1 + q`, which equals `p` only for `q = p − 1`, and `d ≥ 3`
/// requires `1 + q + q² ≤ p`, bounding `q` near `√p`.  The small-`q` scan
/// runs first in increasing order, so the returned witness has the smallest
/// possible `q` (and the smallest `d` for it — the sums are strictly
/// increasing in `d`).
pub fn is_excluded_prime(p: u64) -> Result<ExclusionCheck, PrimeDegreeError> {
    if !is_prime(p) {
        return Err(PrimeDegreeError::NotPrime(p));
    }
    if p < 5 {
        return Err(PrimeDegreeError::TooSmall { p, min: 5 });
    }
    let mut witness = None;
    'search: for q in 2.. {
        let q2 = u128::from(q) * u128::from(q);
        if 1 + u128::from(q) + q2 > u128::from(p) {
            break;
        }
        if !is_prime_power(q) {
            continue;
        }
        let (mut sum, mut power, mut d) = (1 + u128::from(q) + q2, q2, 3u32);
        while sum <= u128::from(p) {
            if sum == u128::from(p) {
                witness = Some(ExclusionWitness { q, d });
                break 'search;
            }
            power *= u128::from(q);
            sum += power;
            d += 1;
        }
    }
    if witness.is_none() && is_prime_power(p - 1) {
        witness = Some(ExclusionWitness { q: p - 1, d: 2 });
    }
    Ok(ExclusionCheck {
        p,
        excluded: witness.is_some(),
        witness,
    })
}

fn is_prime_power(q: u64) -> bool {
    q >= 2 && prime_factors(q).len() == 1
}

// ---------------------------------------------------------------------------
// Transitive families at prime degree (annotation data only)
// ---------------------------------------------------------------------------

/// The families of transitive groups of prime degree `p`, as descriptive
/// strings.  This is annotation data: the sporadic and projective entries
/// are never constructed by this crate.
pub fn transitive_families(p: u64) -> Result<Vec<String>, PrimeDegreeError> {
    if !is_prime(p) {
        return Err(PrimeDegreeError::NotPrime(p));
    }
    let mut out = vec![
        format!("the symmetric group S_{p}"),
        format!("the alternating group A_{p}"),
        format!("subgroups of AGL_1({p})"),
    ];
    if p == 11 {
        out.push("a degree-11 permutation representation of PSL_2(11)".into());
        out.push("the Mathieu group M_11".into());
    }
    if p == 23 {
        out.push("the Mathieu group M_23".into());
    }
    if p >= 5 {
        if let Some(w) = is_excluded_prime(p)?.witness {
            out.push(format!(
                "projective groups between PSL_{}({}) and PGammaL_{}({}) of degree ({}^{} - 1)/({} - 1) = {p}",
                w.d, w.q, w.d, w.q, w.q, w.d, w.q
            ));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Full verdict sweeps for p in {5, 7}
// ---------------------------------------------------------------------------

/// Verdict for one intransitive family `(S_k × S_{p−k}) ∩ G`.
#[derive(Debug, Clone, Serialize)]
pub struct IntransitiveVerdict {
    /// The larger part size, `p/2 < k < p`.
    pub k: u16,
    /// The arithmetic maximality status.
    pub status: TheoremStatus,
}

/// Verdict for the affine family `AGL_1(p) ∩ G`.
#[derive(Debug, Clone, Serialize)]
pub struct AffineVerdict {
    /// Order of the subgroup actually tested (halved inside the alternating
    /// group).
    pub subgroup_order: u64,
    /// The computed coclique verdict for its non-identity elements.
    pub report: CocliqueReport,
}

/// Verdict for the family `A_p` inside `S_p`, checked by the cycle
/// argument: every odd permutation must generate together with some
/// `p`-cycle.
#[derive(Debug, Clone, Serialize)]
pub struct AlternatingVerdict {
    /// Number of odd permutations swept.
    pub odd_elements: u64,
    /// True when every odd permutation found a generating `p`-cycle partner.
    pub all_partnered: bool,
    /// Total generation tests spent.
    pub generation_tests: u64,
}

/// Combined verdicts for every relevant subgroup family at prime degree.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeDegreeReport {
    /// The prime degree.
    pub p: u16,
    /// The ambient group kind.
    pub kind: GroupKind,
    /// One verdict per intransitive family, `k` descending from `p − 1` is
    /// not used: entries are listed with `k` increasing.
    pub intransitive: Vec<IntransitiveVerdict>,
    /// The verdict for `AGL_1(p) ∩ G`.
    pub affine: AffineVerdict,
    /// The verdict for `A_p` inside `S_p`; absent for alternating ambient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternating: Option<AlternatingVerdict>,
    /// Present when an intransitive family is a known non-maximal exception.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception: Option<String>,
    /// The transitive families at this degree, plus a note on coverage.
    pub annotations: Vec<String>,
}

/// Runs the full coclique verdict sweep at prime degree `p ∈ {5, 7}`.
///
/// Three families are checked: the intransitive groups
/// `(S_k × S_{p−k}) ∩ G` via the arithmetic maximality criterion, the affine
/// group `AGL_1(p) ∩ G` via a full maximal-coclique sweep of the ambient
/// group, and (for symmetric ambient) `A_p` via an exhaustive search for a
/// generating `p`-cycle partner for every odd permutation.  `budget` caps
/// the generation tests each sweep may spend.
///
/// Degrees outside `{5, 7}` return [`PrimeDegreeError::OutOfRange`]; for 11
/// and 23 the error names the sporadic groups whose analysis this crate
/// omits.
pub fn prime_degree_check(
    p: u16,
    kind: GroupKind,
    budget: u64,
) -> Result<PrimeDegreeReport, PrimeDegreeError> {
    if !is_prime(u64::from(p)) {
        return Err(PrimeDegreeError::NotPrime(u64::from(p)));
    }
    if p < 5 {
        return Err(PrimeDegreeError::TooSmall {
            p: u64::from(p),
            min: 5,
        });
    }
    if !FULL_SWEEP_PRIMES.contains(&p) {
        let families = transitive_families(u64::from(p))?.join("; ");
        return Err(PrimeDegreeError::OutOfRange {
            p: u64::from(p),
            detail: format!(
                "exhaustive verdict sweeps run only for p in {FULL_SWEEP_PRIMES:?}; \
                 the transitive families at degree {p} ({families}) are omitted here"
            ),
        });
    }

    // Intransitive families, by the arithmetic criterion.
    let mut intransitive = Vec::new();
    let mut exception = None;
    for k in (p / 2 + 1)..p {
        let status = theorem_status(p, k, kind)?;
        if matches!(
            status,
            TheoremStatus::NotMaximal {
                reason: crate::coclique::NotMaximalReason::ExceptionalPair
            }
        ) {
            exception = Some(format!("(S_{} × S_{}) ∩ G", k, p - k));
        }
        intransitive.push(IntransitiveVerdict { k, status });
    }

    // Affine family: full maximal-coclique sweep over the ambient group.
    let agl = build_agl1(p)?;
    let mut affine_elements: Vec<Permutation> = agl
        .group
        .elements()
        .into_iter()
        .filter(|e| !e.is_identity() && (kind == GroupKind::Sym || e.is_even()))
        .collect();
    affine_elements.sort();
    let subgroup_order = affine_elements.len() as u64 + 1;
    let report = is_maximal_coclique(&affine_elements, kind, p, budget)?;
    let affine = AffineVerdict {
        subgroup_order,
        report,
    };

    // A_p inside S_p: every odd permutation needs a generating p-cycle.
    let alternating = match kind {
        GroupKind::Alt => None,
        GroupKind::Sym => Some(alternating_partner_sweep(p, budget)?),
    };

    let mut annotations = transitive_families(u64::from(p))?;
    annotations.push(format!(
        "the affine verdict sweeps every element of the ambient group, so no \
         degree-{p} subgroup family is overlooked by it"
    ));

    Ok(PrimeDegreeReport {
        p,
        kind,
        intransitive,
        affine,
        alternating,
        exception,
        annotations,
    })
}

/// For every odd permutation of degree `p`, searches the `p`-cycles (all of
/// which are even, `p` being odd) for a partner generating the full
/// symmetric group.
fn alternating_partner_sweep(
    p: u16,
    budget: u64,
) -> Result<AlternatingVerdict, PrimeDegreeError> {
    use itertools::Itertools;

    // All p-cycles, as (1, a_2, …, a_p) over arrangements of {2, …, p}.
    let mut p_cycles = Vec::new();
    for rest in (2..=p).permutations(usize::from(p) - 1) {
        let mut cycle = Vec::with_capacity(usize::from(p));
        cycle.push(1);
        cycle.extend(rest);
        p_cycles.push(Permutation::from_disjoint_cycles(p, &[cycle])?);
    }

    let ambient = crate::group::symmetric_group(p);
    let mut odd_elements = 0u64;
    let mut generation_tests = 0u64;
    let mut all_partnered = true;
    let out = ambient.try_for_each_element(&mut |x: &Permutation| {
        if x.is_even() {
            return std::ops::ControlFlow::Continue(());
        }
        odd_elements += 1;
        let mut partnered = false;
        for y in &p_cycles {
            if generation_tests == budget {
                return std::ops::ControlFlow::Break(CocliqueError::BudgetExceeded {
                    budget,
                    tests_done: generation_tests,
                    elements_swept: odd_elements,
                });
            }
            generation_tests += 1;
            if crate::group::generates_pair_fast(x, y, GroupKind::Sym) {
                partnered = true;
                break;
            }
        }
        if !partnered {
            all_partnered = false;
        }
        std::ops::ControlFlow::Continue(())
    });
    if let Some(err) = out {
        return Err(err.into());
    }
    Ok(AlternatingVerdict {
        odd_elements,
        all_partnered,
        generation_tests,
    })
}

// ---------------------------------------------------------------------------
