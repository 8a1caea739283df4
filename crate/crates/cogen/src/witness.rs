//! Witness search: given the intransitive subgroup M = (Sym(k) × Sym(n−k)) ∩ G
//! with n > k > n/2 and an element x ∈ G \ M, find y ∈ M with ⟨x, y⟩ = G, or
//! produce a certified reason none exists.
//!
//! The search never guesses blindly. A canonical conjugate x' of x with
//! 1^{x'} = k+1 is routed by degree, support shape, and Jordan-power status
//! to one of twelve named cases; each case carries a family of highly
//! constrained candidate shapes (see [`template::CycleTemplate`]) that the
//! underlying existence results prove sufficient, and candidates are streamed
//! in a deterministic order and tested for generation until one works.
//! Failures are certified: a transposition with gcd(n, k) > 1 yields a block
//! system witnessing imprimitivity; at the handful of small exceptional
//! parameters an element of the known closure class yields its class
//! representative and a conjugating element; and a completed exhaustive scan
//! reports how many elements of M were tested.

pub mod template;

use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::group::{
    factorial, generates_pair, generates_pair_fast, intransitive_subgroup, BlockSystem,
    GroupError, GroupKind, PermutationGroup,
};
use crate::jordan::{jordan_power, JordanError};
use crate::perm::{
    parse_cycles, select_points, CycleType, Parity, PermError, Permutation, PointVariant,
    SelectedPoints,
};
use crate::primes::{bertrand_pk_with, prime_p1_with, prime_p2_with, PrimeError, PrimeRule};

pub use self::template::{left, right, CycleTemplate, Side, Slot, TemplateError};

/// Errors from witness-search operations.
#[derive(Debug, Error)]
pub enum WitnessError {
    /// The (n, k, kind) triple violates n > k > n/2 ≥ 2.
    #[error("invalid scenario: {0}")]
    BadScenario(String),
    /// The supplied x is not an element of G \ M.
    #[error("x must lie in G \\ M: {0}")]
    NotInDomain(String),
    /// An operation requiring 1^x = k+1 received something else.
    #[error("element is not canonical: expected 1 ↦ k+1, got 1 ↦ {got}")]
    NotCanonical { got: u16 },
    /// A candidate family was requested for an element outside its case.
    #[error("preconditions of {tag} fail: {reason}")]
    TagPrecondition { tag: LemmaTag, reason: String },
    /// No imprimitivity certificate exists when n and k are coprime.
    #[error("gcd(n, k) = 1: no imprimitivity certificate exists")]
    GcdOne,
    /// The element handed to the certificate builder has the wrong shape.
    #[error("not a k | (n−k) element of M: {0}")]
    NotBlockShape(String),
    /// A guaranteed-success path failed; carries the full context.
    #[error("internal inconsistency in {op}: {detail}")]
    InternalInconsistency { op: &'static str, detail: String },
    /// Permutation-layer failure.
    #[error(transparent)]
    Perm(#[from] PermError),
    /// Group-layer failure.
    #[error(transparent)]
    Group(#[from] GroupError),
    /// Prime-search failure.
    #[error(transparent)]
    Prime(#[from] PrimeError),
    /// Jordan-classification failure.
    #[error(transparent)]
    Jordan(#[from] JordanError),
    /// Template-layer failure.
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// The two complementary parameter regimes the main case split runs on.
///
/// Case A holds exactly when the ambient group is the alternating group for
/// odd degree or the symmetric group for even degree; case B is the
/// complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisCase {
    /// n odd with kind Alt, or n even with kind Sym.
    A,
    /// n odd with kind Sym, or n even with kind Alt.
    B,
}

/// The fixed setting of one search: degree n, split point k with
/// n > k > n/2, the ambient kind, and M = (Sym(k) × Sym(n−k)) ∩ G acting on
/// Ω₁ = {1..k} and Ω₂ = {k+1..n}.
#[derive(Debug, Clone)]
pub struct Scenario {
    n: u16,
    k: u16,
    kind: GroupKind,
    m: PermutationGroup,
}

impl Scenario {
    /// Builds the scenario and its subgroup M, checking n > k > n/2 and the
    /// order identity |M| = k!(n−k)! (halved for Alt).
    ///
    /// # Errors
    /// Rejects parameter triples outside the valid range.
    pub fn new(n: u16, k: u16, kind: GroupKind) -> Result<Self, WitnessError> {
        if n < 4 {
            return Err(WitnessError::BadScenario(format!("degree must be at least 4, got {n}")));
        }
        if !(k < n && 2 * k > n) {
            return Err(WitnessError::BadScenario(format!(
                "need n > k > n/2, got n = {n}, k = {k}"
            )));
        }
        let m = intransitive_subgroup(n, k, kind);
        let mut expected = factorial(k) * factorial(n - k);
        if kind == GroupKind::Alt {
            expected /= 2u32;
        }
        if *m.order() != expected {
            return Err(WitnessError::BadScenario(format!(
                "subgroup order {} does not match k!(n−k)!{} = {expected}",
                m.order(),
                if kind == GroupKind::Alt { "/2" } else { "" },
            )));
        }
        Ok(Scenario { n, k, kind, m })
    }

    /// The degree n.
    #[must_use]
    pub fn n(&self) -> u16 {
        self.n
    }

    /// The split point k (so Ω₁ = {1..k}).
    #[must_use]
    pub fn k(&self) -> u16 {
        self.k
    }

    /// The ambient kind (Sym or Alt).
    #[must_use]
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// The subgroup M with a ready stabilizer chain.
    #[must_use]
    pub fn m(&self) -> &PermutationGroup {
        &self.m
    }

    /// Which side of the main case split these parameters fall on.
    #[must_use]
    pub fn hypothesis_case(&self) -> HypothesisCase {
        match (self.n % 2 == 1, self.kind) {
            (true, GroupKind::Alt) | (false, GroupKind::Sym) => HypothesisCase::A,
            _ => HypothesisCase::B,
        }
    }
}

/// Which of the twelve search cases handled an element.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaTag {
    /// Direct stratified scan of M for degrees n ≤ 11.
    #[serde(rename = "L3_2-search")]
    L3_2Search,
    /// Small right side (n−k ≤ 10), no Jordan power.
    #[serde(rename = "L3_6")]
    L3_6,
    /// Small support or one of the carved-out cycle types, no Jordan power.
    #[serde(rename = "L3_7")]
    L3_7,
    /// Case A, support meets Ω₁ only in 1, with a Jordan power.
    #[serde(rename = "L4_1")]
    L4_1,
    /// Case A, support meets Ω₁ only in 1, no Jordan power, large n−k.
    #[serde(rename = "L4_2")]
    L4_2,
    /// Case A, support meets Ω₁ beyond 1.
    #[serde(rename = "L4_3")]
    L4_3,
    /// Case B, support exactly {1, t} ∪ {k+1, r}.
    #[serde(rename = "L4_4")]
    L4_4,
    /// Case B, both support intersections ≥ 2, support ≥ 5.
    #[serde(rename = "L4_5")]
    L4_5,
    /// Case B, support meets Ω₁ only in 1.
    #[serde(rename = "L4_6")]
    L4_6,
    /// Case B, support meets Ω₂ only in k+1, with a Jordan power.
    #[serde(rename = "L4_7")]
    L4_7,
    /// Case B, support meets Ω₂ only in k+1, no Jordan power.
    #[serde(rename = "L4_8")]
    L4_8,
    /// The transposition dichotomy x = (1, k+1).
    #[serde(rename = "T4_9")]
    T4_9,
}

impl fmt::Display for LemmaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LemmaTag::L3_2Search => "L3_2-search",
            LemmaTag::L3_6 => "L3_6",
            LemmaTag::L3_7 => "L3_7",
            LemmaTag::L4_1 => "L4_1",
            LemmaTag::L4_2 => "L4_2",
            LemmaTag::L4_3 => "L4_3",
            LemmaTag::L4_4 => "L4_4",
            LemmaTag::L4_5 => "L4_5",
            LemmaTag::L4_6 => "L4_6",
            LemmaTag::L4_7 => "L4_7",
            LemmaTag::L4_8 => "L4_8",
            LemmaTag::T4_9 => "T4_9",
        };
        f.write_str(s)
    }
}

/// Limits and tie-breaking choices for a witness search.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Maximum generation tests per element before the search aborts with an
    /// internal-inconsistency report. The default (10⁶) is far above any
    /// observed need; hitting it indicates a bug, not mathematics.
    pub max_generation_tests: u64,
    /// Tie-breaking rule for the prime searches the templates draw on.
    pub prime_rule: PrimeRule,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_generation_tests: 1_000_000, prime_rule: PrimeRule::Spec }
    }
}

impl SearchBudget {
    /// The default budget, with `COGEN_BUDGET` (a test count) honoured when
    /// set and parseable.
    #[must_use]
    pub fn from_env() -> Self {
        let mut budget = SearchBudget::default();
        if let Ok(raw) = std::env::var("COGEN_BUDGET") {
            if let Ok(v) = raw.trim().parse::<u64>() {
                budget.max_generation_tests = v;
            }
        }
        budget
    }
}

/// Outcome of a witness search, plus how much testing it took.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessResult {
    /// The witness or the certified refusal.
    #[serde(flatten)]
    pub outcome: WitnessOutcome,
    /// Number of generation tests performed.
    pub generation_tests: u64,
}

/// A witness, or a certificate that none exists.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// y ∈ M with ⟨x, y⟩ = G, found under the tagged case.
    Witness {
        /// The generating partner, in the frame of the original x.
        y: Permutation,
        /// Which case produced it.
        tag: LemmaTag,
    },
    /// No y ∈ M generates with x; the certificate says why.
    NoWitness {
        /// Re-verifiable evidence.
        certificate: NoWitnessCertificate,
    },
}

/// Re-verifiable evidence that no witness exists.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoWitnessCertificate {
    /// ⟨x, y⟩ preserves a proper non-trivial block system (transposition
    /// case with gcd(n, k) > 1).
    Blocks {
        /// The canonical k | (n−k) partner, in the original frame.
        y: Permutation,
        /// The preserved system.
        system: BlockSystem,
        /// gcd(n, k), which is the number of blocks.
        gcd: u64,
    },
    /// x lies in the exceptional closure class of a small parameter triple.
    Closure {
        /// The class representative in the canonical frame.
        representative: Permutation,
        /// c with x^c = representative, witnessing class membership.
        conjugator: Permutation,
    },
    /// A completed scan of all of M found no generating partner.
    ExhaustiveScan {
        /// How many elements were tested.
        elements_tested: u64,
    },
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Support points of x on each side of the split, ascending.
fn split_support(x: &Permutation, k: u16) -> (Vec<u16>, Vec<u16>) {
    let mut l = Vec::new();
    let mut r = Vec::new();
    for p in x.support().iter() {
        if p <= k {
            l.push(p);
        } else {
            r.push(p);
        }
    }
    (l, r)
}

fn require_degree(x: &Permutation, s: &Scenario) -> Result<(), WitnessError> {
    if x.degree() != s.n {
        return Err(WitnessError::NotInDomain(format!(
            "degree {} does not match the scenario degree {}",
            x.degree(),
            s.n
        )));
    }
    Ok(())
}

fn require_canonical(x: &Permutation, s: &Scenario) -> Result<(), WitnessError> {
    require_degree(x, s)?;
    let got = x.apply(1);
    if got != s.k + 1 {
        return Err(WitnessError::NotCanonical { got });
    }
    Ok(())
}

fn precondition(cond: bool, tag: LemmaTag, reason: &str) -> Result<(), WitnessError> {
    if cond {
        Ok(())
    } else {
        Err(WitnessError::TagPrecondition { tag, reason: reason.to_string() })
    }
}

/// Conjugates x ∈ G \ M into the canonical position 1 ↦ k+1.
///
/// Returns `(h, x')` with x' = x^h = h⁻¹xh, 1^{x'} = k+1, and h ∈ M: h is
/// built from at most one transposition per side moving the least crossing
/// pair onto (1, k+1), and for Alt an extra transposition inside Ω₁ \ {1}
/// repairs parity (k ≥ 3 always leaves room).
///
/// # Errors
/// Rejects x outside G \ M: wrong degree, the identity, odd parity under
/// Alt, or an element of M (no point of Ω₁ crosses into Ω₂).
pub fn canonicalize(
    x: &Permutation,
    s: &Scenario,
) -> Result<(Permutation, Permutation), WitnessError> {
    require_degree(x, s)?;
    if x.is_identity() {
        return Err(WitnessError::NotInDomain("the identity lies in M".to_string()));
    }
    if s.kind == GroupKind::Alt && !x.is_even() {
        return Err(WitnessError::NotInDomain(format!("{x} is odd, hence outside Alt({})", s.n)));
    }
    let (n, k) = (s.n, s.k);
    let Some(a) = (1..=k).find(|&p| x.apply(p) > k) else {
        return Err(WitnessError::NotInDomain(format!(
            "{x} preserves the split {{1..{k}}} ∪ {{{}..{n}}}, hence lies in M",
            k + 1
        )));
    };
    let b = x.apply(a);
    let mut factors: Vec<Vec<u16>> = Vec::new();
    if a != 1 {
        factors.push(vec![1, a]);
    }
    if b != k + 1 {
        factors.push(vec![k + 1, b]);
    }
    let mut h = if factors.is_empty() {
        Permutation::identity(n)
    } else {
        Permutation::from_disjoint_cycles(n, &factors)?
    };
    if s.kind == GroupKind::Alt && !h.is_even() {
        // Any transposition inside Ω₁ \ {1} leaves both 1 ↦ a and b ↦ k+1
        // intact; k ≥ 3 guarantees the two points exist.
        let repair = Permutation::from_disjoint_cycles(n, &[vec![2, 3]])?;
        h = h.compose(&repair)?;
    }
    let x_prime = x.conjugate(&h)?;
    if x_prime.apply(1) != k + 1 {
        return Err(WitnessError::InternalInconsistency {
            op: "canonicalize",
            detail: format!("constructed h = {h} does not move the crossing pair onto (1, {})", k + 1),
        });
    }
    Ok((h, x_prime))
}

/// Routes a canonical element to the search case that handles it.
///
/// Degrees n ≤ 11 go to the direct scan; the transposition (1, k+1) goes to
/// the dichotomy case; everything else is split by [`Scenario::hypothesis_case`],
/// the support intersections with Ω₁/Ω₂, Jordan-power status, cycle type, and
/// the size of n−k.
///
/// # Errors
/// Rejects elements with 1^{x'} ≠ k+1.
pub fn dispatch(x_prime: &Permutation, s: &Scenario) -> Result<LemmaTag, WitnessError> {
    require_canonical(x_prime, s)?;
    let (n, k) = (s.n, s.k);
    if n <= 11 {
        return Ok(LemmaTag::L3_2Search);
    }
    let supp = x_prime.support();
    if supp.len() == 2 {
        return Ok(LemmaTag::T4_9);
    }
    let (s1, s2) = split_support(x_prime, k);
    let has_jp = jordan_power(x_prime)?.is_some();
    let ct = x_prime.cycle_type();
    let small = supp.len() < 8;
    let fixed = n - supp.len() as u16;
    match s.hypothesis_case() {
        HypothesisCase::A => {
            if s1.len() >= 2 {
                return Ok(LemmaTag::L4_3);
            }
            if has_jp {
                return Ok(LemmaTag::L4_1);
            }
            let four_transpositions = CycleType::from_counts(&[(1, fixed), (2, 4)]);
            if small || ct == four_transpositions {
                return Ok(LemmaTag::L3_7);
            }
            if n - k <= 10 {
                return Ok(LemmaTag::L3_6);
            }
            Ok(LemmaTag::L4_2)
        }
        HypothesisCase::B => {
            if s1.len() >= 2 && s2.len() >= 2 {
                return Ok(if supp.len() == 4 { LemmaTag::L4_4 } else { LemmaTag::L4_5 });
            }
            let carved = [
                CycleType::from_counts(&[(1, fixed), (2, 1), (3, 2)]),
                CycleType::from_counts(&[(1, fixed), (3, 1), (5, 1)]),
                CycleType::from_counts(&[(1, fixed), (3, 3)]),
            ];
            if s1.len() == 1 {
                if has_jp {
                    return Ok(LemmaTag::L4_6);
                }
                if small || carved.contains(&ct) {
                    return Ok(LemmaTag::L3_7);
                }
                if n - k <= 10 {
                    return Ok(LemmaTag::L3_6);
                }
                Ok(LemmaTag::L4_6)
            } else {
                if has_jp {
                    return Ok(LemmaTag::L4_7);
                }
                if k <= 9 {
                    return Ok(LemmaTag::L4_8);
                }
                if small || carved.contains(&ct) {
                    return Ok(LemmaTag::L3_7);
                }
                Ok(LemmaTag::L4_8)
            }
        }
    }
}

/// One stage of a candidate family.
#[derive(Debug, Clone)]
pub enum Stage {
    /// Enumerate everything matching a constrained cycle shape.
    Template(CycleTemplate),
    /// Stream all of M, skipping cycle types already covered by earlier
    /// template stages (each skipped plain type has a unique sided shape
    /// here, so the skip is exact).
    FullScan {
        /// Plain cycle types (trivial cycles included) to skip.
        skip_types: Vec<CycleType>,
    },
}

/// The ordered candidate stream for one search case.
#[derive(Debug, Clone)]
pub struct CandidateFamily {
    tag: LemmaTag,
    stages: Vec<Stage>,
}

impl CandidateFamily {
    /// Which case this family belongs to.
    #[must_use]
    pub fn tag(&self) -> LemmaTag {
        self.tag
    }

    /// The stages in search order.
    #[must_use]
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Streams the family in order until the visitor breaks. Under Alt,
    /// template stages whose forced parity is odd are skipped — their
    /// members lie outside M.
    ///
    /// # Errors
    /// Propagates template enumeration failures.
    pub fn for_each<B>(
        &self,
        s: &Scenario,
        visit: &mut impl FnMut(&Permutation) -> ControlFlow<B>,
    ) -> Result<Option<B>, WitnessError> {
        for stage in &self.stages {
            match stage {
                Stage::Template(t) => {
                    if s.kind == GroupKind::Alt && t.forced_parity() == Parity::Odd {
                        continue;
                    }
                    let mut wrapped = |y: &Permutation| {
                        debug_assert!(
                            s.kind != GroupKind::Alt || y.is_even(),
                            "template parity filter must keep M members only"
                        );
                        visit(y)
                    };
                    if let Some(b) = t.enumerate(&mut wrapped)? {
                        return Ok(Some(b));
                    }
                }
                Stage::FullScan { skip_types } => {
                    let mut wrapped = |y: &Permutation| {
                        if skip_types.contains(&y.cycle_type()) {
                            return ControlFlow::Continue(());
                        }
                        visit(y)
                    };
                    if let Some(b) = s.m.try_for_each_element(&mut wrapped) {
                        return Ok(Some(b));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Builds the candidate family for `tag` under the default prime rule.
///
/// # Errors
/// Rejects elements violating the tag's preconditions.
pub fn candidate_family(
    tag: LemmaTag,
    x_prime: &Permutation,
    s: &Scenario,
) -> Result<CandidateFamily, WitnessError> {
    candidate_family_with(tag, x_prime, s, PrimeRule::Spec)
}

/// Builds the candidate family for `tag`, drawing template primes under the
/// given rule. Every emitted member lies in M, matches the stage's shape and
/// placements exactly, and carries the parity the shape forces.
///
/// # Errors
/// Rejects elements violating the tag's preconditions (support-intersection
/// sizes, Jordan status, prime availability, point-selection feasibility).
pub fn candidate_family_with(
    tag: LemmaTag,
    x_prime: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    require_canonical(x_prime, s)?;
    match tag {
        LemmaTag::L3_2Search => family_l3_2(s),
        LemmaTag::L3_6 => family_l3_6(x_prime, s),
        LemmaTag::L3_7 => family_l3_7(x_prime, s),
        LemmaTag::L4_1 => family_l4_1(x_prime, s),
        LemmaTag::L4_2 => family_l4_2(x_prime, s, rule),
        LemmaTag::L4_3 => family_l4_3(x_prime, s, rule),
        LemmaTag::L4_4 => family_l4_4(x_prime, s),
        LemmaTag::L4_5 => family_l4_5(x_prime, s, rule),
        LemmaTag::L4_6 => family_l4_6(x_prime, s, rule),
        LemmaTag::L4_7 => family_l4_7(x_prime, s),
        LemmaTag::L4_8 => family_l4_8(x_prime, s, rule),
        LemmaTag::T4_9 => family_t4_9(s),
    }
}

/// Smallest support point other than 1 and k+1, if any.
fn auxiliary_point(x: &Permutation, k: u16) -> Option<u16> {
    x.support().iter().find(|&p| p != 1 && p != k + 1)
}

fn plain_type(lengths: &[u16]) -> CycleType {
    CycleType::from_lengths(lengths.to_vec())
}

fn family_l3_2(s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    let (n, k) = (s.n, s.k);
    let mut stages = Vec::new();
    let mut skip_types = Vec::new();
    stages.push(Stage::Template(CycleTemplate::new(n, k, vec![left(k), right(n - k)])?));
    skip_types.push(plain_type(&[k, n - k]));
    if n - k >= 2 {
        stages.push(Stage::Template(CycleTemplate::new(
            n,
            k,
            vec![left(k), right(n - k - 1), right(1)],
        )?));
        skip_types.push(plain_type(&[k, n - k - 1, 1]));
    }
    stages.push(Stage::FullScan { skip_types });
    Ok(CandidateFamily { tag: LemmaTag::L3_2Search, stages })
}

fn family_t4_9(s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    let (n, k) = (s.n, s.k);
    let t = CycleTemplate::new(n, k, vec![left(k), right(n - k)])?;
    Ok(CandidateFamily { tag: LemmaTag::T4_9, stages: vec![Stage::Template(t)] })
}

fn no_jordan_power(x: &Permutation, tag: LemmaTag) -> Result<(), WitnessError> {
    precondition(jordan_power(x)?.is_none(), tag, "⟨x⟩ must contain no Jordan element")
}

fn family_l3_6(x: &Permutation, s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L3_6;
    let (n, k) = (s.n, s.k);
    precondition(n >= 12, TAG, "degree must be at least 12")?;
    precondition(n - k <= 10, TAG, "n−k must be at most 10")?;
    no_jordan_power(x, TAG)?;
    let tpl = match s.hypothesis_case() {
        HypothesisCase::A => {
            let (_, s2) = split_support(x, k);
            let w = s2.iter().copied().find(|&p| p != k + 1);
            let Some(w) = w else {
                return Err(WitnessError::TagPrecondition {
                    tag: TAG,
                    reason: "case A needs a support point in Ω₂ beyond k+1".to_string(),
                });
            };
            let mut t = CycleTemplate::new(n, k, vec![left(k), right(n - k - 1), right(1)])?;
            t.place(w, 2)?;
            t
        }
        HypothesisCase::B => CycleTemplate::new(n, k, vec![left(k), right(n - k)])?,
    };
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l3_7(x: &Permutation, s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L3_7;
    let (n, k) = (s.n, s.k);
    precondition(n >= 12, TAG, "degree must be at least 12")?;
    no_jordan_power(x, TAG)?;
    let (s1, s2) = split_support(x, k);
    let tpl = match s.hypothesis_case() {
        HypothesisCase::A => {
            if let Some(w) = s2.iter().copied().find(|&p| p != k + 1) {
                let mut t = CycleTemplate::new(n, k, vec![left(k), right(n - k - 1), right(1)])?;
                t.place(w, 2)?;
                t
            } else if let Some(w) = s1.iter().copied().find(|&p| p != 1) {
                let mut t = CycleTemplate::new(n, k, vec![left(k - 1), left(1), right(n - k)])?;
                t.place(w, 1)?;
                t
            } else {
                return Err(WitnessError::TagPrecondition {
                    tag: TAG,
                    reason: "support must reach beyond {1, k+1}".to_string(),
                });
            }
        }
        HypothesisCase::B => CycleTemplate::new(n, k, vec![left(k), right(n - k)])?,
    };
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_1(x: &Permutation, s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_1;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::A, TAG, "requires case A")?;
    let (s1, _) = split_support(x, k);
    precondition(s1 == [1], TAG, "support must meet Ω₁ exactly in {1}")?;
    precondition(jordan_power(x)?.is_some(), TAG, "⟨x⟩ must contain a Jordan element")?;
    let Some(t_point) = auxiliary_point(x, k) else {
        return Err(WitnessError::TagPrecondition {
            tag: TAG,
            reason: "x must move a point beyond {1, k+1}".to_string(),
        });
    };
    // t lies in Ω₂, so n−k ≥ 2 and the shape k | (n−k−1)·1 is well formed.
    let mut tpl = CycleTemplate::new(n, k, vec![left(k), right(n - k - 1), right(1)])?;
    tpl.place(k + 1, 1)?;
    tpl.place(t_point, 2)?;
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

/// The large-right-side prime for the no-Jordan-power routes. The dichotomy's
/// inequality branch is impossible here: it would bound (|supp(x)|+2)² ≤
/// (n−k+3)² < 4n, making x itself a small-support Jordan element.
fn large_side_prime(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
    op: &'static str,
) -> Result<u16, WitnessError> {
    let d = prime_p2_with(u64::from(s.n), u64::from(s.k), rule)?;
    match d.witness() {
        Some(w) => Ok(w.value as u16),
        None => Err(WitnessError::InternalInconsistency {
            op,
            detail: format!(
                "the prime dichotomy hit its inequality case for x = {x}, which would force \
                 (|supp(x)|+2)² < 4n and make x a small-support Jordan element — yet the \
                 no-Jordan-power precondition held"
            ),
        }),
    }
}

fn family_l4_2(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_2;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::A, TAG, "requires case A")?;
    let (s1, _) = split_support(x, k);
    precondition(s1 == [1], TAG, "support must meet Ω₁ exactly in {1}")?;
    no_jordan_power(x, TAG)?;
    let p = large_side_prime(x, s, rule, "candidate_family(L4_2)")?;
    let SelectedPoints::Two { s: sp, t, u, v } = select_points(x, k, PointVariant::Two)? else {
        unreachable!("variant two returns the Two form");
    };
    let (sx, tx) = (x.apply(sp), x.apply(t));
    let tpl = if (n - k) % p == 0 {
        // Shape k | p·(n−k−p−2)·1·1 with u, v held fixed.
        let mut tpl = CycleTemplate::new(
            n,
            k,
            vec![left(k), right(p), right(n - k - p - 2), right(1), right(1)],
        )?;
        tpl.place(sp, 1)?;
        tpl.place(t, 1)?;
        tpl.place(tx, 1)?;
        tpl.place(k + 1, 2)?;
        tpl.place(sx, 2)?;
        tpl.place(u, 3)?;
        tpl.place(v, 4)?;
        tpl
    } else {
        // Shape k | p·(n−k−p).
        let mut tpl = CycleTemplate::new(n, k, vec![left(k), right(p), right(n - k - p)])?;
        tpl.place(sp, 1)?;
        tpl.place(t, 1)?;
        tpl.place(tx, 1)?;
        tpl.place(k + 1, 2)?;
        tpl.place(sx, 2)?;
        tpl
    };
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_3(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_3;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::A, TAG, "requires case A")?;
    let (s1, _) = split_support(x, k);
    let Some(t_point) = s1.iter().copied().find(|&p| p != 1) else {
        return Err(WitnessError::TagPrecondition {
            tag: TAG,
            reason: "support must meet Ω₁ beyond 1".to_string(),
        });
    };
    let pk = bertrand_pk_with(u64::from(k), rule)?.value as u16;
    let mut tpl = if k == pk + 2 && n - k == pk {
        // Degenerate arithmetic (n = 2p_k + 2): shape 3·(p_k−1) | p_k.
        CycleTemplate::new(n, k, vec![left(3), left(pk - 1), right(pk)])?
    } else {
        // Shape (k−p_k)·p_k | (n−k).
        CycleTemplate::new(n, k, vec![left(k - pk), left(pk), right(n - k)])?
    };
    tpl.place(1, 0)?;
    tpl.place(t_point, 1)?;
    tpl.forbid(x.apply(t_point), 1)?;
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_4(x: &Permutation, s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_4;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::B, TAG, "requires case B")?;
    let (s1, s2) = split_support(x, k);
    precondition(
        s1.len() == 2 && s2.len() == 2,
        TAG,
        "support must be {1, t} ∪ {k+1, r} with four points",
    )?;
    precondition(k >= 3, TAG, "the Ω₁ cycle must have room for 1, 1^y, t")?;
    let t_point = s1.into_iter().find(|&p| p != 1).expect("two left points");
    let r_point = s2.into_iter().find(|&p| p != k + 1).expect("two right points");
    let mut tpl = CycleTemplate::new(n, k, vec![left(k), right(n - k)])?;
    tpl.successor2(1, t_point)?;
    tpl.successor(k + 1, r_point)?;
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_5(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_5;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::B, TAG, "requires case B")?;
    let (s1, s2) = split_support(x, k);
    precondition(
        s1.len() >= 2 && s2.len() >= 2 && s1.len() + s2.len() >= 5,
        TAG,
        "both support intersections must have ≥ 2 points, with ≥ 5 in total",
    )?;
    // First (t, r) with t ∈ supp∩Ω₁ \ {1}, r ∈ supp∩Ω₂ \ {k+1}, t^x ≠ r;
    // injectivity of x guarantees one exists.
    let mut chosen = None;
    'outer: for &t in s1.iter().filter(|&&p| p != 1) {
        for &r in s2.iter().filter(|&&p| p != k + 1) {
            if x.apply(t) != r {
                chosen = Some((t, r));
                break 'outer;
            }
        }
    }
    let Some((t_point, r_point)) = chosen else {
        return Err(WitnessError::InternalInconsistency {
            op: "candidate_family(L4_5)",
            detail: format!("no pair (t, r) with t^x ≠ r exists for x = {x}, contradicting injectivity"),
        });
    };
    let pk = bertrand_pk_with(u64::from(k), rule)?.value as u16;
    let mut tpl = if k == 2 * pk - 1 && n == 3 * pk {
        // Degenerate arithmetic (n = 3p_k): shape (p_k+1)·(p_k−2) | p_k·1.
        CycleTemplate::new(n, k, vec![left(pk + 1), left(pk - 2), right(pk), right(1)])?
    } else {
        // Shape (k−p_k)·p_k | (n−k−1)·1.
        CycleTemplate::new(n, k, vec![left(k - pk), left(pk), right(n - k - 1), right(1)])?
    };
    tpl.place(1, 0)?;
    tpl.place(t_point, 1)?;
    tpl.forbid(x.apply(t_point), 1)?;
    tpl.place(k + 1, 2)?;
    tpl.place(r_point, 3)?;
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_6(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_6;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::B, TAG, "requires case B")?;
    let (s1, _) = split_support(x, k);
    precondition(s1 == [1], TAG, "support must meet Ω₁ exactly in {1}")?;
    if jordan_power(x)?.is_some() {
        // Jordan route: shape k | (n−k) tied to the x-orbit of k+1.
        let Some(t_point) = auxiliary_point(x, k) else {
            return Err(WitnessError::TagPrecondition {
                tag: TAG,
                reason: "x must move a point beyond {1, k+1}".to_string(),
            });
        };
        let s_point = x.inverse().apply(t_point);
        let mut tpl = CycleTemplate::new(n, k, vec![left(k), right(n - k)])?;
        tpl.successor(k + 1, t_point)?;
        if s_point != k + 1 {
            tpl.successor(t_point, s_point)?;
        }
        return Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] });
    }
    // Prime route: shape k | p·(n−k−p−i)·i.
    let p = large_side_prime(x, s, rule, "candidate_family(L4_6)")?;
    let SelectedPoints::One { r, s: sp, t } = select_points(x, k, PointVariant::One)? else {
        unreachable!("variant one returns the One form");
    };
    let i = if (n - k - 1) % p == 0 { 2 } else { 1 };
    let mut tpl =
        CycleTemplate::new(n, k, vec![left(k), right(p), right(n - k - p - i), right(i)])?;
    tpl.place(r, 1)?;
    tpl.place(t, 1)?;
    tpl.place(x.apply(t), 1)?;
    tpl.place(k + 1, 2)?;
    tpl.place(x.apply(r), 2)?;
    tpl.place(x.apply(sp), 3)?;
    if p >= 5 {
        tpl.place(sp, 1)?;
    } else {
        tpl.place(sp, 2)?;
    }
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_7(x: &Permutation, s: &Scenario) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_7;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::B, TAG, "requires case B")?;
    let (s1, s2) = split_support(x, k);
    precondition(s2 == [k + 1], TAG, "support must meet Ω₂ exactly in {k+1}")?;
    precondition(s1.len() >= 2, TAG, "support must meet Ω₁ beyond 1")?;
    precondition(jordan_power(x)?.is_some(), TAG, "⟨x⟩ must contain a Jordan element")?;
    let t_point = s1.into_iter().find(|&p| p != 1).expect("two left points");
    let tx = x.apply(t_point);
    let mut tpl = CycleTemplate::new(n, k, vec![left(k), right(n - k)])?;
    tpl.successor(1, t_point)?;
    if tx != 1 {
        tpl.successor(t_point, tx)?;
    }
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

fn family_l4_8(
    x: &Permutation,
    s: &Scenario,
    rule: PrimeRule,
) -> Result<CandidateFamily, WitnessError> {
    const TAG: LemmaTag = LemmaTag::L4_8;
    let (n, k) = (s.n, s.k);
    precondition(s.hypothesis_case() == HypothesisCase::B, TAG, "requires case B")?;
    let (s1, s2) = split_support(x, k);
    precondition(s2 == [k + 1], TAG, "support must meet Ω₂ exactly in {k+1}")?;
    precondition(s1.len() >= 2, TAG, "support must meet Ω₁ beyond 1")?;
    no_jordan_power(x, TAG)?;
    if k <= 9 {
        // Small-split staged search over M.
        let mut stages = Vec::new();
        let mut skip_types = Vec::new();
        stages.push(Stage::Template(CycleTemplate::new(n, k, vec![left(k), right(n - k)])?));
        skip_types.push(plain_type(&[k, n - k]));
        stages.push(Stage::Template(CycleTemplate::new(
            n,
            k,
            vec![left(k - 1), left(1), right(n - k)],
        )?));
        skip_types.push(plain_type(&[k - 1, 1, n - k]));
        if n - k >= 2 {
            stages.push(Stage::Template(CycleTemplate::new(
                n,
                k,
                vec![left(k), right(n - k - 1), right(1)],
            )?));
            skip_types.push(plain_type(&[k, n - k - 1, 1]));
        }
        stages.push(Stage::FullScan { skip_types });
        return Ok(CandidateFamily { tag: TAG, stages });
    }
    // Large-split prime route: shape (k−i−p)·p·i | (n−k).
    let p = prime_p1_with(u64::from(n), u64::from(k), rule)?.value as u16;
    let SelectedPoints::One { r, s: sp, t } = select_points(x, k, PointVariant::One)? else {
        unreachable!("variant one returns the One form");
    };
    let i = if (k - 1) % p == 0 { 2 } else { 1 };
    let mut tpl =
        CycleTemplate::new(n, k, vec![left(k - i - p), left(p), left(i), right(n - k)])?;
    tpl.place(1, 0)?;
    tpl.place(r, 0)?;
    tpl.place(sp, 0)?;
    tpl.place(x.apply(r), 1)?;
    tpl.place(t, 1)?;
    tpl.place(x.apply(t), 1)?;
    tpl.place(x.apply(sp), 2)?;
    Ok(CandidateFamily { tag: TAG, stages: vec![Stage::Template(tpl)] })
}

/// Checks that a found partner really works: y ∈ M, parities admissible for
/// the kind, and ⟨x, y⟩ is exactly G (replayed on an independently rebuilt
/// stabilizer chain).
#[must_use]
pub fn verify_witness(x: &Permutation, y: &Permutation, s: &Scenario) -> bool {
    if x.degree() != s.n || y.degree() != s.n {
        return false;
    }
    if !matches!(s.m.contains(y), Ok(true)) {
        return false;
    }
    if s.kind == GroupKind::Alt && !(x.is_even() && y.is_even()) {
        return false;
    }
    match generates_pair(x, y, s.kind) {
        Ok(outcome) => outcome.generates(s.kind),
        Err(_) => false,
    }
}

/// The imprimitivity block system for the transposition case with
/// t = gcd(n, k) > 1: Δ is the ⟨y^t⟩-orbit of 1 joined with the
/// ⟨y^t⟩-orbit of k+1, and the system consists of the t translates Δ^{y^i}.
/// The result is re-verified against the block axioms and preservation by
/// both (1, k+1) and y before it is returned.
///
/// # Errors
/// `GcdOne` when n and k are coprime; `NotBlockShape` unless y ∈ M is a
/// k-cycle on Ω₁ times an (n−k)-cycle on Ω₂.
pub fn imprimitivity_certificate(
    s: &Scenario,
    y: &Permutation,
) -> Result<BlockSystem, WitnessError> {
    const OP: &str = "imprimitivity_certificate";
    let (n, k) = (s.n, s.k);
    let t = gcd_u64(u64::from(n), u64::from(k));
    if t == 1 {
        return Err(WitnessError::GcdOne);
    }
    let t = t as u16;
    if y.degree() != n {
        return Err(WitnessError::NotBlockShape(format!(
            "degree {} does not match n = {n}",
            y.degree()
        )));
    }
    if s.kind == GroupKind::Alt && !y.is_even() {
        return Err(WitnessError::NotBlockShape(format!("{y} is odd, hence outside M for Alt")));
    }
    let cycles = y.cycles();
    let sided_ok = cycles.len() == 2
        && y.support().len() == usize::from(n)
        && cycles.iter().any(|c| c.len() == usize::from(k) && c.iter().all(|&p| p <= k))
        && cycles.iter().any(|c| c.len() == usize::from(n - k) && c.iter().all(|&p| p > k));
    if !sided_ok {
        return Err(WitnessError::NotBlockShape(format!(
            "{y} is not a {k}-cycle on Ω₁ times a {}-cycle on Ω₂",
            n - k
        )));
    }
    let y_t = y.power(i64::from(t));
    let orbit = |start: u16| {
        let mut points = vec![start];
        let mut p = y_t.apply(start);
        while p != start {
            points.push(p);
            p = y_t.apply(p);
        }
        points
    };
    let mut delta = orbit(1);
    delta.extend(orbit(k + 1));
    delta.sort_unstable();
    debug_assert_eq!(delta.len(), usize::from(n / t), "|Δ| must be n/t");
    let mut blocks = Vec::with_capacity(usize::from(t));
    let mut current = delta;
    for _ in 0..t {
        blocks.push(current.clone());
        let mut next: Vec<u16> = current.iter().map(|&p| y.apply(p)).collect();
        next.sort_unstable();
        current = next;
    }
    let system = BlockSystem::new(n, blocks).map_err(|e| WitnessError::InternalInconsistency {
        op: OP,
        detail: format!("translates of Δ do not partition the points: {e}"),
    })?;
    let x0 = Permutation::from_disjoint_cycles(n, &[vec![1, k + 1]])?;
    if system.is_trivial()
        || !system.is_preserved_by(&x0)
        || !system.is_preserved_by(y)
    {
        return Err(WitnessError::InternalInconsistency {
            op: OP,
            detail: format!("constructed system {system} fails re-verification against (1,{}) and {y}", k + 1),
        });
    }
    Ok(system)
}

enum ScanOutcome {
    Found(Permutation),
    Budget,
    Exhausted,
}

fn scan_family(
    family: &CandidateFamily,
    s: &Scenario,
    x_prime: &Permutation,
    budget: &SearchBudget,
    tests: &mut u64,
) -> Result<ScanOutcome, WitnessError> {
    enum Halt {
        Found(Permutation),
        Budget,
    }
    let halted = family.for_each(s, &mut |y| {
        if *tests >= budget.max_generation_tests {
            return ControlFlow::Break(Halt::Budget);
        }
        *tests += 1;
        if generates_pair_fast(x_prime, y, s.kind) {
            ControlFlow::Break(Halt::Found(y.clone()))
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match halted {
        Some(Halt::Found(y)) => ScanOutcome::Found(y),
        Some(Halt::Budget) => ScanOutcome::Budget,
        None => ScanOutcome::Exhausted,
    })
}

/// Conjugates a canonical-frame witness back to the original frame and
/// re-verifies it from scratch.
fn finish_witness(
    x: &Permutation,
    s: &Scenario,
    h: &Permutation,
    y_canonical: Permutation,
    tag: LemmaTag,
    generation_tests: u64,
) -> Result<WitnessResult, WitnessError> {
    let y = y_canonical.conjugate(&h.inverse())?;
    if !verify_witness(x, &y, s) {
        return Err(WitnessError::InternalInconsistency {
            op: "find_witness",
            detail: format!("replay failed under tag {tag}: x = {x}, y = {y}"),
        });
    }
    Ok(WitnessResult { outcome: WitnessOutcome::Witness { y, tag }, generation_tests })
}

fn budget_error(tag: LemmaTag, x_prime: &Permutation, s: &Scenario, tests: u64) -> WitnessError {
    WitnessError::InternalInconsistency {
        op: "find_witness",
        detail: format!(
            "budget of {tests} generation tests exhausted under tag {tag} for x' = {x_prime} \
             (n = {}, k = {}, {}); the family guarantees a generating member",
            s.n, s.k, s.kind
        ),
    }
}

/// Finds y ∈ M with ⟨x, y⟩ = G, or a certified no-witness outcome.
///
/// The element is canonicalized, dispatched, and its candidate family
/// scanned with generation tests until success; the witness is conjugated
/// back to the original frame and re-verified before being returned. The
/// transposition case returns a block certificate when gcd(n, k) > 1; at
/// degrees n ≤ 11 the exceptional closure classes return their class
/// certificate and anything else is settled by a stratified scan of M that
/// is exhaustive on completion.
///
/// # Errors
/// Domain violations (x ∉ G \ M), and internal-inconsistency reports when a
/// case the underlying results guarantee fails or the budget runs out.
pub fn find_witness(
    x: &Permutation,
    s: &Scenario,
    budget: &SearchBudget,
) -> Result<WitnessResult, WitnessError> {
    let (h, x_prime) = canonicalize(x, s)?;
    let tag = dispatch(&x_prime, s)?;
    match tag {
        LemmaTag::T4_9 => transposition_outcome(x, &x_prime, &h, s, LemmaTag::T4_9),
        LemmaTag::L3_2Search => small_degree_outcome(x, &x_prime, &h, s, budget),
        _ => {
            let family = candidate_family_with(tag, &x_prime, s, budget.prime_rule)?;
            let mut tests = 0u64;
            match scan_family(&family, s, &x_prime, budget, &mut tests)? {
                ScanOutcome::Found(y) => finish_witness(x, s, &h, y, tag, tests),
                ScanOutcome::Budget => Err(budget_error(tag, &x_prime, s, tests)),
                ScanOutcome::Exhausted => Err(WitnessError::InternalInconsistency {
                    op: "find_witness",
                    detail: format!(
                        "the {tag} family was exhausted after {tests} tests without a generating \
                         partner for x' = {x_prime}; the underlying existence result guarantees one"
                    ),
                }),
            }
        }
    }
}

/// The standard partner: a k-cycle on Ω₁ times an (n−k)-cycle on Ω₂, both
/// ascending.
fn standard_partner(n: u16, k: u16) -> Permutation {
    Permutation::from_disjoint_cycles(n, &[(1..=k).collect(), (k + 1..=n).collect()])
        .expect("disjoint ascending cycles")
}

/// Settles the canonical transposition x' = (1, k+1): a witness iff
/// gcd(n, k) = 1, else a block certificate.
fn transposition_outcome(
    x: &Permutation,
    x_prime: &Permutation,
    h: &Permutation,
    s: &Scenario,
    tag: LemmaTag,
) -> Result<WitnessResult, WitnessError> {
    let (n, k) = (s.n, s.k);
    let t = gcd_u64(u64::from(n), u64::from(k));
    let y0 = standard_partner(n, k);
    if t == 1 {
        let outcome = generates_pair(x_prime, &y0, s.kind)?;
        if !outcome.generates(s.kind) {
            return Err(WitnessError::InternalInconsistency {
                op: "find_witness",
                detail: format!(
                    "gcd({n}, {k}) = 1 but ⟨{x_prime}, {y0}⟩ is not all of {}({n})",
                    s.kind
                ),
            });
        }
        return finish_witness(x, s, h, y0, tag, 1);
    }
    let system_canonical = imprimitivity_certificate(s, &y0)?;
    let h_inv = h.inverse();
    let y = y0.conjugate(&h_inv)?;
    let blocks: Vec<Vec<u16>> = system_canonical
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&p| h_inv.apply(p)).collect())
        .collect();
    let system = BlockSystem::new(n, blocks).map_err(|e| WitnessError::InternalInconsistency {
        op: "find_witness",
        detail: format!("conjugated block system is not a partition: {e}"),
    })?;
    if !system.is_preserved_by(x) || !system.is_preserved_by(&y) {
        return Err(WitnessError::InternalInconsistency {
            op: "find_witness",
            detail: format!("conjugated system {system} is not preserved by x = {x} and y = {y}"),
        });
    }
    Ok(WitnessResult {
        outcome: WitnessOutcome::NoWitness {
            certificate: NoWitnessCertificate::Blocks { y, system, gcd: t },
        },
        generation_tests: 0,
    })
}

/// The exceptional closure-class representative for the given parameters,
/// if these are one of the three small triples with one.
fn exceptional_closure_representative(s: &Scenario) -> Option<Permutation> {
    let text = match (s.n, s.k, s.kind) {
        (4, 3, GroupKind::Sym) | (5, 3, GroupKind::Alt) => "(1,4)(2,3)",
        (6, 4, GroupKind::Alt) => "(1,5)(2,6)",
        _ => return None,
    };
    Some(parse_cycles(text, s.n).expect("fixed representative parses"))
}

/// Settles a degree ≤ 11 element: block certificate for a transposition with
/// gcd > 1, closure certificate on the exceptional classes, and otherwise a
/// stratified scan of M that is exhaustive on completion.
fn small_degree_outcome(
    x: &Permutation,
    x_prime: &Permutation,
    h: &Permutation,
    s: &Scenario,
    budget: &SearchBudget,
) -> Result<WitnessResult, WitnessError> {
    let (n, k) = (s.n, s.k);
    if x_prime.support().len() == 2 && gcd_u64(u64::from(n), u64::from(k)) > 1 {
        return transposition_outcome(x, x_prime, h, s, LemmaTag::L3_2Search);
    }
    if let Some(rep) = exceptional_closure_representative(s) {
        if rep.cycle_type() == x_prime.cycle_type() {
            let conj = s.m.try_for_each_element(&mut |c| {
                if x_prime.conjugate(c).expect("equal degrees") == rep {
                    ControlFlow::Break(c.clone())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let Some(c) = conj {
                let conjugator = h.compose(&c)?;
                debug_assert_eq!(x.conjugate(&conjugator).expect("equal degrees"), rep);
                return Ok(WitnessResult {
                    outcome: WitnessOutcome::NoWitness {
                        certificate: NoWitnessCertificate::Closure { representative: rep, conjugator },
                    },
                    generation_tests: 0,
                });
            }
        }
    }
    let family = candidate_family_with(LemmaTag::L3_2Search, x_prime, s, budget.prime_rule)?;
    let mut tests = 0u64;
    match scan_family(&family, s, x_prime, budget, &mut tests)? {
        ScanOutcome::Found(y) => finish_witness(x, s, h, y, LemmaTag::L3_2Search, tests),
        ScanOutcome::Budget => Err(WitnessError::InternalInconsistency {
            op: "find_witness",
            detail: format!(
                "budget of {tests} generation tests too small to settle x' = {x_prime} at \
                 (n, k) = ({n}, {k}): the degree ≤ 11 scan must finish M to certify"
            ),
        }),
        ScanOutcome::Exhausted => Ok(WitnessResult {
            outcome: WitnessOutcome::NoWitness {
                certificate: NoWitnessCertificate::ExhaustiveScan { elements_tested: tests },
            },
            generation_tests: tests,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Verdict;

    fn scn(n: u16, k: u16, kind: GroupKind) -> Scenario {
        Scenario::new(n, k, kind).expect("valid scenario")
    }

    fn p(text: &str, n: u16) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn scenario_validation_and_case() {
        assert!(Scenario::new(12, 6, GroupKind::Sym).is_err()); // k = n/2
        assert!(Scenario::new(12, 12, GroupKind::Sym).is_err());
        assert!(Scenario::new(3, 2, GroupKind::Sym).is_err());
        let s = scn(6, 4, GroupKind::Sym);
        assert_eq!(s.m().order().to_string(), "48"); // 4!·2!
        let s = scn(6, 4, GroupKind::Alt);
        assert_eq!(s.m().order().to_string(), "24");
        assert_eq!(scn(13, 7, GroupKind::Alt).hypothesis_case(), HypothesisCase::A);
        assert_eq!(scn(12, 7, GroupKind::Sym).hypothesis_case(), HypothesisCase::A);
        assert_eq!(scn(13, 7, GroupKind::Sym).hypothesis_case(), HypothesisCase::B);
        assert_eq!(scn(12, 7, GroupKind::Alt).hypothesis_case(), HypothesisCase::B);
    }

    #[test]
    fn canonicalize_identity_adjustment() {
        let s = scn(12, 7, GroupKind::Sym);
        let x = p("(1,8)", 12);
        let (h, xp) = canonicalize(&x, &s).unwrap();
        assert!(h.is_identity());
        assert_eq!(xp, x);
    }

    #[test]
    fn canonicalize_single_swap() {
        let s = scn(6, 4, GroupKind::Sym);
        let x = p("(2,5)", 6);
        let (h, xp) = canonicalize(&x, &s).unwrap();
        assert_eq!(h.to_string(), "(1,2)");
        assert_eq!(xp.to_string(), "(1,5)");
    }

    #[test]
    fn canonicalize_double_swap() {
        let s = scn(12, 7, GroupKind::Sym);
        let x = p("(3,9)", 12);
        let (h, xp) = canonicalize(&x, &s).unwrap();
        assert_eq!(h.to_string(), "(1,3)(8,9)");
        assert_eq!(xp.to_string(), "(1,8)");
        assert!(h.is_even());
    }

    #[test]
    fn canonicalize_repairs_parity_for_alt() {
        let s = scn(13, 7, GroupKind::Alt);
        let x = p("(2,8)(3,9)", 13);
        let (h, xp) = canonicalize(&x, &s).unwrap();
        assert!(h.is_even(), "h must lie in M ∩ Alt");
        assert!(matches!(s.m().contains(&h), Ok(true)));
        assert_eq!(xp.apply(1), 8);
        assert_eq!(xp, x.conjugate(&h).unwrap());
        assert_eq!(xp.to_string(), "(1,8)(2,9)");
    }

    #[test]
    fn canonicalize_rejects_bad_domain() {
        let s = scn(12, 7, GroupKind::Alt);
        assert!(matches!(
            canonicalize(&Permutation::identity(12), &s),
            Err(WitnessError::NotInDomain(_))
        ));
        // Odd element under Alt.
        assert!(matches!(
            canonicalize(&p("(1,8)", 12), &s),
            Err(WitnessError::NotInDomain(_))
        ));
        // Element of M.
        assert!(matches!(
            canonicalize(&p("(1,2)(8,9)", 12), &s),
            Err(WitnessError::NotInDomain(_))
        ));
        // Wrong degree.
        assert!(matches!(
            canonicalize(&p("(1,8)", 13), &s),
            Err(WitnessError::NotInDomain(_))
        ));
    }

    #[test]
    fn canonicalize_random_samples_land_in_m() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0C0);
        for &(n, k, kind) in
            &[(12, 7, GroupKind::Sym), (13, 7, GroupKind::Alt), (11, 6, GroupKind::Alt)]
        {
            let s = scn(n, k, kind);
            let g = crate::group::ambient_group(n, kind);
            let mut tried = 0;
            while tried < 8 {
                let x = g.random_element(&mut rng);
                if x.is_identity() || (1..=k).all(|q| x.apply(q) <= k) {
                    continue;
                }
                tried += 1;
                let (h, xp) = canonicalize(&x, &s).unwrap();
                assert!(matches!(s.m().contains(&h), Ok(true)), "h must lie in M");
                assert_eq!(xp.apply(1), k + 1);
                assert_eq!(xp, x.conjugate(&h).unwrap());
            }
        }
    }

    #[test]
    fn dispatch_small_degree_and_transposition() {
        let s = scn(9, 6, GroupKind::Sym);
        assert_eq!(dispatch(&p("(1,7)", 9), &s).unwrap(), LemmaTag::L3_2Search);
        let s = scn(11, 6, GroupKind::Alt);
        assert_eq!(dispatch(&p("(1,7,2)", 11), &s).unwrap(), LemmaTag::L3_2Search);
        let s = scn(12, 7, GroupKind::Sym);
        assert_eq!(dispatch(&p("(1,8)", 12), &s).unwrap(), LemmaTag::T4_9);
        assert!(matches!(
            dispatch(&p("(2,9)", 12), &s),
            Err(WitnessError::NotCanonical { got: 1 })
        ));
    }

    #[test]
    fn dispatch_case_a_routes() {
        // (13, 7, Alt): case A.
        let s = scn(13, 7, GroupKind::Alt);
        // Support meets Ω₁ beyond 1.
        assert_eq!(dispatch(&p("(1,8)(2,9)", 13), &s).unwrap(), LemmaTag::L4_3);
        // Jordan power (a 3-cycle is itself a Jordan element).
        assert_eq!(dispatch(&p("(1,8,9)", 13), &s).unwrap(), LemmaTag::L4_1);
        // Small support, no Jordan power: three transpositions.
        assert_eq!(dispatch(&p("(1,8)(9,10)(11,12)", 13), &s).unwrap(), LemmaTag::L3_7);

        // (19, 10, Alt): case A with a bigger right side.
        let s = scn(19, 10, GroupKind::Alt);
        // Three 3-cycles: support 9, no Jordan power, not 2⁴ → L3_6.
        assert_eq!(
            dispatch(&p("(1,11,12)(13,14,15)(16,17,18)", 19), &s).unwrap(),
            LemmaTag::L3_6
        );
        // Four transpositions: the carved-out type 2⁴ goes to L3_7 first.
        assert_eq!(
            dispatch(&p("(1,11)(12,13)(14,15)(16,17)", 19), &s).unwrap(),
            LemmaTag::L3_7
        );

        // (23, 12, Alt): n−k = 11 > 10 → the prime route L4_2.
        let s = scn(23, 12, GroupKind::Alt);
        assert_eq!(
            dispatch(&p("(1,13)(14,15)(16,17)(18,19)(20,21)(22,23)", 23), &s).unwrap(),
            LemmaTag::L4_2
        );
    }

    #[test]
    fn dispatch_case_b_routes() {
        // (12, 7, Alt): case B.
        let s = scn(12, 7, GroupKind::Alt);
        assert_eq!(dispatch(&p("(1,8)(2,9)", 12), &s).unwrap(), LemmaTag::L4_4);
        assert_eq!(dispatch(&p("(1,8,2,9,3)", 12), &s).unwrap(), LemmaTag::L4_5);
        assert_eq!(dispatch(&p("(1,8,9)", 12), &s).unwrap(), LemmaTag::L4_6);
        assert_eq!(dispatch(&p("(1,8,2)", 12), &s).unwrap(), LemmaTag::L4_7);
        // 2⁴ with the right side touched only in k+1: no Jordan power, k ≤ 9.
        assert_eq!(dispatch(&p("(1,8)(2,3)(4,5)(6,7)", 12), &s).unwrap(), LemmaTag::L4_8);

        // (19, 10, Sym): case B (n odd).
        let s = scn(19, 10, GroupKind::Sym);
        // The carved type 3³ goes to L3_7 even though n−k = 9 ≤ 10.
        assert_eq!(
            dispatch(&p("(1,11,12)(13,14,15)(16,17,18)", 19), &s).unwrap(),
            LemmaTag::L3_7
        );
        // Five transpositions: not carved → L3_6 by the small right side.
        assert_eq!(
            dispatch(&p("(1,11)(12,13)(14,15)(16,17)(18,19)", 19), &s).unwrap(),
            LemmaTag::L3_6
        );

        // (23, 12, Sym): case B middle branch with n−k = 11 → prime route.
        let s = scn(23, 12, GroupKind::Sym);
        assert_eq!(
            dispatch(&p("(1,13)(14,15)(16,17)(18,19)(20,21)", 23), &s).unwrap(),
            LemmaTag::L4_6
        );

        // (21, 11, Sym): case B, k ≥ 10, support meets Ω₂ only in k+1.
        let s = scn(21, 11, GroupKind::Sym);
        assert_eq!(
            dispatch(&p("(1,12)(2,3)(4,5)(6,7)(8,9)", 21), &s).unwrap(),
            LemmaTag::L4_8
        );
    }

    #[test]
    fn family_l4_1_first_member_and_placements() {
        let s = scn(13, 7, GroupKind::Alt);
        let x = p("(1,8,9)", 13);
        let family = candidate_family(LemmaTag::L4_1, &x, &s).unwrap();
        let mut first = None;
        family
            .for_each(&s, &mut |y| {
                first = Some(y.clone());
                ControlFlow::Break(())
            })
            .unwrap();
        assert_eq!(first.unwrap().to_string(), "(1,2,3,4,5,6,7)(8,10,11,12,13)");
    }

    #[test]
    fn family_t4_9_first_member() {
        let s = scn(12, 7, GroupKind::Sym);
        let x = p("(1,8)", 12);
        let family = candidate_family(LemmaTag::T4_9, &x, &s).unwrap();
        let mut first = None;
        family
            .for_each(&s, &mut |y| {
                first = Some(y.clone());
                ControlFlow::Break(())
            })
            .unwrap();
        assert_eq!(first.unwrap().to_string(), "(1,2,3,4,5,6,7)(8,9,10,11,12)");
    }

    #[test]
    fn family_l4_4_equations_hold_for_every_member() {
        let s = scn(12, 7, GroupKind::Alt);
        let x = p("(1,8)(2,9)", 12);
        let family = candidate_family(LemmaTag::L4_4, &x, &s).unwrap();
        let mut count = 0u64;
        let mut first = None;
        family
            .for_each(&s, &mut |y| {
                if first.is_none() {
                    first = Some(y.clone());
                }
                assert_eq!(y.apply(y.apply(1)), 2, "1^(y²) = t");
                assert_eq!(y.apply(8), 9, "(k+1)^y = r");
                assert!(y.is_even());
                count += 1;
                ControlFlow::<()>::Continue(())
            })
            .unwrap();
        assert_eq!(count, 720);
        assert_eq!(first.unwrap().to_string(), "(1,3,2,4,5,6,7)(8,9,10,11,12)");
    }

    #[test]
    fn family_l4_6_jordan_route_successor_chain() {
        let s = scn(12, 7, GroupKind::Alt);
        // 5-cycle: Jordan (fixes ≥ 3 points), support meets Ω₁ only in 1,
        // and t = 9 pulls back to s = 10 ≠ k+1: chain 8 ↦ 9 ↦ 10.
        let x = p("(1,8,10,9,11)", 12);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_6);
        let family = candidate_family(LemmaTag::L4_6, &x, &s).unwrap();
        let mut first = None;
        family
            .for_each(&s, &mut |y| {
                assert_eq!(y.apply(8), 9);
                assert_eq!(y.apply(9), 10);
                first = Some(y.clone());
                ControlFlow::Break(())
            })
            .unwrap();
        assert_eq!(first.unwrap().to_string(), "(1,2,3,4,5,6,7)(8,9,10,11,12)");
    }

    #[test]
    fn family_l4_7_pins_the_left_chain() {
        let s = scn(12, 7, GroupKind::Alt);
        let x = p("(1,8)(2,3)", 12);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_7);
        let family = candidate_family(LemmaTag::L4_7, &x, &s).unwrap();
        let mut checked = 0;
        family
            .for_each(&s, &mut |y| {
                assert_eq!(y.apply(1), 2, "1^y = t");
                assert_eq!(y.apply(2), 3, "t^y = t^x");
                checked += 1;
                if checked == 40 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::<()>::Continue(())
                }
            })
            .unwrap();
        assert_eq!(checked, 40);
    }

    #[test]
    fn family_l4_8_large_split_shape() {
        let s = scn(19, 10, GroupKind::Sym);
        let x = p("(1,11,2,3)(4,5,6,7)", 19);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_8);
        let family = candidate_family(LemmaTag::L4_8, &x, &s).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else {
            panic!("large split must be a single template stage");
        };
        assert_eq!(tpl.describe(), "4·5·1 | 9");
        let mut first = None;
        family
            .for_each(&s, &mut |y| {
                first = Some(y.clone());
                ControlFlow::Break(())
            })
            .unwrap();
        assert_eq!(
            first.unwrap().to_string(),
            "(1,2,4,8)(3,6,7,9,10)(11,12,13,14,15,16,17,18,19)"
        );
    }

    #[test]
    fn family_l4_3_degenerate_arithmetic_switches_shape() {
        // k = p_k + 2 and n − k = p_k with p_k = 5: (12, 7).
        let s = scn(12, 7, GroupKind::Sym);
        let x = p("(1,8)(2,9)", 12);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_3);
        let family = candidate_family(LemmaTag::L4_3, &x, &s).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else { panic!("template stage") };
        assert_eq!(tpl.describe(), "3·4 | 5");
        // The generic shape appears once the arithmetic is not degenerate.
        let s = scn(14, 8, GroupKind::Sym);
        let x = p("(1,9)(2,10)", 14);
        let family = candidate_family(LemmaTag::L4_3, &x, &s).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else { panic!("template stage") };
        assert_eq!(tpl.describe(), "3·5 | 6"); // p_k(8) = 5: (k−p_k)·p_k | (n−k)
    }

    #[test]
    fn family_l4_5_degenerate_arithmetic_under_opposite_rule() {
        // Under the opposite prime rule p_k(9) = 5, and (15, 9) hits
        // k = 2p_k − 1, n = 3p_k.
        let s = scn(15, 9, GroupKind::Sym);
        let x = p("(1,10,2,11,3)", 15);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_5);
        let family = candidate_family_with(LemmaTag::L4_5, &x, &s, PrimeRule::Opposite).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else { panic!("template stage") };
        assert_eq!(tpl.describe(), "6·3 | 5·1");
        // The default rule picks p_k = 7 and keeps the generic shape.
        let family = candidate_family(LemmaTag::L4_5, &x, &s).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else { panic!("template stage") };
        assert_eq!(tpl.describe(), "2·7 | 5·1");
    }

    #[test]
    fn family_preconditions_reject_wrong_cases() {
        let s = scn(12, 7, GroupKind::Alt); // case B
        let x = p("(1,8,9)", 12);
        assert!(matches!(
            candidate_family(LemmaTag::L4_1, &x, &s),
            Err(WitnessError::TagPrecondition { tag: LemmaTag::L4_1, .. })
        ));
        assert!(matches!(
            candidate_family(LemmaTag::L4_4, &x, &s),
            Err(WitnessError::TagPrecondition { tag: LemmaTag::L4_4, .. })
        ));
        let s = scn(13, 7, GroupKind::Alt); // case A
        // L3_6 rejects elements with a Jordan power.
        assert!(matches!(
            candidate_family(LemmaTag::L3_6, &p("(1,8,9)", 13), &s),
            Err(WitnessError::TagPrecondition { tag: LemmaTag::L3_6, .. })
        ));
    }

    #[test]
    fn family_l3_7_left_fixed_point_variant() {
        // Case A with support beyond {1, k+1} only on the left: reachable by
        // direct request (dispatch would route it to L4_3). Four
        // transpositions, so no power of x is a Jordan element.
        let s = scn(19, 10, GroupKind::Alt);
        let x = p("(1,11)(2,3)(4,5)(6,7)", 19);
        let family = candidate_family(LemmaTag::L3_7, &x, &s).unwrap();
        let Stage::Template(tpl) = &family.stages()[0] else { panic!("template stage") };
        assert_eq!(tpl.describe(), "9·1 | 9");
        family
            .for_each(&s, &mut |y| {
                assert_eq!(y.apply(2), 2, "w = 2 is the fixed point");
                ControlFlow::Break(())
            })
            .unwrap();
    }

    #[test]
    fn find_witness_transposition_dichotomy() {
        // gcd(12, 7) = 1: the standard partner works.
        let s = scn(12, 7, GroupKind::Sym);
        let r = find_witness(&p("(1,8)", 12), &s, &SearchBudget::default()).unwrap();
        match &r.outcome {
            WitnessOutcome::Witness { y, tag } => {
                assert_eq!(*tag, LemmaTag::T4_9);
                assert_eq!(y.to_string(), "(1,2,3,4,5,6,7)(8,9,10,11,12)");
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        // gcd(6, 4) = 2 with an off-canonical x: block certificate pulled
        // back through the conjugation.
        let s = scn(6, 4, GroupKind::Sym);
        let x = p("(2,5)", 6);
        let r = find_witness(&x, &s, &SearchBudget::default()).unwrap();
        match &r.outcome {
            WitnessOutcome::NoWitness {
                certificate: NoWitnessCertificate::Blocks { y, system, gcd },
            } => {
                assert_eq!(*gcd, 2);
                assert_eq!(y.to_string(), "(1,3,4,2)(5,6)");
                assert_eq!(system.to_string(), "{1,4,6} | {2,3,5}");
                assert!(system.is_preserved_by(&x));
                assert!(system.is_preserved_by(y));
            }
            other => panic!("expected a block certificate, got {other:?}"),
        }
    }

    #[test]
    fn find_witness_closure_certificates() {
        let budget = SearchBudget::default();
        // (4, 3, Sym): x in the closure class of (1,4)(2,3).
        let s = scn(4, 3, GroupKind::Sym);
        let x = p("(2,4)(1,3)", 4);
        let r = find_witness(&x, &s, &budget).unwrap();
        match &r.outcome {
            WitnessOutcome::NoWitness {
                certificate: NoWitnessCertificate::Closure { representative, conjugator },
            } => {
                assert_eq!(representative.to_string(), "(1,4)(2,3)");
                assert_eq!(x.conjugate(conjugator).unwrap(), *representative);
            }
            other => panic!("expected a closure certificate, got {other:?}"),
        }
        // (5, 3, Alt) and (6, 4, Alt) representatives certify themselves.
        for (n, k, rep) in [(5u16, 3u16, "(1,4)(2,3)"), (6, 4, "(1,5)(2,6)")] {
            let s = scn(n, k, GroupKind::Alt);
            let x = p(rep, n);
            let r = find_witness(&x, &s, &budget).unwrap();
            assert!(
                matches!(
                    &r.outcome,
                    WitnessOutcome::NoWitness {
                        certificate: NoWitnessCertificate::Closure { .. }
                    }
                ),
                "({n}, {k}) representative must get a closure certificate"
            );
        }
        // Same cycle type but outside the class: a witness exists.
        let s = scn(6, 4, GroupKind::Alt);
        let r = find_witness(&p("(1,5)(2,3)", 6), &s, &budget).unwrap();
        match &r.outcome {
            WitnessOutcome::Witness { y, tag } => {
                assert_eq!(*tag, LemmaTag::L3_2Search);
                assert!(verify_witness(&p("(1,5)(2,3)", 6), y, &s));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn find_witness_small_degree_class_sweep() {
        // Every non-identity class of A_6 \ M under M-conjugacy gets the
        // outcome Theorem-style case analysis predicts at (6, 4).
        let s = scn(6, 4, GroupKind::Alt);
        let g = crate::group::ambient_group(6, GroupKind::Alt);
        let reps = crate::group::m_class_reps(&g, s.m()).unwrap();
        let budget = SearchBudget::default();
        let closure_rep = p("(1,5)(2,6)", 6);
        let mut closure_classes = 0;
        let mut witness_classes = 0;
        for x in reps {
            if x.is_identity() || (1..=4u16).all(|q| x.apply(q) <= 4) {
                continue; // inside M
            }
            let r = find_witness(&x, &s, &budget).unwrap();
            match r.outcome {
                WitnessOutcome::NoWitness {
                    certificate: NoWitnessCertificate::Closure { representative, conjugator },
                } => {
                    assert_eq!(representative, closure_rep);
                    assert_eq!(x.conjugate(&conjugator).unwrap(), representative);
                    closure_classes += 1;
                }
                WitnessOutcome::Witness { y, .. } => {
                    assert!(verify_witness(&x, &y, &s));
                    witness_classes += 1;
                }
                WitnessOutcome::NoWitness { certificate } => {
                    panic!("unexpected certificate {certificate:?} for x = {x}")
                }
            }
        }
        assert_eq!(closure_classes, 1, "exactly one M-class lies in the closure");
        assert!(witness_classes >= 3);
    }

    #[test]
    fn find_witness_through_every_main_tag() {
        let budget = SearchBudget::default();
        let cases: Vec<(u16, u16, GroupKind, &str, LemmaTag)> = vec![
            (13, 7, GroupKind::Alt, "(1,8,9)", LemmaTag::L4_1),
            (13, 7, GroupKind::Alt, "(1,8)(2,9)", LemmaTag::L4_3),
            (12, 7, GroupKind::Alt, "(1,8)(2,9)", LemmaTag::L4_4),
            (12, 7, GroupKind::Alt, "(1,8,2,9,3)", LemmaTag::L4_5),
            (12, 7, GroupKind::Alt, "(1,8,9)", LemmaTag::L4_6),
            (12, 7, GroupKind::Alt, "(1,8,2)", LemmaTag::L4_7),
            (12, 7, GroupKind::Alt, "(1,8)(2,3)(4,5)(6,7)", LemmaTag::L4_8),
            (13, 7, GroupKind::Alt, "(1,8,9)(10,11,12)", LemmaTag::L3_7),
            (19, 10, GroupKind::Alt, "(1,11,12)(13,14,15)(16,17,18)", LemmaTag::L3_6),
            (11, 6, GroupKind::Alt, "(1,7,2)", LemmaTag::L3_2Search),
        ];
        for (n, k, kind, x_text, want_tag) in cases {
            let s = scn(n, k, kind);
            let x = p(x_text, n);
            let r = find_witness(&x, &s, &budget).unwrap();
            match r.outcome {
                WitnessOutcome::Witness { y, tag } => {
                    assert_eq!(tag, want_tag, "x = {x_text} at ({n}, {k}, {kind})");
                    assert!(verify_witness(&x, &y, &s), "replay for x = {x_text}");
                }
                other => panic!("expected a witness for {x_text}, got {other:?}"),
            }
        }
    }

    #[test]
    fn find_witness_is_frame_independent() {
        // An off-canonical element exercises the conjugation plumbing.
        let s = scn(13, 7, GroupKind::Alt);
        let x = p("(2,9,10)", 13); // conjugate of (1,8,9)
        let r = find_witness(&x, &s, &SearchBudget::default()).unwrap();
        match r.outcome {
            WitnessOutcome::Witness { y, tag } => {
                assert_eq!(tag, LemmaTag::L4_1);
                assert!(verify_witness(&x, &y, &s));
                let outcome = generates_pair(&x, &y, GroupKind::Alt).unwrap();
                assert_eq!(outcome.verdict, Verdict::Alternating);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn find_witness_prime_rule_independence() {
        let s = scn(23, 12, GroupKind::Alt);
        let x = p("(1,13)(14,15)(16,17)(18,19)(20,21)(22,23)", 23);
        assert_eq!(dispatch(&x, &s).unwrap(), LemmaTag::L4_2);
        for rule in [PrimeRule::Spec, PrimeRule::Opposite] {
            let budget = SearchBudget { prime_rule: rule, ..SearchBudget::default() };
            let r = find_witness(&x, &s, &budget).unwrap();
            match r.outcome {
                WitnessOutcome::Witness { y, tag } => {
                    assert_eq!(tag, LemmaTag::L4_2);
                    assert!(verify_witness(&x, &y, &s), "rule {rule:?}");
                }
                other => panic!("expected a witness under {rule:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn find_witness_zero_budget_reports_inconsistency() {
        let s = scn(13, 7, GroupKind::Alt);
        let budget = SearchBudget { max_generation_tests: 0, ..SearchBudget::default() };
        let err = find_witness(&p("(1,8,9)", 13), &s, &budget).unwrap_err();
        assert!(matches!(err, WitnessError::InternalInconsistency { .. }));
    }

    #[test]
    fn imprimitivity_certificates_match_hand_computation() {
        let fixtures: Vec<(u16, u16, &str)> = vec![
            (6, 4, "{1,3,5} | {2,4,6}"),
            (9, 6, "{1,4,7} | {2,5,8} | {3,6,9}"),
            (10, 6, "{1,3,5,7,9} | {2,4,6,8,10}"),
            (10, 8, "{1,3,5,7,9} | {2,4,6,8,10}"),
            (12, 8, "{1,5,9} | {2,6,10} | {3,7,11} | {4,8,12}"),
        ];
        for (n, k, expect) in fixtures {
            let s = scn(n, k, GroupKind::Sym);
            let y = standard_partner(n, k);
            let system = imprimitivity_certificate(&s, &y).unwrap();
            assert_eq!(system.to_string(), expect, "(n, k) = ({n}, {k})");
            let x = p(&format!("(1,{})", k + 1), n);
            assert!(system.is_preserved_by(&x));
            assert!(system.is_preserved_by(&y));
        }
    }

    #[test]
    fn imprimitivity_certificate_rejections() {
        let s = scn(12, 7, GroupKind::Sym);
        assert!(matches!(
            imprimitivity_certificate(&s, &standard_partner(12, 7)),
            Err(WitnessError::GcdOne)
        ));
        let s = scn(6, 4, GroupKind::Sym);
        assert!(matches!(
            imprimitivity_certificate(&s, &p("(1,2)(3,4)(5,6)", 6)),
            Err(WitnessError::NotBlockShape(_))
        ));
        assert!(matches!(
            imprimitivity_certificate(&s, &p("(1,2,3,4,5,6)", 6)),
            Err(WitnessError::NotBlockShape(_))
        ));
        // Odd standard partner is outside M for Alt.
        let s = scn(9, 6, GroupKind::Alt);
        assert!(matches!(
            imprimitivity_certificate(&s, &standard_partner(9, 6)),
            Err(WitnessError::NotBlockShape(_))
        ));
    }

    #[test]
    fn verify_witness_rejects_bad_pairs() {
        let s = scn(12, 7, GroupKind::Sym);
        let x = p("(1,8)", 12);
        let y = standard_partner(12, 7);
        assert!(verify_witness(&x, &y, &s));
        // Both in M: the pair stays inside M.
        assert!(!verify_witness(&p("(1,2)", 12), &y, &s));
        // y outside M.
        assert!(!verify_witness(&x, &p("(7,8)", 12), &s));
        // Wrong parity under Alt.
        let s = scn(12, 7, GroupKind::Alt);
        assert!(!verify_witness(&x, &y, &s));
    }

    #[test]
    fn witness_result_serializes_compactly() {
        let s = scn(12, 7, GroupKind::Sym);
        let r = find_witness(&p("(1,8)", 12), &s, &SearchBudget::default()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["outcome"], "witness");
        assert_eq!(json["tag"], "T4_9");
        assert_eq!(json["y"], "(1,2,3,4,5,6,7)(8,9,10,11,12)");
        let s = scn(6, 4, GroupKind::Sym);
        let r = find_witness(&p("(1,5)", 6), &s, &SearchBudget::default()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["outcome"], "no_witness");
        assert_eq!(json["certificate"]["kind"], "blocks");
        assert_eq!(json["certificate"]["gcd"], 2);
        assert_eq!(json["certificate"]["system"]["blocks"][0], serde_json::json!([1, 3, 5]));
    }

    #[test]
    fn lemma_tags_render_their_contract_names() {
        let pairs = [
            (LemmaTag::L3_2Search, "L3_2-search"),
            (LemmaTag::L3_6, "L3_6"),
            (LemmaTag::L4_8, "L4_8"),
            (LemmaTag::T4_9, "T4_9"),
        ];
        for (tag, text) in pairs {
            assert_eq!(tag.to_string(), text);
            assert_eq!(serde_json::to_value(tag).unwrap(), serde_json::json!(text));
        }
    }
}
